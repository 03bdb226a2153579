#ifndef OPUCLAB_ASYMPTOTICS_HPP
#define OPUCLAB_ASYMPTOTICS_HPP

#include <vector>

#include "opuclab/equilibrium.hpp"
#include "opuclab/verblunsky.hpp"

namespace opuclab {

// Fourier coefficients v_k of V'(a + c cos 2 phi); odd indices vanish.
struct FourierCoeffs {
  double theta = 0, a = 0, b = 0, c = 0;
  std::vector<double> v;  // v[k], k = 0..kmax

  double at(int k) const { return v.at(static_cast<std::size_t>(k)); }
  int kmax() const { return static_cast<int>(v.size()) - 1; }
};

FourierCoeffs fourier_v(const Potential& p, double theta, int kmax);

// Lacunary tail sums B_{2g} = (1/c) sum_{j-g in 2N+1} v_{2j}.
struct BTable {
  std::vector<double> values;  // values[g-1] = B_{2g}
  double at(int gamma) const { return values.at(static_cast<std::size_t>(gamma - 1)); }
  int gamma_max() const { return static_cast<int>(values.size()); }
};

BTable b_coeffs(const FourierCoeffs& fc, int gamma_max);

// Toeplitz symbol of the linearized string system, closed form through P:
// delta(phi) = sqrt(1 - c cos^2(phi/2)) / (pi sqrt 2) *
//              P(-2 arcsin(sin(theta/2) cos(phi/2))).
double symbol_delta(const EquilibriumMeasure& em, double phi);

// Same symbol through the Fourier data of V'; must agree with symbol_delta.
double symbol_delta_fourier(const FourierCoeffs& fc, double phi);

struct ToeplitzSymbol {
  std::vector<double> samples;    // delta on the uniform grid used
  std::vector<double> A;          // A[l] = l-th Fourier coefficient, l >= 0
  std::vector<double> A_inv;      // (A^{-1})[m], m >= 0 (even in m)
  int grid = 0;

  double a_at(int l) const { return A.at(static_cast<std::size_t>(std::abs(l))); }
  double a_inv_at(int m) const { return A_inv.at(static_cast<std::size_t>(std::abs(m))); }
};

// Builds Fourier coefficients of delta and of 1/delta (trapezoid grid).
// Throws SYMBOL_NONPOSITIVE if delta <= 0 anywhere on the grid.
ToeplitzSymbol make_toeplitz_symbol(const FourierCoeffs& fc, int mmax, int grid = 1024);
std::vector<double> toeplitz_inverse_coeffs(const ToeplitzSymbol& sym, int mmax);

// Zero+first order model alpha_{n+m} ~ (-1)^{n+m} s cos(theta/2 + slope m/n).
struct AsymptoticModel {
  double theta = 0;
  int s = 1;
  double slope = 0;       // 2 pi sqrt2 / (P(theta) sin theta), as displayed
  double epsilon1 = 0.2;  // admissible |m|/n window

  // Throws WINDOW_EXCEEDED when |m| > epsilon1 * n.
  double predict_alpha(int n, int m) const;
};

AsymptoticModel make_model(const EquilibriumMeasure& em, int s);

// First-order slope via the Toeplitz-symbol route (b/c) sum_m (A^{-1})_m
// = (b/c)/delta(0); the leading coefficient of the linearized system's
// solution. Disagrees with AsymptoticModel::slope by cos(theta/2).
double slope_from_symbol(const EquilibriumMeasure& em, const ToeplitzSymbol& sym);

struct FitPoint {
  int m;
  double alpha_computed;
  double alpha_predicted;
  double x_extracted;
  double x_predicted;
  bool used_in_fit;
};

struct FitReport {
  int s = 1;
  double slope_fit = 0;
  double intercept = 0;
  double slope_model = 0;        // from AsymptoticModel
  double slope_symbol_route = 0;  // optional, 0 if not supplied
  double max_fit_residual = 0;
  std::vector<FitPoint> points;
};

// Estimates s by (unanimous) sign vote over the window, extracts the phases
// x_{n+m} = arccos((-1)^{n+m} s alpha_{n+m}) - theta/2, and least-squares
// fits x against m/n. Throws SIGN_INCONSISTENT if the vote is split.
FitReport fit_prediction(const VerblunskySequence& vs, const AsymptoticModel& am, int window);

struct WholeCircleReport {
  int n = 0;
  int window = 0;
  double max_abs_alpha = 0;
};

WholeCircleReport whole_circle_check(const VerblunskySequence& vs, int window);

}  // namespace opuclab

#endif
