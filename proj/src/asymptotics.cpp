#include "opuclab/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "opuclab/quadrature.hpp"

namespace opuclab {

FourierCoeffs fourier_v(const Potential& p, double theta, int kmax) {
  FourierCoeffs fc;
  fc.theta = theta;
  double half = 0.5 * theta;
  fc.a = std::cos(half) * std::cos(half);
  fc.b = std::cos(half) * std::sin(half);
  fc.c = std::sin(half) * std::sin(half);
  fc.v.resize(kmax + 1);

  int N = std::max(8 * (kmax + 1), 512);
  for (int k = 0; k <= kmax; ++k) {
    auto f = [&](double phi) {
      return p.derivative<double>(fc.a + fc.c * std::cos(2.0 * phi)) * std::cos(k * phi);
    };
    double integral = periodic_trapezoid<double>(f, N);
    fc.v[k] = integral / (M_PI * (k == 0 ? 2.0 : 1.0));
  }
  for (int k = 1; k <= kmax; k += 2) {
    if (std::abs(fc.v[k]) > 1e-10)
      throw Error(ErrorCode::NON_CONVERGED, "odd Fourier coefficient fails to vanish");
    fc.v[k] = 0.0;
  }
  return fc;
}

BTable b_coeffs(const FourierCoeffs& fc, int gamma_max) {
  int jmax = fc.kmax() / 2;
  // tail must be resolved: v_{2j} decayed below 1e-12 by the last usable j
  if (std::abs(fc.v[2 * jmax]) > 1e-12 || std::abs(fc.v[2 * (jmax - 1)]) > 1e-12)
    throw Error(ErrorCode::TAIL_UNRESOLVED, "v coefficients not decayed within kmax");
  BTable bt;
  bt.values.resize(gamma_max);
  for (int g = 1; g <= gamma_max; ++g) {
    double acc = 0.0;
    for (int j = g + 1; j <= jmax; j += 2) acc += fc.v[2 * j];
    bt.values[g - 1] = acc / fc.c;
  }
  return bt;
}

double symbol_delta(const EquilibriumMeasure& em, double phi) {
  if (em.whole_circle())
    throw Error(ErrorCode::CONFIG_INVALID, "symbol requires an arc support");
  double c = em.c();
  double cphi2 = std::cos(0.5 * phi);
  double lam = -2.0 * std::asin(std::sin(0.5 * em.theta()) * cphi2);
  return std::sqrt(1.0 - c * cphi2 * cphi2) / (M_PI * std::sqrt(2.0)) * em.P_at(lam);
}

double symbol_delta_fourier(const FourierCoeffs& fc, double phi) {
  double cphi = std::cos(phi);
  double c2 = std::cos(0.5 * phi) * std::cos(0.5 * phi);
  double s2 = std::sin(0.5 * phi) * std::sin(0.5 * phi);
  // sum_l v_{2l} (-1)^l sin(l phi)/sin(phi), Chebyshev-kernel recurrence
  double acc = 0.0;
  double u_prev = 0.0, u_cur = 1.0;  // U_{-1}, U_0
  int lmax = fc.kmax() / 2;
  for (int l = 1; l <= lmax; ++l) {
    double u = (l == 1) ? u_cur : 2.0 * cphi * u_cur - u_prev;
    if (l > 1) {
      u_prev = u_cur;
      u_cur = u;
    }
    acc += fc.v[2 * l] * (l % 2 ? -1.0 : 1.0) * u;
  }
  return -2.0 * (fc.a + fc.c * s2) * (acc * 2.0 * c2 + fc.v[0]);
}

ToeplitzSymbol make_toeplitz_symbol(const FourierCoeffs& fc, int mmax, int grid) {
  ToeplitzSymbol sym;
  sym.grid = grid;
  sym.samples.resize(grid);
  for (int j = 0; j < grid; ++j) {
    double phi = -M_PI + 2.0 * M_PI * j / grid;
    double d = symbol_delta_fourier(fc, phi);
    if (d <= 0.0)
      throw Error(ErrorCode::SYMBOL_NONPOSITIVE, "Toeplitz symbol non-positive on the grid");
    sym.samples[j] = d;
  }
  sym.A.resize(mmax + 1);
  sym.A_inv.resize(mmax + 1);
  for (int l = 0; l <= mmax; ++l) {
    double sa = 0.0, si = 0.0;
    for (int j = 0; j < grid; ++j) {
      double phi = -M_PI + 2.0 * M_PI * j / grid;
      double ck = std::cos(l * phi);
      sa += sym.samples[j] * ck;
      si += ck / sym.samples[j];
    }
    sym.A[l] = sa / grid;      // (1/2pi) int delta e^{-il phi}
    sym.A_inv[l] = si / grid;  // (1/2pi) int e^{il phi}/delta
  }
  return sym;
}

std::vector<double> toeplitz_inverse_coeffs(const ToeplitzSymbol& sym, int mmax) {
  if (mmax + 1 > static_cast<int>(sym.A_inv.size()))
    throw Error(ErrorCode::CONFIG_INVALID, "mmax exceeds the symbol table");
  return std::vector<double>(sym.A_inv.begin(), sym.A_inv.begin() + mmax + 1);
}

double AsymptoticModel::predict_alpha(int n, int m) const {
  if (std::abs(m) > epsilon1 * n)
    throw Error(ErrorCode::WINDOW_EXCEEDED, "offset outside the admissible |m| <= eps1 n window");
  double sign = ((n + m) % 2 == 0) ? 1.0 : -1.0;
  return sign * s * std::cos(0.5 * theta + slope * m / n);
}

AsymptoticModel make_model(const EquilibriumMeasure& em, int s) {
  AsymptoticModel am;
  am.theta = em.theta();
  am.s = s;
  am.slope = 2.0 * M_PI * std::sqrt(2.0) / (em.P_theta() * std::sin(em.theta()));
  return am;
}

double slope_from_symbol(const EquilibriumMeasure& em, const ToeplitzSymbol& sym) {
  double acc = sym.A_inv[0];
  for (std::size_t m = 1; m < sym.A_inv.size(); ++m) acc += 2.0 * sym.A_inv[m];
  return em.b() / em.c() * acc;
}

FitReport fit_prediction(const VerblunskySequence& vs, const AsymptoticModel& am, int window) {
  int n = vs.n;
  if (n + window > vs.kmax || n - window < 1)
    throw Error(ErrorCode::CONFIG_INVALID, "window not covered by the computed sequence");

  // s by sign vote of (-1)^{n+m} alpha_{n+m}; must be unanimous
  int vote = 0;
  for (int m = -window; m <= window; ++m) {
    double a = vs.alpha(n + m);
    if (a == 0.0) throw Error(ErrorCode::SIGN_INCONSISTENT, "zero alpha has no phase");
    int sgn = ((n + m) % 2 == 0 ? 1 : -1) * (a > 0 ? 1 : -1);
    if (vote == 0)
      vote = sgn;
    else if (vote != sgn)
      throw Error(ErrorCode::SIGN_INCONSISTENT, "sign vote over the window is not unanimous");
  }

  FitReport rep;
  rep.s = vote;
  rep.slope_model = am.slope;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (int m = -window; m <= window; ++m) {
    double a = vs.alpha(n + m);
    double u = ((n + m) % 2 == 0 ? 1.0 : -1.0) * vote * a;
    FitPoint pt;
    pt.m = m;
    pt.alpha_computed = a;
    pt.alpha_predicted = am.predict_alpha(n, m);
    pt.x_predicted = am.slope * m / n;
    pt.used_in_fit = std::abs(u) <= 1.0 - 1e-12;
    pt.x_extracted = pt.used_in_fit ? std::acos(std::clamp(u, -1.0, 1.0)) - 0.5 * am.theta : 0.0;
    if (pt.used_in_fit) {
      double x = double(m) / n;
      sx += x;
      sy += pt.x_extracted;
      sxx += x * x;
      sxy += x * pt.x_extracted;
      ++used;
    }
    rep.points.push_back(pt);
  }
  if (used < 3) throw Error(ErrorCode::SIGN_INCONSISTENT, "too few usable points for the fit");
  double denom = used * sxx - sx * sx;
  rep.slope_fit = (used * sxy - sx * sy) / denom;
  rep.intercept = (sy - rep.slope_fit * sx) / used;
  for (auto& pt : rep.points) {
    if (!pt.used_in_fit) continue;
    double fitted = rep.intercept + rep.slope_fit * pt.m / n;
    rep.max_fit_residual = std::max(rep.max_fit_residual, std::abs(fitted - pt.x_extracted));
  }
  return rep;
}

WholeCircleReport whole_circle_check(const VerblunskySequence& vs, int window) {
  WholeCircleReport rep;
  rep.n = vs.n;
  rep.window = window;
  for (int m = -window; m <= window; ++m)
    rep.max_abs_alpha = std::max(rep.max_abs_alpha, std::abs(vs.alpha(vs.n + m)));
  return rep;
}

}  // namespace opuclab
