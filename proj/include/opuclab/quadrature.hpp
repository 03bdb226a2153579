#ifndef OPUCLAB_QUADRATURE_HPP
#define OPUCLAB_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

#include "opuclab/potential.hpp"
#include "opuclab/real.hpp"

namespace opuclab {

// (2pi/N) * sum_{j=0}^{N-1} f(2pi j / N), summed in ascending node order.
// Spectrally accurate for smooth 2pi-periodic integrands.
template <class Scalar, class F>
Scalar periodic_trapezoid(F&& f, int N) {
  Scalar two_pi = Scalar(2) * Scalar(boost::math::constants::pi<double>());
  if constexpr (std::is_same_v<Scalar, Real>) two_pi = 2 * real_pi();
  Scalar acc(0);
  for (int j = 0; j < N; ++j) {
    Scalar t = two_pi * Scalar(j) / Scalar(N);
    acc += f(t);
  }
  return acc * (two_pi / Scalar(N));
}

RealComplex periodic_trapezoid_complex(const std::function<RealComplex(const Real&)>& f, int N);

// Adaptive Simpson on [a,b] for double integrands; absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// Trigonometric moments c_j = int e^{-ij lam} e^{-n V(cos lam)} dlam, j = 0..max_freq.
// The weight is even, so every c_j is real; the accumulated sine component is
// kept as a diagnostic residual.
struct MomentTable {
  int n = 0;
  int max_freq = 0;
  unsigned precision_bits = 0;
  long grid_size = 0;
  std::vector<Real> c;
  Real imag_residual;  // max_j |sine part| / c_0

  const Real& at(int j) const { return c.at(static_cast<std::size_t>(j)); }
};

// Grid doubles from max(4K, 64) until two successive tables agree to
// 2^{-precision/2} relative to c_0 (at most `max_doublings` times).
MomentTable trig_moments(const Potential& p, int n, int max_freq, unsigned precision_bits,
                         int max_doublings = 20);

// 1/sqrt(z^2 - a^2) with the branch ~ 1/z at infinity; 0 on the open segment
// (-a, a). Closed form of the principal-value integral
// (1/pi) pv int_{-a}^{a} dt / ((z - t) sqrt(a^2 - t^2)).
std::complex<double> sq_a(std::complex<double> z, double a, double edge_tol = 1e-12);

// int_{-theta}^{theta} g(mu) / sqrt(cos mu - cos theta) dmu via the
// substitution sin(mu/2) = sin(theta/2) sin t, which removes the endpoint
// singularity. Node count doubles until the relative change is below rel_tol.
double edge_regularized_integral(const std::function<double(double)>& g, double theta,
                                 double rel_tol = 1e-11, int initial_nodes = 64,
                                 int max_nodes = 1 << 18);

std::string moment_table_to_json(const MomentTable& mt);
MomentTable moment_table_from_json(const std::string& json_text);

}  // namespace opuclab

#endif
