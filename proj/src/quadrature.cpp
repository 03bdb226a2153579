#include "opuclab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace opuclab {

RealComplex periodic_trapezoid_complex(const std::function<RealComplex(const Real&)>& f, int N) {
  Real two_pi = 2 * real_pi();
  RealComplex acc;
  for (int j = 0; j < N; ++j) {
    acc += f(two_pi * Real(j) / N);
  }
  Real h = two_pi / N;
  return {acc.re * h, acc.im * h};
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth > 48 || std::abs(delta) < 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

namespace {

// One trapezoid pass: c_j = (2pi/N) sum_t cos(j lam_t) w(lam_t), with the
// sine part accumulated separately as the evenness residual. Frequencies are
// advanced by the cos/sin addition recurrence per node, nodes in ascending
// order for determinism.
void moment_pass(const Potential& p, int n, int K, int N, std::vector<Real>& cos_sums,
                 std::vector<Real>& sin_sums) {
  cos_sums.assign(K + 1, Real(0));
  sin_sums.assign(K + 1, Real(0));
  Real two_pi = 2 * real_pi();
  for (int t = 0; t < N; ++t) {
    Real lam = two_pi * Real(t) / N;
    Real w = weight_here(p, n, lam);
    Real c1 = cos(lam), s1 = sin(lam);
    Real cj(1), sj(0);  // cos(0), sin(0)
    for (int j = 0; j <= K; ++j) {
      cos_sums[j] += cj * w;
      sin_sums[j] += sj * w;
      Real cn = cj * c1 - sj * s1;
      sj = sj * c1 + cj * s1;
      cj = cn;
    }
  }
  Real h = two_pi / N;
  for (int j = 0; j <= K; ++j) {
    cos_sums[j] *= h;
    sin_sums[j] *= h;
  }
}

}  // namespace

MomentTable trig_moments(const Potential& p, int n, int max_freq, unsigned precision_bits,
                         int max_doublings) {
  if (max_freq < 1) throw Error(ErrorCode::CONFIG_INVALID, "max_freq must be >= 1");
  PrecisionGuard guard(precision_bits);

  int N = std::max(4 * max_freq, 64);
  Real tol = pow(Real(2), -static_cast<int>(precision_bits) / 2);

  std::vector<Real> cs, ss, cs_prev;
  moment_pass(p, n, max_freq, N, cs, ss);
  for (int pass = 0; pass < max_doublings; ++pass) {
    cs_prev = cs;
    N *= 2;
    moment_pass(p, n, max_freq, N, cs, ss);
    Real scale = cs[0];
    Real diff(0);
    for (int j = 0; j <= max_freq; ++j) diff = std::max(diff, abs(cs[j] - cs_prev[j]));
    if (diff <= tol * scale) {
      MomentTable mt;
      mt.n = n;
      mt.max_freq = max_freq;
      mt.precision_bits = precision_bits;
      mt.grid_size = N;
      mt.c = std::move(cs);
      Real imag(0);
      for (int j = 0; j <= max_freq; ++j) imag = std::max(imag, abs(ss[j]));
      mt.imag_residual = imag / mt.c[0];
      return mt;
    }
  }
  throw Error(ErrorCode::NON_CONVERGED, "trig_moments: no grid agreement after doubling budget");
}

std::complex<double> sq_a(std::complex<double> z, double a, double edge_tol) {
  if (a <= 0) throw Error(ErrorCode::CONFIG_INVALID, "sq_a needs a > 0");
  if (std::abs(z - a) < edge_tol || std::abs(z + a) < edge_tol)
    throw Error(ErrorCode::EDGE_SINGULARITY, "sq_a evaluated too close to an edge");
  if (z.imag() == 0.0 && std::abs(z.real()) < a) return {0.0, 0.0};
  // principal square roots place the cut exactly on [-a, a] and give ~1/z
  return 1.0 / (std::sqrt(z - a) * std::sqrt(z + a));
}

double edge_regularized_integral(const std::function<double(double)>& g, double theta,
                                 double rel_tol, int initial_nodes, int max_nodes) {
  double s0 = std::sin(0.5 * theta);
  // full-period trapezoid of the even extension in t; the substituted
  // integrand depends on t through sin t only
  auto F = [&](double t) {
    double st = s0 * std::sin(t);
    double mu = 2.0 * std::asin(st);
    return g(mu) / std::sqrt(1.0 - st * st);
  };
  auto pass = [&](int N) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j) acc += F(2.0 * M_PI * j / N);
    return acc * (2.0 * M_PI / N) * (std::sqrt(2.0) / 2.0);
  };
  int N = initial_nodes;
  double prev = pass(N);
  while (N < max_nodes) {
    N *= 2;
    double cur = pass(N);
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-30)) return cur;
    prev = cur;
  }
  return prev;
}

std::string moment_table_to_json(const MomentTable& mt) {
  nlohmann::json j;
  j["n"] = mt.n;
  j["max_freq"] = mt.max_freq;
  j["precision_bits"] = mt.precision_bits;
  j["grid_size"] = mt.grid_size;
  std::vector<std::string> vals;
  vals.reserve(mt.c.size());
  for (const Real& x : mt.c) vals.push_back(to_decimal_string(x));
  j["moments"] = vals;
  j["imag_residual"] = to_decimal_string(mt.imag_residual);
  return j.dump(2);
}

MomentTable moment_table_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MomentTable mt;
  mt.n = j.at("n").get<int>();
  mt.max_freq = j.at("max_freq").get<int>();
  mt.precision_bits = j.at("precision_bits").get<unsigned>();
  mt.grid_size = j.at("grid_size").get<long>();
  PrecisionGuard guard(mt.precision_bits);
  for (const auto& s : j.at("moments")) mt.c.emplace_back(s.get<std::string>());
  mt.imag_residual = Real(j.at("imag_residual").get<std::string>());
  return mt;
}

}  // namespace opuclab
