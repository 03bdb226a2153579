#include "opuclab/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "opuclab/quadrature.hpp"

namespace opuclab {

namespace {

constexpr double kSingularGuard = 1e-6;  // |mu - lam| below this: use the limit value

// Difference quotient [(V(cos mu))' - (V(cos lam))'] / sin((mu-lam)/2),
// with the removable singularity replaced by 2 d/dmu (V(cos mu))' at the
// midpoint (second-order accurate).
double p_kernel(const Potential& p, double mu, double lam) {
  double d = mu - lam;
  if (std::abs(d) < kSingularGuard)
    return 2.0 * p.angular_derivative_prime<double>(0.5 * (mu + lam));
  return (p.angular_derivative<double>(mu) - p.angular_derivative<double>(lam)) /
         std::sin(0.5 * d);
}

}  // namespace

double compute_P(const Potential& p, double theta, double lam) {
  return edge_regularized_integral([&](double mu) { return p_kernel(p, mu, lam); }, theta);
}

double rho_arc(const Potential& p, double theta, double lam) {
  if (std::abs(lam) > theta) return 0.0;
  double chi = std::sqrt(std::max(std::cos(lam) - std::cos(theta), 0.0));
  return chi * compute_P(p, theta, lam) / (4.0 * M_PI * M_PI);
}

double rho_whole_circle(const Potential& p, double lam) {
  auto f = [&](double mu) { return p.angular_derivative<double>(mu); };
  auto integrand = [&](double mu) {
    double half = 0.5 * (lam - mu);
    if (std::abs(std::sin(half)) < 0.5 * kSingularGuard)
      return 2.0 * p.angular_derivative_prime<double>(lam);
    return (f(lam) - f(mu)) / std::tan(half);
  };
  int N = 256;
  double prev = periodic_trapezoid<double>(integrand, N);
  for (int pass = 0; pass < 10; ++pass) {
    N *= 2;
    double cur = periodic_trapezoid<double>(integrand, N);
    if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  return 0.5 / M_PI + prev / (4.0 * M_PI * M_PI);
}

namespace {

// mass(theta) = (1/4pi^2) int chi P dmu over the arc, in the t variable
// (sin(mu/2) = sin(theta/2) sin t) with composite Simpson.
double arc_mass(const Potential& p, double theta, int nodes = 2048) {
  double s0 = std::sin(0.5 * theta);
  auto F = [&](double t) {
    double st = s0 * std::sin(t);
    double mu = 2.0 * std::asin(st);
    double ct = std::cos(t);
    double jac = 2.0 * s0 * ct / std::sqrt(1.0 - st * st);
    double chi = std::sqrt(2.0) * s0 * std::abs(ct);
    return chi * compute_P(p, theta, mu) * jac / (4.0 * M_PI * M_PI);
  };
  int N = nodes;  // even
  double h = M_PI / N;
  double acc = F(-0.5 * M_PI) + F(0.5 * M_PI);
  for (int j = 1; j < N; ++j) acc += F(-0.5 * M_PI + j * h) * (j % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// int_sigma log|2 sin((lam-mu)/2)| rho(mu) dmu with the window around the
// log point handled analytically against a locally constant rho.
double log_energy_arc(const EquilibriumMeasure& m, double lam) {
  const double theta = m.theta();
  const double w = 1e-3;
  double s0 = std::sin(0.5 * theta);
  auto F = [&](double t) {
    double st = s0 * std::sin(t);
    double mu = 2.0 * std::asin(st);
    double jac = 2.0 * s0 * std::cos(t) / std::sqrt(1.0 - st * st);
    return std::log(std::abs(2.0 * std::sin(0.5 * (lam - mu)))) * m.rho_at(mu) * jac;
  };
  bool inside = std::abs(lam) < theta - 2.0 * w;
  if (!inside)
    return adaptive_simpson(F, -0.5 * M_PI, 0.5 * M_PI, 1e-10);
  double tlo = std::asin(std::sin(0.5 * (lam - w)) / s0);
  double thi = std::asin(std::sin(0.5 * (lam + w)) / s0);
  double outer = adaptive_simpson(F, -0.5 * M_PI, tlo, 1e-10) +
                 adaptive_simpson(F, thi, 0.5 * M_PI, 1e-10);
  // int_{-w}^{w} log|2 sin(x/2)| dx = 2 (w log w - w - w^3/72 - ...)
  double window = 2.0 * (w * std::log(w) - w - w * w * w / 72.0);
  return outer + m.rho_at(lam) * window;
}

double log_energy_circle(const EquilibriumMeasure& m, double lam) {
  const double w = 1e-3;
  auto F = [&](double mu) {
    return std::log(std::abs(2.0 * std::sin(0.5 * (lam - mu)))) * m.rho_at(mu);
  };
  double outer = adaptive_simpson(F, lam + w, lam + 2.0 * M_PI - w, 1e-10);
  double window = 2.0 * (w * std::log(w) - w - w * w * w / 72.0);
  return outer + m.rho_at(lam) * window;
}

}  // namespace

EquilibriumMeasure::EquilibriumMeasure(Potential p, SupportArc arc)
    : pot_(std::move(p)), arc_(arc) {
  double half = 0.5 * arc_.theta;
  a_ = std::cos(half) * std::cos(half);
  b_ = std::cos(half) * std::sin(half);
  c_ = std::sin(half) * std::sin(half);
  P_theta_ = arc_.whole_circle ? 0.0 : compute_P(pot_, arc_.theta, arc_.theta);
}

double EquilibriumMeasure::P_at(double lam) const { return compute_P(pot_, arc_.theta, lam); }

double EquilibriumMeasure::rho_at(double lam) const {
  if (arc_.whole_circle) return rho_whole_circle(pot_, lam);
  return rho_arc(pot_, arc_.theta, lam);
}

double EquilibriumMeasure::u_at(double lam) const {
  double le = arc_.whole_circle ? log_energy_circle(*this, lam) : log_energy_arc(*this, lam);
  return pot_.eval<double>(std::cos(lam)) - 2.0 * le;
}

double EquilibriumMeasure::mass() const {
  if (arc_.whole_circle) {
    auto f = [&](double mu) { return rho_at(mu); };
    return periodic_trapezoid<double>(f, 2048);
  }
  return arc_mass(pot_, arc_.theta);
}

EquilibriumMeasure solve_support(const Potential& p) {
  const double lo0 = 0.01, hi0 = M_PI - 0.01;
  double m_lo = arc_mass(p, lo0, 512);
  double m_hi = arc_mass(p, hi0, 512);
  if (m_hi < 1.0) {
    // arc mass never reaches 1: whole-circle support
    return EquilibriumMeasure(p, SupportArc{M_PI, true});
  }
  if (m_lo > 1.0)
    throw Error(ErrorCode::NO_ARC_SOLUTION, "arc mass exceeds 1 at the smallest support");
  // coarse monotonicity scan; the supported potential class has increasing mass
  double prev = m_lo;
  for (int i = 1; i <= 8; ++i) {
    double th = lo0 + (hi0 - lo0) * i / 8.0;
    double cur = arc_mass(p, th, 512);
    if (cur < prev - 1e-9)
      throw Error(ErrorCode::NO_ARC_SOLUTION, "mass function is not monotone-bracketing");
    prev = cur;
  }
  double lo = lo0, hi = hi0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    if (arc_mass(p, mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  EquilibriumMeasure m(p, SupportArc{0.5 * (lo + hi), false});
  double theta = m.theta();
  for (int i = 0; i <= 40; ++i) {
    double lam = -0.98 * theta + 1.96 * theta * i / 40.0;
    if (m.rho_at(lam) < -1e-8)
      throw Error(ErrorCode::NEGATIVE_DENSITY, "density negative inside the arc");
  }
  return m;
}

EffectivePotential effective_potential(const EquilibriumMeasure& m) {
  double span = m.whole_circle() ? M_PI : 0.98 * m.theta();
  double umin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 24; ++i) {
    double lam = -span + 2.0 * span * i / 24.0;
    umin = std::min(umin, m.u_at(lam));
  }
  return EffectivePotential{&m, umin};
}

bool ConditionReport::all_ok() const {
  if (whole_circle) return rho_positive;
  return rho_positive && edge_exponent_ok && u_minimality_ok;
}

namespace {

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ConditionReport check_conditions(const Potential& p, const EquilibriumMeasure& m) {
  ConditionReport r;
  r.whole_circle = m.whole_circle();
  if (r.whole_circle) {
    r.arc_checks_skipped = true;
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 128; ++i) mn = std::min(mn, m.rho_at(-M_PI + 2 * M_PI * i / 128.0));
    r.rho_min = mn;
    r.rho_positive = mn > 0;
    return r;
  }
  const double theta = m.theta();

  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    double lam = -0.98 * theta + 1.96 * theta * i / 200.0;
    mn = std::min(mn, m.rho_at(lam));
  }
  r.rho_min = mn;
  r.rho_positive = mn > 0;

  // least-squares exponent of log rho vs log|lam -+ theta| near each edge
  for (int side = 0; side < 2; ++side) {
    std::vector<double> lx, ly;
    for (int i = 0; i < 20; ++i) {
      double d = std::pow(10.0, -3.0 + 2.0 * i / 19.0);
      double lam = side == 0 ? theta - d : -theta + d;
      double rho = m.rho_at(lam);
      if (rho <= 0) continue;
      lx.push_back(std::log(d));
      ly.push_back(std::log(rho));
    }
    double s = lx.size() >= 4 ? fit_loglog_slope(lx, ly) : 0.0;
    (side == 0 ? r.edge_exponent_right : r.edge_exponent_left) = s;
  }
  r.edge_exponent_ok = r.edge_exponent_right > 0.45 && r.edge_exponent_right < 0.55 &&
                       r.edge_exponent_left > 0.45 && r.edge_exponent_left < 0.55;

  EffectivePotential ep = effective_potential(m);
  double spread = 0.0;
  for (int i = 0; i <= 49; ++i) {
    double lam = -0.97 * theta + 1.94 * theta * i / 49.0;
    spread = std::max(spread, m.u_at(lam) - ep.u_min);
  }
  r.u_interior_spread = spread;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20; ++i) {
    double lam = theta + 0.02 + (M_PI - theta - 0.02) * i / 20.0;
    margin = std::min(margin, m.u_at(lam) - ep.u_min);
  }
  r.u_exterior_margin = margin;
  r.u_minimality_ok = spread <= 1e-6 && margin >= -1e-6;
  return r;
}

}  // namespace opuclab
