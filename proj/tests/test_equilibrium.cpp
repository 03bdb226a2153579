#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opuclab/equilibrium.hpp"
#include "opuclab/quadrature.hpp"

using namespace opuclab;

namespace {

// GWW closed forms used as oracles throughout: P = 2 sqrt2 pi t cos(lam/2),
// rho = (t/pi) cos(lam/2) sqrt(sin^2(theta/2) - sin^2(lam/2)), theta = 2 asin(1/sqrt t).
double gww_P(double t, double lam) { return 2 * std::sqrt(2.0) * M_PI * t * std::cos(lam / 2); }

double gww_rho(double t, double theta, double lam) {
  double s0 = std::sin(theta / 2), s = std::sin(lam / 2);
  return t / M_PI * std::cos(lam / 2) * std::sqrt(std::max(s0 * s0 - s * s, 0.0));
}

}  // namespace

TEST_CASE("compute_P: GWW closed form and degenerate constant") {
  Potential g2 = Potential::gww(2);
  double theta = M_PI / 2;
  for (double lam : {0.0, 0.3, 0.9, 1.4, -1.1}) {
    CHECK(compute_P(g2, theta, lam) == doctest::Approx(gww_P(2, lam)).epsilon(1e-10));
  }
  CHECK(compute_P(g2, theta, 0.0) == doctest::Approx(4 * std::sqrt(2.0) * M_PI).epsilon(1e-10));
  CHECK(std::abs(compute_P(Potential::zero(), 1.0, 0.5)) < 1e-12);
}

TEST_CASE("rho: GWW closed form, zero at the edges") {
  Potential g2 = Potential::gww(2);
  double theta = M_PI / 2;
  for (double lam : {0.0, 0.5, 1.2, -0.8}) {
    CHECK(rho_arc(g2, theta, lam) == doctest::Approx(gww_rho(2, theta, lam)).margin(1e-10));
  }
  CHECK(rho_arc(g2, theta, theta) == doctest::Approx(0.0).margin(1e-7));
  CHECK(rho_arc(g2, theta, 0.0) == doctest::Approx(std::sqrt(2.0) / M_PI).epsilon(1e-10));
}

TEST_CASE("solve_support: GWW arc angles and whole-circle transition") {
  for (double t : {2.0, 1.5, 4.0}) {
    EquilibriumMeasure m = solve_support(Potential::gww(t));
    CHECK_FALSE(m.whole_circle());
    CHECK(m.theta() == doctest::Approx(2 * std::asin(1 / std::sqrt(t))).epsilon(1e-9));
    CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-8));
  }
  EquilibriumMeasure m2 = solve_support(Potential::gww(2));
  CHECK(m2.c() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::cos(m2.theta() / 2) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));

  EquilibriumMeasure w = solve_support(Potential::gww(0.5));
  CHECK(w.whole_circle());
  EquilibriumMeasure w2 = solve_support(Potential::gww(1.0));
  CHECK(w2.whole_circle());  // t <= 1 never reaches unit arc mass
}

TEST_CASE("arc constants satisfy a + c = 1, b^2 = a c") {
  EquilibriumMeasure m = solve_support(Potential::gww(3));
  CHECK(m.a() + m.c() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.b() * m.b() == doctest::Approx(m.a() * m.c()).epsilon(1e-14));
}

TEST_CASE("rho_whole_circle: uniform for V=0, conjugation profile for GWW") {
  CHECK(rho_whole_circle(Potential::zero(), 0.7) == doctest::Approx(0.5 / M_PI).epsilon(1e-13));
  // Fourier-mode oracle: the cot kernel acts diagonally, giving (1 + t cos lam)/2pi
  double t = 0.5;
  for (double lam : {0.0, 1.0, 2.2, -2.9}) {
    CHECK(rho_whole_circle(Potential::gww(t), lam) ==
          doctest::Approx((1 + t * std::cos(lam)) / (2 * M_PI)).epsilon(1e-10));
  }
  // mass stays 1: the kernel term integrates away
  EquilibriumMeasure w = solve_support(Potential::gww(0.5));
  CHECK(w.mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("symmetry of rho and P on a grid") {
  EquilibriumMeasure m = solve_support(Potential::gww(2));
  for (int i = 1; i <= 8; ++i) {
    double lam = m.theta() * i / 9.0;
    CHECK(m.rho_at(lam) == doctest::Approx(m.rho_at(-lam)).epsilon(1e-10));
    CHECK(m.P_at(lam) == doctest::Approx(m.P_at(-lam)).epsilon(1e-10));
  }
}

TEST_CASE("variational consistency: pv integral of cot against rho equals (V cos)'") {
  EquilibriumMeasure m = solve_support(Potential::gww(2));
  double theta = m.theta();
  double s0 = std::sin(theta / 2);
  Potential p = Potential::gww(2);
  // pv int cot((lam-mu)/2) rho(mu) dmu via subtraction of rho(lam) and the
  // analytic pv of cot over the arc, on the edge-substitution grid
  auto pv = [&](double lam) {
    auto drho = [&](double x) { return (m.rho_at(x + 1e-5) - m.rho_at(x - 1e-5)) / 2e-5; };
    double rl = m.rho_at(lam);
    auto F = [&](double tv) {
      double st = s0 * std::sin(tv);
      double mu = 2 * std::asin(st);
      double jac = 2 * s0 * std::cos(tv) / std::sqrt(1 - st * st);
      double d = lam - mu;
      double h;
      if (std::abs(d) < 1e-7)
        h = -2 * drho(lam);
      else
        h = (m.rho_at(mu) - rl) / std::tan(d / 2);
      return h * jac;
    };
    int N = 4096;
    double hstep = M_PI / N;
    double acc = F(-M_PI / 2) + F(M_PI / 2);
    for (int j = 1; j < N; ++j) acc += F(-M_PI / 2 + j * hstep) * (j % 2 ? 4.0 : 2.0);
    double I1 = acc * hstep / 3.0;
    double I2 = rl * 2 *
                std::log(std::sin((theta + lam) / 2) / std::sin((theta - lam) / 2));
    return I1 + I2;
  };
  for (int i = 0; i < 10; ++i) {
    double lam = -0.9 * theta + 1.8 * theta * i / 9.0;
    CHECK(pv(lam) == doctest::Approx(p.angular_derivative<double>(lam)).margin(1e-6));
  }
}

TEST_CASE("effective potential: flat inside, strictly larger outside") {
  EquilibriumMeasure m = solve_support(Potential::gww(2));
  EffectivePotential ep = effective_potential(m);
  for (int i = 0; i <= 49; ++i) {
    double lam = -0.97 * m.theta() + 1.94 * m.theta() * i / 49.0;
    CHECK(m.u_at(lam) - ep.u_min <= 1e-6);
    CHECK(m.u_at(lam) - ep.u_min >= -1e-6);
  }
  CHECK(m.u_at(M_PI) - ep.u_min > 0.1);
  CHECK(m.u_at(2.0) - ep.u_min > 0.01);
}

TEST_CASE("effective potential vanishes identically for V=0") {
  EquilibriumMeasure m = solve_support(Potential::zero());
  CHECK(m.whole_circle());
  for (double lam : {0.0, 1.0, 2.5}) CHECK(std::abs(m.u_at(lam)) < 1e-8);
}

TEST_CASE("check_conditions: GWW(2) passes with half-power edges") {
  Potential p = Potential::gww(2);
  EquilibriumMeasure m = solve_support(p);
  ConditionReport r = check_conditions(p, m);
  CHECK(r.rho_positive);
  CHECK(r.edge_exponent_right == doctest::Approx(0.5).margin(0.05));
  CHECK(r.edge_exponent_left == doctest::Approx(0.5).margin(0.05));
  CHECK(r.u_minimality_ok);
  CHECK(r.all_ok());
}

TEST_CASE("check_conditions: whole-circle inputs skip the arc checks") {
  Potential h = Potential::gww(0.5);
  ConditionReport r = check_conditions(h, solve_support(h));
  CHECK(r.whole_circle);
  CHECK(r.arc_checks_skipped);
  CHECK(r.rho_positive);

  Potential z = Potential::zero();
  ConditionReport rz = check_conditions(z, solve_support(z));
  CHECK(rz.whole_circle);
  CHECK(rz.rho_positive);
}
