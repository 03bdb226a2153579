#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opuclab/verblunsky.hpp"

using namespace opuclab;

TEST_CASE("levinson: V=0 gives alpha=0, rho=1") {
  MomentTable mt = trig_moments(Potential::zero(), 3, 9, 128);
  VerblunskySequence vs = levinson(mt, 8, 128);
  PrecisionGuard guard(128);
  for (int k = 1; k <= 8; ++k) {
    CHECK(abs(vs.alpha_mp(k)) < pow(Real(2), -90));
    CHECK(abs(vs.rho_mp(k) - 1) < pow(Real(2), -90));
  }
}

TEST_CASE("levinson vs gram_schmidt oracle: GWW(2), n=4") {
  unsigned bits = 256;
  MomentTable mt = trig_moments(Potential::gww(2), 4, 10, bits);
  VerblunskySequence fast = levinson(mt, 10, bits);
  VerblunskySequence oracle = gram_schmidt_oracle(Potential::gww(2), 4, 10, bits);
  PrecisionGuard guard(bits);
  Real tol = pow(Real(2), -static_cast<int>(bits) / 2);
  for (int k = 1; k <= 10; ++k) {
    CHECK(abs(fast.alpha_mp(k) - oracle.alpha_mp(k)) < tol);
    CHECK(abs(fast.rho_mp(k) - oracle.rho_mp(k)) < tol);
    CHECK(abs(fast.leading[k - 1] - oracle.leading[k - 1]) <
          tol * abs(oracle.leading[k - 1]));
  }
}

TEST_CASE("levinson vs gram_schmidt oracle: GWW(0.5), n=6 and QUARTIC, n=6") {
  for (Potential p : {Potential::gww(0.5), Potential::quartic(1, 1)}) {
    unsigned bits = 256;
    MomentTable mt = trig_moments(p, 6, 12, bits);
    VerblunskySequence fast = levinson(mt, 12, bits);
    VerblunskySequence oracle = gram_schmidt_oracle(p, 6, 12, bits);
    PrecisionGuard guard(bits);
    Real tol = pow(Real(2), -static_cast<int>(bits) / 2);
    for (int k = 1; k <= 12; ++k)
      CHECK(abs(fast.alpha_mp(k) - oracle.alpha_mp(k)) < tol);
  }
}

TEST_CASE("alpha^2 + rho^2 = 1 residual contract and strict |alpha| < 1") {
  VerblunskySequence vs = compute_verblunsky(Potential::gww(2), 8, 16);
  PrecisionGuard guard(vs.precision_used);
  CHECK(vs.alpha_rho_residual < pow(Real(2), -static_cast<int>(vs.precision_used) / 4));
  for (int k = 1; k <= vs.kmax; ++k) CHECK(std::abs(vs.alpha(k)) < 1.0);
}

TEST_CASE("zero-order law: GWW(2), n=20 window alternates near cos(pi/4)") {
  int n = 20;
  VerblunskySequence vs = compute_verblunsky(Potential::gww(2), n, n + 6);
  double c4 = std::cos(M_PI / 4);
  for (int m = -3; m <= 3; ++m) {
    double a = vs.alpha(n + m);
    CHECK(std::abs(std::abs(a) - c4) < 0.12);
    CHECK(((n + m) % 2 == 0 ? a : -a) > 0);  // sign pattern (-1)^{n+m} s with s = +1
  }
}

TEST_CASE("determinism: identical inputs give identical sequences") {
  VerblunskySequence a = compute_verblunsky(Potential::quartic(1, 1), 6, 10);
  VerblunskySequence b = compute_verblunsky(Potential::quartic(1, 1), 6, 10);
  for (int k = 1; k <= 10; ++k) CHECK(a.alpha_mp(k) == b.alpha_mp(k));
}

TEST_CASE("levinson errors: MOMENT_DEFICIT") {
  MomentTable mt = trig_moments(Potential::gww(1), 4, 5, 128);
  CHECK_THROWS_AS(levinson(mt, 9, 128), Error);
}

TEST_CASE("gram_schmidt oracle rejects large kmax") {
  CHECK_THROWS_AS(gram_schmidt_oracle(Potential::gww(1), 4, 17, 128), Error);
}

TEST_CASE("basis: chi parity definition and Q reversal identity") {
  OrthonormalBasis basis = make_basis(Potential::gww(2), 4, 9, 256);
  PrecisionGuard guard(256);
  for (int k : {2, 5, 8}) {
    for (double lam : {0.3, 1.7, -2.1}) {
      Real l(lam);
      // Q_k(lam) = e^{ik lam} P_k(-lam)
      RealComplex lhs = basis.eval_Q(k, l);
      RealComplex rhs = unit_phase(Real(k) * l) * basis.eval_P(k, -l);
      CHECK(static_cast<double>((lhs - rhs).abs()) < 1e-40);
      RealComplex chi = basis.eval_chi(k, l);
      RealComplex expect = (k % 2 == 0) ? unit_phase(Real(-(k / 2)) * l) * basis.eval_Q(k, l)
                                        : unit_phase(Real(-((k - 1) / 2)) * l) * basis.eval_P(k, l);
      CHECK(static_cast<double>((chi - expect).abs()) == 0.0);
    }
  }
}

TEST_CASE("basis: V=0 normalized constants") {
  OrthonormalBasis basis = make_basis(Potential::zero(), 2, 4, 128);
  PrecisionGuard guard(128);
  Real inv_sqrt_2pi = Real(1) / sqrt(2 * real_pi());
  CHECK(static_cast<double>(abs(basis.eval_chi(0, Real(0)).re - inv_sqrt_2pi)) < 1e-30);
  // chi_1 is unimodular times e^{i lam}/sqrt(2pi)
  RealComplex chi1 = basis.eval_chi(1, Real(0.9));
  CHECK(static_cast<double>(abs(chi1.abs() - inv_sqrt_2pi)) < 1e-30);
}

TEST_CASE("basis orthonormality via quadrature: GWW(2), n=4") {
  OrthonormalBasis basis = make_basis(Potential::gww(2), 4, 9, 256);
  for (int j = 0; j <= 8; ++j) {
    for (int k = j; k <= 8; ++k) {
      RealComplex ip = basis.inner_chi(j, k, false);
      double expect = (j == k) ? 1.0 : 0.0;
      CHECK(std::abs(static_cast<double>(ip.re) - expect) < 1e-10);
      CHECK(std::abs(static_cast<double>(ip.im)) < 1e-10);
    }
  }
}

TEST_CASE("kernel density: V=0 uniform, GWW(2) normalization") {
  OrthonormalBasis flat = make_basis(Potential::zero(), 6, 7, 128);
  CHECK(kernel_density(flat, 6, 0.4) == doctest::Approx(0.5 / M_PI).epsilon(1e-12));

  OrthonormalBasis basis = make_basis(Potential::gww(2), 6, 7, 256);
  auto f = [&](double lam) { return kernel_density(basis, 6, lam); };
  int N = 512;
  double acc = 0;
  for (int j = 0; j < N; ++j) acc += f(2 * M_PI * j / N);
  CHECK(acc * 2 * M_PI / N == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("precision escalation driver reports the schedule") {
  VerblunskySequence vs = compute_verblunsky(Potential::gww(2), 6, 10);
  CHECK(vs.precision_used >= default_precision_bits(6));
  CHECK(vs.precision_used <= 16384);
}
