#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opuclab/potential.hpp"

using namespace opuclab;

TEST_CASE("eval_V on the built-ins") {
  CHECK(Potential::gww(2).eval<double>(1.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(Potential::zero().eval<double>(0.37) == 0.0);
  Potential q({0.0, -1.0, 0.0, 0.25}, "x^4/4 - x^2");
  CHECK(q.eval<double>(0.0) == 0.0);
  CHECK(q.eval<double>(0.5) == doctest::Approx(0.25 * 0.0625 - 0.25).epsilon(1e-15));
}

TEST_CASE("angular derivative values") {
  Potential g2 = Potential::gww(2);
  CHECK(g2.angular_derivative<double>(M_PI / 2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g2.angular_derivative<double>(0.0) == 0.0);
  Potential sq({0.0, 1.0}, "x^2");
  CHECK(sq.angular_derivative<double>(M_PI / 4) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(Potential::quartic(1, 1).angular_derivative<double>(0.0) == 0.0);
}

TEST_CASE("angular derivative is odd, finite-difference order >= 1.9") {
  Potential q = Potential::quartic(0.7, -0.3);
  for (double lam : {0.3, 1.1, 2.5}) {
    CHECK(q.angular_derivative<double>(-lam) ==
          doctest::Approx(-q.angular_derivative<double>(lam)).epsilon(1e-14));
  }
  // |fd(h) - exact| = O(h^2): the observed order between h=1e-4 and 1e-5
  auto fd = [&](double lam, double h) {
    return (q.eval<double>(std::cos(lam + h)) - q.eval<double>(std::cos(lam - h))) / (2 * h);
  };
  double lam = 0.9;
  double exact = q.angular_derivative<double>(lam);
  double e4 = std::abs(fd(lam, 1e-4) - exact);
  double e5 = std::abs(fd(lam, 1e-5) - exact);
  double order = std::log10(e4 / e5);
  CHECK(order >= 1.9);
}

TEST_CASE("weight values and evenness") {
  Potential g2 = Potential::gww(2);
  CHECK(static_cast<double>(weight(Potential::zero(), 7, 1.234, 64)) == doctest::Approx(1.0));
  CHECK(static_cast<double>(weight(g2, 1, 0.0, 64)) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-14));

  Real w40 = weight(g2, 40, 0.0, 256);
  CHECK(isfinite(w40));
  CHECK(w40 > 0);
  CHECK(abs(log(w40) - 80) < 1e-60);

  PrecisionGuard guard(128);
  for (double lam : {0.2, 1.0, 2.9}) {
    Real a = weight(g2, 6, lam, 128);
    Real b = weight(g2, 6, -lam, 128);
    CHECK(a == b);  // cos is even, so the weights agree exactly
  }
}

TEST_CASE("weight rejects precision below 53 bits") {
  CHECK_THROWS_AS(weight(Potential::gww(1), 4, 0.1, 32), Error);
}

TEST_CASE("potential config validation") {
  CHECK_THROWS_AS(Potential({}, "empty"), Error);
  CHECK_THROWS_AS(Potential({std::nan("")}, "nan"), Error);
}
