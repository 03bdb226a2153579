#ifndef OPUCLAB_REAL_HPP
#define OPUCLAB_REAL_HPP

#include <boost/multiprecision/mpfr.hpp>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace opuclab {

// Variable-precision real backed by MPFR. The working precision is the
// process-global default of the backend, managed in bits through
// PrecisionGuard. Concurrent workers must therefore run at one shared
// precision; the pipeline pins a uniform ladder precision for that reason.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

enum class ErrorCode {
  NON_CONVERGED,
  EDGE_SINGULARITY,
  NO_ARC_SOLUTION,
  NEGATIVE_DENSITY,
  PRECISION_EXHAUSTED,
  PRECISION_OVERFLOW,
  MOMENT_DEFICIT,
  INDEX_DEFICIT,
  WINDOW_TOO_SMALL,
  TAIL_UNRESOLVED,
  SYMBOL_NONPOSITIVE,
  WINDOW_EXCEEDED,
  SIGN_INCONSISTENT,
  CONFIG_INVALID,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

const char* error_code_name(ErrorCode c);

inline unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(bits * 0.30103) + 3;
}

// Sets the default precision for Reals constructed in scope.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits) : prev_(Real::default_precision()) {
    Real::default_precision(digits10_for_bits(bits));
  }
  ~PrecisionGuard() { Real::default_precision(prev_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned prev_;
};

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

// Decimal-string encoding with enough digits for a lossless round trip
// at the value's own precision.
std::string to_decimal_string(const Real& x);
Real real_from_string(const std::string& s, unsigned bits);

// Complex value over Real; only the operations the quadratures need.
struct RealComplex {
  Real re, im;

  RealComplex() : re(0), im(0) {}
  RealComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit RealComplex(Real r) : re(std::move(r)), im(0) {}

  RealComplex operator+(const RealComplex& o) const { return {re + o.re, im + o.im}; }
  RealComplex operator-(const RealComplex& o) const { return {re - o.re, im - o.im}; }
  RealComplex operator*(const RealComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  RealComplex operator*(const Real& s) const { return {re * s, im * s}; }
  RealComplex& operator+=(const RealComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  RealComplex conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const { return sqrt(norm()); }
};

inline RealComplex unit_phase(const Real& angle) { return {cos(angle), sin(angle)}; }

}  // namespace opuclab

#endif
