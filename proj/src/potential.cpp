#include "opuclab/potential.hpp"

#include <cmath>
#include <utility>

namespace opuclab {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NON_CONVERGED: return "NON_CONVERGED";
    case ErrorCode::EDGE_SINGULARITY: return "EDGE_SINGULARITY";
    case ErrorCode::NO_ARC_SOLUTION: return "NO_ARC_SOLUTION";
    case ErrorCode::NEGATIVE_DENSITY: return "NEGATIVE_DENSITY";
    case ErrorCode::PRECISION_EXHAUSTED: return "PRECISION_EXHAUSTED";
    case ErrorCode::PRECISION_OVERFLOW: return "PRECISION_OVERFLOW";
    case ErrorCode::MOMENT_DEFICIT: return "MOMENT_DEFICIT";
    case ErrorCode::INDEX_DEFICIT: return "INDEX_DEFICIT";
    case ErrorCode::WINDOW_TOO_SMALL: return "WINDOW_TOO_SMALL";
    case ErrorCode::TAIL_UNRESOLVED: return "TAIL_UNRESOLVED";
    case ErrorCode::SYMBOL_NONPOSITIVE: return "SYMBOL_NONPOSITIVE";
    case ErrorCode::WINDOW_EXCEEDED: return "WINDOW_EXCEEDED";
    case ErrorCode::SIGN_INCONSISTENT: return "SIGN_INCONSISTENT";
    case ErrorCode::CONFIG_INVALID: return "CONFIG_INVALID";
  }
  return "UNKNOWN";
}

std::string to_decimal_string(const Real& x) {
  // precision() reports decimal digits; that is already a lossless digit
  // count for the round trip through real_from_string at equal precision.
  return x.str(static_cast<std::streamsize>(x.precision()) + 2, std::ios_base::scientific);
}

Real real_from_string(const std::string& s, unsigned bits) {
  PrecisionGuard guard(bits);
  return Real(s);
}

Potential::Potential(std::vector<double> coeffs, std::string name)
    : coeffs_(std::move(coeffs)), name_(std::move(name)) {
  if (coeffs_.empty()) throw Error(ErrorCode::CONFIG_INVALID, "potential needs degree >= 1");
  for (double a : coeffs_)
    if (!std::isfinite(a)) throw Error(ErrorCode::CONFIG_INVALID, "non-finite coefficient");
}

bool Potential::is_zero() const {
  for (double a : coeffs_)
    if (a != 0.0) return false;
  return true;
}

Potential Potential::zero() { return Potential({0.0}, "zero"); }

Potential Potential::gww(double t) { return Potential({-t}, "gww"); }

Potential Potential::quartic(double a, double b) {
  return Potential({0.0, a, 0.0, b}, "quartic");
}

Real weight_here(const Potential& p, int n, const Real& lam) {
  Real w = exp(Real(-n) * p.eval(cos(lam)));
  if (!isfinite(w) || w <= 0)
    throw Error(ErrorCode::PRECISION_OVERFLOW, "weight overflow at requested precision");
  return w;
}

Real weight(const Potential& p, int n, double lam, unsigned precision_bits) {
  if (precision_bits < 53)
    throw Error(ErrorCode::CONFIG_INVALID, "weight precision must be >= 53 bits");
  PrecisionGuard guard(precision_bits);
  return weight_here(p, n, Real(lam));
}

}  // namespace opuclab
