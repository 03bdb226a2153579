#ifndef OPUCLAB_POTENTIAL_HPP
#define OPUCLAB_POTENTIAL_HPP

#include <string>
#include <vector>

#include "opuclab/real.hpp"

namespace opuclab {

// Confining potential V(x) = sum_j a_j x^j on [-1,1], applied as V(cos lambda).
// Restricting to polynomials in cos lambda keeps the weight even in lambda,
// so every Verblunsky coefficient is real.
class Potential {
 public:
  Potential(std::vector<double> coeffs, std::string name = "");

  // V(x), Horner
  template <class T>
  T eval(const T& x) const {
    T acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + T(*it);
    return acc * x;
  }

  // V'(x)
  template <class T>
  T derivative(const T& x) const {
    T acc(0);
    for (std::size_t j = coeffs_.size(); j >= 1; --j) acc = acc * x + T(double(j) * coeffs_[j - 1]);
    return acc;
  }

  // V''(x)
  template <class T>
  T second_derivative(const T& x) const {
    T acc(0);
    for (std::size_t j = coeffs_.size(); j >= 2; --j)
      acc = acc * x + T(double(j) * double(j - 1) * coeffs_[j - 1]);
    return acc;
  }

  // d/dl V(cos l) = -sin l * V'(cos l)
  template <class T>
  T angular_derivative(const T& lam) const {
    return -sin(lam) * derivative(cos(lam));
  }

  // d^2/dl^2 V(cos l); needed for removable-singularity limits
  template <class T>
  T angular_derivative_prime(const T& lam) const {
    T c = cos(lam), s = sin(lam);
    return -c * derivative(c) + s * s * second_derivative(c);
  }

  int degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::string& name() const { return name_; }
  bool is_zero() const;

  static Potential zero();
  static Potential gww(double t);              // V(x) = -t x
  static Potential quartic(double a, double b);  // V(x) = a x^2 + b x^4

 private:
  std::vector<double> coeffs_;  // a_1..a_d
  std::string name_;
};

// e^{-n V(cos lam)} at the requested precision (>= 53 bits).
Real weight(const Potential& p, int n, double lam, unsigned precision_bits);
// Same, at the caller's current thread precision.
Real weight_here(const Potential& p, int n, const Real& lam);

}  // namespace opuclab

#endif
