#ifndef OPUCLAB_VERBLUNSKY_HPP
#define OPUCLAB_VERBLUNSKY_HPP

#include <vector>

#include "opuclab/quadrature.hpp"

namespace opuclab {

// Verblunsky coefficients alpha_k = c_{k,0}/c_{k,k}, rho_k = c_{k-1,k-1}/c_{k,k}
// of the orthonormal system for the weight e^{-n V(cos lam)}. All real here.
struct VerblunskySequence {
  int n = 0;
  int kmax = 0;
  unsigned precision_used = 0;
  std::vector<Real> alphas;   // alpha_1..alpha_kmax
  std::vector<Real> rhos;     // rho_1..rho_kmax, positive
  std::vector<Real> leading;  // c_{k,k}, k = 1..kmax
  Real alpha_rho_residual;    // max_k |alpha_k^2 + rho_k^2 - 1|

  double alpha(int k) const { return static_cast<double>(alphas.at(k - 1)); }
  double rho(int k) const { return static_cast<double>(rhos.at(k - 1)); }
  const Real& alpha_mp(int k) const { return alphas.at(k - 1); }
  const Real& rho_mp(int k) const { return rhos.at(k - 1); }
};

// Szego/Levinson recursion on the Toeplitz moment matrix. The reflection
// coefficient of the monic recursion Phi_{k+1} = z Phi_k + alpha_{k+1} Phi_k*
// is exactly the paper ratio c_{k,0}/c_{k,k}; the norms e_k are recomputed
// directly from the moments each step so that alpha^2 + rho^2 = 1 is a
// genuine consistency check, not an identity of the recursion.
// Throws MOMENT_DEFICIT if kmax > mt.max_freq - 1, PRECISION_EXHAUSTED if the
// residual exceeds 2^{-precision/4}.
VerblunskySequence levinson(const MomentTable& mt, int kmax, unsigned precision_bits);

// Direct Gram-Schmidt on {e^{ik lam}} against the moment inner product;
// O(kmax^3) oracle for cross-validating levinson. kmax <= 16.
VerblunskySequence gram_schmidt_oracle(const Potential& p, int n, int kmax,
                                       unsigned precision_bits);

// Moments + levinson with the precision-escalation schedule: start at
// max(128, 10 n) bits (or start_bits), double on failure, cap at max_bits.
VerblunskySequence compute_verblunsky(const Potential& p, int n, int kmax,
                                      unsigned start_bits = 0, unsigned max_bits = 16384);

// Orthonormal basis data: normalized coefficient rows c_{k,l} plus evaluators
// for P_k, Q_k, chi_k, psi_k at a point.
class OrthonormalBasis {
 public:
  OrthonormalBasis(Potential p, int n, int kmax, unsigned precision_bits,
                   std::vector<std::vector<Real>> rows, long grid_hint,
                   VerblunskySequence vs);

  int n() const { return n_; }
  int kmax() const { return kmax_; }
  unsigned precision_bits() const { return precision_bits_; }
  long grid_hint() const { return grid_hint_; }
  const Potential& potential() const { return pot_; }
  const VerblunskySequence& sequence() const { return vs_; }
  const Real& coeff(int k, int l) const { return rows_.at(k).at(l); }

  RealComplex eval_P(int k, const Real& lam) const;
  RealComplex eval_Q(int k, const Real& lam) const;
  RealComplex eval_chi(int k, const Real& lam) const;
  RealComplex eval_psi(int k, const Real& lam) const;  // P_k e^{-nV/2}

  // <f, g>_n for basis members via quadrature on the hint grid
  RealComplex inner_chi(int j, int l, bool shift_by_phase) const;

 private:
  Potential pot_;
  int n_, kmax_;
  unsigned precision_bits_;
  long grid_hint_;
  std::vector<std::vector<Real>> rows_;  // rows_[k][l] = c_{k,l}, k = 0..kmax
  VerblunskySequence vs_;
};

OrthonormalBasis make_basis(const Potential& p, int n, int kmax, unsigned precision_bits = 0);

// rho_{k,n}(lam) = K_{k,n}(lam,lam)/n = (1/n) sum_{l<k} |psi_l(lam)|^2.
double kernel_density(const OrthonormalBasis& basis, int k, double lam);

struct KernelDensity {
  const OrthonormalBasis* basis;
  int k;
  double at(double lam) const { return kernel_density(*basis, k, lam); }
};

unsigned default_precision_bits(int n);

}  // namespace opuclab

#endif
