#ifndef OPUCLAB_CMV_HPP
#define OPUCLAB_CMV_HPP

#include <Eigen/Dense>

#include "opuclab/verblunsky.hpp"

namespace opuclab {

// Five-diagonal unitary matrix of multiplication by e^{i lam} in the chi
// basis. Row r (1-based) holds the expansion of e^{i lam} chi_{r-1}.
class CMVMatrix {
 public:
  CMVMatrix(int n, Eigen::MatrixXd m) : n_(n), m_(std::move(m)) {}

  int size() const { return static_cast<int>(m_.rows()); }
  int n() const { return n_; }
  // 1-based, matching the printed five-diagonal pattern
  double entry(int r, int c) const { return m_(r - 1, c - 1); }
  const Eigen::MatrixXd& dense() const { return m_; }

 private:
  int n_;
  Eigen::MatrixXd m_;
};

// Throws INDEX_DEFICIT if size > vs.kmax - 1.
CMVMatrix build_cmv(const VerblunskySequence& vs, int size);

struct SymmetrizedPair {
  Eigen::MatrixXd M;  // (C + C^T)/2, multiplication by cos lam
  Eigen::MatrixXd L;  // (C - C^T)/2, multiplication by i sin lam
};

SymmetrizedPair symmetrize(const CMVMatrix& c);

// Quadrature LHS of the string identity minus its closed-form RHS
// i (-1)^{k-1} (k/n) alpha_k / rho_k; exact identity, so the return value is
// pure quadrature/rounding noise. k is the absolute index.
RealComplex string_residual_integral(const OrthonormalBasis& basis, int k);

struct MatrixStringResult {
  double residual;       // |{L V'(M)}_{K,K-1} - RHS|
  double window_change;  // change of the entry under window doubling
};

// Matrix form {L V'(M)}_{n+k,n+k-1} = (-1)^{n+k} ((n+k)/n) alpha/rho, with
// V'(M) computed by dense symmetric eigendecomposition of a window of
// half-width `window` centered at row n+k. k is the offset from n.
// Throws WINDOW_TOO_SMALL if doubling the window moves the entry by more
// than the residual it reports.
MatrixStringResult string_residual_matrix(const VerblunskySequence& vs, const Potential& p,
                                          int k, int window);

}  // namespace opuclab

#endif
