#include "opuclab/cmv.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace opuclab {

CMVMatrix build_cmv(const VerblunskySequence& vs, int size) {
  if (size < 1) throw Error(ErrorCode::CONFIG_INVALID, "size must be >= 1");
  if (size > vs.kmax - 1)
    throw Error(ErrorCode::INDEX_DEFICIT, "CMV size needs coefficients up to size+1");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  auto al = [&](int k) { return vs.alpha(k); };
  auto rh = [&](int k) { return vs.rho(k); };
  auto put = [&](int r, int c, double v) {
    if (r >= 1 && r <= size && c >= 1 && c <= size) m(r - 1, c - 1) = v;
  };
  put(1, 1, -al(1));
  put(1, 2, rh(1));
  for (int k = 1; 2 * k <= size; ++k) {
    int r = 2 * k;
    put(r, r - 1, -rh(2 * k - 1) * al(2 * k));
    put(r, r, -al(2 * k - 1) * al(2 * k));
    put(r, r + 1, -rh(2 * k) * al(2 * k + 1));
    put(r, r + 2, rh(2 * k) * rh(2 * k + 1));
  }
  for (int k = 1; 2 * k + 1 <= size; ++k) {
    int r = 2 * k + 1;
    put(r, r - 2, rh(2 * k - 1) * rh(2 * k));
    put(r, r - 1, al(2 * k - 1) * rh(2 * k));
    put(r, r, -al(2 * k) * al(2 * k + 1));
    put(r, r + 1, al(2 * k) * rh(2 * k + 1));
  }
  return CMVMatrix(vs.n, std::move(m));
}

SymmetrizedPair symmetrize(const CMVMatrix& c) {
  const Eigen::MatrixXd& m = c.dense();
  return {0.5 * (m + m.transpose()), 0.5 * (m - m.transpose())};
}

RealComplex string_residual_integral(const OrthonormalBasis& basis, int k) {
  if (k < 1 || k > basis.kmax())
    throw Error(ErrorCode::CONFIG_INVALID, "string residual index out of range");
  PrecisionGuard guard(basis.precision_bits());
  const Potential& p = basis.potential();
  int n = basis.n();
  int N = static_cast<int>(2 * basis.grid_hint());
  auto f = [&](const Real& lam) {
    RealComplex v = basis.eval_chi(k, lam) * basis.eval_chi(k - 1, lam).conj();
    Real factor = sin(lam) * p.derivative(cos(lam)) * weight_here(p, n, lam);
    return v * factor;
  };
  RealComplex lhs = periodic_trapezoid_complex(f, N);
  Real rhs_im = Real(k % 2 ? 1 : -1) * Real(k) / n * basis.sequence().alpha_mp(k) /
                basis.sequence().rho_mp(k);
  return {lhs.re, lhs.im - rhs_im};
}

namespace {

double matrix_string_entry(const VerblunskySequence& vs, const Potential& p, int k_abs,
                           int window) {
  int size = std::min(vs.kmax - 1, k_abs + window);
  CMVMatrix c = build_cmv(vs, size);
  SymmetrizedPair ml = symmetrize(c);
  int lo = std::max(1, k_abs - window);  // 1-based inclusive
  int dim = size - lo + 1;
  Eigen::MatrixXd Mw = ml.M.block(lo - 1, lo - 1, dim, dim);
  Eigen::MatrixXd Lw = ml.L.block(lo - 1, lo - 1, dim, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Mw);
  Eigen::VectorXd d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) d(i) = p.derivative<double>(d(i));
  Eigen::MatrixXd VpM = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  int r = k_abs - lo;  // 0-based row of the target entry within the window
  return (Lw.row(r) * VpM.col(r - 1)).value();
}

}  // namespace

MatrixStringResult string_residual_matrix(const VerblunskySequence& vs, const Potential& p,
                                          int k, int window) {
  int k_abs = vs.n + k;
  if (k_abs < 2) throw Error(ErrorCode::CONFIG_INVALID, "matrix string residual needs n+k >= 2");
  if (k_abs + window > vs.kmax - 1)
    throw Error(ErrorCode::INDEX_DEFICIT, "window exceeds available coefficients");
  double lhs = matrix_string_entry(vs, p, k_abs, window);
  double rhs = (k_abs % 2 ? -1.0 : 1.0) * (double(k_abs) / vs.n) * vs.alpha(k_abs) / vs.rho(k_abs);
  double residual = std::abs(lhs - rhs);

  int window2 = std::min(2 * window, vs.kmax - 1 - k_abs);
  double change = 0.0;
  if (window2 > window) {
    double lhs2 = matrix_string_entry(vs, p, k_abs, window2);
    change = std::abs(lhs2 - lhs);
    if (change > std::max(residual, 1e-12))
      throw Error(ErrorCode::WINDOW_TOO_SMALL,
                  "doubling the window moves the entry more than the residual");
  }
  return {residual, change};
}

}  // namespace opuclab
