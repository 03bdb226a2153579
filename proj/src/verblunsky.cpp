#include "opuclab/verblunsky.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace opuclab {

unsigned default_precision_bits(int n) {
  return std::max(128u, 10u * static_cast<unsigned>(std::max(n, 0)));
}

namespace {

struct LevinsonOutput {
  VerblunskySequence vs;
  std::vector<std::vector<Real>> rows;  // normalized c_{k,l}
};

// Monic Szego recursion Phi_{k+1}(z) = z Phi_k(z) + a_{k+1} Phi_k*(z) over the
// real Toeplitz moments; a_{k+1} is the paper's alpha_{k+1} = c_{k+1,0}/c_{k+1,k+1}.
LevinsonOutput levinson_core(const MomentTable& mt, int kmax, unsigned precision_bits,
                             bool keep_rows) {
  if (kmax < 1) throw Error(ErrorCode::CONFIG_INVALID, "kmax must be >= 1");
  if (kmax > mt.max_freq)
    throw Error(ErrorCode::MOMENT_DEFICIT, "kmax exceeds the moment table frequency range");
  unsigned bits = std::max(precision_bits, mt.precision_bits);
  PrecisionGuard guard(bits);

  const std::vector<Real>& c = mt.c;
  auto cm = [&](int j) -> const Real& { return c[static_cast<std::size_t>(std::abs(j))]; };

  Real tol = pow(Real(2), -static_cast<int>(precision_bits) / 4);

  std::vector<Real> b{Real(1)};  // monic Phi_0
  Real e = c[0];                 // <Phi_0, Phi_0>

  LevinsonOutput out;
  out.vs.n = mt.n;
  out.vs.kmax = kmax;
  out.vs.precision_used = precision_bits;
  out.vs.alpha_rho_residual = Real(0);
  if (keep_rows) out.rows.push_back({Real(1) / sqrt(e)});

  for (int k = 0; k < kmax; ++k) {
    Real num(0);
    for (int l = 0; l <= k; ++l) num += b[l] * cm(l + 1);
    Real a = -num / e;

    std::vector<Real> bn(k + 2);
    for (int l = 0; l <= k + 1; ++l) {
      Real prev = (l >= 1) ? b[l - 1] : Real(0);
      Real refl = (k - l >= 0) ? b[k - l] : Real(0);
      bn[l] = prev + a * refl;
    }
    b = std::move(bn);

    // norm recomputed from the moments, not via e(1-a^2); alpha^2+rho^2=1
    // then measures genuine consistency
    Real e_next(0);
    for (int l = 0; l <= k + 1; ++l) e_next += b[l] * cm(k + 1 - l);

    if (!(e_next > 0) || abs(a) >= 1)
      throw Error(ErrorCode::PRECISION_EXHAUSTED,
                  "levinson lost positivity; raise the working precision");
    Real rho = sqrt(e_next / e);
    Real resid = abs(a * a + rho * rho - 1);
    out.vs.alpha_rho_residual = std::max(out.vs.alpha_rho_residual, resid);
    if (resid > tol)
      throw Error(ErrorCode::PRECISION_EXHAUSTED, "alpha^2+rho^2 residual above 2^{-p/4}");

    out.vs.alphas.push_back(a);
    out.vs.rhos.push_back(rho);
    out.vs.leading.push_back(Real(1) / sqrt(e_next));
    if (keep_rows) {
      std::vector<Real> row(k + 2);
      Real inv_norm = Real(1) / sqrt(e_next);
      for (int l = 0; l <= k + 1; ++l) row[l] = b[l] * inv_norm;
      out.rows.push_back(std::move(row));
    }
    e = e_next;
  }
  return out;
}

}  // namespace

VerblunskySequence levinson(const MomentTable& mt, int kmax, unsigned precision_bits) {
  return levinson_core(mt, kmax, precision_bits, false).vs;
}

VerblunskySequence gram_schmidt_oracle(const Potential& p, int n, int kmax,
                                       unsigned precision_bits) {
  if (kmax > 16)
    throw Error(ErrorCode::CONFIG_INVALID, "gram_schmidt_oracle is limited to kmax <= 16");
  MomentTable mt = trig_moments(p, n, kmax, precision_bits);
  PrecisionGuard guard(precision_bits);
  auto cm = [&](int j) -> const Real& { return mt.c[static_cast<std::size_t>(std::abs(j))]; };

  // orthonormal coefficient rows q_k over {1, z, ..., z^k}
  std::vector<std::vector<Real>> q;
  q.push_back({Real(1) / sqrt(mt.c[0])});

  VerblunskySequence vs;
  vs.n = n;
  vs.kmax = kmax;
  vs.precision_used = precision_bits;
  vs.alpha_rho_residual = Real(0);

  for (int k = 1; k <= kmax; ++k) {
    std::vector<Real> w(k + 1, Real(0));
    w[k] = 1;  // monomial z^k
    for (int j = 0; j < k; ++j) {
      // <z^k, q_j> = sum_l q_{j,l} c_{k-l}
      Real proj(0);
      for (int l = 0; l <= j; ++l) proj += q[j][l] * cm(k - l);
      for (int l = 0; l <= j; ++l) w[l] -= proj * q[j][l];
    }
    Real nrm2(0);
    for (int l = 0; l <= k; ++l)
      for (int m = 0; m <= k; ++m) nrm2 += w[l] * w[m] * cm(l - m);
    if (!(nrm2 > 0))
      throw Error(ErrorCode::PRECISION_EXHAUSTED, "gram_schmidt_oracle lost positivity");
    Real inv = Real(1) / sqrt(nrm2);
    for (int l = 0; l <= k; ++l) w[l] *= inv;

    Real alpha = w[0] / w[k];
    Real rho = q[k - 1][k - 1] / w[k];
    vs.alphas.push_back(alpha);
    vs.rhos.push_back(rho);
    vs.leading.push_back(w[k]);
    vs.alpha_rho_residual =
        std::max(vs.alpha_rho_residual, abs(alpha * alpha + rho * rho - 1));
    q.push_back(std::move(w));
  }
  return vs;
}

VerblunskySequence compute_verblunsky(const Potential& p, int n, int kmax, unsigned start_bits,
                                      unsigned max_bits) {
  unsigned bits = start_bits ? start_bits : default_precision_bits(n);
  for (;;) {
    try {
      MomentTable mt = trig_moments(p, n, kmax, bits);
      return levinson(mt, kmax, bits);
    } catch (const Error& err) {
      if (err.code != ErrorCode::PRECISION_EXHAUSTED || bits >= max_bits) throw;
      bits = std::min(2 * bits, max_bits);
    }
  }
}

OrthonormalBasis::OrthonormalBasis(Potential p, int n, int kmax, unsigned precision_bits,
                                   std::vector<std::vector<Real>> rows, long grid_hint,
                                   VerblunskySequence vs)
    : pot_(std::move(p)),
      n_(n),
      kmax_(kmax),
      precision_bits_(precision_bits),
      grid_hint_(grid_hint),
      rows_(std::move(rows)),
      vs_(std::move(vs)) {}

OrthonormalBasis make_basis(const Potential& p, int n, int kmax, unsigned precision_bits) {
  unsigned bits = precision_bits ? precision_bits : default_precision_bits(n);
  for (;;) {
    try {
      MomentTable mt = trig_moments(p, n, kmax, bits);
      auto out = levinson_core(mt, kmax, bits, true);
      return OrthonormalBasis(p, n, kmax, bits, std::move(out.rows), mt.grid_size,
                              std::move(out.vs));
    } catch (const Error& err) {
      if (err.code != ErrorCode::PRECISION_EXHAUSTED || bits >= 16384) throw;
      bits *= 2;
    }
  }
}

RealComplex OrthonormalBasis::eval_P(int k, const Real& lam) const {
  const std::vector<Real>& row = rows_.at(k);
  RealComplex z = unit_phase(lam);
  RealComplex acc;
  for (int l = k; l >= 0; --l) {
    acc = acc * z;
    acc.re += row[l];
  }
  return acc;
}

RealComplex OrthonormalBasis::eval_Q(int k, const Real& lam) const {
  // Q_k(lam) = e^{ik lam} P_k(-lam)
  return unit_phase(Real(k) * lam) * eval_P(k, -lam);
}

RealComplex OrthonormalBasis::eval_chi(int k, const Real& lam) const {
  if (k % 2 == 0) {
    int m = k / 2;
    return unit_phase(Real(-m) * lam) * eval_Q(k, lam);
  }
  int m = (k - 1) / 2;
  return unit_phase(Real(-m) * lam) * eval_P(k, lam);
}

RealComplex OrthonormalBasis::eval_psi(int k, const Real& lam) const {
  return eval_P(k, lam) * sqrt(weight_here(pot_, n_, lam));
}

RealComplex OrthonormalBasis::inner_chi(int j, int l, bool shift_by_phase) const {
  PrecisionGuard guard(precision_bits_);
  int N = static_cast<int>(2 * grid_hint_);
  auto f = [&](const Real& lam) {
    RealComplex v = eval_chi(j, lam) * eval_chi(l, lam).conj();
    if (shift_by_phase) v = unit_phase(lam) * v;
    return v * weight_here(pot_, n_, lam);
  };
  return periodic_trapezoid_complex(f, N);
}

double kernel_density(const OrthonormalBasis& basis, int k, double lam) {
  PrecisionGuard guard(basis.precision_bits());
  Real l(lam);
  Real w = weight_here(basis.potential(), basis.n(), l);
  Real acc(0);
  for (int j = 0; j < k; ++j) acc += basis.eval_P(j, l).norm();
  return static_cast<double>(acc * w / basis.n());
}

}  // namespace opuclab
