#pragma once

// Conditional min- and max-entropies, exact and smoothed, via semidefinite
// programs in linear-matrix-inequality form.

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "secrecy/quantum.hpp"
#include "secrecy/sdp_model.hpp"

namespace secrecy {

/// Conditioning split: entropy of `a` given `b`; every other subsystem is traced out.
struct Split {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

/// Bipartite operator on A (x) B obtained from a split.
struct Bipartite {
  ComplexMatrix rho;
  std::size_t da;
  std::size_t db;
};

inline Bipartite reduce_split(const DensityOperator& rho, const Split& split) {
  if (split.a.empty()) throw DimensionError("entropy split needs a nonempty conditioned part");
  check_subsystems(rho.dims(), join(split.a, split.b));
  std::size_t da = 1, db = 1;
  for (auto k : split.a) da *= rho.dims()[k];
  for (auto k : split.b) db *= rho.dims()[k];
  return {partial_trace(rho.matrix(), rho.dims(), join(split.a, split.b)), da, db};
}

namespace entropy_detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void require_optimal(const sdp::LmiModel::Result& r, const char* what) {
  if (r.status != sdp::SdpStatus::Optimal) {
    std::ostringstream os;
    os << what << ": solver returned " << sdp::to_string(r.status) << " after " << r.raw.iterations
       << " iterations (residuals " << std::scientific << std::setprecision(2) << r.raw.primal_residual << ", "
       << r.raw.dual_residual << ", gap " << r.raw.gap << ")";
    throw SolverError(os.str());
  }
}

inline ComplexMatrix identity_k(std::size_t d) { return ComplexMatrix::Identity(d, d); }

/// Purification of the bipartite operator, returned as the operator on A (x) C.
inline Bipartite complementary(const Bipartite& ab) {
  auto s = support(ab.rho);
  const std::size_t r = s.rank();
  if (r == 0) return {ComplexMatrix::Zero(ab.da, ab.da), ab.da, 1};
  const std::size_t d = ab.da * ab.db;
  // psi = sum_k sqrt(l_k) |v_k> |k>, reorganized as amplitudes psi[(a, b), c]
  ComplexMatrix amp(d, r);
  for (std::size_t k = 0; k < r; ++k) amp.col(k) = std::sqrt(s.values(k)) * s.vectors.col(k);
  // rho_AC[(a,c),(a',c')] = sum_b psi[a,b,c] conj(psi[a',b,c'])
  ComplexMatrix out = ComplexMatrix::Zero(ab.da * r, ab.da * r);
  for (std::size_t a = 0; a < ab.da; ++a)
    for (std::size_t a2 = 0; a2 < ab.da; ++a2)
      for (std::size_t b = 0; b < ab.db; ++b) {
        const auto row = amp.row(a * ab.db + b);
        const auto row2 = amp.row(a2 * ab.db + b);
        out.block(a * r, a2 * r, r, r) += row.transpose() * row2.conjugate();
      }
  return {hermitian_part(out), ab.da, r};
}

/// min tr(sigma) s.t. 1_A (x) sigma >= rho.
inline double min_sigma_trace(const Bipartite& ab) {
  sdp::LmiModel m;
  const int d = static_cast<int>(ab.da * ab.db);
  int blk = m.add_block(d);
  auto sigma = sdp::add_hermitian(m, static_cast<int>(ab.db));
  for (std::size_t i = 0; i < ab.db; ++i) m.set_objective(sigma.re[i * ab.db + i], -1.0);
  sdp::place(m, sigma, blk, 0, 0, identity_k(ab.da));
  sdp::place_constant(m, blk, 0, 0, -ab.rho);
  auto r = m.solve();
  require_optimal(r, "min-entropy");
  return -r.value;
}

/// max F(rho, 1_A (x) sigma) over states sigma.
inline double max_fidelity_with_product(const Bipartite& ab) {
  auto s = support(ab.rho);
  const int r = static_cast<int>(s.rank());
  const int d = static_cast<int>(ab.da * ab.db);
  sdp::LmiModel m;
  int blk = m.add_block(r + d);
  auto x = sdp::add_general(m, r, d);
  auto sigma = sdp::add_hermitian(m, static_cast<int>(ab.db), true);
  // objective Re tr(X V)
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < d; ++j) {
      const Complex vji = s.vectors(j, i);
      m.set_objective(x.re[i * d + j], vji.real());
      m.set_objective(x.im[i * d + j], -vji.imag());
    }
  place_constant(m, blk, 0, 0, s.values.cast<Complex>().asDiagonal().toDenseMatrix());
  sdp::place(m, x, blk, 0, r, ComplexMatrix::Identity(1, 1));
  sdp::place(m, sigma, blk, r, r, identity_k(ab.da));
  auto res = m.solve();
  require_optimal(res, "max-entropy fidelity program");
  return res.value;
}

/// Smoothed min-entropy program; returns min tr(sigma) over the ball.
///
/// The smoothed operator is written as rho' = X D^{-1} X^dagger with D the
/// nonzero spectrum of rho and X of size d x r; this loses nothing because
/// the optimum can always be compressed to rank <= rank(rho). Blocks:
///   [[1 (x) sigma, X], [X^dagger, D]] >= 0            rho' <= 1 (x) sigma
///   [[T, D^{-1/2} X^dagger], [X D^{-1/2}, 1]] >= 0    T >= rho' compressed, tr T >= tr rho'
///   [[1 - tr T, w], [w, 1 - tr rho]] >= 0             w <= sqrt((1 - tr rho')(1 - tr rho))
///   Re tr(X V^dagger) + w >= sqrt(1 - eps^2)          generalized fidelity
/// The w block collapses to 1 - tr T >= 0 for normalized rho.
inline double min_sigma_trace_smooth(const Bipartite& ab, double eps) {
  auto s = support(ab.rho);
  const int r = static_cast<int>(s.rank());
  const int d = static_cast<int>(ab.da * ab.db);
  if (r == 0) return 0.0;
  const double tr = ab.rho.trace().real();
  const bool sub = 1.0 - tr > 1e-12;

  sdp::LmiModel m;
  auto sigma = sdp::add_hermitian(m, static_cast<int>(ab.db));
  auto x = sdp::add_general(m, d, r);
  auto t = sdp::add_hermitian(m, r);
  const int w = sub ? m.add_variable() : -1;
  for (std::size_t i = 0; i < ab.db; ++i) m.set_objective(sigma.re[i * ab.db + i], -1.0);

  const int b1 = m.add_block(d + r);
  sdp::place(m, sigma, b1, 0, 0, identity_k(ab.da));
  sdp::place(m, x, b1, 0, d, ComplexMatrix::Identity(1, 1));
  place_constant(m, b1, d, d, s.values.cast<Complex>().asDiagonal().toDenseMatrix());

  const int b2 = m.add_block(r + d);
  sdp::place(m, t, b2, 0, 0, ComplexMatrix::Identity(1, 1));
  RealVector inv_sqrt = s.values.cwiseSqrt().cwiseInverse();
  sdp::place(m, x, b2, r, 0, ComplexMatrix::Identity(1, 1), inv_sqrt);
  place_constant(m, b2, r, r, identity_k(d));

  const int b3 = m.add_block(sub ? 2 : 1, false);
  m.add_constant(b3, 0, 0, 1.0);
  for (int i = 0; i < r; ++i) m.add_coefficient(t.re[i * r + i], b3, 0, 0, -1.0);
  if (sub) {
    m.add_coefficient(w, b3, 0, 1, 1.0);
    m.add_constant(b3, 1, 1, 1.0 - tr);
  }

  const int b4 = m.add_block(1, false);
  m.add_constant(b4, 0, 0, -std::sqrt(1.0 - eps * eps));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < r; ++j) {
      const Complex v = s.vectors(i, j);
      if (v.real() != 0.0) m.add_coefficient(x.re[i * r + j], b4, 0, 0, v.real());
      if (v.imag() != 0.0) m.add_coefficient(x.im[i * r + j], b4, 0, 0, v.imag());
    }
  if (sub) m.add_coefficient(w, b4, 0, 0, 1.0);

  auto res = m.solve();
  require_optimal(res, "smooth min-entropy");
  return -res.value;
}

inline double to_entropy(double trace_sigma) {
  return trace_sigma > 0.0 ? -std::log2(trace_sigma) : kInf;
}

inline void check_smoothing(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("smoothing parameter must lie in [0, 1)");
}

}  // namespace entropy_detail

// Bipartite entry points: the operator lives on A (x) B.

inline double h_min(const Bipartite& ab) {
  if (ab.rho.trace().real() <= 0.0) return entropy_detail::kInf;
  return entropy_detail::to_entropy(entropy_detail::min_sigma_trace(ab));
}

inline double h_max(const Bipartite& ab) {
  if (ab.rho.trace().real() <= 0.0) return -entropy_detail::kInf;
  return -h_min(entropy_detail::complementary(ab));
}

/// Direct characterization: 2 log max_sigma F(rho, 1 (x) sigma).
inline double h_max_direct(const Bipartite& ab) {
  if (ab.rho.trace().real() <= 0.0) return -entropy_detail::kInf;
  return 2.0 * std::log2(entropy_detail::max_fidelity_with_product(ab));
}

inline double h_min_smooth(const Bipartite& ab, double eps) {
  entropy_detail::check_smoothing(eps);
  if (eps == 0.0) return h_min(ab);
  return entropy_detail::to_entropy(entropy_detail::min_sigma_trace_smooth(ab, eps));
}

inline double h_max_smooth(const Bipartite& ab, double eps) {
  entropy_detail::check_smoothing(eps);
  if (eps == 0.0) return h_max(ab);
  return -h_min_smooth(entropy_detail::complementary(ab), eps);
}

// State-and-split entry points.

inline double h_min(const DensityOperator& rho, const Split& s) { return h_min(reduce_split(rho, s)); }
inline double h_max(const DensityOperator& rho, const Split& s) { return h_max(reduce_split(rho, s)); }
inline double h_max_direct(const DensityOperator& rho, const Split& s) { return h_max_direct(reduce_split(rho, s)); }
inline double h_min_smooth(const DensityOperator& rho, const Split& s, double eps) {
  return h_min_smooth(reduce_split(rho, s), eps);
}
inline double h_max_smooth(const DensityOperator& rho, const Split& s, double eps) {
  return h_max_smooth(reduce_split(rho, s), eps);
}

/// log2 of the reciprocal smallest nonzero eigenvalue.
inline double log_inverse_min_eigenvalue(const ComplexMatrix& m) {
  auto s = support(m);
  if (s.rank() == 0) return 0.0;
  return -std::log2(s.values.minCoeff());
}

struct AepBounds {
  double lower;  // on H_min^eps(A^n|B^n)
  double upper;  // on H_max^eps(A^n|B^n)
  double conditional_entropy;
  double mu_b;
  double mu_c;
};

/// Finite-n equipartition bounds n S(A|B) -/+ (mu_B + mu_C) sqrt(n ln(2/eps)),
/// with mu_X = log ||(psi^X)^{-1}|| on the support of the purification marginals.
inline AepBounds aep_bounds(const DensityOperator& rho, const Split& split, std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("AEP needs 0 < eps < 1");
  if (n == 0) throw DomainError("AEP needs n >= 1");
  if (!rho.normalized()) throw DomainError("AEP needs a normalized state");
  Bipartite ab = reduce_split(rho, split);
  ComplexMatrix rb = partial_trace(ab.rho, {ab.da, ab.db}, {1});
  AepBounds out{};
  out.conditional_entropy = operator_entropy(ab.rho) - operator_entropy(rb);
  out.mu_b = log_inverse_min_eigenvalue(rb);
  out.mu_c = log_inverse_min_eigenvalue(ab.rho);  // psi^C has the spectrum of rho_AB
  const double pen = (out.mu_b + out.mu_c) * std::sqrt(static_cast<double>(n) * std::log(2.0 / eps));
  out.lower = static_cast<double>(n) * out.conditional_entropy - pen;
  out.upper = static_cast<double>(n) * out.conditional_entropy + pen;
  return out;
}

}  // namespace secrecy
