#pragma once

// Dense complex linear algebra used throughout: Kronecker products,
// Hermitian eigendecomposition, PSD square roots, trace norm, subsystem
// index bookkeeping, and seeded random matrices.

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "secrecy/core.hpp"

namespace secrecy {

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline ComplexMatrix identity(std::size_t d) { return ComplexMatrix::Identity(d, d); }

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Complex trace(const ComplexMatrix& m) { return m.trace(); }

/// Eigenvalues ascending, orthonormal eigenvectors in columns.
struct Eigensystem {
  RealVector values;
  ComplexMatrix vectors;
};

inline Eigensystem eigh(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error("Hermitian eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline RealVector eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigendecomposition failed");
  return es.eigenvalues();
}

/// Applies f to the spectrum of a Hermitian matrix.
template <class F>
ComplexMatrix spectral_apply(const ComplexMatrix& m, F&& f) {
  auto es = eigh(m);
  RealVector fv = es.values.unaryExpr(f);
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

/// Square root of a PSD matrix; negative eigenvalues from rounding are clipped.
inline ComplexMatrix sqrtm_psd(const ComplexMatrix& m) {
  return spectral_apply(m, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

/// Sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

/// Trace norm of a Hermitian matrix via its spectrum.
inline double trace_norm_hermitian(const ComplexMatrix& m) { return eigenvalues(m).cwiseAbs().sum(); }

// ---------------------------------------------------------------------------
// Subsystem index bookkeeping

/// Row-major strides for a tensor-product index: index = sum_k digit_k * stride_k.
inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

/// Offsets contributed by every joint value of the listed subsystems.
inline std::vector<std::size_t> subsystem_offsets(const Dims& dims, const std::vector<std::size_t>& which) {
  auto st = strides(dims);
  std::vector<std::size_t> offsets{0};
  for (auto k : which) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[k]);
    for (auto o : offsets)
      for (std::size_t v = 0; v < dims[k]; ++v) next.push_back(o + v * st[k]);
    offsets = std::move(next);
  }
  return offsets;
}

inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) out.push_back(k);
  return out;
}

inline void check_subsystems(const Dims& dims, const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> seen;
  for (auto k : idx) {
    if (k >= dims.size()) throw DimensionError("subsystem index " + std::to_string(k) + " out of range");
    if (std::find(seen.begin(), seen.end(), k) != seen.end())
      throw DimensionError("subsystem index " + std::to_string(k) + " repeated");
    seen.push_back(k);
  }
}

/// Partial trace of a matrix on `dims`, keeping `keep` in the listed order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
  check_subsystems(dims, keep);
  if (static_cast<std::size_t>(m.rows()) != product(dims) || m.rows() != m.cols())
    throw DimensionError("matrix does not match subsystem dimensions");
  auto kept = subsystem_offsets(dims, keep);
  auto traced = subsystem_offsets(dims, complement(dims.size(), keep));
  const auto dk = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (auto t : traced) acc += m(kept[i] + t, kept[j] + t);
      out(i, j) = acc;
    }
  return out;
}

/// Reduced operator of a pure state vector, keeping `keep` in the listed order.
inline ComplexMatrix reduce_pure(const ComplexVector& psi, const Dims& dims, const std::vector<std::size_t>& keep) {
  check_subsystems(dims, keep);
  if (static_cast<std::size_t>(psi.size()) != product(dims)) throw DimensionError("vector does not match dimensions");
  auto kept = subsystem_offsets(dims, keep);
  auto traced = subsystem_offsets(dims, complement(dims.size(), keep));
  ComplexMatrix amp(kept.size(), traced.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t t = 0; t < traced.size(); ++t) amp(i, t) = psi(kept[i] + traced[t]);
  return amp * amp.adjoint();
}

/// Reorders tensor factors: output factor k is input factor perm[k].
inline ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, const std::vector<std::size_t>& perm) {
  if (perm.size() != dims.size()) throw DimensionError("permutation size mismatch");
  check_subsystems(dims, perm);
  auto idx = subsystem_offsets(dims, perm);
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Random matrices (explicit seeds everywhere)

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(n01(rng), n01(rng));
  return g;
}

inline ComplexVector haar_pure(std::size_t d, Rng& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
inline ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(d); ++k) {
    Complex ph = r(k, k) / std::abs(r(k, k));
    q.col(k) *= ph;
  }
  return q;
}

/// Random density matrix: Haar-random pure state on d x env, traced over env.
inline ComplexMatrix random_density_matrix(std::size_t d, std::size_t env, Rng& rng) {
  ComplexVector psi = haar_pure(d * env, rng);
  return reduce_pure(psi, {d, env}, {0});
}

inline ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  ComplexMatrix g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace secrecy
