#pragma once

// Quantum states and channels on finite-dimensional tensor-product spaces.

#include <optional>

#include "secrecy/linalg.hpp"

namespace secrecy {

/// Tolerances for validating states and channels.
inline constexpr double kHermitianTol = 1e-8;
inline constexpr double kTraceTol = 1e-8;
inline constexpr double kNegativityClip = 1e-10;

/// Positive semidefinite operator with trace at most one, tagged with the
/// dimensions of its tensor factors. Subnormalized operators are admitted.
class DensityOperator {
 public:
  DensityOperator(ComplexMatrix m, Dims dims) : matrix_(std::move(m)), dims_(std::move(dims)) { validate(); }

  /// Single-system operator.
  explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)), dims_{static_cast<std::size_t>(matrix_.rows())} {
    validate();
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t num_subsystems() const { return dims_.size(); }
  double trace() const { return matrix_.trace().real(); }
  bool normalized(double tol = kTraceTol) const { return std::abs(trace() - 1.0) <= tol; }

 private:
  void validate() {
    if (matrix_.rows() != matrix_.cols()) throw DimensionError("density operator must be square");
    if (dims_.empty() || product(dims_) != dim())
      throw DimensionError("subsystem dimensions do not multiply to the matrix dimension");
    if (!matrix_.allFinite()) throw ValidationError("density operator has non-finite entries");
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    if (hermiticity_defect(matrix_) > kHermitianTol * scale) throw ValidationError("density operator is not Hermitian");
    matrix_ = hermitian_part(matrix_);
    auto es = eigh(matrix_);
    if (es.values.minCoeff() < -kNegativityClip)
      throw ValidationError("density operator has eigenvalue " + std::to_string(es.values.minCoeff()));
    if (es.values.minCoeff() < 0.0) {
      RealVector clipped = es.values.cwiseMax(0.0);
      matrix_ = es.vectors * clipped.asDiagonal() * es.vectors.adjoint();
    }
    if (trace() > 1.0 + kTraceTol) throw ValidationError("density operator has trace " + std::to_string(trace()));
  }

  ComplexMatrix matrix_;
  Dims dims_;
};

/// Pure state vector with subsystem dimensions.
struct PureState {
  ComplexVector vector;
  Dims dims;

  DensityOperator density() const { return DensityOperator(vector * vector.adjoint(), dims); }
  DensityOperator reduced(const std::vector<std::size_t>& keep) const {
    Dims kd;
    for (auto k : keep) kd.push_back(dims.at(k));
    return DensityOperator(reduce_pure(vector, dims, keep), kd);
  }
};

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityOperator(kron(a.matrix(), b.matrix()), dims);
}

inline DensityOperator tensor_power(const DensityOperator& a, std::size_t n) {
  if (n == 0) throw DomainError("tensor power needs n >= 1");
  DensityOperator out = a;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, a);
  return out;
}

/// Reorders the tensor factors so that factor k of the result is factor perm[k].
inline DensityOperator permute(const DensityOperator& rho, const std::vector<std::size_t>& perm) {
  Dims dims;
  for (auto k : perm) dims.push_back(rho.dims().at(k));
  return DensityOperator(permute_subsystems(rho.matrix(), rho.dims(), perm), dims);
}

inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::size_t>& keep) {
  Dims dims;
  for (auto k : keep) {
    if (k >= rho.num_subsystems()) throw DimensionError("invalid subsystem index " + std::to_string(k));
    dims.push_back(rho.dims()[k]);
  }
  if (keep.empty()) return DensityOperator(ComplexMatrix::Constant(1, 1, rho.trace()), Dims{1});
  return DensityOperator(partial_trace(rho.matrix(), rho.dims(), keep), dims);
}

/// Generalized fidelity on subnormalized operators:
/// ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1 - tr rho)(1 - tr sigma)).
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  double f = trace_norm(sqrtm_psd(rho.matrix()) * sqrtm_psd(sigma.matrix()));
  const double defect = std::max(0.0, 1.0 - rho.trace()) * std::max(0.0, 1.0 - sigma.trace());
  f += std::sqrt(defect);
  return std::clamp(f, 0.0, 1.0);
}

inline double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  const double f = fidelity(rho, sigma);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace distance: dimension mismatch");
  return 0.5 * trace_norm_hermitian(rho.matrix() - sigma.matrix());
}

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kRankTol = 1e-12;

/// Support of a PSD operator: eigenvalues above threshold and their eigenvectors.
struct Support {
  RealVector values;      // descending
  ComplexMatrix vectors;  // d x r, orthonormal columns
  std::size_t rank() const { return static_cast<std::size_t>(values.size()); }
};

inline Support support(const ComplexMatrix& m, double rel_tol = kRankTol) {
  auto es = eigh(m);
  const double top = std::max(es.values.maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = es.values.size(); k-- > 0;)
    if (es.values(k) > rel_tol * std::max(top, 1e-300) && es.values(k) > 0.0) keep.push_back(k);
  Support s;
  s.values.resize(keep.size());
  s.vectors.resize(m.rows(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    s.values(i) = es.values(keep[i]);
    s.vectors.col(i) = es.vectors.col(keep[i]);
  }
  return s;
}

/// Purification on (original systems) x C with dim C = rank(rho).
inline PureState purify(const DensityOperator& rho) {
  auto s = support(rho.matrix());
  if (s.rank() == 0) throw DomainError("cannot purify the zero operator");
  const std::size_t d = rho.dim(), r = s.rank();
  ComplexVector psi = ComplexVector::Zero(d * r);
  for (std::size_t k = 0; k < r; ++k) {
    ComplexVector ek = ComplexVector::Zero(r);
    ek(k) = 1.0;
    psi += std::sqrt(s.values(k)) * kron(ComplexVector(s.vectors.col(k)), ek);
  }
  Dims dims = rho.dims();
  dims.push_back(r);
  return {psi, dims};
}

// ---------------------------------------------------------------------------
// Entropies (base 2, 0 log 0 := 0)

/// -sum lambda log2 lambda over the spectrum; no normalization required.
inline double operator_entropy(const ComplexMatrix& m) {
  RealVector ev = eigenvalues(m);
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > 0.0) s -= ev(k) * std::log2(ev(k));
  return s;
}

inline double von_neumann_entropy(const DensityOperator& rho) {
  if (!rho.normalized()) throw DomainError("von Neumann entropy requires a normalized state");
  return operator_entropy(rho.matrix());
}

inline double marginal_entropy(const DensityOperator& rho, const std::vector<std::size_t>& keep) {
  if (keep.empty()) return 0.0;
  return operator_entropy(partial_trace(rho.matrix(), rho.dims(), keep));
}

inline std::vector<std::size_t> join(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// I(X:Y|Z) = S(XZ) + S(YZ) - S(Z) - S(XYZ). Systems outside X, Y, Z are traced out.
inline double conditional_mutual_information(const DensityOperator& rho, const std::vector<std::size_t>& x,
                                             const std::vector<std::size_t>& y, const std::vector<std::size_t>& z) {
  check_subsystems(rho.dims(), join(join(x, y), z));
  if (!rho.normalized()) throw DomainError("mutual information requires a normalized state");
  return marginal_entropy(rho, join(x, z)) + marginal_entropy(rho, join(y, z)) - marginal_entropy(rho, z) -
         marginal_entropy(rho, join(join(x, y), z));
}

inline double mutual_information(const DensityOperator& rho, const std::vector<std::size_t>& x,
                                 const std::vector<std::size_t>& y) {
  return conditional_mutual_information(rho, x, y, {});
}

/// S(A|B) = S(AB) - S(B).
inline double conditional_entropy(const DensityOperator& rho, const std::vector<std::size_t>& a,
                                  const std::vector<std::size_t>& b) {
  check_subsystems(rho.dims(), join(a, b));
  return marginal_entropy(rho, join(a, b)) - marginal_entropy(rho, b);
}

// ---------------------------------------------------------------------------
// Channels

/// Completely positive map in Kraus form, rho -> sum_k K rho K^dagger.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw DomainError("channel needs at least one Kraus operator");
    for (const auto& k : kraus_)
      if (k.rows() != kraus_.front().rows() || k.cols() != kraus_.front().cols())
        throw DimensionError("Kraus operators have inconsistent shapes");
  }

  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t input_dim() const { return static_cast<std::size_t>(kraus_.front().cols()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(kraus_.front().rows()); }

  /// max |sum K^dagger K - 1|.
  double trace_preservation_defect() const {
    ComplexMatrix s = ComplexMatrix::Zero(input_dim(), input_dim());
    for (const auto& k : kraus_) s += k.adjoint() * k;
    return (s - identity(input_dim())).cwiseAbs().maxCoeff();
  }
  bool trace_preserving(double tol = kTraceTol) const { return trace_preservation_defect() <= tol; }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    if (static_cast<std::size_t>(rho.rows()) != input_dim()) throw DimensionError("channel input dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(output_dim(), output_dim());
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  /// Choi operator sum_ij |i><j| (x) N(|i><j|) on input (x) output.
  ComplexMatrix choi() const {
    const std::size_t din = input_dim(), dout = output_dim();
    ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
    for (std::size_t a = 0; a < din; ++a)
      for (std::size_t b = 0; b < din; ++b) {
        ComplexMatrix eab = ComplexMatrix::Zero(din, din);
        eab(a, b) = 1.0;
        j.block(a * dout, b * dout, dout, dout) = (*this)(eab);
      }
    return j;
  }

  static QuantumChannel identity_channel(std::size_t d) { return QuantumChannel({identity(d)}); }

  /// Kraus operators from a PSD Choi operator on input (x) output; eigenvalues
  /// below `drop_tol` are discarded.
  static QuantumChannel from_choi(const ComplexMatrix& choi, std::size_t din, std::size_t dout, double drop_tol = 1e-10) {
    if (static_cast<std::size_t>(choi.rows()) != din * dout) throw DimensionError("Choi operator dimension mismatch");
    auto es = eigh(choi);
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index k = es.values.size(); k-- > 0;) {
      if (es.values(k) <= drop_tol) continue;
      ComplexMatrix kr(dout, din);
      for (std::size_t i = 0; i < din; ++i)
        for (std::size_t e = 0; e < dout; ++e) kr(e, i) = std::sqrt(es.values(k)) * es.vectors(i * dout + e, k);
      kraus.push_back(kr);
    }
    if (kraus.empty()) throw DomainError("Choi operator has no support");
    return QuantumChannel(std::move(kraus));
  }

 private:
  std::vector<ComplexMatrix> kraus_;
};

/// Applies a Choi operator: tr_in[J (rho^T (x) 1)].
inline ComplexMatrix apply_choi(const ComplexMatrix& choi, const ComplexMatrix& rho, std::size_t din, std::size_t dout) {
  ComplexMatrix prod = choi * kron(ComplexMatrix(rho.transpose()), identity(dout));
  return partial_trace(prod, {din, dout}, {1});
}

/// Applies the channel to subsystem `target`, identity elsewhere.
inline DensityOperator apply_channel(const QuantumChannel& channel, const DensityOperator& rho, std::size_t target) {
  if (target >= rho.num_subsystems()) throw DimensionError("invalid target subsystem");
  if (rho.dims()[target] != channel.input_dim()) throw DimensionError("channel input dimension mismatch");
  std::size_t before = 1, after = 1;
  for (std::size_t k = 0; k < target; ++k) before *= rho.dims()[k];
  for (std::size_t k = target + 1; k < rho.num_subsystems(); ++k) after *= rho.dims()[k];
  Dims dims = rho.dims();
  dims[target] = channel.output_dim();
  ComplexMatrix out = ComplexMatrix::Zero(product(dims), product(dims));
  for (const auto& k : channel.kraus()) {
    ComplexMatrix full = kron(kron(identity(before), k), identity(after));
    out += full * rho.matrix() * full.adjoint();
  }
  return DensityOperator(hermitian_part(out), dims);
}

/// Isometry V: in -> out with V^dagger V = 1 and a factorization of the output.
class Isometry {
 public:
  Isometry(ComplexMatrix v, Dims output_dims) : v_(std::move(v)), out_dims_(std::move(output_dims)) {
    if (v_.rows() < v_.cols()) throw DimensionError("isometry must not reduce dimension");
    if (product(out_dims_) != static_cast<std::size_t>(v_.rows()))
      throw DimensionError("isometry output factorization mismatch");
    if (defect() > 1e-8) throw ValidationError("matrix is not an isometry (defect " + std::to_string(defect()) + ")");
  }

  const ComplexMatrix& matrix() const { return v_; }
  const Dims& output_dims() const { return out_dims_; }
  std::size_t input_dim() const { return static_cast<std::size_t>(v_.cols()); }
  double defect() const { return (v_.adjoint() * v_ - identity(v_.cols())).cwiseAbs().maxCoeff(); }

  ComplexMatrix operator()(const ComplexMatrix& rho) const { return v_ * rho * v_.adjoint(); }

 private:
  ComplexMatrix v_;
  Dims out_dims_;
};

/// Stinespring dilation V = sum_k K_k (x) |k>, output (channel output) x (environment).
inline Isometry stinespring(const QuantumChannel& channel) {
  if (!channel.trace_preserving())
    throw ValidationError("channel is not trace preserving (defect " +
                          std::to_string(channel.trace_preservation_defect()) + ")");
  const std::size_t r = channel.kraus().size();
  ComplexMatrix v = ComplexMatrix::Zero(channel.output_dim() * r, channel.input_dim());
  for (std::size_t k = 0; k < r; ++k) {
    ComplexMatrix ek = ComplexMatrix::Zero(r, 1);
    ek(k, 0) = 1.0;
    v += kron(channel.kraus()[k], ek);
  }
  return Isometry(v, {channel.output_dim(), r});
}

}  // namespace secrecy
