#pragma once

// Complex Hermitian modeling layer over the real symmetric solver.
//
// A complex Hermitian block H = R + iI of size n is represented by the real
// symmetric block phi(H) = [[R, -I], [I, R]] of size 2n. For real symmetric
// Y >= 0 partitioned the same way, <phi(H), Y> = Re tr(H L) with
// L = (Y11 + Y22) + i (Y21 - Y12), and L >= 0.
//
// LmiModel    maximize  c^T y + offset   s.t.  F_k + sum_v y_v G_{v,k} >= 0
// PrimalModel minimize  Re tr(C X) + offset  s.t.  Re tr(A_i X) = b_i, X >= 0

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "secrecy/sdp.hpp"

namespace secrecy::sdp {

namespace detail {

using EntryMap = std::map<std::tuple<int, int, int>, double>;  // (key, row, col) -> value

/// Adds scale * phi(H) where H has entries c at (i,j) and conj(c) at (j,i).
inline void embed_entry(EntryMap& out, int key, bool complex_block, int n, int i, int j, Complex c, double scale) {
  if (i > j) {
    std::swap(i, j);
    c = std::conj(c);
  }
  auto add = [&](int r, int s, double v) {
    if (v != 0.0) out[{key, r, s}] += scale * v;
  };
  if (!complex_block) {
    add(i, j, c.real());
    return;
  }
  add(i, j, c.real());
  add(n + i, n + j, c.real());
  if (i != j) {
    add(i, n + j, -c.imag());
    add(j, n + i, c.imag());
  }
}

inline ComplexMatrix collapse(const RealMatrix& y, bool complex_block, double scale) {
  if (!complex_block) return y.cast<Complex>() * scale;
  const Eigen::Index n = y.rows() / 2;
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = scale * Complex(y(i, j) + y(n + i, n + j), y(n + i, j) - y(i, n + j));
  return out;
}

}  // namespace detail

struct Block {
  int size;
  bool complex;
};

class LmiModel {
 public:
  int add_block(int size, bool complex = true) {
    if (size <= 0) throw DimensionError("block size must be positive");
    blocks_.push_back({size, complex});
    constants_.emplace_back();
    return static_cast<int>(blocks_.size()) - 1;
  }

  int add_variable(double objective = 0.0) {
    objective_.push_back(objective);
    return static_cast<int>(objective_.size()) - 1;
  }

  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int k) const { return blocks_.at(k); }

  void set_objective(int var, double c) { objective_.at(var) = c; }
  void add_objective_offset(double c) { offset_ += c; }

  /// F_k(i, j) += c and F_k(j, i) += conj(c).
  void add_constant(int block, int i, int j, Complex c) {
    check(block, i, j);
    constants_[block].push_back({i, j, c});
  }

  /// G_{var,k}(i, j) += c and G_{var,k}(j, i) += conj(c).
  void add_coefficient(int var, int block, int i, int j, Complex c) {
    check(block, i, j);
    if (var < 0 || var >= num_variables()) throw DimensionError("unknown model variable");
    terms_.push_back({var, block, i, j, c});
  }

  /// Places a constant Hermitian matrix at (row0, row0) on the diagonal.
  void add_constant_matrix(int block, int row0, const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = i; j < m.cols(); ++j)
        if (m(i, j) != Complex(0.0)) add_constant(block, row0 + static_cast<int>(i), row0 + static_cast<int>(j), m(i, j));
  }

  SdpProblem build() const {
    SdpProblem p;
    detail::EntryMap cmap, amap;
    for (int k = 0; k < num_blocks(); ++k) {
      const auto& b = blocks_[k];
      p.block_sizes.push_back(b.complex ? 2 * b.size : b.size);
      for (const auto& e : constants_[k]) detail::embed_entry(cmap, k, b.complex, b.size, e.i, e.j, e.c, 1.0);
    }
    for (int k = 0; k < num_blocks(); ++k) p.objective.push_back(RealMatrix::Zero(p.block_sizes[k], p.block_sizes[k]));
    for (const auto& [key, v] : cmap) {
      auto [k, r, s] = key;
      p.objective[k](r, s) = v;
      p.objective[k](s, r) = v;
    }
    // key encodes (var, block) as var * nblocks + block
    const int nb = num_blocks();
    for (const auto& t : terms_)
      detail::embed_entry(amap, t.var * nb + t.block, blocks_[t.block].complex, blocks_[t.block].size, t.i, t.j, t.c,
                          -1.0);
    p.constraints.assign(objective_.size(), {});
    for (const auto& [key, v] : amap) {
      auto [vk, r, s] = key;
      if (v == 0.0) continue;
      p.constraints[vk / nb].push_back({vk % nb, r, s, v});
    }
    p.rhs = Eigen::Map<const RealVector>(objective_.data(), static_cast<Eigen::Index>(objective_.size()));
    return p;
  }

  struct Result {
    SdpStatus status;
    double value;  // optimal objective (dual side of the solver)
    double primal_value;
    RealVector y;
    std::vector<ComplexMatrix> multipliers;  // one PSD matrix per block
    SdpSolution raw;
  };

  Result solve(const Tolerances& tol = {}) const {
    SdpProblem p = build();
    SdpSolution sol = sdp::solve(p, tol);
    Result r{sol.status, sol.dual_value + offset_, sol.primal_value + offset_, sol.y, {}, sol};
    if (sol.x.size() == blocks_.size())
      for (int k = 0; k < num_blocks(); ++k) r.multipliers.push_back(detail::collapse(sol.x[k], blocks_[k].complex, 1.0));
    return r;
  }

  /// Value of the affine matrix F_k + sum_v y_v G_{v,k}.
  ComplexMatrix evaluate(int block, const RealVector& y) const {
    const int n = blocks_.at(block).size;
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    auto put = [&](int i, int j, Complex c) {
      m(i, j) += c;
      if (i != j) m(j, i) += std::conj(c);
    };
    for (const auto& e : constants_[block]) put(e.i, e.j, blocks_[block].complex ? e.c : Complex(e.c.real()));
    for (const auto& t : terms_)
      if (t.block == block) put(t.i, t.j, y(t.var) * (blocks_[block].complex ? t.c : Complex(t.c.real())));
    if (!blocks_[block].complex) m = m.real().cast<Complex>();
    // diagonal entries are Hermitian parts
    for (int i = 0; i < n; ++i) m(i, i) = Complex(m(i, i).real(), 0.0);
    return m;
  }

 private:
  struct Const {
    int i, j;
    Complex c;
  };
  struct Term {
    int var, block, i, j;
    Complex c;
  };
  void check(int block, int i, int j) const {
    if (block < 0 || block >= num_blocks()) throw DimensionError("unknown model block");
    const int n = blocks_[block].size;
    if (i < 0 || j < 0 || i >= n || j >= n) throw DimensionError("entry outside model block");
  }

  std::vector<Block> blocks_;
  std::vector<std::vector<Const>> constants_;
  std::vector<Term> terms_;
  std::vector<double> objective_;
  double offset_ = 0.0;
};

/// Sparse Hermitian matrix given by its upper-triangle entries.
struct HermitianEntry {
  int block;
  int i;
  int j;
  Complex value;
};

class PrimalModel {
 public:
  int add_block(int size, bool complex = true) {
    if (size <= 0) throw DimensionError("block size must be positive");
    blocks_.push_back({size, complex});
    return static_cast<int>(blocks_.size()) - 1;
  }

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int k) const { return blocks_.at(k); }

  /// Re tr(A X) = rhs, with A assembled from `entries` (each mirrored).
  int add_constraint(const std::vector<HermitianEntry>& entries, double rhs) {
    for (const auto& e : entries) check(e);
    constraints_.push_back(entries);
    rhs_.push_back(rhs);
    return static_cast<int>(constraints_.size()) - 1;
  }

  void add_objective(const HermitianEntry& e) {
    check(e);
    objective_.push_back(e);
  }

  SdpProblem build() const {
    SdpProblem p;
    for (const auto& b : blocks_) {
      const int n = b.complex ? 2 * b.size : b.size;
      p.block_sizes.push_back(n);
      p.objective.push_back(RealMatrix::Zero(n, n));
    }
    detail::EntryMap cmap;
    for (const auto& e : objective_) embed(cmap, e.block, e);
    for (const auto& [key, v] : cmap) {
      auto [k, r, s] = key;
      p.objective[k](r, s) = v;
      p.objective[k](s, r) = v;
    }
    for (const auto& con : constraints_) {
      detail::EntryMap amap;
      for (const auto& e : con) embed(amap, e.block, e);
      std::vector<Entry> row;
      for (const auto& [key, v] : amap) {
        auto [k, r, s] = key;
        if (v != 0.0) row.push_back({k, r, s, v});
      }
      p.constraints.push_back(std::move(row));
    }
    p.rhs = Eigen::Map<const RealVector>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
    return p;
  }

  struct Result {
    SdpStatus status;
    double value;
    double dual_value;
    std::vector<ComplexMatrix> blocks;
    RealVector y;
    SdpSolution raw;
  };

  Result solve(const Tolerances& tol = {}) const {
    SdpSolution sol = sdp::solve(build(), tol);
    Result r{sol.status, sol.primal_value, sol.dual_value, {}, sol.y, sol};
    if (sol.x.size() == blocks_.size())
      for (int k = 0; k < num_blocks(); ++k) r.blocks.push_back(detail::collapse(sol.x[k], blocks_[k].complex, 0.5));
    return r;
  }

 private:
  void check(const HermitianEntry& e) const {
    if (e.block < 0 || e.block >= num_blocks()) throw DimensionError("unknown model block");
    const int n = blocks_[e.block].size;
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) throw DimensionError("entry outside model block");
  }
  void embed(detail::EntryMap& out, int key, const HermitianEntry& e) const {
    const auto& b = blocks_[e.block];
    detail::embed_entry(out, key, b.complex, b.size, e.i, e.j, e.value, b.complex ? 0.5 : 1.0);
  }

  std::vector<Block> blocks_;
  std::vector<std::vector<HermitianEntry>> constraints_;
  std::vector<double> rhs_;
  std::vector<HermitianEntry> objective_;
};

/// Linear map applied to one block of a PrimalModel.
struct LinearTerm {
  int block;
  std::function<ComplexMatrix(const ComplexMatrix&)> map;
};

/// Adds sum_k L_k(X_k) = target entrywise (real and imaginary parts of the
/// upper triangle). Each L_k must send Hermitian matrices to Hermitian ones.
inline void add_hermitian_equality(PrimalModel& model, const std::vector<LinearTerm>& terms,
                                   const ComplexMatrix& target) {
  const Eigen::Index t = target.rows();
  // coeffs[k][(i, j)] = Q with L_k(X)_ij = tr(X Q)
  std::vector<std::vector<ComplexMatrix>> coeffs(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const int n = model.block(terms[k].block).size;
    coeffs[k].assign(t * t, ComplexMatrix::Zero(n, n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        ComplexMatrix unit = ComplexMatrix::Zero(n, n);
        unit(a, b) = 1.0;
        ComplexMatrix out = terms[k].map(unit);
        if (out.rows() != t || out.cols() != t) throw DimensionError("linear map output does not match target");
        for (Eigen::Index i = 0; i < t; ++i)
          for (Eigen::Index j = i; j < t; ++j) coeffs[k][i * t + j](b, a) = out(i, j);
      }
  }
  auto emit = [&](Eigen::Index i, Eigen::Index j, Complex phase, double rhs) {
    std::vector<HermitianEntry> entries;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const ComplexMatrix q = phase * coeffs[k][i * t + j];
      const ComplexMatrix h = 0.5 * (q + q.adjoint());
      for (Eigen::Index a = 0; a < h.rows(); ++a)
        for (Eigen::Index b = a; b < h.cols(); ++b)
          if (std::abs(h(a, b)) > 0.0)
            entries.push_back({terms[k].block, static_cast<int>(a), static_cast<int>(b), h(a, b)});
    }
    if (!entries.empty() || rhs != 0.0) model.add_constraint(entries, rhs);
  };
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = i; j < t; ++j) {
      emit(i, j, 1.0, target(i, j).real());
      if (i != j) emit(i, j, Complex(0.0, -1.0), target(i, j).imag());
    }
}

/// Complex matrix-valued decision variable of an LmiModel, stored as real
/// variables for the real and imaginary parts of each free entry.
struct MatrixVar {
  int rows = 0;
  int cols = 0;
  bool hermitian = false;
  bool unit_trace = false;  // last diagonal entry is 1 - (sum of the others)
  std::vector<int> re, im;  // row-major; -1 where the part is not free

  using Terms = std::vector<std::pair<int, Complex>>;

  /// Entry (i, j) as constant + sum_t coeff_t * y[var_t].
  Complex entry(int i, int j, Terms& terms) const {
    terms.clear();
    if (!hermitian) {
      terms.push_back({re[i * cols + j], 1.0});
      terms.push_back({im[i * cols + j], Complex(0.0, 1.0)});
      return 0.0;
    }
    if (i == j) {
      if (unit_trace && i == rows - 1) {
        for (int k = 0; k + 1 < rows; ++k) terms.push_back({re[k * cols + k], -1.0});
        return 1.0;
      }
      terms.push_back({re[i * cols + i], 1.0});
      return 0.0;
    }
    const int a = std::min(i, j), b = std::max(i, j);
    terms.push_back({re[a * cols + b], 1.0});
    terms.push_back({im[a * cols + b], Complex(0.0, i < j ? 1.0 : -1.0)});
    return 0.0;
  }

  ComplexMatrix value(const RealVector& y) const {
    ComplexMatrix m(rows, cols);
    Terms t;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        Complex v = entry(i, j, t);
        for (const auto& [var, c] : t) v += c * y(var);
        m(i, j) = v;
      }
    return m;
  }
};

inline MatrixVar add_hermitian(LmiModel& model, int d, bool unit_trace = false) {
  MatrixVar v;
  v.rows = v.cols = d;
  v.hermitian = true;
  v.unit_trace = unit_trace;
  v.re.assign(d * d, -1);
  v.im.assign(d * d, -1);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      if (i == j && unit_trace && i == d - 1) continue;
      v.re[i * d + j] = model.add_variable();
      if (i != j) v.im[i * d + j] = model.add_variable();
    }
  return v;
}

inline MatrixVar add_general(LmiModel& model, int rows, int cols) {
  MatrixVar v;
  v.rows = rows;
  v.cols = cols;
  v.re.resize(rows * cols);
  v.im.resize(rows * cols);
  for (int k = 0; k < rows * cols; ++k) {
    v.re[k] = model.add_variable();
    v.im[k] = model.add_variable();
  }
  return v;
}

/// Writes scale * (K (x) V) * diag(w) into `block` at (row0, col0). When
/// row0 == col0 the expression must be Hermitian and only its upper triangle
/// is written; otherwise the region must lie off the diagonal.
inline void place(LmiModel& model, const MatrixVar& v, int block, int row0, int col0, const ComplexMatrix& k,
                  const RealVector& w = RealVector(), Complex scale = 1.0) {
  const bool diagonal = row0 == col0;
  MatrixVar::Terms terms;
  for (Eigen::Index a = 0; a < k.rows(); ++a)
    for (Eigen::Index b = 0; b < k.cols(); ++b) {
      if (k(a, b) == Complex(0.0)) continue;
      for (int i = 0; i < v.rows; ++i)
        for (int j = 0; j < v.cols; ++j) {
          const int r = static_cast<int>(a) * v.rows + i, c = static_cast<int>(b) * v.cols + j;
          if (diagonal && r > c) continue;
          const Complex f = scale * k(a, b) * (w.size() ? w(c) : 1.0);
          const Complex constant = v.entry(i, j, terms);
          if (constant != Complex(0.0)) model.add_constant(block, row0 + r, col0 + c, f * constant);
          for (const auto& [var, coef] : terms) model.add_coefficient(var, block, row0 + r, col0 + c, f * coef);
        }
    }
}

/// Writes a constant matrix at (row0, col0) with the same conventions as place().
inline void place_constant(LmiModel& model, int block, int row0, int col0, const ComplexMatrix& c) {
  const bool diagonal = row0 == col0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (diagonal && i > j) continue;
      if (c(i, j) != Complex(0.0))
        model.add_constant(block, row0 + static_cast<int>(i), col0 + static_cast<int>(j), c(i, j));
    }
}

}  // namespace secrecy::sdp
