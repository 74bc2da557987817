#pragma once

// Interior-point solver for small dense semidefinite programs.
//
// Standard primal form over a block-diagonal real symmetric variable X:
//
//   minimize   <C, X>
//   subject to <A_i, X> = b_i,  i = 1..m,   X >= 0
//
// with dual
//
//   maximize   b^T y
//   subject to C - sum_i y_i A_i = S >= 0.
//
// The iteration works on the homogeneous self-dual embedding
// (X, y, S, tau, kappa), so infeasible and unbounded instances terminate with
// certificates instead of diverging. Search directions use the HKM scaling
// with a Mehrotra predictor-corrector step. Complex Hermitian models are
// embedded as real symmetric blocks of twice the dimension by sdp_model.hpp.

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "secrecy/core.hpp"

namespace secrecy::sdp {

/// One nonzero of a symmetric constraint matrix. Only row <= col is stored;
/// the entry stands for both (row, col) and (col, row).
struct Entry {
  int block;
  int row;
  int col;
  double value;
};

struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<RealMatrix> objective;           // C, one symmetric matrix per block
  std::vector<std::vector<Entry>> constraints;  // A_i
  RealVector rhs;                               // b

  std::size_t num_constraints() const { return constraints.size(); }

  /// Rejects malformed data before any solve.
  void validate() const {
    if (objective.size() != block_sizes.size()) throw DimensionError("objective block count mismatch");
    for (std::size_t k = 0; k < block_sizes.size(); ++k) {
      if (block_sizes[k] <= 0) throw DimensionError("block sizes must be positive");
      if (objective[k].rows() != block_sizes[k] || objective[k].cols() != block_sizes[k])
        throw DimensionError("objective block " + std::to_string(k) + " has wrong shape");
      if ((objective[k] - objective[k].transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("objective block " + std::to_string(k) + " is not symmetric");
      if (!objective[k].allFinite()) throw ValidationError("objective has non-finite entries");
    }
    if (static_cast<std::size_t>(rhs.size()) != constraints.size())
      throw DimensionError("right-hand side length differs from constraint count");
    if (!rhs.allFinite()) throw ValidationError("right-hand side has non-finite entries");
    for (const auto& con : constraints)
      for (const auto& e : con) {
        if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size()))
          throw DimensionError("constraint entry refers to a missing block");
        const int n = block_sizes[e.block];
        if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n || e.row > e.col)
          throw DimensionError("constraint entry outside the upper triangle of its block");
        if (!std::isfinite(e.value)) throw ValidationError("constraint has non-finite entries");
      }
  }
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalFailure };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SdpStatus::DualInfeasible: return "DualInfeasible";
    case SdpStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

struct Tolerances {
  double gap = 1e-8;            // |primal - dual| <= gap * max(1, |primal|)
  double feasibility = 1e-8;    // relative primal and dual residuals
  double infeasibility = 1e-8;  // certificate residual
  int max_iterations = 200;
  double near_optimal = 100.0;  // accepted slack factor when the iteration breaks down
  bool presolve = true;         // drop linearly dependent constraints
};

/// Result of a solve. For PrimalInfeasible, `y` holds a Farkas certificate
/// with b^T y = 1 and C-free dual slack -A^T y >= 0 (up to `infeasibility`).
/// For DualInfeasible, `x` holds a ray with <C, X> = -1 and A(X) = 0.
struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  std::vector<RealMatrix> x;
  RealVector y;
  std::vector<RealMatrix> s;
  double gap = 0.0;  // |primal - dual|
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

namespace detail {

using Blocks = std::vector<RealMatrix>;

inline double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

inline double frob(const Blocks& a) { return std::sqrt(inner(a, a)); }

inline void axpy(Blocks& y, double alpha, const Blocks& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

inline void symmetrize(Blocks& a) {
  for (auto& m : a) m = 0.5 * (m + m.transpose()).eval();
}

/// Full (both triangles) sparse listing of the constraints, grouped per block.
struct BlockEntries {
  std::vector<int> con, p, q;
  std::vector<double> a;
};

/// Linear-operator view of the constraint data.
class Operator {
 public:
  explicit Operator(const SdpProblem& prob) : prob_(prob), per_block_(prob.block_sizes.size()) {
    for (std::size_t i = 0; i < prob.constraints.size(); ++i)
      for (const auto& e : prob.constraints[i]) {
        auto& be = per_block_[e.block];
        be.con.push_back(static_cast<int>(i));
        be.p.push_back(e.row);
        be.q.push_back(e.col);
        be.a.push_back(e.value);
        if (e.row != e.col) {
          be.con.push_back(static_cast<int>(i));
          be.p.push_back(e.col);
          be.q.push_back(e.row);
          be.a.push_back(e.value);
        }
      }
    // Constraint order within each block is already ascending because
    // constraints are visited in order.
  }

  RealVector apply(const Blocks& x) const {
    RealVector out = RealVector::Zero(static_cast<Eigen::Index>(prob_.constraints.size()));
    for (std::size_t k = 0; k < per_block_.size(); ++k) {
      const auto& be = per_block_[k];
      for (std::size_t t = 0; t < be.a.size(); ++t) out(be.con[t]) += be.a[t] * x[k](be.p[t], be.q[t]);
    }
    return out;
  }

  Blocks adjoint(const RealVector& y) const {
    Blocks out = zeros();
    for (std::size_t k = 0; k < per_block_.size(); ++k) {
      const auto& be = per_block_[k];
      for (std::size_t t = 0; t < be.a.size(); ++t) out[k](be.p[t], be.q[t]) += be.a[t] * y(be.con[t]);
    }
    return out;
  }

  Blocks zeros() const {
    Blocks out;
    for (int n : prob_.block_sizes) out.push_back(RealMatrix::Zero(n, n));
    return out;
  }

  /// Schur complement M_ij = sum_k tr(A_i X A_j Z) with Z = S^{-1}.
  RealMatrix schur(const Blocks& x, const Blocks& z) const {
    const auto m = static_cast<Eigen::Index>(prob_.constraints.size());
    RealMatrix mat = RealMatrix::Zero(m, m);
    for (std::size_t k = 0; k < per_block_.size(); ++k) {
      const auto& be = per_block_[k];
      const std::size_t ne = be.a.size();
      if (ne == 0) continue;
      // first[t]: index of the first entry belonging to constraint be.con[t]
      std::vector<std::size_t> first(ne);
      for (std::size_t t = 0; t < ne; ++t) first[t] = (t > 0 && be.con[t] == be.con[t - 1]) ? first[t - 1] : t;
      const RealMatrix& xk = x[k];
      const RealMatrix& zk = z[k];
      for (std::size_t e = 0; e < ne; ++e) {
        const double* xcol = xk.col(be.q[e]).data();  // X(q_e, r) = X(r, q_e)
        const double* zcol = zk.col(be.p[e]).data();  // Z(s, p_e)
        double* mcol = mat.col(be.con[e]).data();
        const double ae = be.a[e];
        for (std::size_t f = first[e]; f < ne; ++f) mcol[be.con[f]] += ae * be.a[f] * xcol[be.p[f]] * zcol[be.q[f]];
      }
    }
    // only entries (j, i) with j >= i were accumulated
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j) mat(i, j) = mat(j, i);
    return mat;
  }

  /// Gram matrix <A_i, A_j>.
  RealMatrix gram() const {
    const auto m = static_cast<Eigen::Index>(prob_.constraints.size());
    RealMatrix g = RealMatrix::Zero(m, m);
    for (std::size_t k = 0; k < per_block_.size(); ++k) {
      const auto& be = per_block_[k];
      const int n = prob_.block_sizes[k];
      std::vector<std::vector<std::pair<int, double>>> at(static_cast<std::size_t>(n) * n);
      for (std::size_t t = 0; t < be.a.size(); ++t)
        at[static_cast<std::size_t>(be.p[t]) * n + be.q[t]].push_back({be.con[t], be.a[t]});
      for (const auto& list : at)
        for (const auto& [i, ai] : list)
          for (const auto& [j, aj] : list) g(i, j) += ai * aj;
    }
    return g;
  }

 private:
  const SdpProblem& prob_;
  std::vector<BlockEntries> per_block_;
};

/// Largest alpha in [0, cap] with X + alpha dX >= 0, given chol(X) = L L^T.
inline double max_step(const std::vector<Eigen::LLT<RealMatrix>>& chol, const Blocks& dx, double cap) {
  double alpha = cap;
  for (std::size_t k = 0; k < dx.size(); ++k) {
    const auto& llt = chol[k];
    RealMatrix w = llt.matrixL().solve(dx[k]);
    w = llt.matrixL().solve(w.transpose().eval());
    w = 0.5 * (w + w.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(w, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

inline double max_step_scalar(double v, double dv, double cap) { return dv < 0.0 ? std::min(cap, -v / dv) : cap; }

/// Greedy pivoted Cholesky on a PSD Gram matrix; returns the pivots kept.
inline std::vector<Eigen::Index> independent_rows(const RealMatrix& g, double rel_tol) {
  const Eigen::Index m = g.rows();
  RealMatrix l = RealMatrix::Zero(m, m);
  RealVector diag = g.diagonal();
  const double scale = diag.size() ? std::max(diag.maxCoeff(), 1e-300) : 1.0;
  std::vector<Eigen::Index> piv;
  std::vector<bool> used(m, false);
  for (Eigen::Index step = 0; step < m; ++step) {
    Eigen::Index best = -1;
    double bv = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (!used[i] && diag(i) > bv) {
        bv = diag(i);
        best = i;
      }
    if (best < 0 || bv <= rel_tol * scale) break;
    used[best] = true;
    const Eigen::Index c = static_cast<Eigen::Index>(piv.size());
    const double root = std::sqrt(bv);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (used[i] && i != best) continue;
      double v = g(i, best);
      for (Eigen::Index t = 0; t < c; ++t) v -= l(i, t) * l(best, t);
      l(i, c) = v / root;
    }
    for (Eigen::Index i = 0; i < m; ++i)
      if (!used[i]) diag(i) -= l(i, c) * l(i, c);
    piv.push_back(best);
  }
  std::sort(piv.begin(), piv.end());
  return piv;
}

inline SdpSolution solve_core(const SdpProblem& prob, const Tolerances& tol) {
  const Operator op(prob);
  const auto m = static_cast<Eigen::Index>(prob.num_constraints());
  const Blocks& c = prob.objective;
  const RealVector& b = prob.rhs;
  int total_dim = 0;
  for (int n : prob.block_sizes) total_dim += n;
  const double nb = b.norm(), nc = frob(c);
  // Used to pull primal steps back onto the affine constraints when the
  // Newton system is badly conditioned.
  const Eigen::LLT<RealMatrix> chol_g(op.gram());

  Blocks x = op.zeros(), s = op.zeros();
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k].setIdentity();
    s[k].setIdentity();
  }
  RealVector y = RealVector::Zero(m);
  double tau = 1.0, kappa = 1.0;

  SdpSolution sol;
  const int nblocks = static_cast<int>(x.size());
  double prev_mu = std::numeric_limits<double>::infinity();
  int stalls = 0;

  for (int it = 0; it <= tol.max_iterations; ++it) {
    sol.iterations = it;
    // Residuals of the homogeneous model.
    RealVector rp = b * tau - op.apply(x);
    Blocks aty = op.adjoint(y);
    Blocks rd = c;
    for (int k = 0; k < nblocks; ++k) rd[k] = c[k] * tau - aty[k] - s[k];
    const double cx = inner(c, x), by = b.dot(y);
    const double rg = kappa - by + cx;

    const double pobj = cx / tau, dobj = by / tau;
    const double pres = rp.norm() / tau / (1.0 + nb);
    const double dres = frob(rd) / tau / (1.0 + nc);
    const double gap = std::abs(pobj - dobj);

    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = gap;
    sol.primal_residual = pres;
    sol.dual_residual = dres;

    if (pres <= tol.feasibility && dres <= tol.feasibility && gap <= tol.gap * std::max(1.0, std::abs(pobj))) {
      sol.status = SdpStatus::Optimal;
      sol.x = x;
      sol.s = s;
      for (auto& blk : sol.x) blk /= tau;
      for (auto& blk : sol.s) blk /= tau;
      sol.y = y / tau;
      return sol;
    }
    // Infeasibility certificates.
    if (by > 0.0) {
      Blocks r = aty;
      axpy(r, 1.0, s);
      if (frob(r) / by <= tol.infeasibility && tau < kappa) {
        sol.status = SdpStatus::PrimalInfeasible;
        sol.y = y / by;
        sol.s = s;
        for (auto& blk : sol.s) blk /= by;
        return sol;
      }
    }
    if (cx < 0.0) {
      if (op.apply(x).norm() / (-cx) <= tol.infeasibility && tau < kappa) {
        sol.status = SdpStatus::DualInfeasible;
        sol.x = x;
        for (auto& blk : sol.x) blk /= -cx;
        return sol;
      }
    }
    if (it == tol.max_iterations) break;

    const double mu = (inner(x, s) + tau * kappa) / (total_dim + 1);
    if (!(mu > 0.0) || !std::isfinite(mu)) break;
    if (mu > 0.999 * prev_mu) {
      if (++stalls > 8) break;
    } else {
      stalls = 0;
    }
    prev_mu = mu;

    // Factorizations.
    Blocks z(nblocks);
    std::vector<Eigen::LLT<RealMatrix>> chol_x(nblocks), chol_s(nblocks);
    bool ok = true;
    for (int k = 0; k < nblocks; ++k) {
      chol_x[k].compute(x[k]);
      chol_s[k].compute(s[k]);
      if (chol_x[k].info() != Eigen::Success || chol_s[k].info() != Eigen::Success) ok = false;
      z[k] = chol_s[k].solve(RealMatrix::Identity(x[k].rows(), x[k].cols()));
      z[k] = 0.5 * (z[k] + z[k].transpose()).eval();
    }
    if (!ok) break;
    RealMatrix schur = op.schur(x, z);
    const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    Eigen::LLT<RealMatrix> chol_m(schur);
    if (chol_m.info() != Eigen::Success) {
      schur.diagonal().array() += reg;
      chol_m.compute(schur);
      if (chol_m.info() != Eigen::Success) break;
    }

    // L(V) = sym(X V Z)
    auto lop = [&](const Blocks& v) {
      Blocks out(nblocks);
      for (int k = 0; k < nblocks; ++k) {
        RealMatrix t = x[k] * v[k] * z[k];
        out[k] = 0.5 * (t + t.transpose());
      }
      return out;
    };
    const Blocks lc = lop(c);
    const RealVector u = op.apply(lc);
    const double gcc = inner(c, lc);
    const Blocks lrd = lop(rd);
    const RealVector alrd = op.apply(lrd);
    const double clrd = inner(c, lrd);
    // Solves A(L(A^T v)) = rhs with the Schur factor as preconditioner, so
    // the computed step stays consistent with the operators as evaluated.
    auto msolve = [&](const RealVector& rhs) {
      RealVector sol = chol_m.solve(rhs);
      for (int k = 0; k < 2; ++k) sol += chol_m.solve(rhs - op.apply(lop(op.adjoint(sol))));
      return sol;
    };
    const RealVector q = msolve(u + b);

    struct Direction {
      Blocks dx, ds;
      RealVector dy;
      double dtau, dkappa;
    };
    auto solve_direction = [&](const Blocks& rc, double rt, double eta) {
      Direction d;
      const RealVector r1 = eta * rp - op.apply(rc) + eta * alrd;
      const double r2 = eta * rg + inner(c, rc) - eta * clrd + rt / tau;
      const RealVector pvec = msolve(r1);
      const double denom = (b - u).dot(q) + gcc + kappa / tau;
      d.dtau = (r2 - (b - u).dot(pvec)) / denom;
      d.dy = pvec + d.dtau * q;
      d.dkappa = (rt - kappa * d.dtau) / tau;
      Blocks atdy = op.adjoint(d.dy);
      d.ds = rd;
      for (int k = 0; k < nblocks; ++k) d.ds[k] = eta * rd[k] - atdy[k] + d.dtau * c[k];
      Blocks lds = lop(d.ds);
      d.dx = rc;
      for (int k = 0; k < nblocks; ++k) d.dx[k] = rc[k] - lds[k];
      symmetrize(d.dx);
      symmetrize(d.ds);
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double a = max_step(chol_x, d.dx, 1e6);
      a = std::min(a, max_step(chol_s, d.ds, 1e6));
      a = max_step_scalar(tau, d.dtau, a);
      a = max_step_scalar(kappa, d.dkappa, a);
      return a;
    };

    // Predictor.
    Blocks rc_aff = x;
    for (auto& blk : rc_aff) blk = -blk;
    Direction aff = solve_direction(rc_aff, -tau * kappa, 1.0);
    const double a_aff = std::min(1.0, step_length(aff));
    Blocks xa = x, sa = s;
    axpy(xa, a_aff, aff.dx);
    axpy(sa, a_aff, aff.ds);
    const double mu_aff =
        (inner(xa, sa) + (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) / (total_dim + 1);
    double gamma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    gamma = std::clamp(gamma, 0.0, 1.0);

    // Corrector. Near the solution the second-order term can cost more
    // accuracy than it gains; the plain centered step is used whenever the
    // corrected step no longer reproduces the residual it is meant to reduce.
    auto corrector = [&](bool second_order) {
      Blocks rc(nblocks);
      for (int k = 0; k < nblocks; ++k) {
        rc[k] = gamma * mu * z[k] - x[k];
        if (second_order) {
          RealMatrix t = aff.dx[k] * aff.ds[k] * z[k];
          rc[k] -= 0.5 * (t + t.transpose());
        }
      }
      double rt = gamma * mu - tau * kappa;
      if (second_order) rt -= aff.dtau * aff.dkappa;
      return solve_direction(rc, rt, 1.0 - gamma);
    };
    auto inconsistency = [&](const Direction& d) {
      return (op.apply(d.dx) - b * d.dtau - (1.0 - gamma) * rp).norm();
    };
    Direction dir = corrector(true);
    const double allowed = std::max(0.1 * (1.0 - gamma) * rp.norm(), 0.1 * tol.feasibility * tau * (1.0 + nb));
    if (inconsistency(dir) > allowed) {
      Direction plain = corrector(false);
      if (inconsistency(plain) < inconsistency(dir)) dir = std::move(plain);
    }
    if (chol_g.info() == Eigen::Success) {
      const RealVector e = (1.0 - gamma) * rp + b * dir.dtau - op.apply(dir.dx);
      axpy(dir.dx, 1.0, op.adjoint(chol_g.solve(e)));
    }
    double alpha = step_length(dir);
    alpha = std::min(1.0, 0.98 * alpha);
    if (alpha < 1e-12) break;

    axpy(x, alpha, dir.dx);
    axpy(s, alpha, dir.ds);
    symmetrize(x);
    symmetrize(s);
    y += alpha * dir.dy;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }
  // Breakdown close to the optimum: keep the last iterate when it meets the
  // tolerances up to the near_optimal factor.
  const double relax = tol.near_optimal;
  const bool near = sol.primal_residual <= relax * tol.feasibility && sol.dual_residual <= relax * tol.feasibility &&
                    sol.gap <= relax * tol.gap * std::max(1.0, std::abs(sol.primal_value)) && tau > kappa;
  sol.status = near ? SdpStatus::Optimal : SdpStatus::NumericalFailure;
  sol.x = x;
  sol.s = s;
  for (auto& blk : sol.x) blk /= tau;
  for (auto& blk : sol.s) blk /= tau;
  sol.y = y / tau;
  return sol;
}

}  // namespace detail

/// Solves the primal-dual pair. Linearly dependent constraints are removed
/// first when `tol.presolve` is set; an inconsistent dependency is reported
/// as PrimalInfeasible with the corresponding certificate.
inline SdpSolution solve(const SdpProblem& problem, const Tolerances& tol = {}) {
  problem.validate();
  const Eigen::Index m = static_cast<Eigen::Index>(problem.num_constraints());
  if (!tol.presolve || m == 0) return detail::solve_core(problem, tol);

  detail::Operator op(problem);
  const RealMatrix g = op.gram();
  const auto keep = detail::independent_rows(g, 1e-12);
  if (static_cast<Eigen::Index>(keep.size()) == m) return detail::solve_core(problem, tol);

  // Express every dropped constraint through the kept ones and check b.
  RealMatrix gkk(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) gkk(i, j) = g(keep[i], keep[j]);
  Eigen::LDLT<RealMatrix> ldlt(gkk);
  RealVector bk(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) bk(i) = problem.rhs(keep[i]);
  const double bscale = 1.0 + problem.rhs.cwiseAbs().maxCoeff();
  for (Eigen::Index r = 0; r < m; ++r) {
    if (std::binary_search(keep.begin(), keep.end(), r)) continue;
    RealVector gk(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) gk(i) = g(keep[i], r);
    const RealVector coef = keep.empty() ? RealVector() : RealVector(ldlt.solve(gk));
    const double implied = keep.empty() ? 0.0 : coef.dot(bk);
    const double mismatch = problem.rhs(r) - implied;
    if (std::abs(mismatch) > 1e-9 * bscale) {
      SdpSolution sol;
      sol.status = SdpStatus::PrimalInfeasible;
      sol.y = RealVector::Zero(m);
      sol.y(r) = 1.0;
      for (std::size_t i = 0; i < keep.size(); ++i) sol.y(keep[i]) = -coef(i);
      sol.y /= mismatch;
      sol.s = op.adjoint(sol.y);
      for (auto& blk : sol.s) blk = -blk;
      return sol;
    }
  }

  SdpProblem reduced;
  reduced.block_sizes = problem.block_sizes;
  reduced.objective = problem.objective;
  reduced.rhs = bk;
  for (auto r : keep) reduced.constraints.push_back(problem.constraints[r]);
  SdpSolution sol = detail::solve_core(reduced, tol);
  RealVector y = RealVector::Zero(m);
  if (sol.y.size() == static_cast<Eigen::Index>(keep.size()))
    for (std::size_t i = 0; i < keep.size(); ++i) y(keep[i]) = sol.y(i);
  sol.y = y;
  return sol;
}

/// Independent re-verification of a reported solution.
struct Verification {
  double primal_residual;  // ||A(X) - b|| / (1 + ||b||)
  double dual_residual;    // ||C - A^T y - S|| / (1 + ||C||)
  double min_eig_x;
  double min_eig_s;
  double gap;  // |<C,X> - b^T y|
};

inline Verification verify(const SdpProblem& prob, const SdpSolution& sol) {
  detail::Operator op(prob);
  Verification v{};
  v.primal_residual = (op.apply(sol.x) - prob.rhs).norm() / (1.0 + prob.rhs.norm());
  auto aty = op.adjoint(sol.y);
  double r2 = 0.0, c2 = 0.0;
  v.min_eig_x = v.min_eig_s = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < prob.block_sizes.size(); ++k) {
    r2 += (prob.objective[k] - aty[k] - sol.s[k]).squaredNorm();
    c2 += prob.objective[k].squaredNorm();
    Eigen::SelfAdjointEigenSolver<RealMatrix> ex(sol.x[k], Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sol.s[k], Eigen::EigenvaluesOnly);
    v.min_eig_x = std::min(v.min_eig_x, ex.eigenvalues().minCoeff());
    v.min_eig_s = std::min(v.min_eig_s, es.eigenvalues().minCoeff());
  }
  v.dual_residual = std::sqrt(r2) / (1.0 + std::sqrt(c2));
  v.gap = std::abs(detail::inner(prob.objective, sol.x) - prob.rhs.dot(sol.y));
  return v;
}

/// Outcome of a pure feasibility question (zero objective).
struct Feasible {
  std::vector<RealMatrix> witness;
};
struct Infeasible {
  RealVector certificate;  // y with b^T y = 1 and -A^T y >= 0
};

/// Decides whether {X >= 0 : A(X) = b} is nonempty. Throws SolverError on
/// numerical failure.
inline std::variant<Feasible, Infeasible> check_feasibility(const SdpProblem& problem, const Tolerances& tol = {}) {
  for (const auto& c : problem.objective)
    if (c.cwiseAbs().maxCoeff() != 0.0) throw DomainError("feasibility problems must have a zero objective");
  SdpSolution sol = solve(problem, tol);
  switch (sol.status) {
    case SdpStatus::Optimal: return Feasible{sol.x};
    case SdpStatus::PrimalInfeasible: return Infeasible{sol.y};
    default: throw SolverError(std::string("feasibility check failed: ") + to_string(sol.status));
  }
}

}  // namespace secrecy::sdp
