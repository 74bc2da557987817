#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "secrecy/linalg.hpp"
#include "secrecy/sdp_model.hpp"

using namespace secrecy;
using namespace secrecy::sdp;

namespace {

/// min tr X s.t. X >= A, X >= 0 written as X = A + W: variables X, W >= 0
/// with X - W = A (upper-triangle entries).
SdpProblem dominating_trace(const RealMatrix& a) {
  const int n = static_cast<int>(a.rows());
  SdpProblem p;
  p.block_sizes = {n, n};
  p.objective = {RealMatrix::Identity(n, n), RealMatrix::Zero(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double w = i == j ? 1.0 : 0.5;
      p.constraints.push_back({{0, i, j, w}, {1, i, j, -w}});
    }
  p.rhs.resize(static_cast<Eigen::Index>(p.constraints.size()));
  int r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) p.rhs(r++) = a(i, j);
  return p;
}

double positive_eigen_sum(const RealMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
  return es.eigenvalues().cwiseMax(0.0).sum();
}

/// Brute-force LP: min c^T x s.t. A x = b, x >= 0 by enumerating bases.
double lp_vertex_oracle(const RealMatrix& a, const RealVector& b, const RealVector& c) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  std::vector<int> sel(n, 0);
  std::fill(sel.begin(), sel.begin() + m, 1);
  std::sort(sel.begin(), sel.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (sel[j]) cols.push_back(j);
    RealMatrix basis(m, m);
    for (int k = 0; k < m; ++k) basis.col(k) = a.col(cols[k]);
    Eigen::FullPivLU<RealMatrix> lu(basis);
    if (lu.rank() < m) continue;
    RealVector xb = lu.solve(b);
    if (xb.minCoeff() < -1e-12) continue;
    double val = 0.0;
    for (int k = 0; k < m; ++k) val += c(cols[k]) * xb(k);
    best = std::min(best, val);
  } while (std::next_permutation(sel.begin(), sel.end()));
  return best;
}

}  // namespace

TEST(Sdp, TwoByTwoEigenvalueCondition) {
  // maximize -t s.t. [[t,1],[1,t]] >= 0
  LmiModel m;
  int blk = m.add_block(2, false);
  int t = m.add_variable(-1.0);
  m.add_coefficient(t, blk, 0, 0, 1.0);
  m.add_coefficient(t, blk, 1, 1, 1.0);
  m.add_constant(blk, 0, 1, 1.0);
  auto r = m.solve();
  ASSERT_EQ(r.status, SdpStatus::Optimal);
  EXPECT_NEAR(r.y(t), 1.0, 1e-7);
}

TEST(Sdp, DominatingTraceDiagonal) {
  RealMatrix a = RealMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = -1.0;
  auto sol = solve(dominating_trace(a));
  ASSERT_EQ(sol.status, SdpStatus::Optimal);
  EXPECT_NEAR(sol.primal_value, 2.0, 1e-7);
}

TEST(Sdp, DominatingTraceRandomFamily) {
  Rng rng(21);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 4;
    RealMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = n01(rng);
    RealMatrix a = 0.5 * (g + g.transpose());
    auto p = dominating_trace(a);
    auto sol = solve(p);
    ASSERT_EQ(sol.status, SdpStatus::Optimal);
    EXPECT_NEAR(sol.primal_value, positive_eigen_sum(a), 1e-7);
    auto v = verify(p, sol);
    EXPECT_LE(v.primal_residual, 1e-8);
    EXPECT_LE(v.dual_residual, 1e-8);
    EXPECT_GE(v.min_eig_x, -1e-9);
    EXPECT_GE(v.min_eig_s, -1e-9);
  }
}

TEST(Sdp, DiagonalRestrictionMatchesLp) {
  Rng rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int m = 2, n = 5;
    RealMatrix a(m, n);
    RealVector c(n), x0(n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = u(rng) - 0.3;
    for (int j = 0; j < n; ++j) {
      c(j) = u(rng) + 0.1;
      x0(j) = u(rng);
    }
    RealVector b = a * x0;
    // one 1x1 block per LP variable
    SdpProblem p;
    for (int j = 0; j < n; ++j) {
      p.block_sizes.push_back(1);
      p.objective.push_back(RealMatrix::Constant(1, 1, c(j)));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<Entry> row;
      for (int j = 0; j < n; ++j) row.push_back({j, 0, 0, a(i, j)});
      p.constraints.push_back(row);
    }
    p.rhs = b;
    auto sol = solve(p);
    ASSERT_EQ(sol.status, SdpStatus::Optimal);
    EXPECT_NEAR(sol.primal_value, lp_vertex_oracle(a, b, c), 1e-7);
  }
}

TEST(Sdp, FeasibleTraceOne) {
  SdpProblem p;
  p.block_sizes = {3};
  p.objective = {RealMatrix::Zero(3, 3)};
  p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {0, 2, 2, 1.0}}};
  p.rhs = RealVector::Ones(1);
  auto r = check_feasibility(p);
  ASSERT_TRUE(std::holds_alternative<Feasible>(r));
  const auto& w = std::get<Feasible>(r).witness[0];
  EXPECT_NEAR(w.trace(), 1.0, 1e-8);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<RealMatrix>(w).eigenvalues().minCoeff(), -1e-9);
}

TEST(Sdp, InfeasibleTraceMonotonicity) {
  // X = I + W, W >= 0, tr X = 0.5  =>  tr W = -1.5
  SdpProblem p;
  p.block_sizes = {2};
  p.objective = {RealMatrix::Zero(2, 2)};
  p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}};
  p.rhs = RealVector::Constant(1, -1.5);
  auto r = check_feasibility(p);
  ASSERT_TRUE(std::holds_alternative<Infeasible>(r));
  const RealVector& y = std::get<Infeasible>(r).certificate;
  EXPECT_NEAR(p.rhs.dot(y), 1.0, 1e-8);
  // -A^T y must be PSD
  EXPECT_LE(y(0), 1e-8);
}

TEST(Sdp, InconsistentDuplicateConstraintsCaughtByPresolve) {
  SdpProblem p;
  p.block_sizes = {2};
  p.objective = {RealMatrix::Zero(2, 2)};
  p.constraints = {{{0, 0, 0, 1.0}}, {{0, 0, 0, 2.0}}};
  p.rhs = RealVector(2);
  p.rhs << 1.0, 1.0;
  auto r = check_feasibility(p);
  ASSERT_TRUE(std::holds_alternative<Infeasible>(r));
  EXPECT_NEAR(p.rhs.dot(std::get<Infeasible>(r).certificate), 1.0, 1e-10);
}

TEST(Sdp, RandomFeasibleFromWitness) {
  Rng rng(23);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 10; ++t) {
    const int n = 4, m = 5;
    RealMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = n01(rng);
    RealMatrix w = g * g.transpose();
    SdpProblem p;
    p.block_sizes = {n};
    p.objective = {RealMatrix::Zero(n, n)};
    p.rhs.resize(m);
    for (int k = 0; k < m; ++k) {
      std::vector<Entry> row;
      double b = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const double v = n01(rng);
          row.push_back({0, i, j, v});
          b += (i == j ? 1.0 : 2.0) * v * w(i, j);
        }
      p.constraints.push_back(row);
      p.rhs(k) = b;
    }
    auto r = check_feasibility(p);
    ASSERT_TRUE(std::holds_alternative<Feasible>(r));
  }
}

TEST(Sdp, DualInfeasibleUnbounded) {
  // min -x11 s.t. x22 = 1
  SdpProblem p;
  p.block_sizes = {2};
  RealMatrix c = RealMatrix::Zero(2, 2);
  c(0, 0) = -1.0;
  p.objective = {c};
  p.constraints = {{{0, 1, 1, 1.0}}};
  p.rhs = RealVector::Ones(1);
  auto sol = solve(p);
  EXPECT_EQ(sol.status, SdpStatus::DualInfeasible);
}

TEST(Sdp, ComplexLmiMinimumEigenvalue) {
  // maximize t s.t. H - t I >= 0  =>  t = lambda_min(H)
  Rng rng(24);
  for (int k = 0; k < 5; ++k) {
    ComplexMatrix h = random_hermitian(3, rng);
    LmiModel m;
    int blk = m.add_block(3, true);
    int t = m.add_variable(1.0);
    m.add_constant_matrix(blk, 0, h);
    for (int i = 0; i < 3; ++i) m.add_coefficient(t, blk, i, i, -1.0);
    auto r = m.solve();
    ASSERT_EQ(r.status, SdpStatus::Optimal);
    EXPECT_NEAR(r.value, eigenvalues(h).minCoeff(), 1e-7);
    // multiplier is the projector onto the minimal eigenvector (trace 1)
    EXPECT_NEAR(r.multipliers[0].trace().real(), 1.0, 1e-6);
  }
}

TEST(Sdp, ComplexPrimalMaxOverlap) {
  // maximize Re tr(H X) s.t. tr X = 1, X >= 0  =>  lambda_max(H)
  Rng rng(25);
  ComplexMatrix h = random_hermitian(3, rng);
  PrimalModel m;
  int blk = m.add_block(3, true);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m.add_objective({blk, i, j, -h(i, j)});
  m.add_constraint({{blk, 0, 0, 1.0}, {blk, 1, 1, 1.0}, {blk, 2, 2, 1.0}}, 1.0);
  auto r = m.solve();
  ASSERT_EQ(r.status, SdpStatus::Optimal);
  EXPECT_NEAR(-r.value, eigenvalues(h).maxCoeff(), 1e-7);
  EXPECT_NEAR((h * r.blocks[0]).trace().real(), eigenvalues(h).maxCoeff(), 1e-6);
}

TEST(Sdp, WeakDualityAndDeterminism) {
  Rng rng(26);
  std::normal_distribution<double> n01;
  RealMatrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = n01(rng);
  auto p = dominating_trace(0.5 * (g + g.transpose()));
  auto a = solve(p), b = solve(p);
  EXPECT_LE(a.dual_value, a.primal_value + 1e-9);
  EXPECT_EQ(a.primal_value, b.primal_value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Sdp, RejectsMalformed) {
  SdpProblem p;
  p.block_sizes = {2};
  p.objective = {RealMatrix::Zero(3, 3)};
  EXPECT_THROW(solve(p), DimensionError);
  p.objective = {RealMatrix::Zero(2, 2)};
  p.constraints = {{{0, 1, 0, 1.0}}};
  p.rhs = RealVector::Ones(1);
  EXPECT_THROW(solve(p), DimensionError);
}
