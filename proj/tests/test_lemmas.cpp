#include <gtest/gtest.h>

#include <sstream>

#include "secrecy/lemmas.hpp"

using namespace secrecy;

namespace {

DensityOperator random_tripartite(std::uint64_t seed, std::size_t rank) {
  Rng rng(seed);
  return DensityOperator(random_density_matrix(8, rank, rng), {2, 2, 2});
}

ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

}  // namespace

TEST(Lemmas, DataProcessingMinOnRandomState) {
  LemmaParams p;
  p.eps = 0.1;
  auto r = verify_inequality(Rule::DataProcessingMin, random_tripartite(101, 3), p);
  EXPECT_TRUE(r.holds);
  EXPECT_GE(r.slack, -kCheckTol);
  EXPECT_DOUBLE_EQ(r.slack, r.rhs - r.lhs);
}

TEST(Lemmas, DataProcessingMaxOnRandomState) {
  LemmaParams p;
  p.eps = 0.2;
  EXPECT_TRUE(verify_inequality(Rule::DataProcessingMax, random_tripartite(102, 2), p).holds);
}

TEST(Lemmas, MinMaxConversionEqualityOnPureProduct) {
  Rng rng(103);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  auto rho = tensor(DensityOperator(zero), DensityOperator(random_density_matrix(2, 2, rng)));
  auto r = verify_inequality(Rule::MinMaxConversion, rho, LemmaParams{});
  EXPECT_NEAR(r.lhs, 0.0, 1e-6);
  EXPECT_NEAR(r.rhs, 0.0, 1e-6);
  EXPECT_NEAR(r.slack, 0.0, 1e-6);
  EXPECT_TRUE(r.holds);
}

TEST(Lemmas, MinBelowMaxThroughConversion) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto rho = partial_trace(random_tripartite(110 + s, 1 + s), {0, 1});
    EXPECT_TRUE(verify_inequality(Rule::MinMaxConversion, rho, LemmaParams{}).holds);
  }
}

TEST(Lemmas, QuasiConcavityOnPauliOrbit) {
  Rng rng(104);
  ComplexVector psi = haar_pure(4, rng);
  DensityOperator rho(psi * psi.adjoint(), {2, 2});
  LocalOrbit orbit{{0.5, 0.5}, {identity(2), pauli_x()}, {identity(2), pauli_x()}};
  LemmaParams p;
  p.eps = 0.2;
  auto r = verify_inequality(Rule::QuasiConcavity, rho, p, &orbit);
  EXPECT_TRUE(r.holds);
}

TEST(Lemmas, ChainRulesHold) {
  LemmaParams p;
  p.eps = 0.1;
  p.delta = 0.05;
  p.eta = 0.1;
  for (std::uint64_t s = 0; s < 4; ++s) {
    auto rho = random_tripartite(120 + s, 1 + 2 * s);
    EXPECT_TRUE(verify_inequality(Rule::ChainMaxUpper, rho, p).holds);
    EXPECT_TRUE(verify_inequality(Rule::ChainMaxLower, rho, p).holds);
  }
}

TEST(Lemmas, SharpAndRelaxedConversions) {
  auto rho = partial_trace(random_tripartite(130, 4), {0, 1});
  LemmaParams p;
  p.alpha = 0.3;
  p.beta = 0.2;
  EXPECT_TRUE(verify_inequality(Rule::MinMaxConversionSharp, rho, p).holds);
  p.delta = 0.2;
  EXPECT_TRUE(verify_inequality(Rule::MaxMinConversion, rho, p).holds);
}

TEST(Lemmas, AepRules) {
  auto rho = partial_trace(random_tripartite(140, 2), {0, 1});
  LemmaParams p;
  p.eps = 0.3;
  p.n = 2;
  EXPECT_TRUE(verify_inequality(Rule::AepMin, rho, p).holds);
  EXPECT_TRUE(verify_inequality(Rule::AepMax, rho, p).holds);
}

TEST(Lemmas, DomainViolations) {
  auto rho = random_tripartite(150, 2);
  LemmaParams p;
  p.eps = 0.5;
  p.delta = 0.3;
  p.eta = 0.1;
  EXPECT_THROW(verify_inequality(Rule::ChainMaxUpper, rho, p), DomainError);
  p.eta = 0.0;
  p.delta = 0.1;
  EXPECT_THROW(verify_inequality(Rule::ChainMaxLower, rho, p), DomainError);
  p.eps = 0.6;
  p.delta = 0.5;
  EXPECT_THROW(verify_inequality(Rule::MinMaxConversion, rho, p), DomainError);
  p.alpha = 1.0;
  p.beta = 0.6;
  EXPECT_THROW(verify_inequality(Rule::MinMaxConversionSharp, rho, p), DomainError);
  p.delta = 0.0;
  EXPECT_THROW(verify_inequality(Rule::MaxMinConversion, rho, p), DomainError);
  EXPECT_THROW(verify_inequality(Rule::QuasiConcavity, rho, p), DomainError);
  EXPECT_THROW(verify_inequality(Rule::DataProcessingMin, partial_trace(rho, {0, 1}), p), DimensionError);
  DensityOperator big(ComplexMatrix::Identity(8, 8) / 8.0, {4, 2});
  EXPECT_THROW(verify_inequality(Rule::MinMaxConversion, big, LemmaParams{}), DimensionError);
}

TEST(Lemmas, RuleNamesRoundTrip) {
  for (Rule r : all_rules()) EXPECT_EQ(parse_rule(to_string(r)), r);
  EXPECT_THROW(parse_rule("Nope"), ParseError);
}

TEST(Harness, SmallRunHoldsEverywhere) {
  HarnessConfig cfg;
  cfg.trials = 12;
  cfg.seed = 7;
  auto rows = run_harness(cfg);
  EXPECT_EQ(rows.size(), cfg.trials * cfg.rules.size());
  for (const auto& r : rows) EXPECT_TRUE(r.report.holds) << to_string(r.report.rule) << " seed " << r.seed;
}

TEST(Harness, CsvLayoutAndDeterminism) {
  HarnessConfig cfg;
  cfg.trials = 2;
  cfg.rules = {Rule::DataProcessingMin, Rule::MinMaxConversion};
  std::ostringstream a, b;
  write_harness_csv(a, run_harness(cfg));
  write_harness_csv(b, run_harness(cfg));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "rule,seed,params,lhs,rhs,slack,holds");
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    ++count;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(count, 4);
}
