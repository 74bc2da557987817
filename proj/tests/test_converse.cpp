#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"

using namespace secrecy;

namespace {

ConverseBound bound_or_fail(const std::variant<ConverseBound, OutsideConverseRegion>& v) {
  EXPECT_TRUE(std::holds_alternative<ConverseBound>(v));
  return std::get<ConverseBound>(v);
}

WiretapCode det_code(std::vector<std::size_t> words, std::size_t num_words) {
  WiretapCode c;
  c.m = words.size();
  c.n = 1;
  c.encoder = deterministic_encoder(words, num_words);
  return c;
}

}  // namespace

TEST(Region, SpecPoints) {
  EXPECT_EQ(classify_region(0.2, 0.3).label, Region::Converse);
  EXPECT_EQ(classify_region(0.95, 0.4).label, Region::NoGo);
  auto g = classify_region(0.5, 0.4);
  EXPECT_EQ(g.label, Region::Gap);
  EXPECT_DOUBLE_EQ(g.line, 1.3);
  EXPECT_NEAR(g.circle, 0.41, 1e-15);
}

TEST(Region, Corners) {
  EXPECT_EQ(classify_region(0, 0).label, Region::Converse);
  EXPECT_EQ(classify_region(1, 0).label, Region::NoGo);
  EXPECT_EQ(classify_region(0, 1).label, Region::NoGo);
  EXPECT_EQ(classify_region(1, 1).label, Region::NoGo);
  EXPECT_THROW(classify_region(-0.1, 0.5), DomainError);
}

TEST(Region, BoundaryTieBreaking) {
  for (double e : {0.0, 0.2, 0.5, 0.9}) {
    const double d = (1.0 - e) / 2.0;
    EXPECT_EQ(classify_region(e, d).label, Region::Gap) << e;
    EXPECT_EQ(classify_region(e, (1.0 - 1e-9 - e) / 2.0).label, Region::Converse) << e;
    const double on_circle = std::sqrt(1.0 - e * e);
    EXPECT_EQ(classify_region(e, on_circle).label, Region::NoGo) << e;
  }
}

TEST(Property, RegionPartitionsSquare) {
  for (int i = 0; i <= 50; ++i)
    for (int j = 0; j <= 50; ++j) {
      const double e = i / 50.0, d = j / 50.0;
      auto v = classify_region(e, d);
      const bool conv = e + 2 * d < 1.0 - kRegionTieTol;
      const bool nogo = e * e + d * d >= 1.0 - kRegionTieTol;
      EXPECT_FALSE(conv && nogo);
      EXPECT_EQ(v.label == Region::Converse, conv);
      EXPECT_EQ(v.label == Region::NoGo, nogo);
    }
}

TEST(Region, CsvLayout) {
  std::ostringstream os;
  emit_region_csv(os, 2);
  EXPECT_EQ(os.str(),
            "epsilon,delta,region\n0,0,Converse\n0,0.5,Gap\n0,1,NoGo\n0.5,0,Converse\n0.5,0.5,Gap\n0.5,1,NoGo\n"
            "1,0,NoGo\n1,0.5,NoGo\n1,1,NoGo\n");
  std::ostringstream big;
  emit_region_csv(big, 10);
  const std::string text = big.str();
  EXPECT_NE(text.find("\n0.20000000000000001,0.29999999999999999,Converse\n"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 122);
}

TEST(FiniteN, OutsideExactlyWhenLineFails) {
  auto w = bsc_wiretap(0.1, 0.2);
  auto s = fixtures::degraded(w);
  ConverseOptions opt;
  opt.capacity = binary_entropy(0.26) - binary_entropy(0.1);
  auto o = finite_n_converse(w, s, 10, 0.5, 0.3, opt);
  ASSERT_TRUE(std::holds_alternative<OutsideConverseRegion>(o));
  EXPECT_NEAR(std::get<OutsideConverseRegion>(o).line, 1.1, 1e-15);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const double e = i / 10.0, d = j / 10.0;
      auto r = finite_n_converse(w, s, 10, e, d, opt);
      EXPECT_EQ(std::holds_alternative<OutsideConverseRegion>(r), !(e + 2 * d < 1.0 - kRegionTieTol)) << e << "," << d;
    }
}

TEST(FiniteN, NoiselessBitDominatesN) {
  auto w = fixtures::noiseless_bit();
  auto s = fixtures::degraded(w);
  for (std::size_t n : {1u, 10u, 100u}) {
    auto b = bound_or_fail(finite_n_converse(w, s, n, 0.1, 0.2));
    EXPECT_NEAR(b.capacity, 1.0, 1e-6);
    EXPECT_GE(b.value, static_cast<double>(n));
    EXPECT_FALSE(b.mu_common_support);
  }
}

TEST(FiniteN, NormalizedOverheadDecreases) {
  auto w = bsc_wiretap(0.1, 0.2);
  auto s = fixtures::degraded(w);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {100u, 1000u, 10000u}) {
    auto b = bound_or_fail(finite_n_converse(w, s, n, 0.1, 0.1));
    const double gap = (b.value - static_cast<double>(n) * b.capacity) / static_cast<double>(n);
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, prev);
    EXPECT_GE(b.value, b.value_constant_type);
    EXPECT_GE(b.value_shifted, b.value);
    EXPECT_NEAR(b.terms.hashing, 2.0 * std::log2(n + 1.0), 1e-12);
    prev = gap;
  }
}

TEST(FiniteN, ConstantsFollowDefinitions) {
  auto w = bsc_wiretap(0.1, 0.2);
  auto s = fixtures::degraded(w);
  auto b = bound_or_fail(finite_n_converse(w, s, 50, 0.1, 0.2));
  EXPECT_NEAR(b.eta, 0.5 / 6.0, 1e-15);
  EXPECT_NEAR(b.lambda, 0.5 + 5.0 * b.eta, 1e-15);
  EXPECT_NEAR(b.lambda_hat, b.lambda * std::sqrt(2.0 - b.lambda * b.lambda), 1e-15);
  EXPECT_LT(b.lambda_hat, 1.0);
  EXPECT_NEAR(b.terms.chain, 4.0 * std::log2(2.0 / (b.eta * b.eta)), 1e-12);
  EXPECT_NEAR(b.terms.types, 2.0 * std::log2(51.0), 1e-12);
  EXPECT_TRUE(b.mu_common_support);
}

TEST(Property, BoundDominatesBruteForce) {
  SearchConfig cfg;
  cfg.max_m = 2;
  for (const auto& w : {fixtures::noiseless_bit(), fixtures::copy_eve(), bsc_wiretap(0.05, 0.3)}) {
    auto s = fixtures::degraded(w);
    for (auto [e, d] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.2, 0.2}, {0.1, 0.4}}) {
      auto m = brute_force_M(w, 1, e, d, cfg);
      auto b = bound_or_fail(finite_n_converse(w, s, 1, e, d));
      EXPECT_GE(b.value, std::log2(static_cast<double>(m.m_best))) << w.name;
    }
  }
}

TEST(Audit, DeterministicCodeOnDegradedChannel) {
  auto w = bsc_wiretap(0.02, 0.4);
  auto s = fixtures::degraded(w);
  auto rep = audit_privacy_bound_chain(det_code({0, 1}, 2), w, s, 0.05);
  ASSERT_EQ(rep.lines.size(), 4u);
  for (const auto& l : rep.lines) EXPECT_TRUE(l.holds) << l.name << " slack " << l.slack;
  EXPECT_NEAR(rep.lambda, rep.eps + 2 * rep.delta + 0.25, 1e-15);
}

TEST(Audit, TrivialEveSubstitutionIsExact) {
  auto w = fixtures::noiseless_bit();
  auto rep = audit_privacy_bound_chain(det_code({0, 1}, 2), w, fixtures::degraded(w), 0.05);
  EXPECT_NEAR(rep.lines[1].slack, 0.0, 1e-6);
  EXPECT_TRUE(rep.all_hold());
}

TEST(Audit, RandomStochasticEncoders) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 80; seed < 83; ++seed) {
    auto w = fixtures::random_degraded_channel(seed);
    WiretapCode c;
    c.m = 2;
    c.n = 1;
    const double a = 0.6 + 0.4 * u(rng), b = 0.4 * u(rng);
    c.encoder = RealMatrix(2, 2);
    c.encoder << a, 1 - a, b, 1 - b;
    auto s = fixtures::degraded(w);
    auto perf = evaluate_code(c, w);
    if (perf.transmission_error + 2 * perf.privacy_error + 0.5 >= 1.0) {
      EXPECT_THROW(audit_privacy_bound_chain(c, w, s, 0.1), DomainError);
      continue;
    }
    auto rep = audit_privacy_bound_chain(c, w, s, 0.1);
    for (const auto& l : rep.lines) EXPECT_TRUE(l.holds) << "seed " << seed << " " << l.name << " " << l.slack;
  }
}
