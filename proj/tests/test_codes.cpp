#include <gtest/gtest.h>

#include <cstdlib>

#include "fixtures.hpp"

using namespace secrecy;
using fixtures::ket_bra;

namespace {

WiretapCode make_code(std::size_t m, std::size_t n, RealMatrix enc) {
  WiretapCode c;
  c.m = m;
  c.n = n;
  c.encoder = std::move(enc);
  return c;
}

RealMatrix random_encoder(std::size_t m, std::size_t words, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealMatrix e(m, words);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < words; ++c) e(r, c) = u(rng);
    e.row(r) /= e.row(r).sum();
  }
  return e;
}

std::vector<ComplexMatrix> random_povm(std::size_t m, std::size_t d, Rng& rng) {
  std::vector<ComplexMatrix> g;
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (std::size_t u = 0; u < m; ++u) {
    ComplexMatrix a = ginibre(d, d, rng);
    g.push_back(a * a.adjoint());
    s += g.back();
  }
  ComplexMatrix fix = spectral_apply(s, [](double v) { return 1.0 / std::sqrt(v); });
  for (auto& x : g) x = hermitian_part(fix * x * fix);
  return g;
}

/// Independent assembly of rho^{U Uhat E^n} by explicit index sums over the
/// interleaved B1 E1 ... Bn En layout of the letter tensor product.
ComplexMatrix oracle_u_uhat_e(const WiretapCode& c, const CqqWiretapChannel& w) {
  const std::size_t n = c.n, m = c.m, db = w.dim_b, de = w.dim_e;
  const std::size_t dbn = ipow(db, n), den = ipow(de, n);
  ComplexMatrix out = ComplexMatrix::Zero(m * m * den, m * m * den);
  for (std::size_t word = 0; word < ipow(w.alphabet(), n); ++word) {
    auto x = word_letters(word, w.alphabet(), n);
    ComplexMatrix rho = ComplexMatrix::Identity(1, 1);
    for (auto v : x) rho = kron(rho, w.states[v]);
    // interleaved index of (b-digits, e-digits)
    auto idx = [&](std::size_t b, std::size_t e) {
      std::size_t r = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t bk = (b / ipow(db, n - 1 - k)) % db, ek = (e / ipow(de, n - 1 - k)) % de;
        r = r * db * de + bk * de + ek;
      }
      return r;
    };
    for (std::size_t u = 0; u < m; ++u) {
      const double p = c.encoder(u, word) / static_cast<double>(m);
      if (p == 0.0) continue;
      for (std::size_t uh = 0; uh < m; ++uh) {
        const ComplexMatrix& d = (*c.decoder)[uh];
        for (std::size_t e1 = 0; e1 < den; ++e1)
          for (std::size_t e2 = 0; e2 < den; ++e2) {
            Complex acc = 0.0;
            for (std::size_t b1 = 0; b1 < dbn; ++b1)
              for (std::size_t b2 = 0; b2 < dbn; ++b2) acc += d(b2, b1) * rho(idx(b1, e1), idx(b2, e2));
            out((u * m + uh) * den + e1, (u * m + uh) * den + e2) += p * acc;
          }
      }
    }
  }
  return out;
}

double success_of(const CqqWiretapChannel& w, const std::vector<ComplexMatrix>& povm) {
  return 0.5 * ((povm[0] * w.bob(0)).trace().real() + (povm[1] * w.bob(1)).trace().real());
}

}  // namespace

TEST(JointState, SingleMessageTrivialDecoder) {
  auto w = bsc_wiretap(0.1, 0.2);
  auto c = make_code(1, 1, deterministic_encoder({1}, 2));
  c.decoder = std::vector<ComplexMatrix>{identity(2)};
  auto st = joint_state(c, w);
  EXPECT_NEAR(st.u_uhat.matrix()(0, 0).real(), 1.0, 1e-12);
  auto perf = evaluate_code(c, w);
  EXPECT_NEAR(perf.transmission_error, 0.0, 1e-7);
  EXPECT_NEAR(perf.privacy_error, 0.0, 1e-6);
}

TEST(JointState, PerfectCodeGivesMaximallyCorrelated) {
  auto w = fixtures::noiseless_bit();
  auto c = make_code(2, 1, deterministic_encoder({0, 1}, 2));
  c.decoder = std::vector<ComplexMatrix>{ket_bra(2, 0), ket_bra(2, 1)};
  auto st = joint_state(c, w);
  ComplexMatrix delta = ComplexMatrix::Zero(4, 4);
  delta(0, 0) = delta(3, 3) = 0.5;
  EXPECT_LT((st.u_uhat.matrix() - delta).cwiseAbs().maxCoeff(), 1e-12);
  auto perf = evaluate_code(c, w);
  EXPECT_NEAR(perf.transmission_error, 0.0, 1e-7);
  EXPECT_NEAR(perf.privacy_error, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(perf.rate, 1.0);
}

TEST(JointState, MatchesTermByTermSummation) {
  Rng rng(5);
  for (std::size_t n : {1u, 2u}) {
    auto w = fixtures::random_degraded_channel(30 + n);
    auto c = make_code(2, n, random_encoder(2, ipow(2, n), rng));
    c.decoder = random_povm(2, ipow(2, n), rng);
    auto st = joint_state(c, w);
    EXPECT_LT((st.u_uhat_e.matrix() - oracle_u_uhat_e(c, w)).cwiseAbs().maxCoeff(), 1e-12) << "n = " << n;
  }
}

TEST(Evaluate, CopyEvePrivacyIsOneOverRootTwo) {
  auto w = fixtures::copy_eve();
  auto c = make_code(2, 1, deterministic_encoder({0, 1}, 2));
  auto perf = evaluate_code(c, w);
  EXPECT_NEAR(perf.transmission_error, 0.0, 1e-7);
  EXPECT_NEAR(perf.privacy_error, 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Evaluate, MessageIgnoringEncoder) {
  auto w = bsc_wiretap(0.1, 0.2);
  RealMatrix enc(2, 2);
  enc << 0.3, 0.7, 0.3, 0.7;
  auto c = make_code(2, 1, enc);
  Rng rng(9);
  c.decoder = random_povm(2, 2, rng);
  auto perf = evaluate_code(c, w);
  // p(u, u) = q_u / 2 with q_u = tr(D_u rho_bar); F = sum_u sqrt(p(u,u) / 2)
  const ComplexMatrix bar = 0.3 * w.bob(0) + 0.7 * w.bob(1);
  double f = 0.0;
  for (std::size_t u = 0; u < 2; ++u) f += std::sqrt((*c.decoder)[u].cwiseProduct(bar.transpose()).sum().real() / 4.0);
  EXPECT_NEAR(perf.transmission_error, std::sqrt(1.0 - f * f), 1e-9);
  EXPECT_NEAR(perf.privacy_error, 0.0, 1e-6);
}

TEST(Evaluate, OptimizedPrivacyNeverWorseThanFixed) {
  Rng rng(12);
  for (std::uint64_t seed = 40; seed < 48; ++seed) {
    auto w = fixtures::random_degraded_channel(seed);
    auto c = make_code(2, 1, random_encoder(2, 2, rng));
    const double opt = evaluate_code(c, w, PrivacyMode::Optimized).privacy_error;
    const double fix = evaluate_code(c, w, PrivacyMode::FixedMarginal).privacy_error;
    EXPECT_LE(opt, fix + 1e-8) << "seed " << seed;
  }
}

TEST(Decoder, OrthogonalStatesProjective) {
  auto w = fixtures::noiseless_bit();
  auto povm = optimal_decoder(deterministic_encoder({0, 1}, 2), w, 1);
  EXPECT_NEAR(success_of(w, povm), 1.0, 1e-9);
  for (const auto& d : povm) EXPECT_LT((d * d - d).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Decoder, IdenticalStatesGiveHalf) {
  CqqWiretapChannel w{"same", 2, 1, {ket_bra(2, 0), ket_bra(2, 0)}};
  auto povm = optimal_decoder(deterministic_encoder({0, 1}, 2), w, 1);
  EXPECT_NEAR(success_of(w, povm), 0.5, 1e-8);
  EXPECT_LE(povm_defect(povm), 1e-8);
}

TEST(Decoder, HelstromBound) {
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    ComplexMatrix r1 = random_density_matrix(2, 2, rng), r2 = random_density_matrix(2, 2, rng);
    CqqWiretapChannel w{"helstrom", 2, 1, {r1, r2}};
    auto povm = optimal_decoder(deterministic_encoder({0, 1}, 2), w, 1);
    EXPECT_NEAR(success_of(w, povm), 0.5 + 0.25 * trace_norm_hermitian(r1 - r2), 1e-7);
  }
}

TEST(Property, DecoderBeatsEnumeratedProjectiveDecoders) {
  Rng rng(21);
  for (std::uint64_t seed = 60; seed < 65; ++seed) {
    auto w = fixtures::random_degraded_channel(seed);
    auto enc = deterministic_encoder({0, 1}, 2);
    const double best = success_probability(enc, w, 1, optimal_decoder(enc, w, 1));
    for (int k = 0; k < 20; ++k) {
      ComplexMatrix u = haar_unitary(2, rng);
      ComplexMatrix p0 = u.col(0) * u.col(0).adjoint(), p1 = u.col(1) * u.col(1).adjoint();
      EXPECT_GE(best, success_probability(enc, w, 1, {p0, p1}) - 1e-9);
      EXPECT_GE(best, success_probability(enc, w, 1, {p1, p0}) - 1e-9);
    }
  }
}

TEST(TrivialConverse, PerfectCodeEquality) {
  auto w = fixtures::noiseless_bit();
  auto c = make_code(2, 1, deterministic_encoder({0, 1}, 2));
  EXPECT_NEAR(trivial_converse_bound(c, w), 1.0, 1e-6);
}

TEST(TrivialConverse, SingleMessageNonnegative) {
  auto c = make_code(1, 1, deterministic_encoder({0}, 2));
  EXPECT_GE(trivial_converse_bound(c, bsc_wiretap(0.1, 0.2)), -1e-6);
}

TEST(Property, TrivialConverseSoundOnRandomCodes) {
  Rng rng(31);
  for (std::uint64_t seed = 70; seed < 76; ++seed) {
    auto w = fixtures::random_degraded_channel(seed);
    auto c = make_code(2, 1, random_encoder(2, 2, rng));
    EXPECT_GE(trivial_converse_bound(c, w), 1.0 - 1e-5) << "seed " << seed;
  }
}

TEST(NoGo, MixtureEndpoints) {
  auto base = make_code(2, 1, deterministic_encoder({0, 1}, 2));
  EXPECT_EQ(nogo_mixture_code(base, 1.0, 0).encoder, base.encoder);
  auto flat = nogo_mixture_code(base, 0.0, 0);
  EXPECT_EQ(flat.encoder.col(0).sum(), 2.0);
  EXPECT_NEAR(evaluate_code(flat, fixtures::copy_eve()).privacy_error, 0.0, 1e-6);
  RealMatrix stoch(2, 2);
  stoch << 0.5, 0.5, 0.0, 1.0;
  EXPECT_THROW(nogo_mixture_code(make_code(2, 1, stoch), 0.5, 0), DomainError);
}

TEST(NoGo, CopyEvePrivacyAtEpsPointEight) {
  auto w = fixtures::copy_eve();
  auto base = make_code(2, 1, deterministic_encoder({0, 1}, 2));
  auto mix = nogo_mixture_code(base, 0.8, 0);
  for (Eigen::Index u = 0; u < 2; ++u) EXPECT_LE((mix.encoder.row(u).array() > 0.0).count(), 2);
  auto perf = evaluate_code(mix, w);
  EXPECT_LE(perf.privacy_error, 0.6 + 1e-6);
  EXPECT_DOUBLE_EQ(perf.rate, 1.0);
  EXPECT_GE(trivial_converse_bound(mix, w, perf), 1.0 - 1e-5);
}

TEST(BruteForce, NoiselessBitPerfect) {
  SearchConfig cfg;
  cfg.max_m = 2;
  auto r = brute_force_M(fixtures::noiseless_bit(), 1, 0.0, 0.0, cfg);
  EXPECT_EQ(r.m_best, 2u);
  EXPECT_TRUE(is_deterministic(r.witness.encoder));
  for (const auto& d : *r.witness.decoder) EXPECT_LT((d * d - d).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BruteForce, CopyEveThreshold) {
  SearchConfig cfg;
  cfg.max_m = 2;
  EXPECT_EQ(brute_force_M(fixtures::copy_eve(), 1, 0.1, 0.1, cfg).m_best, 1u);
  EXPECT_EQ(brute_force_M(fixtures::copy_eve(), 1, 0.1, 0.9, cfg).m_best, 2u);
}

TEST(BruteForce, DeskScaleLimits) {
  auto w3 = classical_channel("ternary", {{{1.0}, {0.0}, {0.0}}, {{0.0}, {1.0}, {0.0}}, {{0.0}, {0.0}, {1.0}}});
  EXPECT_THROW(brute_force_M(w3, 1, 0.1, 0.1), DomainError);
  EXPECT_THROW(brute_force_M(fixtures::noiseless_bit(), 3, 0.1, 0.1), DomainError);
}

TEST(Budget, GuardRefusesLargeStates) {
  ::setenv("SECRECY_BUDGET_DIM", "4", 1);
  auto c = make_code(2, 2, deterministic_encoder({0, 3}, 4));
  EXPECT_THROW(joint_state(c, bsc_wiretap(0.1, 0.2)), BudgetError);
  ::unsetenv("SECRECY_BUDGET_DIM");
  EXPECT_EQ(budget_dim(), kDefaultBudgetDim);
}

TEST(Validation, EncoderRowsMustBeDistributions) {
  RealMatrix e(2, 2);
  e << 0.5, 0.4, 0.0, 1.0;
  try {
    validate_code(make_code(2, 1, e), bsc_wiretap(0.1, 0.2));
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_EQ(err.offending(), std::vector<std::size_t>{0});
  }
  EXPECT_THROW(validate_code(make_code(2, 1, RealMatrix::Ones(2, 3) / 3.0), bsc_wiretap(0.1, 0.2)), DimensionError);
}

TEST(Types, BinaryHalfHalf) {
  auto r = type_class_check(2, {0.5, 0.5}, 2);
  EXPECT_EQ(r.size, 2u);
  EXPECT_EQ(r.multinomial, 2u);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_TRUE(r.types_match);
  EXPECT_NEAR(r.max_ratio, 0.5 / (9.0 * 0.25), 1e-12);
}

TEST(Types, PointMass) {
  auto r = type_class_check(3, {0.0, 1.0}, 2);
  EXPECT_EQ(r.size, 1u);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_LT(r.max_ratio, 1.0);
}

TEST(Types, ThreeQuartersOneQuarter) {
  auto r = type_class_check(4, {0.75, 0.25}, 2);
  EXPECT_EQ(r.size, 4u);
  EXPECT_NEAR(r.max_ratio, 0.25 / (25.0 * 27.0 / 256.0), 1e-12);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_THROW(type_class_check(4, {0.7, 0.3}, 2), DomainError);
}
