#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace secrecy;
using fixtures::ket_bra;

TEST(Channel, ValidQubitChannelPasses) {
  auto d = validate_channel(bsc_wiretap(0.1, 0.2));
  EXPECT_TRUE(d.ok);
  EXPECT_EQ(d.letters.size(), 2u);
  EXPECT_TRUE(d.offending().empty());
}

TEST(Channel, TraceDefectNamesLetter) {
  auto w = bsc_wiretap(0.1, 0.2);
  w.states[1] *= 0.9;
  try {
    require_valid(w);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.offending(), std::vector<std::size_t>{1});
    EXPECT_NE(std::string(e.what()).find("trace"), std::string::npos);
  }
}

TEST(Channel, NonHermitianRejected) {
  auto w = bsc_wiretap(0.1, 0.2);
  w.states[0](0, 1) = Complex(0.0, 0.1);
  auto d = validate_channel(w);
  EXPECT_FALSE(d.ok);
  EXPECT_EQ(d.offending(), std::vector<std::size_t>{0});
  EXPECT_THROW(require_valid(w), ValidationError);
}

TEST(Channel, WrongShapeRejected) {
  auto w = bsc_wiretap(0.1, 0.2);
  w.states[1] = ComplexMatrix::Identity(2, 2) / 2.0;
  EXPECT_EQ(validate_channel(w).offending(), std::vector<std::size_t>{1});
}

TEST(Degradable, ConstantEveIsTraceAndReplace) {
  ComplexMatrix tau = ComplexMatrix::Zero(2, 2);
  tau << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  auto w = product_channel("const-eve", {ket_bra(2, 0), ket_bra(2, 1)}, tau);
  auto r = check_degraded(w);
  ASSERT_TRUE(std::holds_alternative<DegradedStructure>(r));
  const auto& s = std::get<DegradedStructure>(r);
  for (const ComplexMatrix& in : {ket_bra(2, 0), ket_bra(2, 1), ComplexMatrix(identity(2) / 2.0)})
    EXPECT_LT((s.degrading(in) - tau).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(s.dilation.defect(), 1e-9);
}

TEST(Degradable, ConstantBobInformedEveIsInfeasible) {
  ComplexMatrix half = identity(2) / 2.0;
  CqqWiretapChannel w{"bob-constant", 2, 2, {kron(half, ket_bra(2, 0)), kron(half, ket_bra(2, 1))}};
  auto r = check_degraded(w);
  ASSERT_TRUE(std::holds_alternative<NotDegraded>(r));
  EXPECT_GT(std::get<NotDegraded>(r).certificate.size(), 0);
}

TEST(Degradable, BscCascadeDilation) {
  auto w = bsc_wiretap(0.1, 0.2);
  auto s = fixtures::degraded(w);
  EXPECT_EQ(s.dim_e_prime, 2u);
  EXPECT_LE(s.residual, kDegradeTol);
  for (std::size_t x = 0; x < 2; ++x) {
    auto om = s.omega(w, x);
    // tr_F omega_x reproduces Eve, tr of omega_x is one, F and E' together carry Bob
    EXPECT_LT((partial_trace(om.matrix(), om.dims(), {0}) - w.eve(x)).cwiseAbs().maxCoeff(), 1e-7);
    EXPECT_NEAR(om.trace(), 1.0, 1e-9);
    EXPECT_NEAR(von_neumann_entropy(om), operator_entropy(w.bob(x)), 1e-7);
  }
}

TEST(Degradable, CopyAndTrivialEve) {
  auto copy = fixtures::degraded(fixtures::copy_eve());
  EXPECT_LE(copy.residual, kDegradeTol);
  auto triv = fixtures::degraded(fixtures::noiseless_bit());
  EXPECT_EQ(triv.dim_e_prime, 1u);
  EXPECT_LE(triv.residual, kDegradeTol);
}

TEST(Degradable, RandomDegradedChannelsAreCertified) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto w = fixtures::random_degraded_channel(seed, 2 + seed % 2);
    auto r = check_degraded(w);
    ASSERT_TRUE(std::holds_alternative<DegradedStructure>(r)) << "seed " << seed;
    const auto& s = std::get<DegradedStructure>(r);
    EXPECT_LE(s.residual, kDegradeTol);
    EXPECT_LT(s.dilation.defect(), 1e-9);
    EXPECT_TRUE(s.degrading.trace_preserving(1e-9));
  }
}
