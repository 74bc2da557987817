#pragma once

#include "secrecy/secrecy.hpp"

namespace fixtures {

using namespace secrecy;

/// Random degrading map B -> E from a Haar isometry B -> E (x) F, dim F = 2.
inline QuantumChannel random_degrading_map(Rng& rng, std::size_t db = 2, std::size_t de = 2) {
  ComplexMatrix v = haar_unitary(de * 2, rng).leftCols(static_cast<Eigen::Index>(db));
  std::vector<ComplexMatrix> kraus;
  for (std::size_t f = 0; f < 2; ++f) {
    ComplexMatrix k(de, db);
    for (std::size_t e = 0; e < de; ++e)
      for (std::size_t b = 0; b < db; ++b) k(e, b) = v(e * 2 + f, b);
    kraus.push_back(k);
  }
  return QuantumChannel(kraus);
}

/// Letters rho_x^{BE} = sum_q p_q |q><q| (x) D(|q><q|) over the eigenbasis of a
/// random Bob state, so that Eve's marginal is exactly D(rho_x^B).
inline CqqWiretapChannel random_degraded_channel(std::uint64_t seed, std::size_t alphabet = 2) {
  Rng rng(seed);
  QuantumChannel d = random_degrading_map(rng);
  CqqWiretapChannel w;
  w.name = "random degraded " + std::to_string(seed);
  w.dim_b = 2;
  w.dim_e = 2;
  for (std::size_t x = 0; x < alphabet; ++x) {
    auto es = eigh(random_density_matrix(2, 2, rng));
    ComplexMatrix j = ComplexMatrix::Zero(4, 4);
    for (Eigen::Index q = 0; q < 2; ++q) {
      ComplexMatrix pq = es.vectors.col(q) * es.vectors.col(q).adjoint();
      j += std::max(es.values(q), 0.0) * kron(pq, d(pq));
    }
    w.states.push_back(j / j.trace().real());
  }
  return w;
}

inline CqqWiretapChannel noiseless_bit() { return classical_channel("noiseless", {{{1.0}, {0.0}}, {{0.0}, {1.0}}}); }

inline CqqWiretapChannel copy_eve() {
  return classical_channel("copy", {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.0, 1.0}}});
}

inline ComplexMatrix ket_bra(std::size_t d, std::size_t i) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

inline DegradedStructure degraded(const CqqWiretapChannel& w) { return std::get<DegradedStructure>(check_degraded(w)); }

}  // namespace fixtures
