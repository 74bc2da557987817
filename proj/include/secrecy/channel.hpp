#pragma once

// Classical-quantum-quantum wiretap channels x -> rho_x^{BE}, their validation,
// and certification of degradedness with the Stinespring split B -> E' (x) F.

#include <sstream>
#include <variant>

#include "secrecy/quantum.hpp"
#include "secrecy/sdp_model.hpp"

namespace secrecy {

inline constexpr double kChannelTol = 1e-8;
inline constexpr double kDegradeTol = 1e-7;

/// Letter-indexed joint output states on B (x) E. States are kept as raw
/// matrices so that invalid input can be diagnosed per letter.
struct CqqWiretapChannel {
  std::string name;
  std::size_t dim_b = 0;
  std::size_t dim_e = 0;
  std::vector<ComplexMatrix> states;

  std::size_t alphabet() const { return states.size(); }
  Dims dims() const { return {dim_b, dim_e}; }
  DensityOperator joint(std::size_t x) const { return DensityOperator(states.at(x), dims()); }
  ComplexMatrix bob(std::size_t x) const { return partial_trace(states.at(x), dims(), {0}); }
  ComplexMatrix eve(std::size_t x) const { return partial_trace(states.at(x), dims(), {1}); }
};

struct LetterDiagnostic {
  std::size_t letter;
  bool square_and_sized;
  double hermiticity_defect;
  double min_eigenvalue;
  double trace;
  bool ok;
};

struct ChannelDiagnostics {
  std::vector<LetterDiagnostic> letters;
  bool ok = true;

  std::vector<std::size_t> offending() const {
    std::vector<std::size_t> out;
    for (const auto& l : letters)
      if (!l.ok) out.push_back(l.letter);
    return out;
  }
};

/// Per-letter PSD, Hermiticity, trace and shape report.
inline ChannelDiagnostics validate_channel(const CqqWiretapChannel& w, double tol = kChannelTol) {
  ChannelDiagnostics d;
  const auto n = static_cast<Eigen::Index>(w.dim_b * w.dim_e);
  for (std::size_t x = 0; x < w.states.size(); ++x) {
    const auto& m = w.states[x];
    LetterDiagnostic l{x, m.rows() == n && m.cols() == n && n > 0, 0.0, 0.0, 0.0, false};
    if (l.square_and_sized && m.allFinite()) {
      l.hermiticity_defect = hermiticity_defect(m);
      l.min_eigenvalue = eigenvalues(hermitian_part(m)).minCoeff();
      l.trace = m.trace().real();
      l.ok = l.hermiticity_defect <= tol && l.min_eigenvalue >= -tol && std::abs(l.trace - 1.0) <= tol;
    }
    d.ok = d.ok && l.ok;
    d.letters.push_back(l);
  }
  if (w.states.empty()) d.ok = false;
  return d;
}

/// Throws ValidationError naming every offending letter.
inline void require_valid(const CqqWiretapChannel& w, double tol = kChannelTol) {
  if (w.states.empty()) throw ValidationError("channel has no letters");
  auto d = validate_channel(w, tol);
  if (d.ok) return;
  std::ostringstream os;
  os << "invalid channel letters:";
  for (const auto& l : d.letters) {
    if (l.ok) continue;
    os << " [" << l.letter << ": ";
    if (!l.square_and_sized)
      os << "wrong shape";
    else if (l.hermiticity_defect > tol)
      os << "not Hermitian";
    else if (l.min_eigenvalue < -tol)
      os << "negative eigenvalue " << l.min_eigenvalue;
    else
      os << "trace " << l.trace;
    os << "]";
  }
  throw ValidationError(os.str(), d.offending());
}

// ---------------------------------------------------------------------------
// Degradedness

struct DegradedStructure {
  QuantumChannel degrading;  // B -> E
  Isometry dilation;         // B -> E' (x) F
  std::size_t dim_e_prime;
  std::size_t dim_f;
  double residual;  // max_x || tr_F(V rho_x^B V^dagger) - rho_x^E ||_1

  /// omega_x = V rho_x^B V^dagger on E' (x) F.
  DensityOperator omega(const CqqWiretapChannel& w, std::size_t x) const {
    return DensityOperator(hermitian_part(dilation(w.bob(x))), {dim_e_prime, dim_f});
  }
};

/// Dual ray of the Choi feasibility program; no degrading channel exists.
struct NotDegraded {
  RealVector certificate;
  std::string reason;
};

/// Stinespring isometry of a degrading map, output ordered E' then F.
inline Isometry degraded_dilation(const QuantumChannel& d) { return stinespring(d); }

namespace channel_detail {

/// Rescales Kraus operators so that sum K^dagger K = 1 exactly.
inline QuantumChannel make_trace_preserving(const QuantumChannel& c) {
  const std::size_t din = c.input_dim();
  ComplexMatrix s = ComplexMatrix::Zero(din, din);
  for (const auto& k : c.kraus()) s += k.adjoint() * k;
  ComplexMatrix inv_sqrt = spectral_apply(hermitian_part(s), [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
  std::vector<ComplexMatrix> out;
  for (const auto& k : c.kraus()) out.push_back(k * inv_sqrt);
  return QuantumChannel(std::move(out));
}

inline double degrade_residual(const CqqWiretapChannel& w, const QuantumChannel& d) {
  double r = 0.0;
  for (std::size_t x = 0; x < w.alphabet(); ++x) r = std::max(r, trace_norm_hermitian(d(w.bob(x)) - w.eve(x)));
  return r;
}

}  // namespace channel_detail

/// Searches for a Choi operator J on B (x) E with J >= 0, tr_E J = 1_B and
/// tr_B[J (rho_x^B^T (x) 1_E)] = rho_x^E for all x.
inline std::variant<DegradedStructure, NotDegraded> check_degraded(const CqqWiretapChannel& w,
                                                                    double tol = kDegradeTol) {
  require_valid(w);
  const std::size_t db = w.dim_b, de = w.dim_e;
  sdp::PrimalModel model;
  const int blk = model.add_block(static_cast<int>(db * de));
  sdp::add_hermitian_equality(
      model, {{blk, [&](const ComplexMatrix& j) { return partial_trace(j, {db, de}, {0}); }}}, identity(db));
  for (std::size_t x = 0; x < w.alphabet(); ++x) {
    const ComplexMatrix rb = w.bob(x);
    sdp::add_hermitian_equality(
        model, {{blk, [&](const ComplexMatrix& j) { return apply_choi(j, rb, db, de); }}}, w.eve(x));
  }
  sdp::SdpProblem problem = model.build();
  sdp::SdpSolution sol = sdp::solve(problem);
  if (sol.status == sdp::SdpStatus::PrimalInfeasible)
    return NotDegraded{sol.y, "no channel maps Bob's marginals onto Eve's"};
  if (sol.status != sdp::SdpStatus::Optimal)
    throw SolverError(std::string("degradedness program: solver returned ") + sdp::to_string(sol.status));

  ComplexMatrix choi = sdp::detail::collapse(sol.x[0], true, 0.5);
  choi = spectral_apply(hermitian_part(choi), [](double v) { return std::max(v, 0.0); });
  // Interior-point solutions carry eigenvalues at the level of the final
  // barrier parameter; the coarser cut is kept whenever it still reproduces Eve.
  QuantumChannel d = channel_detail::make_trace_preserving(QuantumChannel::from_choi(choi, db, de, tol));
  double residual = channel_detail::degrade_residual(w, d);
  if (residual > tol) {
    d = channel_detail::make_trace_preserving(QuantumChannel::from_choi(choi, db, de, 1e-10));
    residual = channel_detail::degrade_residual(w, d);
  }
  if (residual > tol) {
    std::ostringstream os;
    os << "best degrading map misses Eve's states by " << residual;
    return NotDegraded{sol.y, os.str()};
  }
  Isometry v = degraded_dilation(d);
  const std::size_t df = d.kraus().size();
  return DegradedStructure{d, v, de, df, residual};
}

// ---------------------------------------------------------------------------
// Constructors for common channels

/// Diagonal embedding of a classical channel x -> P(b, e | x).
inline CqqWiretapChannel classical_channel(const std::string& name,
                                           const std::vector<std::vector<std::vector<double>>>& p) {
  CqqWiretapChannel w;
  w.name = name;
  if (p.empty() || p[0].empty() || p[0][0].empty()) throw DimensionError("empty classical channel");
  w.dim_b = p[0].size();
  w.dim_e = p[0][0].size();
  for (const auto& px : p) {
    ComplexMatrix m = ComplexMatrix::Zero(w.dim_b * w.dim_e, w.dim_b * w.dim_e);
    if (px.size() != w.dim_b) throw DimensionError("classical channel rows have inconsistent sizes");
    for (std::size_t b = 0; b < w.dim_b; ++b) {
      if (px[b].size() != w.dim_e) throw DimensionError("classical channel rows have inconsistent sizes");
      for (std::size_t e = 0; e < w.dim_e; ++e) m(b * w.dim_e + e, b * w.dim_e + e) = px[b][e];
    }
    w.states.push_back(m);
  }
  return w;
}

/// Degraded binary symmetric wiretap channel: Bob sees x through BSC(p),
/// Eve sees Bob's output through a further BSC(r).
inline CqqWiretapChannel bsc_wiretap(double p, double r) {
  std::vector<std::vector<std::vector<double>>> probs(2, std::vector<std::vector<double>>(2, std::vector<double>(2)));
  for (int x = 0; x < 2; ++x)
    for (int b = 0; b < 2; ++b)
      for (int e = 0; e < 2; ++e) probs[x][b][e] = (b == x ? 1.0 - p : p) * (e == b ? 1.0 - r : r);
  std::ostringstream os;
  os << "bsc-wiretap(" << p << "," << r << ")";
  return classical_channel(os.str(), probs);
}

/// Product channel rho_x^B (x) tau^E.
inline CqqWiretapChannel product_channel(const std::string& name, const std::vector<ComplexMatrix>& bob,
                                         const ComplexMatrix& eve) {
  CqqWiretapChannel w;
  w.name = name;
  w.dim_b = static_cast<std::size_t>(bob.at(0).rows());
  w.dim_e = static_cast<std::size_t>(eve.rows());
  for (const auto& b : bob) w.states.push_back(kron(b, eve));
  return w;
}

}  // namespace secrecy
