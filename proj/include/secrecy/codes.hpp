#pragma once

// Wiretap codes: encoders, decoders, transmission and privacy errors, the
// entropic converse bound, and desk-scale exhaustive search.

#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>

#include "secrecy/channel.hpp"
#include "secrecy/entropy.hpp"

namespace secrecy {

inline constexpr std::size_t kDefaultBudgetDim = 64;

/// Joint-dimension cap, overridable through SECRECY_BUDGET_DIM.
inline std::size_t budget_dim() {
  if (const char* env = std::getenv("SECRECY_BUDGET_DIM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultBudgetDim;
}

inline void check_budget(std::size_t dim, const std::string& what) {
  const std::size_t cap = budget_dim();
  if (dim > cap)
    throw BudgetError(what + " needs joint dimension " + std::to_string(dim) + " above the budget " +
                      std::to_string(cap) + " (SECRECY_BUDGET_DIM)");
}

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Letters of word index `w` in base |X|, most significant first.
inline std::vector<std::size_t> word_letters(std::size_t w, std::size_t alphabet, std::size_t n) {
  std::vector<std::size_t> x(n);
  for (std::size_t k = n; k-- > 0;) {
    x[k] = w % alphabet;
    w /= alphabet;
  }
  return x;
}

inline std::size_t word_index(const std::vector<std::size_t>& x, std::size_t alphabet) {
  std::size_t w = 0;
  for (auto v : x) w = w * alphabet + v;
  return w;
}

/// n-block code. Encoder rows are messages, columns words x^n.
struct WiretapCode {
  std::size_t m = 1;
  std::size_t n = 1;
  RealMatrix encoder;
  std::optional<std::vector<ComplexMatrix>> decoder;  // POVM on B^n
};

inline double povm_defect(const std::vector<ComplexMatrix>& povm) {
  if (povm.empty()) return std::numeric_limits<double>::infinity();
  ComplexMatrix s = ComplexMatrix::Zero(povm[0].rows(), povm[0].cols());
  double neg = 0.0;
  for (const auto& d : povm) {
    s += d;
    neg = std::max(neg, -eigenvalues(hermitian_part(d)).minCoeff());
    neg = std::max(neg, hermiticity_defect(d));
  }
  return std::max(neg, (s - identity(static_cast<std::size_t>(s.rows()))).cwiseAbs().maxCoeff());
}

inline void validate_code(const WiretapCode& code, const CqqWiretapChannel& w) {
  if (code.m == 0 || code.n == 0) throw DomainError("code needs M >= 1 and n >= 1");
  const std::size_t words = ipow(w.alphabet(), code.n);
  if (static_cast<std::size_t>(code.encoder.rows()) != code.m || static_cast<std::size_t>(code.encoder.cols()) != words)
    throw DimensionError("encoder must be M x |X|^n");
  std::vector<std::size_t> bad;
  for (Eigen::Index u = 0; u < code.encoder.rows(); ++u) {
    const auto row = code.encoder.row(u);
    if (row.minCoeff() < -1e-12 || std::abs(row.sum() - 1.0) > 1e-9) bad.push_back(static_cast<std::size_t>(u));
  }
  if (!bad.empty()) throw ValidationError("encoder rows are not probability distributions", bad);
  if (code.decoder) {
    if (code.decoder->size() != code.m) throw DimensionError("decoder needs one POVM element per message");
    const auto db = static_cast<Eigen::Index>(ipow(w.dim_b, code.n));
    for (const auto& d : *code.decoder)
      if (d.rows() != db || d.cols() != db) throw DimensionError("decoder elements must act on B^n");
    if (povm_defect(*code.decoder) > 1e-8) throw ValidationError("decoder is not a POVM");
  }
}

/// rho_{x^n} on B_1..B_n E_1..E_n.
inline ComplexMatrix word_state(const CqqWiretapChannel& w, const std::vector<std::size_t>& x) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  Dims dims;
  for (auto v : x) {
    out = kron(out, w.states.at(v));
    dims.push_back(w.dim_b);
    dims.push_back(w.dim_e);
  }
  const std::size_t n = x.size();
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k);
  for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k + 1);
  return permute_subsystems(out, dims, perm);
}

namespace code_detail {

/// Per-message states sum_x E(x|u) rho_x on B^n (x) E^n.
inline std::vector<ComplexMatrix> message_states(const RealMatrix& encoder, const CqqWiretapChannel& w, std::size_t n) {
  const std::size_t d = ipow(w.dim_b * w.dim_e, n);
  std::vector<ComplexMatrix> out(encoder.rows(), ComplexMatrix::Zero(d, d));
  for (Eigen::Index c = 0; c < encoder.cols(); ++c) {
    bool used = false;
    for (Eigen::Index u = 0; u < encoder.rows(); ++u) used = used || encoder(u, c) != 0.0;
    if (!used) continue;
    const ComplexMatrix rho = word_state(w, word_letters(static_cast<std::size_t>(c), w.alphabet(), n));
    for (Eigen::Index u = 0; u < encoder.rows(); ++u)
      if (encoder(u, c) != 0.0) out[u] += encoder(u, c) * rho;
  }
  return out;
}

inline ComplexMatrix compress_psd(const ComplexMatrix& m) {
  return spectral_apply(hermitian_part(m), [](double v) { return std::max(v, 0.0); });
}

}  // namespace code_detail

/// Bob's optimal decoder: maximizes (1/M) sum_u tr(D_u sigma_u) over POVMs.
inline std::vector<ComplexMatrix> optimal_decoder(const RealMatrix& encoder, const CqqWiretapChannel& w, std::size_t n) {
  const std::size_t m = static_cast<std::size_t>(encoder.rows());
  const std::size_t db = ipow(w.dim_b, n);
  check_budget(m * ipow(w.dim_b * w.dim_e, n), "optimal decoder");
  if (m == 1) return {identity(db)};
  auto joint = code_detail::message_states(encoder, w, n);
  Dims dims(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    dims[k] = w.dim_b;
    dims[n + k] = w.dim_e;
  }
  std::vector<std::size_t> keep_b(n);
  std::iota(keep_b.begin(), keep_b.end(), 0);

  sdp::PrimalModel model;
  std::vector<sdp::LinearTerm> sum;
  for (std::size_t u = 0; u < m; ++u) {
    const int blk = model.add_block(static_cast<int>(db));
    const ComplexMatrix sigma = partial_trace(joint[u], dims, keep_b) / static_cast<double>(m);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = i; j < db; ++j)
        if (std::abs(sigma(i, j)) > 0.0)
          model.add_objective({blk, static_cast<int>(i), static_cast<int>(j), -sigma(i, j)});
    sum.push_back({blk, [](const ComplexMatrix& d) { return d; }});
  }
  sdp::add_hermitian_equality(model, sum, identity(db));
  auto res = model.solve();
  if (res.status != sdp::SdpStatus::Optimal)
    throw SolverError(std::string("decoder program: solver returned ") + sdp::to_string(res.status));

  std::vector<ComplexMatrix> sigmas;
  for (std::size_t u = 0; u < m; ++u) sigmas.push_back(partial_trace(joint[u], dims, keep_b));
  auto score = [&](const std::vector<ComplexMatrix>& p) {
    double v = 0.0;
    for (std::size_t u = 0; u < m; ++u) v += (p[u] * sigmas[u]).trace().real();
    return v;
  };
  auto normalize = [&](std::vector<ComplexMatrix> p) {
    ComplexMatrix s = ComplexMatrix::Zero(db, db);
    for (const auto& d : p) s += d;
    const ComplexMatrix fix = spectral_apply(hermitian_part(s), [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
    for (auto& d : p) d = hermitian_part(fix * d * fix);
    return p;
  };
  std::vector<ComplexMatrix> povm;
  for (auto& d : res.blocks) povm.push_back(code_detail::compress_psd(d));
  povm = normalize(povm);
  // Eigenvalues left a barrier-width away from 0 or 1 are rounded; kept only
  // when the success probability does not drop.
  std::vector<ComplexMatrix> rounded;
  for (const auto& d : povm)
    rounded.push_back(spectral_apply(d, [](double v) { return v < 1e-6 ? 0.0 : (v > 1.0 - 1e-6 ? 1.0 : v); }));
  rounded = normalize(rounded);
  if (povm_defect(rounded) <= 1e-10 && score(rounded) >= score(povm) - 1e-12) povm = rounded;
  if (povm_defect(povm) > 1e-8) throw SolverError("decoder program returned an invalid POVM");
  return povm;
}

/// Average success probability (1/M) sum_u tr(D_u sigma_u^B).
inline double success_probability(const RealMatrix& encoder, const CqqWiretapChannel& w, std::size_t n,
                                  const std::vector<ComplexMatrix>& povm) {
  auto joint = code_detail::message_states(encoder, w, n);
  Dims dims(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    dims[k] = w.dim_b;
    dims[n + k] = w.dim_e;
  }
  std::vector<std::size_t> keep_b(n);
  std::iota(keep_b.begin(), keep_b.end(), 0);
  double p = 0.0;
  for (std::size_t u = 0; u < joint.size(); ++u)
    p += (povm.at(u) * partial_trace(joint[u], dims, keep_b)).trace().real();
  return p / static_cast<double>(joint.size());
}

/// States of the code: U Uhat, U B^n, U E^n and U Uhat E^n, U uniform.
struct CodeStates {
  DensityOperator u_uhat;
  DensityOperator u_b;
  DensityOperator u_e;
  DensityOperator u_uhat_e;
};

/// Exact assembly of rho^{U Uhat E^n} = (1/M) sum E(x|u) |u><u| (x) |uh><uh| (x) tr_B[rho_x (D_uh (x) 1)].
inline CodeStates joint_state(const WiretapCode& code, const CqqWiretapChannel& w) {
  validate_code(code, w);
  const std::size_t m = code.m, n = code.n;
  const std::size_t db = ipow(w.dim_b, n), de = ipow(w.dim_e, n);
  check_budget(std::max(m * db * de, m * m * de), "code state");
  const std::vector<ComplexMatrix> povm = code.decoder ? *code.decoder : optimal_decoder(code.encoder, w, n);
  auto joint = code_detail::message_states(code.encoder, w, n);
  const double inv_m = 1.0 / static_cast<double>(m);

  ComplexMatrix uu = ComplexMatrix::Zero(m * m, m * m);
  ComplexMatrix ub = ComplexMatrix::Zero(m * db, m * db);
  ComplexMatrix ue = ComplexMatrix::Zero(m * de, m * de);
  ComplexMatrix uue = ComplexMatrix::Zero(m * m * de, m * m * de);
  for (std::size_t u = 0; u < m; ++u) {
    ub.block(u * db, u * db, db, db) = inv_m * partial_trace(joint[u], {db, de}, {0});
    ue.block(u * de, u * de, de, de) = inv_m * partial_trace(joint[u], {db, de}, {1});
    for (std::size_t uh = 0; uh < m; ++uh) {
      const ComplexMatrix e =
          inv_m * partial_trace(ComplexMatrix(joint[u] * kron(povm[uh], identity(de))), {db, de}, {1});
      const std::size_t r = (u * m + uh) * de;
      uue.block(r, r, de, de) = hermitian_part(e);
      uu(u * m + uh, u * m + uh) = e.trace().real();
    }
  }
  auto clean = [](ComplexMatrix x) { return code_detail::compress_psd(x); };
  return {DensityOperator(clean(uu), {m, m}), DensityOperator(clean(ub), {m, db}), DensityOperator(clean(ue), {m, de}),
          DensityOperator(clean(uue), {m, m, de})};
}

enum class PrivacyMode { FixedMarginal, Optimized };

inline std::string to_string(PrivacyMode m) { return m == PrivacyMode::FixedMarginal ? "fixed" : "optimized"; }

struct CodePerformance {
  double transmission_error;
  double privacy_error;
  PrivacyMode mode;
  double rate;
  double success_probability;
};

namespace code_detail {

/// max over states sigma of (1/M) sum_u F(rho_u, sigma), rho_u the blocks of rho^{U E}.
inline double best_product_fidelity(const std::vector<ComplexMatrix>& blocks) {
  const int d = static_cast<int>(blocks.at(0).rows());
  sdp::LmiModel model;
  auto sigma = sdp::add_hermitian(model, d, true);
  const double inv_m = 1.0 / static_cast<double>(blocks.size());
  for (const auto& rho : blocks) {
    auto s = support(rho);
    const int r = static_cast<int>(s.rank());
    if (r == 0) continue;
    auto y = sdp::add_general(model, r, d);
    // Re tr(W Y) with rho = W D W^dagger
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < d; ++j) {
        const Complex wji = s.vectors(j, i);
        model.set_objective(y.re[i * d + j], inv_m * wji.real());
        model.set_objective(y.im[i * d + j], -inv_m * wji.imag());
      }
    const int blk = model.add_block(r + d);
    sdp::place_constant(model, blk, 0, 0, s.values.cast<Complex>().asDiagonal().toDenseMatrix());
    sdp::place(model, y, blk, 0, r, ComplexMatrix::Identity(1, 1));
    sdp::place(model, sigma, blk, r, r, ComplexMatrix::Identity(1, 1));
  }
  if (model.num_blocks() == 0) return 0.0;
  auto res = model.solve();
  if (res.status != sdp::SdpStatus::Optimal)
    throw SolverError(std::string("privacy fidelity program: solver returned ") + sdp::to_string(res.status));
  return res.value;
}

inline double distance_from_fidelity(double f) {
  f = std::clamp(f, 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

}  // namespace code_detail

/// Transmission error P(rho^{U Uhat}, Delta) and privacy error
/// P(rho^{U E^n}, Delta^U (x) rho~) with rho~ the marginal or the best state.
inline CodePerformance evaluate_code(const WiretapCode& code, const CqqWiretapChannel& w,
                                     PrivacyMode mode = PrivacyMode::Optimized) {
  auto st = joint_state(code, w);
  const std::size_t m = code.m;
  const std::size_t de = ipow(w.dim_e, code.n);
  CodePerformance perf{};
  perf.mode = mode;
  perf.rate = std::log2(static_cast<double>(m)) / static_cast<double>(code.n);

  double f_t = 0.0, success = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    const double p = std::max(0.0, st.u_uhat.matrix()(u * m + u, u * m + u).real());
    f_t += std::sqrt(p / static_cast<double>(m));
    success += p;
  }
  perf.transmission_error = code_detail::distance_from_fidelity(f_t);
  perf.success_probability = success;

  std::vector<ComplexMatrix> blocks;
  ComplexMatrix marginal = ComplexMatrix::Zero(de, de);
  for (std::size_t u = 0; u < m; ++u) {
    blocks.push_back(static_cast<double>(m) * st.u_e.matrix().block(u * de, u * de, de, de));
    marginal += st.u_e.matrix().block(u * de, u * de, de, de);
  }
  double f_fixed = 0.0;
  for (const auto& b : blocks) f_fixed += fidelity(DensityOperator(b), DensityOperator(hermitian_part(marginal)));
  f_fixed /= static_cast<double>(m);
  double f = f_fixed;
  if (mode == PrivacyMode::Optimized) f = std::max(f_fixed, code_detail::best_product_fidelity(blocks));
  perf.privacy_error = code_detail::distance_from_fidelity(f);
  return perf;
}

/// Smoothing parameters below this are treated as zero.
inline constexpr double kSmoothingFloor = 1e-6;

/// H_min^{delta*}(U|E^n) - H_max^{eps*}(U|B^n) with the measured errors.
inline double trivial_converse_bound(const WiretapCode& code, const CqqWiretapChannel& w,
                                     const CodePerformance& perf) {
  auto st = joint_state(code, w);
  auto snap = [](double e) { return e < kSmoothingFloor ? 0.0 : e; };
  const double d = snap(perf.privacy_error), e = snap(perf.transmission_error);
  if (d >= 1.0 || e >= 1.0) throw DomainError("converse bound needs errors below one");
  const Split s{{0}, {1}};
  return h_min_smooth(st.u_e, s, d) - h_max_smooth(st.u_b, s, e);
}

inline double trivial_converse_bound(const WiretapCode& code, const CqqWiretapChannel& w) {
  return trivial_converse_bound(code, w, evaluate_code(code, w));
}

/// Deterministic encoder x^n(m) as a one-hot matrix.
inline RealMatrix deterministic_encoder(const std::vector<std::size_t>& words, std::size_t num_words) {
  RealMatrix e = RealMatrix::Zero(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(num_words));
  for (std::size_t u = 0; u < words.size(); ++u) e(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(words[u])) = 1.0;
  return e;
}

inline bool is_deterministic(const RealMatrix& e) {
  for (Eigen::Index u = 0; u < e.rows(); ++u) {
    int ones = 0;
    for (Eigen::Index c = 0; c < e.cols(); ++c) {
      if (e(u, c) == 1.0) ++ones;
      else if (e(u, c) != 0.0) return false;
    }
    if (ones != 1) return false;
  }
  return true;
}

/// Message m is sent as x^n(m) with probability eps^2 and as x0^n otherwise.
inline WiretapCode nogo_mixture_code(const WiretapCode& base, double eps, std::size_t x0_word) {
  if (!is_deterministic(base.encoder)) throw DomainError("mixture construction needs a deterministic base code");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("eps must lie in [0,1]");
  if (x0_word >= static_cast<std::size_t>(base.encoder.cols())) throw DimensionError("x0 word out of range");
  WiretapCode out = base;
  const double w = eps * eps;
  out.encoder = w * base.encoder;
  out.encoder.col(static_cast<Eigen::Index>(x0_word)).array() += 1.0 - w;
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive search

struct SearchConfig {
  std::size_t max_m = 4;
  double grid_step = 0.1;
  std::size_t max_stochastic = 2000;  // stochastic encoders tried per M
  double tol = 1e-6;  // slack on the error targets
  PrivacyMode mode = PrivacyMode::Optimized;
  std::function<void(const WiretapCode&, const CodePerformance&)> on_code;
};

struct SearchResult {
  std::size_t m_best = 1;
  WiretapCode witness;
  CodePerformance performance;
  std::size_t codes_evaluated = 0;
};

namespace code_detail {

/// Points of the simplex in dimension k with coordinates on the grid 1/steps.
inline std::vector<std::vector<double>> simplex_grid(std::size_t k, std::size_t steps) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> c(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == k) {
      c[i] = left;
      std::vector<double> p(k);
      for (std::size_t j = 0; j < k; ++j) p[j] = static_cast<double>(c[j]) / static_cast<double>(steps);
      out.push_back(p);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, steps);
  return out;
}

/// Calls f on each nondecreasing index sequence of length m over [0, k);
/// stops early when f returns true or after `cap` calls.
inline bool for_each_multiset(std::size_t k, std::size_t m, std::size_t cap,
                              const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(m, 0);
  std::size_t calls = 0;
  while (true) {
    if (calls++ >= cap) return false;
    if (f(idx)) return true;
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == k - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[i - 1];
  }
}

}  // namespace code_detail

/// Largest M <= max_m for which a searched code meets (eps, delta). Encoders
/// are unordered message assignments; deterministic ones are enumerated
/// exhaustively before stochastic encoders on the grid.
inline SearchResult brute_force_M(const CqqWiretapChannel& w, std::size_t n, double eps, double delta,
                                  const SearchConfig& cfg = {}) {
  require_valid(w);
  if (w.alphabet() > 2 || n > 2 || cfg.max_m > 4 || n == 0)
    throw DomainError("exhaustive search is limited to |X| <= 2, n <= 2, M <= 4");
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 1.0)) throw DomainError("grid step must lie in (0,1]");
  const std::size_t words = ipow(w.alphabet(), n);
  check_budget(cfg.max_m * ipow(w.dim_b * w.dim_e, n), "code search");
  SearchResult best;
  best.witness.m = 1;
  best.witness.n = n;
  best.witness.encoder = deterministic_encoder({0}, words);
  best.witness.decoder = optimal_decoder(best.witness.encoder, w, n);
  best.performance = evaluate_code(best.witness, w, cfg.mode);
  best.codes_evaluated = 1;
  if (cfg.on_code) cfg.on_code(best.witness, best.performance);

  auto attempt = [&](const RealMatrix& enc, std::size_t m) {
    WiretapCode c;
    c.m = m;
    c.n = n;
    c.encoder = enc;
    c.decoder = optimal_decoder(enc, w, n);
    auto perf = evaluate_code(c, w, cfg.mode);
    ++best.codes_evaluated;
    if (cfg.on_code) cfg.on_code(c, perf);
    if (perf.transmission_error <= eps + cfg.tol && perf.privacy_error <= delta + cfg.tol) {
      best.m_best = m;
      best.witness = c;
      best.performance = perf;
      return true;
    }
    return false;
  };

  const auto steps = static_cast<std::size_t>(std::llround(1.0 / cfg.grid_step));
  const auto grid = code_detail::simplex_grid(words, steps);
  for (std::size_t m = cfg.max_m; m >= 2; --m) {
    if (code_detail::for_each_multiset(words, m, std::numeric_limits<std::size_t>::max(),
                                       [&](const std::vector<std::size_t>& idx) {
                                         return attempt(deterministic_encoder(idx, words), m);
                                       }))
      return best;
    if (code_detail::for_each_multiset(grid.size(), m, cfg.max_stochastic, [&](const std::vector<std::size_t>& idx) {
          RealMatrix enc(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(words));
          for (std::size_t u = 0; u < m; ++u)
            for (std::size_t c = 0; c < words; ++c)
              enc(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(c)) = grid[idx[u]][c];
          return attempt(enc, m);
        }))
      return best;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Types

struct TypeClassReport {
  std::vector<std::size_t> counts;  // n P0(x)
  std::size_t size = 0;             // members found by enumeration
  std::size_t multinomial = 0;
  bool bound_holds = true;          // Upsilon <= (n+1)^{|X|} P0^{(x) n} on every member
  double max_ratio = 0.0;           // max over members of Upsilon / ((n+1)^{|X|} P0^n)
  bool types_match = true;          // t(x^n) = P0 on every member
};

inline TypeClassReport type_class_check(std::size_t n, const std::vector<double>& p0, std::size_t alphabet) {
  if (n == 0) throw DomainError("n must be positive");
  if (p0.size() != alphabet || alphabet == 0) throw DimensionError("type must have one entry per letter");
  TypeClassReport r;
  std::size_t total = 0;
  for (double p : p0) {
    const double c = p * static_cast<double>(n);
    if (p < 0.0 || std::abs(c - std::round(c)) > 1e-9) throw DomainError("n P0 must be integral");
    r.counts.push_back(static_cast<std::size_t>(std::llround(c)));
    total += r.counts.back();
  }
  if (total != n) throw DomainError("type must sum to one");
  const double words = std::pow(static_cast<double>(alphabet), static_cast<double>(n));
  if (words > 1e7) throw BudgetError("type class enumeration too large");

  // multinomial n! / prod c!
  double mult = 1.0;
  std::size_t k = 0;
  for (auto c : r.counts)
    for (std::size_t i = 1; i <= c; ++i) mult = mult * static_cast<double>(++k) / static_cast<double>(i);
  r.multinomial = static_cast<std::size_t>(std::llround(mult));

  const double poly = std::pow(static_cast<double>(n + 1), static_cast<double>(alphabet));
  const auto num = static_cast<std::size_t>(words);
  for (std::size_t wi = 0; wi < num; ++wi) {
    auto x = word_letters(wi, alphabet, n);
    std::vector<std::size_t> c(alphabet, 0);
    for (auto v : x) ++c[v];
    if (c != r.counts) continue;
    ++r.size;
    double p = 1.0;
    for (auto v : x) p *= p0[v];
    r.types_match = r.types_match && c == r.counts;
    const double ratio = (1.0 / mult) / (poly * p);
    r.max_ratio = std::max(r.max_ratio, ratio);
    r.bound_holds = r.bound_holds && ratio <= 1.0 + 1e-12;
  }
  r.types_match = r.types_match && r.size == r.multinomial;
  return r;
}

}  // namespace secrecy
