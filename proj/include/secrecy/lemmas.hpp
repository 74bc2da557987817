#pragma once

// Numerical checks of the smooth-entropy inequalities used in the converse,
// and a seeded harness that runs them over random instances.

#include <cstdint>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "secrecy/entropy.hpp"

namespace secrecy {

enum class Rule {
  DataProcessingMin,
  DataProcessingMax,
  ChainMaxUpper,
  ChainMaxLower,
  MinMaxConversion,
  MinMaxConversionSharp,
  MaxMinConversion,
  QuasiConcavity,
  AepMin,
  AepMax,
};

inline const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> rules{Rule::DataProcessingMin, Rule::DataProcessingMax,     Rule::ChainMaxUpper,
                                       Rule::ChainMaxLower,     Rule::MinMaxConversion,      Rule::MinMaxConversionSharp,
                                       Rule::MaxMinConversion,  Rule::QuasiConcavity,        Rule::AepMin,
                                       Rule::AepMax};
  return rules;
}

inline std::string to_string(Rule r) {
  switch (r) {
    case Rule::DataProcessingMin: return "DataProcessingMin";
    case Rule::DataProcessingMax: return "DataProcessingMax";
    case Rule::ChainMaxUpper: return "ChainMaxUpper";
    case Rule::ChainMaxLower: return "ChainMaxLower";
    case Rule::MinMaxConversion: return "MinMaxConversion";
    case Rule::MinMaxConversionSharp: return "MinMaxConversionSharp";
    case Rule::MaxMinConversion: return "MaxMinConversion";
    case Rule::QuasiConcavity: return "QuasiConcavity";
    case Rule::AepMin: return "AepMin";
    case Rule::AepMax: return "AepMax";
  }
  return "?";
}

inline Rule parse_rule(const std::string& s) {
  for (Rule r : all_rules())
    if (to_string(r) == s) return r;
  throw ParseError("unknown rule '" + s + "'");
}

inline constexpr double kCheckTol = 1e-6;

/// Parameters of a single inequality; unused fields are ignored by a rule.
struct LemmaParams {
  double eps = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t n = 1;
};

struct InequalityReport {
  Rule rule;
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
  bool holds;
  LemmaParams params;
};

/// Mixture of local-unitary images (U_i (x) V_i) rho (U_i (x) V_i)^dagger.
struct LocalOrbit {
  std::vector<double> weights;
  std::vector<ComplexMatrix> u;
  std::vector<ComplexMatrix> v;
};

namespace lemma_detail {

inline void need(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

inline double log2_two_over_eta_sq(double eta) { return std::log2(2.0 / (eta * eta)); }

inline InequalityReport report(Rule rule, double lhs, double rhs, const LemmaParams& p, double tol = kCheckTol) {
  const double slack = rhs - lhs;
  return {rule, lhs, rhs, slack, slack >= -tol, p};
}

inline void check_smooth(double e, const char* name) {
  need(e >= 0.0 && e < 1.0, std::string(name) + " must lie in [0,1)");
}

/// rho^{(x) n} regrouped as A_1..A_n B_1..B_n, with the matching split.
inline std::pair<DensityOperator, Split> iid_grouped(const DensityOperator& ab, std::size_t n) {
  auto rn = tensor_power(ab, n);
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k);
  for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k + 1);
  Split s;
  for (std::size_t k = 0; k < n; ++k) s.a.push_back(k);
  for (std::size_t k = 0; k < n; ++k) s.b.push_back(n + k);
  return {permute(rn, perm), s};
}

inline DensityOperator orbit_mixture(const DensityOperator& ab, const LocalOrbit& orbit) {
  need(!orbit.weights.empty() && orbit.weights.size() == orbit.u.size() && orbit.u.size() == orbit.v.size(),
       "orbit needs matching weights and unitaries");
  double total = 0.0;
  for (double w : orbit.weights) {
    need(w >= 0.0, "orbit weights must be nonnegative");
    total += w;
  }
  need(std::abs(total - 1.0) <= 1e-9, "orbit weights must sum to one");
  ComplexMatrix mix = ComplexMatrix::Zero(ab.dim(), ab.dim());
  for (std::size_t i = 0; i < orbit.weights.size(); ++i) {
    ComplexMatrix w = kron(orbit.u[i], orbit.v[i]);
    if (w.rows() != static_cast<Eigen::Index>(ab.dim())) throw DimensionError("orbit unitary dimension mismatch");
    if ((w.adjoint() * w - identity(ab.dim())).cwiseAbs().maxCoeff() > 1e-9)
      throw ValidationError("orbit element is not unitary", {i});
    mix += orbit.weights[i] * w * ab.matrix() * w.adjoint();
  }
  return DensityOperator(hermitian_part(mix), ab.dims());
}

}  // namespace lemma_detail

/// Evaluates both sides of `rule`. Tripartite rules read subsystems 0, 1, 2
/// as A, B, C; bipartite rules read 0 and 1 and trace out the rest.
inline InequalityReport verify_inequality(Rule rule, const DensityOperator& rho, const LemmaParams& p,
                                          const LocalOrbit* orbit = nullptr, double tol = kCheckTol) {
  using namespace lemma_detail;
  for (auto d : rho.dims())
    if (d > 3) throw DimensionError("lemma checks support subsystems of dimension at most 3");
  const Split ab{{0}, {1}};
  const bool tripartite = rule == Rule::DataProcessingMin || rule == Rule::DataProcessingMax ||
                          rule == Rule::ChainMaxUpper || rule == Rule::ChainMaxLower;
  if (tripartite && rho.num_subsystems() < 3) throw DimensionError(to_string(rule) + " needs a tripartite state");
  if (!tripartite && rho.num_subsystems() < 2) throw DimensionError(to_string(rule) + " needs a bipartite state");

  switch (rule) {
    case Rule::DataProcessingMin: {
      check_smooth(p.eps, "eps");
      return report(rule, h_min_smooth(rho, Split{{0}, {1, 2}}, p.eps), h_min_smooth(rho, ab, p.eps), p, tol);
    }
    case Rule::DataProcessingMax: {
      check_smooth(p.eps, "eps");
      return report(rule, h_max_smooth(rho, Split{{0}, {1, 2}}, p.eps), h_max_smooth(rho, ab, p.eps), p, tol);
    }
    case Rule::ChainMaxUpper: {
      need(p.eta > 0.0, "eta must be positive");
      check_smooth(p.eps, "eps");
      check_smooth(p.delta, "delta");
      check_smooth(p.eps + 2.0 * p.delta + p.eta, "eps + 2 delta + eta");
      const double lhs = h_max_smooth(rho, Split{{0, 1}, {2}}, p.eps + 2.0 * p.delta + p.eta);
      const double rhs = h_max_smooth(rho, Split{{1}, {2}}, p.delta) + h_max_smooth(rho, Split{{0}, {1, 2}}, p.eps) +
                         log2_two_over_eta_sq(p.eta);
      return report(rule, lhs, rhs, p, tol);
    }
    case Rule::ChainMaxLower: {
      need(p.eta > 0.0, "eta must be positive");
      check_smooth(p.eps, "eps");
      check_smooth(p.delta, "delta");
      check_smooth(p.eps + 2.0 * p.delta + 2.0 * p.eta, "eps + 2 delta + 2 eta");
      const double lhs = h_min_smooth(rho, Split{{1}, {2}}, p.delta) +
                         h_max_smooth(rho, Split{{0}, {1, 2}}, p.eps + 2.0 * p.delta + 2.0 * p.eta) -
                         3.0 * log2_two_over_eta_sq(p.eta);
      const double rhs = h_max_smooth(rho, Split{{0, 1}, {2}}, p.eps);
      return report(rule, lhs, rhs, p, tol);
    }
    case Rule::MinMaxConversion: {
      need(p.eps >= 0.0 && p.delta >= 0.0 && p.eps + p.delta < 1.0, "need eps, delta >= 0 and eps + delta < 1");
      const double s = p.eps + p.delta;
      return report(rule, h_min_smooth(rho, ab, p.eps), h_max_smooth(rho, ab, p.delta) - std::log2(1.0 - s * s), p,
                    tol);
    }
    case Rule::MinMaxConversionSharp: {
      need(p.alpha >= 0.0 && p.beta >= 0.0 && p.alpha + p.beta < std::numbers::pi / 2.0,
           "need alpha, beta >= 0 and alpha + beta < pi/2");
      const double c = std::cos(p.alpha + p.beta);
      return report(rule, h_min_smooth(rho, ab, std::sin(p.alpha)),
                    h_max_smooth(rho, ab, std::sin(p.beta)) - std::log2(c * c), p, tol);
    }
    case Rule::MaxMinConversion: {
      need(p.delta > 0.0 && p.delta < 1.0, "delta must lie in (0,1)");
      return report(rule, h_max_smooth(rho, ab, p.delta), h_min_smooth(rho, ab, 1.0 - 0.25 * p.delta * p.delta), p,
                    tol);
    }
    case Rule::QuasiConcavity: {
      if (orbit == nullptr) throw DomainError("QuasiConcavity needs a local-unitary orbit");
      check_smooth(p.eps, "eps");
      const double eps_hat = p.eps * std::sqrt(2.0 - p.eps * p.eps);
      check_smooth(eps_hat, "eps_hat");
      auto base = partial_trace(rho, {0, 1});
      auto mix = orbit_mixture(base, *orbit);
      return report(rule, h_max_smooth(base, ab, eps_hat), h_max_smooth(mix, ab, p.eps), p, tol);
    }
    case Rule::AepMin:
    case Rule::AepMax: {
      need(p.eps > 0.0 && p.eps < 1.0, "eps must lie in (0,1)");
      need(p.n >= 1, "n must be positive");
      auto base = partial_trace(rho, {0, 1});
      auto bounds = aep_bounds(base, ab, p.n, p.eps);
      auto [grouped, split] = iid_grouped(base, p.n);
      if (rule == Rule::AepMin) return report(rule, bounds.lower, h_min_smooth(grouped, split, p.eps), p, tol);
      return report(rule, h_max_smooth(grouped, split, p.eps), bounds.upper, p, tol);
    }
  }
  throw DomainError("unknown rule");
}

/// Parameter record as `key=value` pairs separated by ';', listing only the
/// fields the rule reads.
inline std::string format_params(Rule rule, const LemmaParams& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  switch (rule) {
    case Rule::DataProcessingMin:
    case Rule::DataProcessingMax:
    case Rule::QuasiConcavity: os << "eps=" << p.eps; break;
    case Rule::ChainMaxUpper:
    case Rule::ChainMaxLower: os << "eps=" << p.eps << ";delta=" << p.delta << ";eta=" << p.eta; break;
    case Rule::MinMaxConversion: os << "eps=" << p.eps << ";delta=" << p.delta; break;
    case Rule::MinMaxConversionSharp: os << "alpha=" << p.alpha << ";beta=" << p.beta; break;
    case Rule::MaxMinConversion: os << "delta=" << p.delta; break;
    case Rule::AepMin:
    case Rule::AepMax: os << "eps=" << p.eps << ";n=" << p.n; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Harness

struct HarnessConfig {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  Dims dims{2, 2, 2};
  std::vector<double> grid{0.05, 0.1, 0.2, 0.4};
  std::vector<Rule> rules{Rule::DataProcessingMin, Rule::DataProcessingMax, Rule::ChainMaxUpper,
                          Rule::ChainMaxLower,     Rule::MinMaxConversion,  Rule::MinMaxConversionSharp,
                          Rule::MaxMinConversion,  Rule::QuasiConcavity};
  std::size_t aep_max_n = 2;
  double check_tol = kCheckTol;
};

struct HarnessRow {
  std::uint64_t seed;
  InequalityReport report;
};

namespace lemma_detail {

inline bool in_domain(Rule rule, const LemmaParams& p) {
  switch (rule) {
    case Rule::ChainMaxUpper: return p.eps + 2.0 * p.delta + p.eta < 1.0;
    case Rule::ChainMaxLower: return p.eps + 2.0 * p.delta + 2.0 * p.eta < 1.0;
    case Rule::MinMaxConversion: return p.eps + p.delta < 1.0;
    case Rule::MinMaxConversionSharp: return p.alpha + p.beta < std::numbers::pi / 2.0;
    default: return true;
  }
}

inline LocalOrbit random_orbit(std::size_t da, std::size_t db, Rng& rng) {
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_real_distribution<double> u01(0.05, 1.0);
  LocalOrbit o;
  const int k = count(rng);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    o.weights.push_back(u01(rng));
    total += o.weights.back();
    o.u.push_back(haar_unitary(da, rng));
    o.v.push_back(haar_unitary(db, rng));
  }
  for (double& w : o.weights) w /= total;
  return o;
}

}  // namespace lemma_detail

/// Runs every configured rule on `trials` seeded instances. Instance t of a
/// rule uses seed `seed + t`; the state rank cycles through 1..dim so pure and
/// full-rank states both appear.
inline std::vector<HarnessRow> run_harness(const HarnessConfig& cfg) {
  using namespace lemma_detail;
  if (cfg.dims.size() != 3) throw DimensionError("harness expects three subsystem dimensions");
  if (cfg.grid.empty()) throw DomainError("parameter grid is empty");
  const std::size_t d = product(cfg.dims);
  std::vector<HarnessRow> rows;
  for (Rule rule : cfg.rules) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t seed = cfg.seed + t;
      Rng rng(seed);
      std::uniform_int_distribution<std::size_t> pick(0, cfg.grid.size() - 1);
      const bool aep = rule == Rule::AepMin || rule == Rule::AepMax;
      const std::size_t rank = aep ? 1 + t % (cfg.dims[0] * cfg.dims[1]) : 1 + t % d;
      DensityOperator rho(random_density_matrix(d, rank, rng), cfg.dims);
      if (aep) rho = partial_trace(rho, {0, 1});

      LemmaParams p;
      bool found = false;
      for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        p.eps = cfg.grid[pick(rng)];
        p.delta = cfg.grid[pick(rng)];
        p.eta = cfg.grid[pick(rng)];
        p.alpha = std::asin(std::min(cfg.grid[pick(rng)], 0.999));
        p.beta = std::asin(std::min(cfg.grid[pick(rng)], 0.999));
        p.n = 1 + t % cfg.aep_max_n;
        found = in_domain(rule, p);
      }
      if (!found) continue;
      std::optional<LocalOrbit> orbit;
      if (rule == Rule::QuasiConcavity) orbit = random_orbit(cfg.dims[0], cfg.dims[1], rng);
      rows.push_back({seed, verify_inequality(rule, rho, p, orbit ? &*orbit : nullptr, cfg.check_tol)});
    }
  }
  return rows;
}

inline void write_harness_csv(std::ostream& os, const std::vector<HarnessRow>& rows) {
  os << "rule,seed,params,lhs,rhs,slack,holds\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << to_string(r.report.rule) << ',' << r.seed << ',' << format_params(r.report.rule, r.report.params) << ','
       << r.report.lhs << ',' << r.report.rhs << ',' << r.report.slack << ',' << (r.report.holds ? "true" : "false")
       << '\n';
  }
}

}  // namespace secrecy
