#pragma once

// Finite-blocklength strong converse for degraded channels, a numerical audit
// of the privacy-bound chain on explicit codes, and the (eps, delta) regions.

#include <iomanip>
#include <ostream>

#include "secrecy/capacity.hpp"
#include "secrecy/codes.hpp"

namespace secrecy {

// ---------------------------------------------------------------------------
// Regions

enum class Region { Converse, NoGo, Gap };

inline std::string to_string(Region r) {
  switch (r) {
    case Region::Converse: return "Converse";
    case Region::NoGo: return "NoGo";
    case Region::Gap: return "Gap";
  }
  return "?";
}

/// Ties closer than this to a boundary count as on the boundary.
inline constexpr double kRegionTieTol = 1e-12;

struct RegionVerdict {
  Region label;
  double line;    // eps + 2 delta
  double circle;  // eps^2 + delta^2
};

/// Converse iff eps + 2 delta < 1; NoGo iff eps^2 + delta^2 >= 1; Gap otherwise.
/// The line itself belongs to the non-converse side, the circle to NoGo.
inline RegionVerdict classify_region(double eps, double delta) {
  if (!(eps >= 0.0 && eps <= 1.0 && delta >= 0.0 && delta <= 1.0))
    throw DomainError("region classification needs eps, delta in [0,1]");
  RegionVerdict v{Region::Gap, eps + 2.0 * delta, eps * eps + delta * delta};
  if (v.line < 1.0 - kRegionTieTol) v.label = Region::Converse;
  else if (v.circle >= 1.0 - kRegionTieTol) v.label = Region::NoGo;
  return v;
}

/// (grid+1)^2 rows over eps = i/grid, delta = j/grid, eps outermost.
inline void emit_region_csv(std::ostream& os, std::size_t grid) {
  if (grid == 0) throw DomainError("region grid must be positive");
  os << "epsilon,delta,region\n" << std::setprecision(17);
  for (std::size_t i = 0; i <= grid; ++i)
    for (std::size_t j = 0; j <= grid; ++j) {
      const double e = static_cast<double>(i) / static_cast<double>(grid);
      const double d = static_cast<double>(j) / static_cast<double>(grid);
      os << e << ',' << d << ',' << to_string(classify_region(e, d).label) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Finite-n converse

struct OutsideConverseRegion {
  double eps;
  double delta;
  double line;  // eps + 2 delta >= 1
};

struct ConverseOptions {
  std::optional<double> eta;         // default (1 - eps - 2 delta) / 6
  double hashing_constant = 2.0;     // c_h in c_h log(n+1)
  std::optional<double> capacity;    // P(W) when already known
  AscentOptions ascent;
};

/// Additive terms of the bound beyond n P(W), in bits.
struct ConverseTerms {
  double aep_upper = 0.0;       // mu_up sqrt(n (|X| ln(n+1) + ln(64/eta^2)))
  double aep_lower = 0.0;       // mu_low sqrt(n ln(2/eps'))
  double conversion_upper = 0.0;
  double conversion_lower = 0.0;
  double chain = 0.0;           // 4 log(2/eta^2)
  double types = 0.0;           // |X| log(n+1)
  double hashing = 0.0;         // c_h log(n+1)
  double total() const {
    return aep_upper + aep_lower + conversion_upper + conversion_lower + chain + types + hashing;
  }
};

struct ConverseBound {
  std::size_t n = 0;
  double eps = 0.0, delta = 0.0;
  double capacity = 0.0;
  double value = 0.0;                // general encoders, hashing surcharge included
  double value_constant_type = 0.0;  // encoders on one type class, no surcharge
  double value_shifted = 0.0;        // surcharge plus errors moved to (eps + eta, delta + 2 eta)
  double eta = 0.0, lambda = 0.0, lambda_hat = 0.0;
  double mu_up = 0.0, mu_low = 0.0;
  bool mu_common_support = false;
  double hashing_constant = 0.0;
  ConverseTerms terms;               // of `value`
  ConverseTerms terms_constant_type;
  ConverseTerms terms_shifted;
};

namespace converse_detail {

inline double min_positive_eigenvalue(const ComplexMatrix& m) {
  auto s = support(m);
  return s.rank() == 0 ? 1.0 : s.values.minCoeff();
}

inline ComplexMatrix support_projector(const ComplexMatrix& m) {
  auto s = support(m, 1e-9);
  return s.vectors * s.vectors.adjoint();
}

inline bool common_support(const std::vector<ComplexMatrix>& ms) {
  const ComplexMatrix p0 = support_projector(ms.at(0));
  for (std::size_t k = 1; k < ms.size(); ++k)
    if ((support_projector(ms[k]) - p0).cwiseAbs().maxCoeff() > 1e-7) return false;
  return true;
}

/// mu = log 1/lambda_min(rho^{E'}) + log 1/lambda_min(rho^{E'F}) on supports.
inline double mu_of(const ComplexMatrix& ef, std::size_t de, std::size_t df) {
  return log_inverse_min_eigenvalue(partial_trace(ef, {de, df}, {0})) + log_inverse_min_eigenvalue(ef);
}

struct MuValues {
  double up;
  double low;
  bool common;
};

inline MuValues mu_values(const CqqWiretapChannel& w, const DegradedStructure& s, std::size_t n) {
  std::vector<ComplexMatrix> ef, e;
  for (std::size_t x = 0; x < w.alphabet(); ++x) {
    ef.push_back(s.omega(w, x).matrix());
    e.push_back(partial_trace(ef.back(), {s.dim_e_prime, s.dim_f}, {0}));
  }
  MuValues mu{0.0, 0.0, common_support(ef) && common_support(e)};
  for (const auto& m : ef) mu.low = std::max(mu.low, mu_of(m, s.dim_e_prime, s.dim_f));
  if (mu.common) {
    // Theta_P >= min_x lambda_min(omega_x) on the shared support, for every P.
    double le = 1.0, lef = 1.0;
    for (std::size_t x = 0; x < ef.size(); ++x) {
      le = std::min(le, min_positive_eigenvalue(e[x]));
      lef = std::min(lef, min_positive_eigenvalue(ef[x]));
    }
    mu.up = -std::log2(le) - std::log2(lef);
    return mu;
  }
  // Otherwise the maximum over all types with denominator n.
  const std::size_t k = w.alphabet();
  double count = 1.0;
  for (std::size_t i = 1; i < k; ++i) count = count * static_cast<double>(n + i) / static_cast<double>(i);
  if (count > 1e6) throw BudgetError("too many types to bound the AEP constant");
  std::vector<std::size_t> c(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == k) {
      c[i] = left;
      ComplexMatrix theta = ComplexMatrix::Zero(ef[0].rows(), ef[0].cols());
      for (std::size_t x = 0; x < k; ++x) theta += (static_cast<double>(c[x]) / static_cast<double>(n)) * ef[x];
      mu.up = std::max(mu.up, mu_of(theta, s.dim_e_prime, s.dim_f));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n);
  return mu;
}

/// Terms of the constant-type bound at (eps, delta) with chain parameter eta.
inline ConverseTerms constant_type_terms(std::size_t n, double eps, double delta, double eta, std::size_t alphabet,
                                         const MuValues& mu, double& lambda, double& lambda_hat) {
  const double nd = static_cast<double>(n);
  const double ln_n1 = std::log(nd + 1.0);
  lambda = eps + 2.0 * delta + 5.0 * eta;
  if (!(lambda < 1.0)) throw DomainError("eps + 2 delta + 5 eta must stay below one");
  lambda_hat = lambda * std::sqrt(2.0 - lambda * lambda);
  const double a = eta * eta * std::pow(nd + 1.0, -static_cast<double>(alphabet));
  const double eps_low = (1.0 - lambda_hat) / 2.0;
  const double mid = (1.0 + lambda_hat) / 2.0;
  ConverseTerms t;
  t.aep_upper = mu.up * std::sqrt(nd * (static_cast<double>(alphabet) * ln_n1 + std::log(64.0 / (eta * eta))));
  t.aep_lower = mu.low * std::sqrt(nd * std::log(2.0 / eps_low));
  t.conversion_upper = -std::log2(a / 16.0 - a * a / 1024.0);
  t.conversion_lower = -std::log2(1.0 - mid * mid);
  t.chain = 4.0 * std::log2(2.0 / (eta * eta));
  t.types = static_cast<double>(alphabet) * std::log2(nd + 1.0);
  return t;
}

}  // namespace converse_detail

/// B(n, eps, delta) >= log M(n, eps, delta) for a degraded channel.
///
/// General encoders are reduced to a single type class by hashing out part of
/// the message, charged as c_h log(n+1) bits on top of the constant-type bound.
/// The reduction also moves the errors to (eps + theta, delta + 2 theta); that
/// variant, with theta = eta and the chain parameter recomputed, is reported
/// separately as value_shifted.
inline std::variant<ConverseBound, OutsideConverseRegion> finite_n_converse(const CqqWiretapChannel& w,
                                                                             const DegradedStructure& s, std::size_t n,
                                                                             double eps, double delta,
                                                                             const ConverseOptions& opt = {}) {
  if (n == 0) throw DomainError("n must be positive");
  if (!(eps >= 0.0 && delta >= 0.0 && eps <= 1.0 && delta <= 1.0))
    throw DomainError("eps and delta must lie in [0,1]");
  if (!(eps + 2.0 * delta < 1.0 - kRegionTieTol)) return OutsideConverseRegion{eps, delta, eps + 2.0 * delta};
  ConverseBound b;
  b.n = n;
  b.eps = eps;
  b.delta = delta;
  b.hashing_constant = opt.hashing_constant;
  b.eta = opt.eta.value_or((1.0 - eps - 2.0 * delta) / 6.0);
  if (!(b.eta > 0.0)) throw DomainError("eta must be positive");
  b.capacity = opt.capacity ? *opt.capacity : private_capacity_degraded(w, s, opt.ascent).value;
  auto mu = converse_detail::mu_values(w, s, n);
  b.mu_up = mu.up;
  b.mu_low = mu.low;
  b.mu_common_support = mu.common;
  const double nd = static_cast<double>(n);

  b.terms_constant_type =
      converse_detail::constant_type_terms(n, eps, delta, b.eta, w.alphabet(), mu, b.lambda, b.lambda_hat);
  b.value_constant_type = nd * b.capacity + b.terms_constant_type.total();

  const double theta = b.eta;
  const double eps2 = eps + theta, delta2 = delta + 2.0 * theta;
  const double eta2 = (1.0 - eps2 - 2.0 * delta2) / 6.0;
  double lambda2 = 0.0, lambda_hat2 = 0.0;
  b.terms = b.terms_constant_type;
  b.terms.hashing = opt.hashing_constant * std::log2(nd + 1.0);
  b.value = nd * b.capacity + b.terms.total();
  if (eps2 + 2.0 * delta2 < 1.0) {
    b.terms_shifted =
        converse_detail::constant_type_terms(n, eps2, delta2, eta2, w.alphabet(), mu, lambda2, lambda_hat2);
    b.terms_shifted.hashing = b.terms.hashing;
    b.value_shifted = nd * b.capacity + b.terms_shifted.total();
  } else {
    b.value_shifted = std::numeric_limits<double>::infinity();
  }
  return b;
}

// ---------------------------------------------------------------------------
// Audit of the privacy-bound chain on an explicit code

struct AuditLine {
  std::string name;
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
  bool holds;
};

struct AuditReport {
  double eps;    // measured transmission error used for smoothing
  double delta;  // measured privacy error
  double eta;
  double lambda;
  std::vector<AuditLine> lines;
  bool all_hold() const {
    return std::all_of(lines.begin(), lines.end(), [](const AuditLine& l) { return l.holds; });
  }
};

/// omega^{U X^n E'^n F^n} of a code sent through the dilated degrading map.
inline DensityOperator code_dilated_state(const WiretapCode& code, const CqqWiretapChannel& w,
                                          const DegradedStructure& s) {
  validate_code(code, w);
  const std::size_t n = code.n, m = code.m;
  const std::size_t words = ipow(w.alphabet(), n);
  const std::size_t de = ipow(s.dim_e_prime, n), df = ipow(s.dim_f, n);
  check_budget(m * words * de * df, "audit state");
  std::vector<ComplexMatrix> letter;
  for (std::size_t x = 0; x < w.alphabet(); ++x) letter.push_back(s.omega(w, x).matrix());
  Dims grouped;
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < n; ++k) {
    grouped.push_back(s.dim_e_prime);
    grouped.push_back(s.dim_f);
  }
  for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k);
  for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k + 1);

  const std::size_t blk = de * df;
  ComplexMatrix out = ComplexMatrix::Zero(m * words * blk, m * words * blk);
  for (std::size_t c = 0; c < words; ++c) {
    double used = 0.0;
    for (std::size_t u = 0; u < m; ++u) used += code.encoder(u, c);
    if (used == 0.0) continue;
    ComplexMatrix st = ComplexMatrix::Identity(1, 1);
    for (auto x : word_letters(c, w.alphabet(), n)) st = kron(st, letter[x]);
    st = permute_subsystems(st, grouped, perm);
    for (std::size_t u = 0; u < m; ++u) {
      const double p = code.encoder(u, c) / static_cast<double>(m);
      if (p == 0.0) continue;
      const std::size_t r = (u * words + c) * blk;
      out.block(r, r, blk, blk) = p * st;
    }
  }
  return DensityOperator(hermitian_part(out), {m, words, de, df});
}

/// Evaluates each line of
///   log M <= H_min^d(U|E^n) - H_max^e(U|E'^n F^n)
///         =  H_min^d(U|E'^n) - H_max^e(U|E'^n F^n)
///         <= H_max^eta(F^n|E'^n) - H_max^l(F^n|E'^n U) + 4 log(2/eta^2)
///         <= H_max^eta(F^n|E'^n) - H_max^l(F^n|E'^n X^n) + 4 log(2/eta^2)
/// with (e, d) the measured errors of the code and l = e + 2d + 5 eta.
inline AuditReport audit_privacy_bound_chain(const WiretapCode& code, const CqqWiretapChannel& w,
                                             const DegradedStructure& s, double eta, double tol = 1e-6) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
  auto omega = code_dilated_state(code, w, s);
  WiretapCode c = code;
  if (!c.decoder) c.decoder = optimal_decoder(c.encoder, w, c.n);
  auto perf = evaluate_code(c, w);
  auto snap = [](double e) { return e < kSmoothingFloor ? 0.0 : e; };
  AuditReport rep;
  rep.eps = snap(perf.transmission_error);
  rep.delta = snap(perf.privacy_error);
  rep.eta = eta;
  rep.lambda = rep.eps + 2.0 * rep.delta + 5.0 * eta;
  if (!(rep.lambda < 1.0)) throw DomainError("measured eps + 2 delta + 5 eta must stay below one");

  auto st = joint_state(c, w);
  // omega subsystems: 0 U, 1 X^n, 2 E'^n, 3 F^n
  const double hmin_e = h_min_smooth(st.u_e, Split{{0}, {1}}, rep.delta);
  const double hmin_ep = h_min_smooth(omega, Split{{0}, {2}}, rep.delta);
  const double hmax_u_ef = h_max_smooth(omega, Split{{0}, {2, 3}}, rep.eps);
  const double hmax_f_e = h_max_smooth(omega, Split{{3}, {2}}, eta);
  const double hmax_f_eu = h_max_smooth(omega, Split{{3}, {0, 2}}, rep.lambda);
  const double hmax_f_ex = h_max_smooth(omega, Split{{3}, {1, 2}}, rep.lambda);
  const double chain_cost = 4.0 * std::log2(2.0 / (eta * eta));

  const double v0 = std::log2(static_cast<double>(c.m));
  const double v1 = hmin_e - hmax_u_ef;
  const double v2 = hmin_ep - hmax_u_ef;
  const double v3 = hmax_f_e - hmax_f_eu + chain_cost;
  const double v4 = hmax_f_e - hmax_f_ex + chain_cost;
  auto line = [&](const char* name, double l, double r) {
    rep.lines.push_back({name, l, r, r - l, r - l >= -tol});
  };
  line("trivial-converse", v0, v1);
  line("degradability", v1, v2);
  line("chain-rules", v2, v3);
  line("data-processing", v3, v4);
  return rep;
}

}  // namespace secrecy
