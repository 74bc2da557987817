#pragma once

// Single-letter capacity formulas for cqq wiretap channels, maximized over
// input distributions by projected-gradient ascent on the simplex.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "secrecy/channel.hpp"

namespace secrecy {

struct CapacityResult {
  double value = 0.0;
  std::vector<double> distribution;  // P_X
  RealMatrix joint;                  // P_{UX} (rows u), general form only
  double gradient_norm = 0.0;        // projected gradient at the optimizer
  double multistart_spread = 0.0;    // max - min over starts
  std::size_t starts = 0;
  double grid_value = std::numeric_limits<double>::quiet_NaN();  // |X| = 2 only
};

struct AscentOptions {
  double fd_step = 1e-6;
  double min_improvement = 1e-10;
  double gradient_tol = 1e-9;
  int max_iterations = 5000;
  std::size_t multistarts = 5;
  std::uint64_t seed = 0;
  double grid_step = 1e-4;
};

/// Euclidean projection onto the probability simplex.
inline std::vector<double> project_simplex(const std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::max(v[k] - theta, 0.0);
  return out;
}

namespace capacity_detail {

using Objective = std::function<double(const std::vector<double>&)>;

/// Central differences, one-sided where a coordinate is within h of zero.
inline std::vector<double> gradient(const Objective& f, const std::vector<double>& p, double h) {
  std::vector<double> g(p.size());
  std::vector<double> q(p);
  const double f0 = f(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= h) {
      q[i] = p[i] + h;
      const double fp = f(q);
      q[i] = p[i] - h;
      const double fm = f(q);
      g[i] = (fp - fm) / (2.0 * h);
    } else {
      q[i] = p[i] + h;
      g[i] = (f(q) - f0) / h;
    }
    q[i] = p[i];
  }
  return g;
}

inline double gradient_mapping_norm(const std::vector<double>& p, const std::vector<double>& g) {
  std::vector<double> s(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) s[i] = p[i] + g[i];
  auto q = project_simplex(s);
  double n = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) n += (q[i] - p[i]) * (q[i] - p[i]);
  return std::sqrt(n);
}

struct Ascent {
  std::vector<double> p;
  double value;
  double gradient_norm;
};

inline Ascent ascend(const Objective& f, std::vector<double> p, const AscentOptions& opt) {
  double fp = f(p);
  double step = 1.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    auto g = gradient(f, p, opt.fd_step);
    if (gradient_mapping_norm(p, g) <= opt.gradient_tol) break;
    bool moved = false;
    double t = std::min(1e3, 4.0 * step);
    for (; t > 1e-14; t *= 0.5) {
      std::vector<double> s(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) s[i] = p[i] + t * g[i];
      auto q = project_simplex(s);
      const double fq = f(q);
      if (fq > fp) {
        const double gain = fq - fp;
        p = std::move(q);
        fp = fq;
        step = t;
        moved = gain >= opt.min_improvement;
        if (!moved) {
          // tiny gain: stop only once the projected gradient is small as well
          moved = gradient_mapping_norm(p, gradient(f, p, opt.fd_step)) > 1e-7;
        }
        break;
      }
    }
    if (!moved) break;
  }
  return {p, fp, gradient_mapping_norm(p, gradient(f, p, opt.fd_step))};
}

inline std::vector<double> random_simplex_point(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) s += (v = e(rng));
  for (auto& v : p) v /= s;
  return p;
}

/// Multistart ascent; the first start is the uniform distribution.
inline CapacityResult maximize(const Objective& f, std::size_t k, const AscentOptions& opt) {
  CapacityResult res;
  Rng rng(opt.seed);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t s = 0; s < std::max<std::size_t>(1, opt.multistarts); ++s) {
    std::vector<double> p0 = s == 0 ? std::vector<double>(k, 1.0 / static_cast<double>(k)) : random_simplex_point(k, rng);
    auto a = ascend(f, p0, opt);
    lo = std::min(lo, a.value);
    if (a.value > hi) {
      hi = a.value;
      res.distribution = a.p;
      res.gradient_norm = a.gradient_norm;
    }
    ++res.starts;
  }
  res.value = hi;
  res.multistart_spread = hi - lo;
  if (k == 2 && opt.grid_step > 0.0) {
    const auto steps = static_cast<long>(std::llround(1.0 / opt.grid_step));
    double best = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= steps; ++i) {
      const double q = static_cast<double>(i) / static_cast<double>(steps);
      best = std::max(best, f({q, 1.0 - q}));
    }
    res.grid_value = best;
  }
  return res;
}

/// tr(m) S(m / tr m) for an unnormalized PSD m.
inline double weighted_entropy(const ComplexMatrix& m) {
  const double q = m.trace().real();
  if (q <= 0.0) return 0.0;
  return operator_entropy(m) + q * std::log2(q);
}

inline double conditional_entropy_fe(const ComplexMatrix& fe, std::size_t de, std::size_t df) {
  // operator on E' (x) F
  return operator_entropy(fe) - operator_entropy(partial_trace(fe, {de, df}, {0}));
}

inline void check_distribution_size(std::size_t k) {
  if (k == 0) throw DimensionError("empty alphabet");
}

}  // namespace capacity_detail

/// I(X:F|E') for the cq state sum_x P(x) |x><x| (x) V rho_x^B V^dagger.
inline double private_information(const CqqWiretapChannel& w, const DegradedStructure& s, const std::vector<double>& p) {
  using capacity_detail::conditional_entropy_fe;
  const std::size_t de = s.dim_e_prime, df = s.dim_f;
  ComplexMatrix avg = ComplexMatrix::Zero(de * df, de * df);
  double each = 0.0;
  for (std::size_t x = 0; x < w.alphabet(); ++x) {
    if (p[x] == 0.0) continue;
    ComplexMatrix om = s.omega(w, x).matrix();
    avg += p[x] * om;
    each += p[x] * conditional_entropy_fe(om, de, df);
  }
  return conditional_entropy_fe(avg, de, df) - each;
}

/// Holevo quantity S(sum P rho_x) - sum P S(rho_x).
inline double holevo_quantity(const std::vector<ComplexMatrix>& states, const std::vector<double>& p) {
  ComplexMatrix avg = ComplexMatrix::Zero(states.at(0).rows(), states.at(0).cols());
  double each = 0.0;
  for (std::size_t x = 0; x < states.size(); ++x) {
    avg += p[x] * states[x];
    each += p[x] * operator_entropy(states[x]);
  }
  return operator_entropy(avg) - each;
}

/// I(U:B) - I(U:E) for the joint distribution P_{UX} given row-major, rows u.
inline double p1_objective(const CqqWiretapChannel& w, std::size_t aux, const std::vector<double>& puv) {
  using capacity_detail::weighted_entropy;
  const std::size_t nx = w.alphabet();
  auto mutual = [&](const std::vector<ComplexMatrix>& rho) {
    ComplexMatrix avg = ComplexMatrix::Zero(rho[0].rows(), rho[0].cols());
    double each = 0.0;
    for (std::size_t u = 0; u < aux; ++u) {
      ComplexMatrix ru = ComplexMatrix::Zero(rho[0].rows(), rho[0].cols());
      for (std::size_t x = 0; x < nx; ++x) ru += puv[u * nx + x] * rho[x];
      avg += ru;
      each += weighted_entropy(ru);
    }
    return operator_entropy(avg) - each;
  };
  std::vector<ComplexMatrix> bob, eve;
  for (std::size_t x = 0; x < nx; ++x) {
    bob.push_back(w.bob(x));
    eve.push_back(w.eve(x));
  }
  return mutual(bob) - mutual(eve);
}

/// max_P I(X:F|E') for a degraded channel.
inline CapacityResult private_capacity_degraded(const CqqWiretapChannel& w, const DegradedStructure& s,
                                                const AscentOptions& opt = {}) {
  capacity_detail::check_distribution_size(w.alphabet());
  auto f = [&](const std::vector<double>& p) { return private_information(w, s, p); };
  auto res = capacity_detail::maximize(f, w.alphabet(), opt);
  if (!std::isnan(res.grid_value) && res.grid_value > res.value) res.value = res.grid_value;
  return res;
}

/// Holevo capacity of x -> rho_x.
inline CapacityResult classical_capacity_cq(const std::vector<ComplexMatrix>& states, const AscentOptions& opt = {}) {
  capacity_detail::check_distribution_size(states.size());
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (states[x].rows() != states[0].rows() || states[x].cols() != states[x].rows())
      throw DimensionError("cq channel states have inconsistent shapes");
    DensityOperator check(states[x]);  // validates PSD and trace
    if (!check.normalized()) throw ValidationError("cq channel state is not normalized", {x});
  }
  auto f = [&](const std::vector<double>& p) { return holevo_quantity(states, p); };
  auto res = capacity_detail::maximize(f, states.size(), opt);
  if (!std::isnan(res.grid_value) && res.grid_value > res.value) res.value = res.grid_value;
  return res;
}

inline std::vector<ComplexMatrix> bob_states(const CqqWiretapChannel& w) {
  std::vector<ComplexMatrix> out;
  for (std::size_t x = 0; x < w.alphabet(); ++x) out.push_back(w.bob(x));
  return out;
}

/// Best value of I(U:B) - I(U:E) found by seeded multistart ascent over
/// P_{UX} with |U| = aux_size. A lower bound on P^(1)(W), not a certified
/// maximum. The first start places U = X on the uniform input.
inline CapacityResult p1_general_lower_bound(const CqqWiretapChannel& w, std::size_t aux_size,
                                             std::size_t multistarts = 5, std::uint64_t seed = 0) {
  require_valid(w);
  if (aux_size == 0) throw DomainError("aux_size must be positive");
  const std::size_t nx = w.alphabet(), k = aux_size * nx;
  CapacityResult res;
  if (aux_size == 1) {
    res.value = 0.0;
    res.joint = RealMatrix::Constant(1, static_cast<Eigen::Index>(nx), 1.0 / static_cast<double>(nx));
    res.distribution.assign(nx, 1.0 / static_cast<double>(nx));
    res.starts = 1;
    return res;
  }
  auto f = [&](const std::vector<double>& p) { return p1_objective(w, aux_size, p); };
  Rng rng(seed);
  AscentOptions opt;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> best;
  for (std::size_t s = 0; s < std::max<std::size_t>(1, multistarts); ++s) {
    std::vector<double> p0(k, 0.0);
    if (s == 0) {
      for (std::size_t x = 0; x < nx; ++x) p0[(x % aux_size) * nx + x] += 1.0 / static_cast<double>(nx);
      // keep every coordinate strictly inside so no direction is blocked
      for (auto& v : p0) v = 0.999 * v + 0.001 / static_cast<double>(k);
    } else {
      p0 = capacity_detail::random_simplex_point(k, rng);
    }
    auto a = capacity_detail::ascend(f, p0, opt);
    lo = std::min(lo, a.value);
    if (a.value > hi) {
      hi = a.value;
      best = a.p;
      res.gradient_norm = a.gradient_norm;
    }
    ++res.starts;
  }
  res.value = hi;
  res.multistart_spread = hi - lo;
  res.joint = RealMatrix(static_cast<Eigen::Index>(aux_size), static_cast<Eigen::Index>(nx));
  res.distribution.assign(nx, 0.0);
  for (std::size_t u = 0; u < aux_size; ++u)
    for (std::size_t x = 0; x < nx; ++x) {
      res.joint(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(x)) = best[u * nx + x];
      res.distribution[x] += best[u * nx + x];
    }
  return res;
}

}  // namespace secrecy
