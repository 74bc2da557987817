#pragma once

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "secrecy/secrecy.hpp"

namespace secrecy::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kInfeasible = 2, kSolver = 3 };

namespace detail {

inline std::vector<std::size_t> parse_index_group(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad subsystem index '" + tok + "' in --split");
    out.push_back(static_cast<std::size_t>(std::stoul(tok)));
  }
  if (out.empty()) throw ParseError("empty subsystem group in --split");
  return out;
}

/// "A,B[,C]": A is conditioned on B; C is traced out. Groups may join indices with '+'.
inline Split parse_split(const std::string& s) {
  std::vector<std::string> fields;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) fields.push_back(tok);
  if (fields.size() < 2 || fields.size() > 3) throw ParseError("--split expects A,B or A,B,C");
  Split sp;
  sp.a = parse_index_group(fields[0]);
  sp.b = parse_index_group(fields[1]);
  // C is traced out like every unlisted subsystem; it is only checked for overlap
  std::vector<std::size_t> all = sp.a;
  all.insert(all.end(), sp.b.begin(), sp.b.end());
  if (fields.size() == 3) {
    auto c = parse_index_group(fields[2]);
    all.insert(all.end(), c.begin(), c.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw ParseError("--split groups must be disjoint");
  return sp;
}

inline Dims parse_dims(const std::string& s) {
  Dims d;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad dimension '" + tok + "' in --dims");
    d.push_back(static_cast<std::size_t>(std::stoul(tok)));
  }
  return d;
}

inline void print_distribution(std::ostream& out, const std::vector<double>& p) {
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << p[i];
  out << ")";
}

}  // namespace detail

/// Runs one command line; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-blocklength secrecy tools for cqq wiretap channels", "secrecy"};
  app.require_subcommand(1);

  std::string channel_path, state_path, code_path, output_path, which = "hmin", split = "0,1", dims_text = "2,2,2";
  std::string mode = "optimized";
  std::size_t n = 1, trials = 200, grid = 10, aux_size = 0, max_m = 4;
  std::uint64_t seed = 1;
  double eps = 0.0, delta = 0.0, smooth = 0.0, grid_step = 0.1, hashing = 2.0, eta = 0.0;

  auto* validate = app.add_subcommand("validate", "Check a channel file letter by letter");
  validate->add_option("channel", channel_path, "Channel JSON file")->required();

  auto* degrade = app.add_subcommand("degrade-check", "Certify degradedness and print the dilation");
  degrade->add_option("channel", channel_path, "Channel JSON file")->required();

  auto* capacity = app.add_subcommand("capacity", "Private capacity (degraded) and the P1 lower bound");
  capacity->add_option("channel", channel_path, "Channel JSON file")->required();
  capacity->add_option("--aux-size", aux_size, "Auxiliary alphabet size for the P1 lower bound")
      ->check(CLI::Range(std::size_t{1}, std::size_t{16}));

  auto* entropy = app.add_subcommand("entropy", "Smooth min- or max-entropy of a state");
  entropy->add_option("state", state_path, "State JSON file")->required();
  entropy->add_option("--which", which, "hmin or hmax")->check(CLI::IsMember({"hmin", "hmax"}));
  entropy->add_option("--smooth", smooth, "Smoothing parameter")->check(CLI::Range(0.0, 0.999999));
  entropy->add_option("--split", split, "A,B[,C] subsystem groups; join indices with '+'");

  auto* lemmas = app.add_subcommand("lemmas", "Randomized verification of the entropy inequalities");
  lemmas->add_option("--trials", trials, "Instances per rule")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  lemmas->add_option("--seed", seed, "Base seed");
  lemmas->add_option("--dims", dims_text, "dA,dB,dC");
  lemmas->add_option("-o,--output", output_path, "CSV of every report");

  auto* code_eval = app.add_subcommand("code-eval", "Transmission and privacy errors of a code");
  code_eval->add_option("channel", channel_path, "Channel JSON file")->required();
  code_eval->add_option("code", code_path, "Code JSON file")->required();
  code_eval->add_option("--mode", mode, "Privacy reference state: fixed or optimized")
      ->check(CLI::IsMember({"fixed", "optimized"}));

  auto* code_search = app.add_subcommand("code-search", "Exhaustive search for the largest M");
  code_search->add_option("channel", channel_path, "Channel JSON file")->required();
  code_search->add_option("-n", n, "Blocklength")->check(CLI::Range(std::size_t{1}, std::size_t{2}));
  code_search->add_option("--eps", eps, "Transmission error target")->check(CLI::Range(0.0, 1.0));
  code_search->add_option("--delta", delta, "Privacy error target")->check(CLI::Range(0.0, 1.0));
  code_search->add_option("--grid-step", grid_step, "Stochastic encoder grid step")->check(CLI::Range(0.01, 1.0));
  code_search->add_option("--max-m", max_m, "Largest M tried")->check(CLI::Range(std::size_t{1}, std::size_t{4}));
  code_search->add_option("-o,--output", output_path, "Witness code JSON");

  auto* converse = app.add_subcommand("converse", "Finite-n converse bound on log M(n, eps, delta)");
  converse->add_option("channel", channel_path, "Channel JSON file");
  converse->add_option("-n", n, "Blocklength")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  converse->add_option("--eps", eps, "Transmission error")->check(CLI::Range(0.0, 1.0));
  converse->add_option("--delta", delta, "Privacy error")->check(CLI::Range(0.0, 1.0));
  converse->add_option("--eta", eta, "Chain-rule parameter (default (1 - eps - 2 delta)/6)");
  converse->add_option("--hashing-constant", hashing, "c_h in the c_h log(n+1) surcharge");

  auto* region = app.add_subcommand("region", "Converse / no-go / gap verdicts on a grid");
  region->add_option("--grid", grid, "Grid resolution G; (G+1)^2 points")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  region->add_option("-o,--output", output_path, "CSV path (stdout when omitted)");

  std::vector<std::string> store{"secrecy"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  const auto old_flags = out.flags();
  const auto old_prec = out.precision();
  out << std::setprecision(6);
  struct Restore {
    std::ostream& o;
    std::ios::fmtflags f;
    std::streamsize p;
    ~Restore() {
      o.flags(f);
      o.precision(p);
    }
  } restore{out, old_flags, old_prec};

  try {
    if (*validate) {
      CqqWiretapChannel w;
      try {
        w = read_channel(channel_path);
      } catch (const ValidationError& e) {
        err << "invalid: " << e.what() << "\n";
        return kInvalid;
      }
      out << "channel " << w.name << ": |X| = " << w.alphabet() << ", dim B = " << w.dim_b << ", dim E = " << w.dim_e
          << "\n";
      for (const auto& l : validate_channel(w).letters)
        out << "  letter " << l.letter << ": trace " << l.trace << ", min eigenvalue " << l.min_eigenvalue
            << ", hermiticity defect " << l.hermiticity_defect << "\n";
      out << "ok\n";
      return kOk;
    }

    if (*degrade) {
      auto w = read_channel(channel_path);
      auto r = check_degraded(w);
      if (auto* nd = std::get_if<NotDegraded>(&r)) {
        out << "not degraded: " << nd->reason << "\n";
        return kInfeasible;
      }
      const auto& s = std::get<DegradedStructure>(r);
      out << "degraded: yes\n"
          << "dim E' = " << s.dim_e_prime << ", dim F = " << s.dim_f << "\n"
          << "Kraus operators: " << s.degrading.kraus().size() << "\n"
          << "max residual ||D(rho_x^B) - rho_x^E||_1 = " << s.residual << "\n"
          << "isometry defect = " << s.dilation.defect() << "\n";
      return kOk;
    }

    if (*capacity) {
      auto w = read_channel(channel_path);
      auto r = check_degraded(w);
      const auto c = classical_capacity_cq(bob_states(w));
      out << "C(W) (Holevo, Bob) = " << c.value << " at p = ";
      detail::print_distribution(out, c.distribution);
      out << "\n";
      bool degraded = false;
      if (auto* s = std::get_if<DegradedStructure>(&r)) {
        degraded = true;
        auto p = private_capacity_degraded(w, *s);
        out << "P(W) = max I(X:F|E') = " << p.value << " at p = ";
        detail::print_distribution(out, p.distribution);
        out << "\n";
      } else {
        out << "channel is not degraded; only the P1 lower bound applies\n";
      }
      if (aux_size > 0 || !degraded) {
        const std::size_t k = aux_size > 0 ? aux_size : w.alphabet() + 1;
        auto lb = p1_general_lower_bound(w, k);
        out << "P1 lower bound (|U| = " << k << ") = " << lb.value << "\n";
      }
      return kOk;
    }

    if (*entropy) {
      auto rho = read_state(state_path);
      auto sp = detail::parse_split(split);
      const double h = which == "hmin" ? h_min_smooth(rho, sp, smooth) : h_max_smooth(rho, sp, smooth);
      out << (which == "hmin" ? "H_min" : "H_max") << "^" << smooth << " = " << h << "\n";
      return kOk;
    }

    if (*lemmas) {
      HarnessConfig cfg;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.dims = detail::parse_dims(dims_text);
      auto rows = run_harness(cfg);
      if (!output_path.empty()) {
        std::ostringstream csv;
        write_harness_csv(csv, rows);
        write_file(output_path, csv.str());
      }
      std::size_t failures = 0;
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& r : rows) {
        worst = std::min(worst, r.report.slack);
        if (r.report.holds) continue;
        ++failures;
        out << "VIOLATION " << to_string(r.report.rule) << " seed " << r.seed << " "
            << format_params(r.report.rule, r.report.params) << " lhs " << r.report.lhs << " rhs " << r.report.rhs
            << "\n";
      }
      out << rows.size() << " checks, " << failures << " violations, minimum slack " << worst << "\n";
      return failures == 0 ? kOk : kInfeasible;
    }

    if (*code_eval) {
      auto w = read_channel(channel_path);
      auto c = read_code(code_path);
      validate_code(c, w);
      if (!c.decoder) c.decoder = optimal_decoder(c.encoder, w, c.n);
      auto perf = evaluate_code(c, w, mode == "fixed" ? PrivacyMode::FixedMarginal : PrivacyMode::Optimized);
      out << "M = " << c.m << ", n = " << c.n << ", rate = " << perf.rate << "\n"
          << "transmission error = " << perf.transmission_error << "\n"
          << "privacy error (" << to_string(perf.mode) << ") = " << perf.privacy_error << "\n"
          << "success probability = " << perf.success_probability << "\n";
      if (perf.transmission_error < 1.0 && perf.privacy_error < 1.0)
        out << "trivial converse bound = " << trivial_converse_bound(c, w, perf) << " >= log M = "
            << std::log2(static_cast<double>(c.m)) << "\n";
      return kOk;
    }

    if (*code_search) {
      auto w = read_channel(channel_path);
      SearchConfig cfg;
      cfg.grid_step = grid_step;
      cfg.max_m = max_m;
      auto r = brute_force_M(w, n, eps, delta, cfg);
      out << "M = " << r.m_best << " (" << r.codes_evaluated << " codes evaluated)\n"
          << "witness: transmission error " << r.performance.transmission_error << ", privacy error "
          << r.performance.privacy_error << "\n";
      if (!output_path.empty()) write_file(output_path, code_json(r.witness).dump(2) + "\n");
      return kOk;
    }

    if (*converse) {
      if (!(eps + 2.0 * delta < 1.0 - kRegionTieTol)) {
        out << "outside converse region: eps + 2 delta = " << eps + 2.0 * delta << " >= 1\n";
        return kInfeasible;
      }
      if (channel_path.empty()) throw ParseError("converse needs a channel file");
      auto w = read_channel(channel_path);
      auto r = check_degraded(w);
      auto* s = std::get_if<DegradedStructure>(&r);
      if (!s) {
        out << "channel is not degraded: " << std::get<NotDegraded>(r).reason << "\n";
        return kInfeasible;
      }
      ConverseOptions opt;
      opt.hashing_constant = hashing;
      if (eta > 0.0) opt.eta = eta;
      auto res = finite_n_converse(w, *s, n, eps, delta, opt);
      if (auto* o = std::get_if<OutsideConverseRegion>(&res)) {
        out << "outside converse region: eps + 2 delta = " << o->line << " >= 1\n";
        return kInfeasible;
      }
      const auto& b = std::get<ConverseBound>(res);
      out << "n = " << b.n << ", eps = " << b.eps << ", delta = " << b.delta << "\n"
          << "P(W) = " << b.capacity << ", n P(W) = " << static_cast<double>(b.n) * b.capacity << "\n"
          << "eta = " << b.eta << ", lambda = " << b.lambda << ", lambda_hat = " << b.lambda_hat << "\n"
          << "mu_up = " << b.mu_up << ", mu_low = " << b.mu_low
          << (b.mu_common_support ? " (uniform over input distributions)" : " (maximized over types)") << "\n"
          << "bound log M <= " << b.value << " (includes hashing surcharge " << b.terms.hashing
          << " with declared c_h = " << b.hashing_constant << ")\n"
          << "constant-type bound = " << b.value_constant_type << "\n"
          << "(B - nP)/n = " << (b.value - static_cast<double>(b.n) * b.capacity) / static_cast<double>(b.n) << "\n";
      return kOk;
    }

    if (*region) {
      if (output_path.empty()) {
        emit_region_csv(out, grid);
      } else {
        std::ostringstream csv;
        emit_region_csv(csv, grid);
        write_file(output_path, csv.str());
        out << "wrote " << (grid + 1) * (grid + 1) << " rows to " << output_path << "\n";
      }
      return kOk;
    }
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace secrecy::cli
