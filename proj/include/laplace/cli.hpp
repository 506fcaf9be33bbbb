#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "laplace/bouvard.hpp"
#include "laplace/inference.hpp"
#include "laplace/io.hpp"
#include "laplace/reverse_cholesky.hpp"
#include "laplace/sigdig.hpp"

namespace laplace::cli {

using nlohmann::json;

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// stage block in the manuscript's layout: upper triangle, rhs after the bar
inline void print_stage(std::ostream& out, const std::string& label, const EliminationStep& step) {
  out << "STAGE " << label << " (" << step.size << (step.size == 1 ? " variable" : " variables")
      << ")\n";
  const std::size_t width = 16;
  for (std::size_t i = 0; i < step.size; ++i) {
    for (std::size_t j = 0; j < step.size; ++j) {
      out << pad(j < i ? "" : num(step.entry(i, j)), width);
    }
    out << "  | " << pad(num(step.rhs[i]), width) << "\n";
  }
}

inline json lower_rows(const std::vector<double>& packed, std::size_t n) {
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j <= i; ++j) row.push_back(packed[NormalSystem::packed_index(i, j)]);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json snapshot_json(const EliminationStep& step) {
  return json{{"size", step.size}, {"lower", lower_rows(step.lower, step.size)}, {"rhs", step.rhs}};
}

struct Options {
  std::string input;
  bool snapshots = false;
  bool as_json = false;
  std::size_t vars = 0;
  long var = 0;
  bool all_vars = false;
  bool unbiased = false;
  double log10_poids = 0.0;
  double poids = 0.0;
  double half_width = 0.0;
  std::string dataset = "saturn-motion";
  std::string export_path;
  std::string export_stage;
  int digits = 7;
};

inline int cmd_factor(const Options& opt, std::ostream& out) {
  const NormalSystem sys = load_system_file(opt.input);
  const ReverseCholesky f = factor(sys, true);
  if (opt.as_json) {
    json doc{{"schema", "laplace.factor.v1"},
             {"n", f.n},
             {"diagonal", json::array()},
             {"L", json::array()},
             {"reduced_rhs", f.reduced_rhs}};
    const DenseMatrix l = extract_L(f);
    for (std::size_t i = 0; i < f.n; ++i) {
      doc["diagonal"].push_back(f.m_at(i, i));
      json row = json::array();
      for (std::size_t j = 0; j <= i; ++j) row.push_back(l(i, j));
      doc["L"].push_back(std::move(row));
    }
    if (opt.snapshots) {
      doc["snapshots"] = json::array();
      for (const auto& step : f.snapshots) doc["snapshots"].push_back(snapshot_json(step));
    }
    out << doc.dump() << "\n";
    return 0;
  }
  out << "n = " << f.n << "\n";
  out << "diagonal of M:";
  for (std::size_t i = 0; i < f.n; ++i) out << " " << num(f.m_at(i, i));
  out << "\n";
  const DenseMatrix l = extract_L(f);
  out << "L:\n";
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) out << pad(num(l(i, j)), 16);
    out << "\n";
  }
  if (opt.snapshots) {
    for (const auto& step : f.snapshots) {
      print_stage(out, stage_label(f.n, step.size), step);
    }
  }
  return 0;
}

inline int cmd_solve(const Options& opt, std::ostream& out) {
  const NormalSystem sys = load_system_file(opt.input);
  if (opt.vars < 1 || opt.vars > sys.size()) {
    throw std::invalid_argument("solve: --vars must be in 1.." + std::to_string(sys.size()));
  }
  const ReverseCholesky f = factor(sys, false);
  const Solution sol = solve(f, opt.vars);
  if (opt.as_json) {
    json doc{{"schema", "laplace.solve.v1"}, {"n", f.n}, {"solved", sol.solved_prefix}};
    json x = json::array();
    for (std::size_t i = 0; i < sol.solved_prefix; ++i) x.push_back(sol.at(i));
    doc["x"] = std::move(x);
    out << doc.dump() << "\n";
    return 0;
  }
  for (std::size_t i = 0; i < sol.solved_prefix; ++i) {
    out << "x" << (i + 1) << " = " << num(sol.at(i)) << "\n";
  }
  if (sol.solved_prefix < f.n) {
    out << "(" << (f.n - sol.solved_prefix) << " trailing variables left unsolved)\n";
  }
  return 0;
}

inline int cmd_variance(const Options& opt, std::ostream& out) {
  const NormalSystem sys = load_system_file(opt.input);
  std::vector<std::size_t> wanted;
  if (opt.all_vars) {
    for (std::size_t j = 0; j < sys.size(); ++j) wanted.push_back(j);
  } else {
    if (opt.var < 1 || static_cast<std::size_t>(opt.var) > sys.size()) {
      throw std::invalid_argument("variance: --var must be in 1.." + std::to_string(sys.size()));
    }
    wanted.push_back(static_cast<std::size_t>(opt.var) - 1);
  }
  json vars = json::array();
  for (std::size_t j : wanted) {
    const PoidsReport r = variance_for_variable(sys, j, opt.unbiased);
    if (opt.as_json) {
      vars.push_back(json{{"index", j + 1},
                          {"poids", r.poids},
                          {"log10_poids", r.log10_poids},
                          {"sigma", r.sigma}});
    } else {
      out << "variable " << (j + 1) << ": poids = " << num(r.poids)
          << ", log10 poids = " << num(r.log10_poids) << ", sigma = " << num(r.sigma) << "\n";
    }
  }
  if (opt.as_json) {
    json doc{{"schema", "laplace.variance.v1"},
             {"n", sys.size()},
             {"s", sys.observations},
             {"rss", sys.residual_sum_squares.value_or(0.0)},
             {"unbiased", opt.unbiased},
             {"variables", std::move(vars)}};
    out << doc.dump() << "\n";
  }
  return 0;
}

inline int cmd_confidence(const Options& opt, bool have_log10, std::ostream& out) {
  const double poids = have_log10 ? std::pow(10.0, opt.log10_poids) : opt.poids;
  const ConfidenceQuery q{poids, opt.half_width};
  const double within = prob_within(q);
  const double outside = prob_outside(q);
  if (opt.as_json) {
    json doc{{"schema", "laplace.confidence.v1"},
             {"poids", poids},
             {"log10_poids", std::log10(poids)},
             {"half_width", opt.half_width},
             {"probability_within", within},
             {"probability_outside", outside}};
    if (outside > 0.0) {
      doc["one_in"] = 1.0 / outside;
    } else {
      doc["one_in"] = nullptr;
    }
    out << doc.dump() << "\n";
    return 0;
  }
  out << "poids P = " << num(poids) << " (log10 = " << num(std::log10(poids)) << ")\n";
  out << "P(|error| <= " << num(opt.half_width) << ") = " << num(within) << "\n";
  if (outside > 0.0) {
    out << "complement = " << num(outside) << "  (about 1 in " << num(1.0 / outside) << ")\n";
  } else {
    out << "complement = 0\n";
  }
  return 0;
}

inline int cmd_replicate(const Options& opt, std::ostream& out) {
  const HistoricalDataset d = load_dataset(opt.dataset);
  if (!opt.export_path.empty()) {
    std::ofstream file(opt.export_path);
    if (!file) throw std::runtime_error("cannot write '" + opt.export_path + "'");
    if (opt.export_stage.empty() || opt.export_stage == "A") {
      serialize_normal_system(d.system, file);
    } else {
      if (opt.export_stage.size() != 1 || opt.export_stage[0] < 'A' ||
          static_cast<std::size_t>(opt.export_stage[0] - 'A') >= d.system.size() - 1) {
        throw std::invalid_argument("replicate: --export-stage must name a printed stage A.." +
                                    std::string(1, static_cast<char>('A' + d.system.size() - 2)));
      }
      const std::size_t size = d.system.size() - static_cast<std::size_t>(opt.export_stage[0] - 'A');
      serialize_normal_system(
          d.printed_stage(size).to_system(d.system.observations, *d.system.residual_sum_squares),
          file);
    }
    if (!opt.as_json) {
      out << "wrote stage " << (opt.export_stage.empty() ? "A" : opt.export_stage) << " of "
          << d.name << " to " << opt.export_path << "\n";
    }
    return 0;
  }
  const ReplicationReport rep = replicate(d);
  if (opt.as_json) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
      checks.push_back(json{{"name", c.name},
                            {"computed", c.computed},
                            {"expected", c.expected},
                            {"tolerance", c.tolerance},
                            {"sense", c.sense == ReplicationCheck::Sense::within ? "within"
                                                                                 : "at-least"},
                            {"pass", c.pass},
                            {"gating", c.gating},
                            {"against", c.against}});
    }
    json doc{{"schema", "laplace.replicate.v1"},
             {"dataset", d.name},
             {"pass", rep.pass()},
             {"gating_failures", rep.gating_failures()},
             {"checks", std::move(checks)}};
    out << doc.dump() << "\n";
    return rep.pass() ? 0 : 1;
  }
  std::size_t gating = 0, informational = 0;
  for (const auto& c : rep.checks) {
    (c.gating ? gating : informational) += 1;
    out << (c.pass ? "[PASS] " : (c.gating ? "[FAIL] " : "[drift] "));
    out << c.name << ": " << num(c.computed);
    if (c.sense == ReplicationCheck::Sense::within) {
      out << " vs " << num(c.expected) << " (tol " << num(c.tolerance) << ")";
    } else {
      out << " >= " << num(c.expected);
    }
    out << "  [" << c.against << (c.gating ? "" : ", reported") << "]\n";
  }
  out << "replication: " << (rep.pass() ? "PASS" : "FAIL") << " (" << gating
      << " gating checks, " << informational << " reported)\n";
  return rep.pass() ? 0 : 1;
}

inline int cmd_precision_replay(const Options& opt, std::ostream& out) {
  const NormalSystem sys = load_system_file(opt.input);
  const ReplayResult res = replay_factor(sys, opt.digits);
  if (opt.as_json) {
    json steps = json::array();
    for (const auto& step : res.vs_full.steps) {
      json entries = json::array();
      for (std::size_t i = 0; i < step.size; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          const auto& e = step.lower_at(i, j);
          entries.push_back(json{{"i", i + 1},
                                 {"j", j + 1},
                                 {"replayed", e.replayed},
                                 {"reference", e.reference},
                                 {"agree", e.agree}});
        }
        const auto& e = step.rhs[i];
        entries.push_back(json{{"i", i + 1},
                               {"rhs", true},
                               {"replayed", e.replayed},
                               {"reference", e.reference},
                               {"agree", e.agree}});
      }
      steps.push_back(json{{"size", step.size}, {"entries", std::move(entries)}});
    }
    json doc{{"schema", "laplace.precision-replay.v1"},
             {"digits", opt.digits},
             {"min_agreement", res.vs_full.min_agreement()},
             {"steps", std::move(steps)}};
    out << doc.dump() << "\n";
    return 0;
  }
  out << "replay at " << opt.digits << " significant digits vs full precision\n";
  for (const auto& step : res.vs_full.steps) {
    int min_agree = 15;
    std::vector<std::string> flagged;
    for (std::size_t i = 0; i < step.size; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const auto& e = step.lower_at(i, j);
        min_agree = std::min(min_agree, e.agree);
        if (e.agree < opt.digits) {
          flagged.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
      }
      const auto& e = step.rhs[i];
      min_agree = std::min(min_agree, e.agree);
      if (e.agree < opt.digits) flagged.push_back("rhs(" + std::to_string(i + 1) + ")");
    }
    out << "stage " << stage_label(sys.size(), step.size) << " (size " << step.size
        << "): min agreement " << min_agree << " digits";
    if (!flagged.empty()) {
      out << "; flagged:";
      for (const auto& f : flagged) out << " " << f;
    }
    out << "\n";
  }
  out << "overall min agreement: " << res.vs_full.min_agreement() << " digits\n";
  return 0;
}

}  // namespace detail

/// Full command-line front end; args exclude the program name. Exit codes:
/// 0 success, 1 domain failure (singularity, failed replication), 2
/// usage/IO/parse errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplace's 1820 least-squares elimination: factor, solve, poids, replication"};
  app.require_subcommand(1);
  detail::Options opt;

  CLI::App* factor_cmd = app.add_subcommand("factor", "reverse square-root-free Cholesky of a system");
  factor_cmd->add_option("input", opt.input, "normal-system or regression file")->required();
  factor_cmd->add_flag("--snapshots", opt.snapshots, "print every intermediate stage");
  factor_cmd->add_flag("--json", opt.as_json, "machine-readable output");

  CLI::App* solve_cmd = app.add_subcommand("solve", "forward-solve the leading variables");
  solve_cmd->add_option("input", opt.input, "normal-system or regression file")->required();
  solve_cmd->add_option("--vars", opt.vars, "how many leading variables to solve")->required();
  solve_cmd->add_flag("--json", opt.as_json, "machine-readable output");

  CLI::App* variance_cmd = app.add_subcommand("variance", "poids and standard deviation per variable");
  variance_cmd->add_option("input", opt.input, "normal-system or regression file")->required();
  CLI::Option* var_opt = variance_cmd->add_option("--var", opt.var, "1-based variable index");
  CLI::Option* all_opt = variance_cmd->add_flag("--all", opt.all_vars, "every variable");
  var_opt->excludes(all_opt);
  variance_cmd->add_flag("--unbiased", opt.unbiased, "use rss/(s-n) instead of rss/s");
  variance_cmd->add_flag("--json", opt.as_json, "machine-readable output");

  CLI::App* confidence_cmd = app.add_subcommand("confidence", "Gaussian probability of |error| <= U");
  CLI::Option* lg_opt = confidence_cmd->add_option("--log10-poids", opt.log10_poids, "log10 of the poids");
  CLI::Option* p_opt = confidence_cmd->add_option("--poids", opt.poids, "the poids P");
  lg_opt->excludes(p_opt);
  confidence_cmd->add_option("--half-width", opt.half_width, "half width U")
      ->required()
      ->check(CLI::NonNegativeNumber);
  confidence_cmd->add_flag("--json", opt.as_json, "machine-readable output");

  CLI::App* replicate_cmd = app.add_subcommand("replicate", "replay an embedded historical computation");
  replicate_cmd->add_option("--dataset", opt.dataset, "dataset name (saturn-motion)")
      ->capture_default_str();
  replicate_cmd->add_flag("--json", opt.as_json, "machine-readable output");
  replicate_cmd->add_option("--export", opt.export_path, "write the dataset as a normal-system file");
  replicate_cmd->add_option("--export-stage", opt.export_stage,
                            "which printed stage to export (A..E, default A)")
      ->needs(replicate_cmd->get_option("--export"));

  CLI::App* replay_cmd = app.add_subcommand("precision-replay",
                                            "re-run the elimination at fixed significant digits");
  replay_cmd->add_option("input", opt.input, "normal-system or regression file")->required();
  replay_cmd->add_option("--digits", opt.digits, "significant decimal digits (2..15)")
      ->capture_default_str()
      ->check(CLI::Range(2, 15));
  replay_cmd->add_flag("--json", opt.as_json, "machine-readable output");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (factor_cmd->parsed()) return detail::cmd_factor(opt, out);
    if (solve_cmd->parsed()) return detail::cmd_solve(opt, out);
    if (variance_cmd->parsed()) {
      if (!opt.all_vars && var_opt->count() == 0) {
        throw std::invalid_argument("variance: give --var J or --all");
      }
      return detail::cmd_variance(opt, out);
    }
    if (confidence_cmd->parsed()) {
      if (lg_opt->count() == 0 && p_opt->count() == 0) {
        throw std::invalid_argument("confidence: give --log10-poids or --poids");
      }
      return detail::cmd_confidence(opt, lg_opt->count() > 0, out);
    }
    if (replicate_cmd->parsed()) return detail::cmd_replicate(opt, out);
    if (replay_cmd->parsed()) return detail::cmd_precision_replay(opt, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace laplace::cli
