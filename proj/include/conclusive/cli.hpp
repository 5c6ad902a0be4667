// Copyright 2026 The Conclusive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. `run` is the whole program minus process I/O, so
// tests drive it directly.
//
//   conclusive [--format json|text] [--tolerance T] [--seed S] [--input PATH] <command>
//     check                                   feasibility of every member
//     construct [--state-index K | --projective]
//     bound                                   closed-form bounds
//     optimize [--restarts R] [--max-iters M] [--step-size A] [--workers W]
//     simulate [--strategy PATH] [--trials T] [--workers W]
//     bb84                                    built-in BB84 demonstration
//
// Exit codes: 0 success, 1 domain error (e.g. infeasible where a strategy
// is required), 2 input error (bad flags, missing or malformed files).

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conclusive/bb84.hpp"
#include "conclusive/bounds.hpp"
#include "conclusive/ensemble.hpp"
#include "conclusive/error.hpp"
#include "conclusive/feasibility.hpp"
#include "conclusive/montecarlo.hpp"
#include "conclusive/optimizer.hpp"
#include "conclusive/strategy.hpp"

namespace conclusive::cli {

enum class Format { text, json };

struct CommandOutcome {
  int exit_code = 0;
  std::string report;
};

namespace detail {

using nlohmann::json;

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::ostringstream text_stream() {
  std::ostringstream os;
  os << std::setprecision(12);
  return os;
}

inline json feasibility_json(const ClassifiedEnsemble& e, const FeasibilityReport& r) {
  json states = json::array();
  for (const auto& s : r.per_state) {
    states.push_back({{"index", s.state_index},
                      {"class", e.label(s.state_index)},
                      {"classifiable", s.classifiable},
                      {"residual_weight_sq", s.residual_weight_sq}});
  }
  return {{"feasible", r.feasible}, {"rank_tol", kRankTol}, {"states", states}};
}

inline std::string feasibility_text(const ClassifiedEnsemble& e, const FeasibilityReport& r) {
  auto os = text_stream();
  os << "member  class  |d|^2              classifiable\n";
  for (const auto& s : r.per_state) {
    os << std::setw(6) << s.state_index << "  " << std::setw(5) << e.label(s.state_index) << "  " << std::setw(18)
       << s.residual_weight_sq << "  " << (s.classifiable ? "yes" : "no") << "\n";
  }
  os << (r.feasible ? "Conclusive classification is possible.\n"
                    : "Conclusive classification is impossible: every member lies in the span of the other classes.\n");
  return os.str();
}

inline json bound_json(const BoundReport& b) {
  json pairs = json::array();
  for (const auto& [pair, overlap] : b.pairwise_min_failure_products) {
    pairs.push_back({{"a", pair.first}, {"b", pair.second}, {"overlap", overlap}});
  }
  return {{"pairwise", pairs},
          {"failure_lower_bound", b.failure_lower_bound},
          {"success_upper_bound", b.success_upper_bound},
          {"success_upper_bound_unclamped", b.success_upper_bound_unclamped}};
}

inline std::string bound_text(const BoundReport& b) {
  auto os = text_stream();
  os << "cross-class overlaps |<a|b>| (lower bounds on sqrt(gamma_a gamma_b)):\n";
  for (const auto& [pair, overlap] : b.pairwise_min_failure_products) {
    os << "  (" << pair.first << ", " << pair.second << ")  " << overlap << "\n";
  }
  os << "average failure  Q >= " << b.failure_lower_bound << "\n";
  os << "average success  P <= " << b.success_upper_bound << "\n";
  return os.str();
}

inline json validation_json(const StrategyValidation& v) {
  return {{"complete", v.complete},
          {"no_error", v.no_error},
          {"max_completeness_defect", v.max_completeness_defect},
          {"max_cross_class_probability", v.max_cross_class_probability},
          {"per_state_success", v.per_state_success},
          {"per_state_failure", v.per_state_failure},
          {"average_success", v.average_success},
          {"average_failure", v.average_failure}};
}

inline std::string validation_text(const StrategyValidation& v) {
  auto os = text_stream();
  os << "complete: " << (v.complete ? "yes" : "no") << " (defect " << v.max_completeness_defect << ")\n";
  os << "no error: " << (v.no_error ? "yes" : "no") << " (max cross-class probability "
     << v.max_cross_class_probability << ")\n";
  for (std::size_t a = 0; a < v.per_state_success.size(); ++a) {
    os << "  member " << a << ": success " << v.per_state_success[a] << ", failure " << v.per_state_failure[a]
       << "\n";
  }
  os << "average success P = " << v.average_success << "\n";
  os << "average failure Q = " << v.average_failure << "\n";
  return os.str();
}

inline json simulation_json(const SimulationResult& r) {
  return {{"trials", r.trials},
          {"seed", r.seed},
          {"counts", r.counts},
          {"member_trials", r.member_trials},
          {"empirical_success", r.empirical_success},
          {"predicted_success", r.predicted_success},
          {"max_deviation_sigma", r.max_deviation_sigma},
          {"success_deviation_sigma", r.success_deviation_sigma}};
}

inline std::string simulation_text(const SimulationResult& r) {
  auto os = text_stream();
  os << "trials " << r.trials << " (seed " << r.seed << ")\n";
  for (std::size_t a = 0; a < r.counts.size(); ++a) {
    os << "  member " << a << ":";
    for (std::size_t o = 0; o < r.counts[a].size(); ++o) {
      os << " " << (o + 1 == r.counts[a].size() ? "fail" : std::to_string(o + 1)) << "=" << r.counts[a][o];
    }
    os << "\n";
  }
  os << "empirical success " << r.empirical_success << ", predicted " << r.predicted_success << " ("
     << r.success_deviation_sigma << " sigma)\n";
  os << "largest cell deviation " << r.max_deviation_sigma << " sigma\n";
  return os.str();
}

inline json optimized_json(const OptimizedStrategy& o, const OptimizationConfig& cfg) {
  return {{"success_lower_bound", o.success_lower_bound},
          {"upper_bound_reference", o.upper_bound_reference},
          {"converged", o.converged},
          {"best_restart", o.best_restart},
          {"config",
           {{"restarts", cfg.restarts},
            {"max_iterations", cfg.max_iterations},
            {"step_size", cfg.step_size},
            {"seed", cfg.seed},
            {"tolerance", cfg.tolerance}}},
          {"strategy", strategy_to_json(o.strategy)}};
}

inline const char* kBb84Conclusion =
    "Each BB84 state of one bit value is a linear combination of the states encoding the other value, so no "
    "measurement identifies the bit without error: an eavesdropper extracts no conclusive information.";

}  // namespace detail

inline CommandOutcome run_bb84_demo(Format format = Format::text, const OptimizationConfig& cfg = {}) {
  const ClassifiedEnsemble e = bb84_ensemble();
  const FeasibilityReport feas = classifiable_states(e);
  const BoundReport bound = bound_report(e);
  const Bracket bracket = bracket_optimum(e, cfg);
  if (format == Format::json) {
    detail::json j = {{"ensemble", ensemble_to_json(e)},
                      {"feasibility", detail::feasibility_json(e, feas)},
                      {"bound", detail::bound_json(bound)},
                      {"bracket", {{"lower", bracket.lower}, {"upper", bracket.upper}}},
                      {"conclusion", detail::kBb84Conclusion}};
    return {0, detail::dump(j)};
  }
  auto os = detail::text_stream();
  os << "BB84 ensemble: bit 0 = {|0>, |+>}, bit 1 = {|1>, |->}, priors 1/4\n\n";
  os << detail::feasibility_text(e, feas) << "\n";
  os << detail::bound_text(bound) << "\n";
  os << "optimum bracket: " << bracket.lower << " <= P* <= " << bracket.upper << "\n\n";
  os << detail::kBb84Conclusion << "\n";
  return {0, os.str()};
}

inline CommandOutcome run(const std::vector<std::string>& args) {
  CLI::App app{"Conclusive (zero-error) classification of pure quantum states", "conclusive"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input;
  std::string format_name = "text";
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  app.add_option("--input", input, "Ensemble JSON file");
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tolerance", tolerance, "Validator tolerance (completeness and leakage)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for randomized commands");

  auto* check = app.add_subcommand("check", "Decide which members can be classified conclusively");
  auto* construct = app.add_subcommand("construct", "Build an explicit conclusive strategy");
  std::optional<std::size_t> state_index;
  bool projective = false;
  auto* index_opt = construct->add_option("--state-index", state_index, "Single-detector strategy for this member");
  construct->add_flag("--projective", projective, "One projective detector per class (default)")
      ->excludes(index_opt);
  auto* bound = app.add_subcommand("bound", "Closed-form success upper bound");
  auto* optimize = app.add_subcommand("optimize", "Numerical search for a good strategy");
  OptimizationConfig cfg;
  optimize->add_option("--restarts", cfg.restarts)->check(CLI::PositiveNumber);
  optimize->add_option("--max-iters", cfg.max_iterations);
  optimize->add_option("--step-size", cfg.step_size)->check(CLI::PositiveNumber);
  optimize->add_option("--workers", cfg.workers);
  auto* sim = app.add_subcommand("simulate", "Sample a strategy and compare with the Born rule");
  std::string strategy_path;
  std::size_t trials = 100000;
  unsigned sim_workers = 1;
  sim->add_option("--strategy", strategy_path, "Strategy JSON (default: projective strategy)");
  sim->add_option("--trials", trials)->check(CLI::PositiveNumber);
  sim->add_option("--workers", sim_workers);
  auto* demo = app.add_subcommand("bb84", "BB84 eavesdropping demonstration");

  std::vector<const char*> argv{"conclusive"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    return {0, app.help()};
  } catch (const CLI::ParseError& ex) {
    return {2, "error: " + std::string(ex.what()) + "\n\n" + app.help()};
  }

  const Format format = format_name == "json" ? Format::json : Format::text;
  ValidationTolerances tol;
  if (tolerance) tol = {*tolerance, *tolerance};
  cfg.seed = seed;
  cfg.validation = tol;

  try {
    if (demo->parsed()) return run_bb84_demo(format, cfg);
    if (input.empty()) return {2, "error: --input is required\n\n" + app.help()};
    const ClassifiedEnsemble e = load_ensemble(input);

    if (check->parsed()) {
      const auto r = classifiable_states(e);
      return {0, format == Format::json ? detail::dump(detail::feasibility_json(e, r)) : detail::feasibility_text(e, r)};
    }
    if (bound->parsed()) {
      const auto b = bound_report(e);
      return {0, format == Format::json ? detail::dump(detail::bound_json(b)) : detail::bound_text(b)};
    }
    if (construct->parsed()) {
      const ClassificationStrategy s =
          state_index ? construct_single_state_strategy(e, *state_index) : construct_projective_strategy(e);
      if (format == Format::json) return {0, detail::dump(strategy_to_json(s))};
      return {0, detail::validation_text(validate_strategy(e, s, tol))};
    }
    if (optimize->parsed()) {
      const auto o = optimize_classification(e, cfg);
      if (format == Format::json) return {0, detail::dump(detail::optimized_json(o, cfg))};
      auto os = detail::text_stream();
      os << "best strategy found: P = " << o.success_lower_bound << (o.converged ? "" : " (not converged)") << "\n";
      os << "closed-form bound:   P <= " << o.upper_bound_reference << "\n\n";
      os << detail::validation_text(validate_strategy(e, o.strategy, tol));
      return {0, os.str()};
    }
    if (sim->parsed()) {
      const ClassificationStrategy s =
          strategy_path.empty() ? construct_projective_strategy(e) : load_strategy(strategy_path);
      SimulationOptions options;
      options.workers = sim_workers;
      options.tolerances = tol;
      const auto r = simulate(e, s, trials, seed, options);
      return {0, format == Format::json ? detail::dump(detail::simulation_json(r)) : detail::simulation_text(r)};
    }
  } catch (const InputError& ex) {
    return {2, std::string("error: ") + ex.what() + "\n"};
  } catch (const Error& ex) {
    return {1, std::string("error: ") + ex.what() + "\n"};
  }
  return {2, app.help()};
}

}  // namespace conclusive::cli
