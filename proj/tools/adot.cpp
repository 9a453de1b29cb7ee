// Command-line front end: run the distributed solver, materialize presets,
// run the centralized oracle, compare the two, or self-check the build.
//
// Exit codes: 0 success, 1 bad usage or scenario validation failure,
// 2 I/O or internal failure, 3 non-convergence under --strict.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adot/game_engine.hpp"
#include "adot/kernels.hpp"
#include "adot/network.hpp"
#include "adot/oracle.hpp"
#include "adot/reporting.hpp"
#include "adot/subsolvers.hpp"

namespace {

using namespace adot;

struct ScenarioArgs {
  std::string scenario_path;
  std::string preset;
  std::uint64_t seed = 0;
  double eta = 1.0;
  int max_iters = 10000;
  double tol = 1e-6;
  std::string attack = "on";
  int attacker_period = 1;
  double damping = 0.8;
  CLI::App* cmd = nullptr;
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs& a, bool solver_knobs) {
  a.cmd = cmd;
  auto* src = cmd->add_option("--scenario", a.scenario_path,
                              "Scenario JSON file");
  auto* pre = cmd->add_option("--preset", a.preset,
                              "Built-in instance (case1 or case2)");
  src->excludes(pre);
  pre->excludes(src);
  cmd->add_option("--seed", a.seed, "Seed for generated instances")
      ->capture_default_str();
  if (solver_knobs) {
    cmd->add_option("--eta", a.eta, "Proximal weight")->capture_default_str();
    cmd->add_option("--max-iters", a.max_iters, "Iteration cap")
        ->capture_default_str();
    cmd->add_option("--tol", a.tol,
                    "Convergence tolerance (consensus residual and attacker movement)")
        ->capture_default_str();
    cmd->add_option("--attack", a.attack, "Adversary active: on|off")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    cmd->add_option("--attacker-period", a.attacker_period,
                    "Attacker acts every N iterations")
        ->capture_default_str();
    cmd->add_option("--damping", a.damping,
                    "Attacker damping weight in [0,1] (0 = pure best response)")
        ->capture_default_str();
  }
}

Scenario load_from_args(const ScenarioArgs& a, bool solver_knobs) {
  Scenario s;
  if (!a.scenario_path.empty()) {
    if (!std::filesystem::exists(a.scenario_path))
      throw std::runtime_error("cannot open scenario file: " + a.scenario_path);
    s = load_scenario_file(a.scenario_path);
    if (a.cmd->count("--seed")) s.options.rng_seed = a.seed;
  } else if (!a.preset.empty()) {
    s = make_preset(a.preset, a.seed);
  } else {
    throw ScenarioError("need --scenario FILE or --preset NAME");
  }
  if (solver_knobs) {
    if (a.cmd->count("--eta")) s.options.eta = a.eta;
    if (a.cmd->count("--max-iters")) s.options.max_iters = a.max_iters;
    if (a.cmd->count("--tol")) {
      s.options.tol_primal = a.tol;
      s.options.tol_xi = a.tol;
    }
    if (a.cmd->count("--attacker-period")) s.options.attacker_period = a.attacker_period;
    if (a.cmd->count("--damping")) s.options.attacker_damping = a.damping;
    if (a.attack == "off") s = without_adversary(s);
    auto violations = validate(s);
    if (!violations.empty()) {
      std::string msg = "scenario validation failed:";
      for (const auto& v : violations) msg += "\n  - " + v;
      throw ScenarioError(msg);
    }
  }
  return s;
}

std::string label_of(const ScenarioArgs& a) {
  if (!a.scenario_path.empty())
    return std::filesystem::path(a.scenario_path).stem().string();
  return a.preset;
}

int do_run(const ScenarioArgs& args, const std::string& trace_path,
           const std::string& plan_path, bool strict) {
  Scenario s = load_from_args(args, true);
  auto t0 = std::chrono::steady_clock::now();
  SolveResult r = run(s);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!trace_path.empty()) write_trace(r.trace, trace_path);
  if (!plan_path.empty()) write_plan(s, r.pi, plan_path);
  print_summary(std::cout, summarize(label_of(args), s, r, secs));
  if (strict && r.termination != Termination::Converged) return 3;
  return 0;
}

int do_gen(const std::string& preset, std::uint64_t seed, const std::string& out) {
  Scenario s = make_preset(preset, seed);
  std::string text = emit_scenario(s);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << text;
  }
  return 0;
}

int do_oracle(const ScenarioArgs& args, const std::string& plan_path) {
  Scenario s = load_from_args(args, true);
  auto t0 = std::chrono::steady_clock::now();
  OracleResult r = centralized_best_response(s);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!plan_path.empty()) write_plan(s, r.pi, plan_path);
  std::cout << label_of(args) << ": oracle "
            << (r.converged ? "converged" : "did not close the gap") << " after "
            << r.sweeps << " sweeps\n"
            << "  utility          " << r.utility << "\n"
            << "  upper bound      " << r.upper_bound << "\n"
            << "  gap              " << r.gap << "\n"
            << "  wall time        " << secs << " s\n";
  return r.converged ? 0 : 3;
}

int do_compare(const ScenarioArgs& args, bool strict) {
  Scenario s = load_from_args(args, true);
  SolveResult dist = run(s);
  OracleResult cent = centralized_best_response(s);
  RunComparison cmp = compare_runs(s, dist.pi, dist.xi, dist.utility, cent.pi,
                                   cent.xi, cent.utility);
  std::cout << label_of(args) << ": distributed (A) vs centralized (B)\n";
  print_comparison(std::cout, cmp);
  if (strict && dist.termination != Termination::Converged) return 3;
  return 0;
}

// Small built-in property suites; returns the number of failures.
int do_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << "selftest: " << name << " ... " << (ok ? "ok" : "FAIL");
    if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  {  // kernel backends agree
    bool ok = true;
    if (kernels::backend_available(kernels::Backend::Avx2)) {
      SplitMix64 rng(11);
      std::vector<double> a(37), b(37), o1(37), o2(37);
      for (auto& v : a) v = rng.uniform(-5, 5);
      for (auto& v : b) v = rng.uniform(-5, 5);
      kernels::set_backend(kernels::Backend::Scalar);
      kernels::average(a.data(), b.data(), o1.data(), a.size());
      double d1 = kernels::dot(a.data(), b.data(), a.size());
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::average(a.data(), b.data(), o2.data(), a.size());
      double d2 = kernels::dot(a.data(), b.data(), a.size());
      ok = kernels::max_abs_diff(o1.data(), o2.data(), a.size()) == 0.0 &&
           std::fabs(d1 - d2) <= 1e-12 * (1.0 + std::fabs(d1));
    }
    report("kernel backend equivalence", ok);
  }

  {  // projection vs exhaustive oracle
    SplitMix64 rng(22);
    bool ok = true;
    for (int t = 0; t < 300 && ok; ++t) {
      int n = 1 + static_cast<int>(rng.next() % 5);
      std::vector<double> v(n);
      for (auto& x : v) x = rng.uniform(-10, 10);
      double b1 = rng.uniform(0, 10), b2 = rng.uniform(0, 10);
      ProjectionSet set{std::min(b1, b2), std::max(b1, b2)};
      auto fast = project_box_sum_interval(v, set);
      auto slow = brute_force_projection(v, set);
      ok = kernels::max_abs_diff(fast.data(), slow.data(), n) <= 1e-8;
    }
    report("projection matches exhaustive search", ok);
  }

  {  // attacker best response vs grid
    SplitMix64 rng(33);
    bool ok = true;
    for (int t = 0; t < 60 && ok; ++t) {
      int n = 1 + static_cast<int>(rng.next() % 2);
      double scale = n == 1 ? 4.0 : 0.5;
      AttackerNode node;
      node.delta_row.resize(n);
      for (auto& d : node.delta_row) d = rng.uniform(0, scale);
      node.kappa = rng.uniform(0, scale * scale / 4);
      node.c_a = rng.uniform(0, 1);
      std::vector<double> pi(n);
      for (auto& p : pi) p = rng.uniform(0, 3);
      const double step = 0.01;
      auto exact = solve_attacker_node(pi, node);
      auto grid = brute_force_attacker_node(pi, node, step);
      double ue = attacker_objective(exact, pi, node.c_a);
      double ug = attacker_objective(grid, pi, node.c_a);
      double bound = 0.0;
      for (int i = 0; i < n; ++i) bound += (pi[i] + node.c_a) * step;
      ok = ue <= ug + 1e-9 && ug <= ue + bound + 1e-9;
    }
    report("attacker best response matches grid search", ok);
  }

  {  // one- and two-dual iterations coincide
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
      RandomSpec spec;
      spec.num_targets = 3;
      spec.num_sources = 3;
      spec.delta_range = {0, 10};
      spec.gamma_range = {0, 10};
      spec.p_upper_range = {1, 5};
      spec.q_upper_range = {1, 5};
      spec.compromised = {2};
      spec.c_a = 0.4;
      spec.kappa = 6.0;
      Scenario s = generate_random_scenario(spec, seed);
      IterateState one = make_initial_state(s);
      TwoDualState two = make_initial_two_dual_state(s);
      for (int k = 0; k < 20 && ok; ++k) {
        for (int x : s.adversary.compromised) {
          auto row = attacker_row_update(x, one, s);
          for (std::size_t i = 0; i < row.size(); ++i)
            one.xi[s.target_edges[x - 1][i]] = row[i];
        }
        one.pi_prev = one.pi;
        std::vector<double> pt(one.pi.size()), ps(one.pi.size());
        for (int x = 1; x <= s.num_targets; ++x) {
          auto row = target_update(x, one, s);
          for (std::size_t i = 0; i < row.size(); ++i)
            pt[s.target_edges[x - 1][i]] = row[i];
        }
        for (int y = 1; y <= s.num_sources; ++y) {
          auto row = source_update(y, one, s);
          for (std::size_t i = 0; i < row.size(); ++i)
            ps[s.source_edges[y - 1][i]] = row[i];
        }
        one.pi_t = pt;
        one.pi_s = ps;
        consensus_update(one);
        dual_update(one, s.options.eta);
        run_two_dual_step(two, s);
        ok = kernels::max_abs_diff(one.pi.data(), two.pi.data(), one.pi.size()) <= 1e-9;
      }
    }
    report("one-dual and two-dual iterations coincide", ok);
  }

  {  // benchmark instance end to end
    Scenario s = case1_preset();
    SolveResult attacked = run(s);
    SolveResult clean = run(without_adversary(s));
    OracleResult oracle = centralized_best_response(s);
    double rel = std::fabs(attacked.utility - oracle.utility) /
                 std::max(1.0, std::fabs(oracle.utility));
    bool ok = attacked.termination == Termination::Converged &&
              clean.termination == Termination::Converged &&
              attacked.utility < clean.utility && rel <= 1e-3;
    report("benchmark case agrees with centralized oracle", ok,
           "relative gap " + std::to_string(rel));
  }

  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient transport planning under a deceptive adversary"};
  app.require_subcommand(1);

  ScenarioArgs run_args;
  std::string run_trace, run_plan;
  bool run_strict = false;
  CLI::App* cmd_run = app.add_subcommand("run", "Distributed solve of a scenario");
  add_scenario_flags(cmd_run, run_args, true);
  cmd_run->add_option("--trace", run_trace, "Write per-iteration trace CSV");
  cmd_run->add_option("--plan", run_plan, "Write final plan CSV");
  cmd_run->add_flag("--strict", run_strict, "Exit 3 if the run does not converge");

  std::string gen_preset, gen_out;
  std::uint64_t gen_seed = 0;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Write a preset scenario as JSON");
  cmd_gen->add_option("--preset", gen_preset, "case1 or case2")->required();
  cmd_gen->add_option("--seed", gen_seed, "Seed for generated instances")
      ->capture_default_str();
  cmd_gen->add_option("--out", gen_out, "Output path (default: stdout)");

  ScenarioArgs oracle_args;
  std::string oracle_plan;
  CLI::App* cmd_oracle =
      app.add_subcommand("oracle", "Centralized saddle-point solve");
  add_scenario_flags(cmd_oracle, oracle_args, true);
  cmd_oracle->add_option("--plan", oracle_plan, "Write oracle plan CSV");

  ScenarioArgs cmp_args;
  bool cmp_strict = false;
  CLI::App* cmd_cmp =
      app.add_subcommand("compare", "Distributed vs centralized comparison");
  add_scenario_flags(cmd_cmp, cmp_args, true);
  cmd_cmp->add_flag("--strict", cmp_strict, "Exit 3 if the run does not converge");

  CLI::App* cmd_self = app.add_subcommand("selftest", "Built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 1;
  }

  try {
    if (cmd_run->parsed()) return do_run(run_args, run_trace, run_plan, run_strict);
    if (cmd_gen->parsed()) return do_gen(gen_preset, gen_seed, gen_out);
    if (cmd_oracle->parsed()) return do_oracle(oracle_args, oracle_plan);
    if (cmd_cmp->parsed()) return do_compare(cmp_args, cmp_strict);
    if (cmd_self->parsed()) {
      int failures = do_selftest();
      std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
      return failures == 0 ? 0 : 1;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
