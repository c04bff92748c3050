#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparsebf/sim.hpp"

namespace {

using namespace sparsebf;

sim::SimConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides) {
  config::Config cfg =
      path.empty() ? config::Config{} : config::Config::parse_file(path);
  for (const auto& o : overrides) cfg.apply_override(o);
  return sim::config_from(cfg);
}

int run_campaign(sim::SimConfig cfg, const std::string& records_path,
                 const std::string& aggregates_path) {
  auto result = sim::run_monte_carlo(cfg);
  if (!records_path.empty()) {
    std::ofstream out(records_path);
    if (!out) throw StructuralError("cannot write " + records_path);
    sim::write_records_csv(result.records, out);
  }
  if (!aggregates_path.empty()) {
    std::ofstream out(aggregates_path);
    if (!out) throw StructuralError("cannot write " + aggregates_path);
    sim::write_aggregates_csv(result.aggregates, out);
  }
  sim::write_aggregates_csv(result.aggregates, std::cout);
  std::cerr << "trials: " << result.records.size() << " records, "
            << result.resampled_draws << " channel redraws (feasibility screen), "
            << result.skipped_draws << " draws skipped\n";
  return 0;
}

int cmd_check(const std::string& problem_path, double tol) {
  std::ifstream in(problem_path);
  if (!in) throw StructuralError("cannot open " + problem_path);
  conic::SdpProblem problem = conic::parse_problem_dump(in);
  auto result = conic::solve(problem);
  auto res = conic::check_kkt(problem, result);
  std::cout << "status: " << conic::to_string(result.status) << '\n'
            << "iterations: " << result.iterations << '\n'
            << "objective: " << result.objective << '\n'
            << "kkt_primal: " << res.primal << '\n'
            << "kkt_dual: " << res.dual << '\n'
            << "kkt_complementarity: " << res.complementarity << '\n';
  bool certified = result.status == conic::SolveStatus::Infeasible ||
                   result.status == conic::SolveStatus::Unbounded;
  bool ok = certified ||
            (res.primal <= tol && res.dual <= tol && res.complementarity <= tol);
  std::cout << (ok ? "check: pass" : "check: FAIL") << '\n';
  return ok ? 0 : 1;
}

int cmd_figdata(const std::string& records_path, const std::string& figure,
                const std::string& out_path) {
  std::ifstream in(records_path);
  if (!in) throw StructuralError("cannot open " + records_path);
  auto records = sim::read_records_csv(in);
  if (out_path.empty()) {
    sim::write_figdata(records, figure, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw StructuralError("cannot write " + out_path);
    sim::write_figdata(records, figure, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse multicell beamforming: joint base-station clustering and "
               "beamformer design via smoothed-l0 semidefinite relaxation"};
  app.require_subcommand(1);

  std::string config_path, records_path, aggregates_path;
  std::vector<std::string> overrides;
  int jobs = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "configuration file (key=value)");
    sub->add_option("--set", overrides,
                    "override a config value, e.g. --set sim.master_seed=7");
    sub->add_option("--records", records_path, "per-trial CSV output path");
    sub->add_option("--aggregates", aggregates_path, "aggregate CSV output path");
    sub->add_option("-j,--jobs", jobs, "worker threads (results are seed-exact "
                                       "for any value)");
  };

  auto* run = app.add_subcommand("run", "Monte-Carlo campaign from a config");
  add_common(run);

  auto* sweep = app.add_subcommand(
      "sweep", "Monte-Carlo campaign over comma-separated parameter lists");
  add_common(sweep);
  std::string sweep_eps, sweep_gamma, sweep_methods;
  sweep->add_option("--epsilon", sweep_eps, "epsilon list, e.g. 0,0.1,0.5");
  sweep->add_option("--gamma-db", sweep_gamma, "SINR target list in dB");
  sweep->add_option("--methods", sweep_methods,
                    "methods: proposed,fullsearch,linkremoval,reweighted");

  auto* fullsearch = app.add_subcommand(
      "fullsearch", "exhaustive pattern search only (small instances)");
  add_common(fullsearch);

  std::string problem_path;
  double check_tol = 1e-6;
  auto* check = app.add_subcommand("check", "solve a problem dump and verify the "
                                            "KKT residuals");
  check->add_option("--problem", problem_path, "problem dump file")->required();
  check->add_option("--tol", check_tol, "residual tolerance");

  std::string fig_records, figure, fig_out;
  auto* figdata =
      app.add_subcommand("figdata", "aggregate a records CSV into figure data");
  figdata->add_option("--records", fig_records, "per-trial records CSV")->required();
  figdata->add_option("--figure", figure,
                      "one of: tradeoff, coop_vs_sinr, coop_vs_density, table3, "
                      "table5")
      ->required();
  figdata->add_option("-o,--out", fig_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(problem_path, check_tol);
    if (figdata->parsed()) return cmd_figdata(fig_records, figure, fig_out);

    if (sweep->parsed()) {
      if (!sweep_eps.empty()) overrides.push_back("sim.epsilon=" + sweep_eps);
      if (!sweep_gamma.empty()) overrides.push_back("sim.gamma_db=" + sweep_gamma);
      if (!sweep_methods.empty()) overrides.push_back("sim.methods=" + sweep_methods);
    }
    if (fullsearch->parsed()) overrides.push_back("sim.methods=fullsearch");

    sim::SimConfig cfg = load_config(config_path, overrides);
    if (jobs > 0) cfg.jobs = jobs;
    return run_campaign(cfg, records_path, aggregates_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
