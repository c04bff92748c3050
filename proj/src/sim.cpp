#include "sparsebf/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace sparsebf::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

const char* kRecordsHeader =
    "trial_id,seed,n_bs,n_ms,method,epsilon,gamma_db,backhaul_cost,avg_coop,"
    "power_dbm,sdp_count,iterations,rank1_ok,feasible,wall_ms";

void SimConfig::validate() const {
  if (area_width_km <= 0.0 || area_height_km <= 0.0)
    throw StructuralError("sim: area dimensions must be > 0");
  if (lambda_bs <= 0.0 && fixed_n_bs <= 0)
    throw StructuralError("sim: lambda_bs must be > 0 (or fix the BS count)");
  if (lambda_ms <= 0.0 && fixed_n_ms <= 0)
    throw StructuralError("sim: lambda_ms must be > 0 (or fix the MS count)");
  if (antennas < 1) throw StructuralError("sim: antennas must be >= 1");
  if (shadow_sigma_db < 0.0) throw StructuralError("sim: shadow_sigma_db must be >= 0");
  if (min_distance_km <= 0.0) throw StructuralError("sim: min_distance_km must be > 0");
  if (gamma_db.empty()) throw StructuralError("sim: gamma_db list is empty");
  if (epsilon_grid.empty()) throw StructuralError("sim: epsilon list is empty");
  if (methods.empty()) throw StructuralError("sim: methods list is empty");
  if (location_draws < 1) throw StructuralError("sim: location_draws must be >= 1");
  if (fading_draws < 1) throw StructuralError("sim: fading_draws must be >= 1");
  if (trials < 0) throw StructuralError("sim: trials must be >= 0");
  if (max_feasibility_resamples < 0)
    throw StructuralError("sim: max_feasibility_resamples must be >= 0");
  if (jobs < 1) throw StructuralError("sim: jobs must be >= 1");
  for (const auto& m : methods) {
    std::string name = lower(m);
    if (name == "b1" || name == "b2" || name == "b3" || name == "baseline1" ||
        name == "baseline2" || name == "baseline3")
      throw StructuralError("method '" + m +
                            "' is not implemented");
    if (name != "proposed" && name != "fullsearch" && name != "linkremoval" &&
        name != "reweighted")
      throw StructuralError("sim: unknown method '" + m + "'");
  }
  alg.validate();
  base.validate();
}

SimConfig config_from(const config::Config& cfg) {
  static const std::set<std::string> known = {
      "network.area_width_km", "network.area_height_km", "network.lambda_bs",
      "network.lambda_ms", "network.fixed_n_bs", "network.fixed_n_ms",
      "network.antennas", "network.antenna_gain_db", "network.shadow_sigma_db",
      "network.pathloss_intercept_db", "network.pathloss_slope_db",
      "network.min_distance_km", "network.noise_dbm",
      "sim.gamma_db", "sim.epsilon", "sim.methods", "sim.location_draws",
      "sim.fading_draws", "sim.trials", "sim.max_feasibility_resamples",
      "sim.master_seed", "sim.jobs",
      "algorithm.eta", "algorithm.tau", "algorithm.rho", "algorithm.theta_min",
      "algorithm.theta_init_factor", "algorithm.step_factor",
      "algorithm.max_outer_iterations", "algorithm.zero_threshold_factor",
      "algorithm.polish",
      "baseline.reweight_iterations", "baseline.reweight_floor",
      "solver.tolerance", "solver.max_iterations"};
  cfg.reject_unknown_keys(known);

  SimConfig s;
  s.area_width_km = cfg.get_double("network.area_width_km", s.area_width_km);
  s.area_height_km = cfg.get_double("network.area_height_km", s.area_height_km);
  s.lambda_bs = cfg.get_double("network.lambda_bs", s.lambda_bs);
  s.lambda_ms = cfg.get_double("network.lambda_ms", s.lambda_ms);
  s.fixed_n_bs = static_cast<int>(cfg.get_long("network.fixed_n_bs", s.fixed_n_bs));
  s.fixed_n_ms = static_cast<int>(cfg.get_long("network.fixed_n_ms", s.fixed_n_ms));
  s.antennas = static_cast<int>(cfg.get_long("network.antennas", s.antennas));
  s.antenna_gain_db = cfg.get_double("network.antenna_gain_db", s.antenna_gain_db);
  s.shadow_sigma_db = cfg.get_double("network.shadow_sigma_db", s.shadow_sigma_db);
  s.pathloss_intercept_db =
      cfg.get_double("network.pathloss_intercept_db", s.pathloss_intercept_db);
  s.pathloss_slope_db = cfg.get_double("network.pathloss_slope_db", s.pathloss_slope_db);
  s.min_distance_km = cfg.get_double("network.min_distance_km", s.min_distance_km);
  s.noise_dbm = cfg.get_double("network.noise_dbm", s.noise_dbm);

  s.gamma_db = cfg.get_double_list("sim.gamma_db", s.gamma_db);
  s.epsilon_grid = cfg.get_double_list("sim.epsilon", s.epsilon_grid);
  s.methods = cfg.get_string_list("sim.methods", s.methods);
  s.location_draws = static_cast<int>(cfg.get_long("sim.location_draws", s.location_draws));
  s.fading_draws = static_cast<int>(cfg.get_long("sim.fading_draws", s.fading_draws));
  s.trials = static_cast<int>(cfg.get_long("sim.trials", s.trials));
  s.max_feasibility_resamples = static_cast<int>(
      cfg.get_long("sim.max_feasibility_resamples", s.max_feasibility_resamples));
  s.master_seed = static_cast<std::uint64_t>(
      cfg.get_long("sim.master_seed", static_cast<long>(s.master_seed)));
  s.jobs = static_cast<int>(cfg.get_long("sim.jobs", s.jobs));

  s.alg.eta = cfg.get_double("algorithm.eta", s.alg.eta);
  s.alg.tau = cfg.get_double("algorithm.tau", s.alg.tau);
  s.alg.rho = cfg.get_double("algorithm.rho", s.alg.rho);
  s.alg.theta_min = cfg.get_double("algorithm.theta_min", s.alg.theta_min);
  s.alg.theta_init_factor =
      cfg.get_double("algorithm.theta_init_factor", s.alg.theta_init_factor);
  s.alg.step_factor = cfg.get_double("algorithm.step_factor", s.alg.step_factor);
  s.alg.max_outer_iterations = static_cast<int>(
      cfg.get_long("algorithm.max_outer_iterations", s.alg.max_outer_iterations));
  s.alg.zero_threshold_factor =
      cfg.get_double("algorithm.zero_threshold_factor", s.alg.zero_threshold_factor);
  s.alg.polish = cfg.get_bool("algorithm.polish", s.alg.polish);
  s.base.zero_threshold_factor = s.alg.zero_threshold_factor;
  s.base.reweight_iterations = static_cast<int>(
      cfg.get_long("baseline.reweight_iterations", s.base.reweight_iterations));
  s.base.reweight_floor = cfg.get_double("baseline.reweight_floor", s.base.reweight_floor);

  s.solver.tolerance = cfg.get_double("solver.tolerance", s.solver.tolerance);
  s.solver.max_iterations = static_cast<int>(
      cfg.get_long("solver.max_iterations", s.solver.max_iterations));
  s.alg.solver = s.solver;
  s.base.solver = s.solver;
  s.validate();
  return s;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(master ^ splitmix64(a)) ^ splitmix64(b + 0x1234567ULL));
}

std::vector<Eigen::Vector2d> sample_ppp(double intensity_per_km2, double width_km,
                                        double height_km, std::mt19937_64& rng) {
  std::poisson_distribution<int> count_dist(intensity_per_km2 * width_km * height_km);
  int count = count_dist(rng);
  std::uniform_real_distribution<double> ux(0.0, width_km), uy(0.0, height_km);
  std::vector<Eigen::Vector2d> pts(count);
  for (auto& p : pts) {
    p.x() = ux(rng);
    p.y() = uy(rng);
  }
  return pts;
}

NetworkInstance draw_network(const SimConfig& cfg, std::mt19937_64& rng) {
  NetworkInstance net;
  net.antennas_per_bs = cfg.antennas;
  std::uniform_real_distribution<double> ux(0.0, cfg.area_width_km);
  std::uniform_real_distribution<double> uy(0.0, cfg.area_height_km);
  auto fixed_draw = [&](int count) {
    std::vector<Eigen::Vector2d> pts(count);
    for (auto& p : pts) p = {ux(rng), uy(rng)};
    return pts;
  };
  // Empty point sets are redrawn; a network with no BS or no MS has no
  // beamforming problem to solve.
  do {
    net.bs_positions =
        cfg.fixed_n_bs > 0
            ? fixed_draw(cfg.fixed_n_bs)
            : sample_ppp(cfg.lambda_bs, cfg.area_width_km, cfg.area_height_km, rng);
  } while (net.bs_positions.empty());
  do {
    net.ms_positions =
        cfg.fixed_n_ms > 0
            ? fixed_draw(cfg.fixed_n_ms)
            : sample_ppp(cfg.lambda_ms, cfg.area_width_km, cfg.area_height_km, rng);
  } while (net.ms_positions.empty());
  net.n_bs = static_cast<int>(net.bs_positions.size());
  net.n_ms = static_cast<int>(net.ms_positions.size());
  net.validate();
  return net;
}

ChannelSet draw_channels(const NetworkInstance& net, const SimConfig& cfg,
                         std::mt19937_64& rng) {
  ChannelSet ch;
  ch.n_bs = net.n_bs;
  ch.antennas_per_bs = net.antennas_per_bs;
  ch.channels.resize(net.n_ms);
  std::normal_distribution<double> shadow(0.0, cfg.shadow_sigma_db);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const int ant = net.antennas_per_bs;
  for (int k = 0; k < net.n_ms; ++k) {
    Eigen::VectorXcd h(net.n_bs * ant);
    for (int n = 0; n < net.n_bs; ++n) {
      double d_km = std::max((net.bs_positions[n] - net.ms_positions[k]).norm(),
                             cfg.min_distance_km);
      double pl_db = cfg.pathloss_intercept_db + cfg.pathloss_slope_db * std::log10(d_km);
      double zeta_db = cfg.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;
      // Amplitude gain; the dB budget covers the power |h|^2.
      double amp = std::pow(10.0, (cfg.antenna_gain_db - pl_db + zeta_db) / 20.0);
      for (int l = 0; l < ant; ++l)
        h(n * ant + l) = amp * std::complex<double>(gauss(rng), gauss(rng));
    }
    ch.channels[k] = h;
  }
  ch.validate();
  return ch;
}

SinrSpec make_sinr_spec(int n_ms, double gamma_db, double noise_dbm) {
  SinrSpec spec;
  spec.targets = Eigen::VectorXd::Constant(n_ms, db_to_linear(gamma_db));
  spec.noise_powers = Eigen::VectorXd::Constant(n_ms, db_to_linear(noise_dbm));
  return spec;
}

bool feasibility_screen(const ChannelSet& channels, const SinrSpec& spec,
                        const conic::SolverOptions& options) {
  auto sol = subproblems::solve_obp(channels, spec, options);
  return sol.solved() && sol.status != conic::SolveStatus::Infeasible;
}

namespace {

struct TrialTask {
  int loc = 0;
  int fade = 0;
};

algorithm::SolutionReport run_method(const std::string& method, const ChannelSet& ch,
                                     const SinrSpec& spec, double eps,
                                     const SimConfig& cfg, std::uint64_t seed,
                                     int* iterations) {
  *iterations = 0;
  std::string name = lower(method);
  if (name == "proposed") {
    algorithm::AlgorithmParams p = cfg.alg;
    p.epsilon = eps;
    p.seed = seed;
    auto rep = algorithm::run_algorithm1(ch, spec, p);
    *iterations = static_cast<int>(rep.trace.rows.size());
    return rep;
  }
  baselines::BaselineParams p = cfg.base;
  p.epsilon = eps;
  if (name == "fullsearch") return baselines::full_search(ch, spec, p);
  if (name == "linkremoval") return baselines::iterative_link_removal(ch, spec, p);
  if (name == "reweighted") return baselines::reweighted_group_l1(ch, spec, p);
  throw StructuralError("sim: unknown method '" + method + "'");
}

}  // namespace

MonteCarloResult run_monte_carlo(const SimConfig& cfg) {
  cfg.validate();
  std::vector<TrialTask> tasks;
  for (int loc = 0; loc < cfg.location_draws; ++loc)
    for (int fade = 0; fade < cfg.fading_draws; ++fade) tasks.push_back({loc, fade});
  if (cfg.trials > 0 && static_cast<int>(tasks.size()) > cfg.trials)
    tasks.resize(cfg.trials);

  const int n_gamma = static_cast<int>(cfg.gamma_db.size());
  std::vector<std::vector<TrialRecord>> per_task(tasks.size());
  std::vector<int> resampled(tasks.size(), 0), skipped(tasks.size(), 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto& task = tasks[t];
      std::mt19937_64 loc_rng(derive_seed(cfg.master_seed, task.loc, 0xB5));
      NetworkInstance net = draw_network(cfg, loc_rng);
      for (int gi = 0; gi < n_gamma; ++gi) {
        double gamma_db = cfg.gamma_db[gi];
        SinrSpec spec = make_sinr_spec(net.n_ms, gamma_db, cfg.noise_dbm);
        std::uint64_t trial_seed =
            derive_seed(cfg.master_seed, task.loc * 1000003ULL + task.fade, gi);
        std::mt19937_64 ch_rng(trial_seed);
        ChannelSet ch = draw_channels(net, cfg, ch_rng);
        bool feasible = feasibility_screen(ch, spec, cfg.solver);
        int attempt = 0;
        while (!feasible && attempt < cfg.max_feasibility_resamples) {
          ++attempt;
          ++resampled[t];
          std::mt19937_64 re_rng(derive_seed(trial_seed, 0x5EED, attempt));
          ch = draw_channels(net, cfg, re_rng);
          feasible = feasibility_screen(ch, spec, cfg.solver);
        }
        long trial_id = static_cast<long>(t) * n_gamma + gi;
        if (!feasible) {
          ++skipped[t];
          TrialRecord rec;
          rec.trial_id = trial_id;
          rec.seed = trial_seed;
          rec.n_bs = net.n_bs;
          rec.n_ms = net.n_ms;
          rec.method = "screen";
          rec.gamma_db = gamma_db;
          rec.feasible = false;
          per_task[t].push_back(rec);
          continue;
        }
        for (const auto& method : cfg.methods) {
          for (std::size_t ei = 0; ei < cfg.epsilon_grid.size(); ++ei) {
            double eps = cfg.epsilon_grid[ei];
            int iterations = 0;
            auto start = std::chrono::steady_clock::now();
            auto rep = run_method(method, ch, spec, eps, cfg,
                                  derive_seed(trial_seed, ei, 0xA16), &iterations);
            auto stop = std::chrono::steady_clock::now();
            TrialRecord rec;
            rec.trial_id = trial_id;
            rec.seed = trial_seed;
            rec.n_bs = net.n_bs;
            rec.n_ms = net.n_ms;
            rec.method = lower(method);
            rec.epsilon = eps;
            rec.gamma_db = gamma_db;
            rec.backhaul_cost = rep.backhaul_cost;
            rec.avg_coop = rep.avg_coop;
            rec.power_dbm = rep.total_power_dbm;
            rec.sdp_count = rep.sdp_solve_count;
            rec.iterations = iterations;
            rec.rank1_ok = !rep.rank_fallback;
            rec.feasible = !rep.infeasible;
            rec.wall_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();
            per_task[t].push_back(rec);
          }
        }
      }
    }
  };

  if (cfg.jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < cfg.jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MonteCarloResult out;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    out.resampled_draws += resampled[t];
    out.skipped_draws += skipped[t];
    for (auto& rec : per_task[t]) out.records.push_back(std::move(rec));
  }
  out.aggregates = aggregate(out.records);
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
  struct Acc {
    AggregateRow row;
    double sum_b = 0, sq_b = 0, sum_c = 0, sq_c = 0, sum_p = 0, sq_p = 0;
    double sum_sdp = 0, sum_nbs = 0, sum_nms = 0;
  };
  std::vector<Acc> accs;
  std::map<std::tuple<std::string, double, double>, std::size_t> index;
  for (const auto& r : records) {
    if (!r.feasible || r.method == "screen") continue;
    auto key = std::make_tuple(r.method, r.epsilon, r.gamma_db);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, accs.size()).first;
      accs.emplace_back();
      accs.back().row.method = r.method;
      accs.back().row.epsilon = r.epsilon;
      accs.back().row.gamma_db = r.gamma_db;
    }
    Acc& a = accs[it->second];
    double p_mw = std::pow(10.0, r.power_dbm / 10.0);
    ++a.row.n_trials;
    a.sum_b += r.backhaul_cost;
    a.sq_b += static_cast<double>(r.backhaul_cost) * r.backhaul_cost;
    a.sum_c += r.avg_coop;
    a.sq_c += r.avg_coop * r.avg_coop;
    a.sum_p += p_mw;
    a.sq_p += p_mw * p_mw;
    a.sum_sdp += r.sdp_count;
    a.sum_nbs += r.n_bs;
    a.sum_nms += r.n_ms;
  }
  std::vector<AggregateRow> out;
  for (auto& a : accs) {
    int n = a.row.n_trials;
    auto se = [n](double sum, double sq) {
      if (n < 2) return 0.0;
      double mean = sum / n;
      double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
      return std::sqrt(var / n);
    };
    a.row.mean_backhaul = a.sum_b / n;
    a.row.se_backhaul = se(a.sum_b, a.sq_b);
    a.row.mean_avg_coop = a.sum_c / n;
    a.row.se_avg_coop = se(a.sum_c, a.sq_c);
    a.row.mean_power_mw = a.sum_p / n;
    a.row.mean_power_dbm = mw_to_dbm(a.row.mean_power_mw);
    a.row.se_power_mw = se(a.sum_p, a.sq_p);
    a.row.mean_sdp_count = a.sum_sdp / n;
    a.row.mean_n_bs = a.sum_nbs / n;
    a.row.mean_n_ms = a.sum_nms / n;
    out.push_back(a.row);
  }
  std::sort(out.begin(), out.end(), [](const AggregateRow& x, const AggregateRow& y) {
    return std::tie(x.method, x.epsilon, x.gamma_db) <
           std::tie(y.method, y.epsilon, y.gamma_db);
  });
  return out;
}

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& os) {
  os << kRecordsHeader << '\n';
  for (const auto& r : records) {
    os << r.trial_id << ',' << r.seed << ',' << r.n_bs << ',' << r.n_ms << ','
       << r.method << ',' << fmt(r.epsilon) << ',' << fmt(r.gamma_db) << ','
       << r.backhaul_cost << ',' << fmt(r.avg_coop) << ',' << fmt(r.power_dbm) << ','
       << r.sdp_count << ',' << r.iterations << ',' << (r.rank1_ok ? 1 : 0) << ','
       << (r.feasible ? 1 : 0) << ',' << fmt(r.wall_ms) << '\n';
  }
}

void write_aggregates_csv(const std::vector<AggregateRow>& rows, std::ostream& os) {
  os << "method,epsilon,gamma_db,n_trials,mean_backhaul,se_backhaul,mean_avg_coop,"
        "se_avg_coop,mean_power_mw,mean_power_dbm,se_power_mw,mean_sdp_count,"
        "mean_n_bs,mean_n_ms\n";
  for (const auto& r : rows) {
    os << r.method << ',' << fmt(r.epsilon) << ',' << fmt(r.gamma_db) << ','
       << r.n_trials << ',' << fmt(r.mean_backhaul) << ',' << fmt(r.se_backhaul) << ','
       << fmt(r.mean_avg_coop) << ',' << fmt(r.se_avg_coop) << ','
       << fmt(r.mean_power_mw) << ',' << fmt(r.mean_power_dbm) << ','
       << fmt(r.se_power_mw) << ',' << fmt(r.mean_sdp_count) << ','
       << fmt(r.mean_n_bs) << ',' << fmt(r.mean_n_ms) << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw StructuralError("records csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader)
    throw StructuralError("records csv: unexpected header: " + line);
  std::vector<TrialRecord> out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) f.push_back(item);
    if (f.size() != 15)
      throw StructuralError("records csv: expected 15 fields, got " +
                            std::to_string(f.size()));
    TrialRecord r;
    r.trial_id = std::stol(f[0]);
    r.seed = std::stoull(f[1]);
    r.n_bs = std::stoi(f[2]);
    r.n_ms = std::stoi(f[3]);
    r.method = f[4];
    r.epsilon = std::stod(f[5]);
    r.gamma_db = std::stod(f[6]);
    r.backhaul_cost = std::stoi(f[7]);
    r.avg_coop = std::stod(f[8]);
    r.power_dbm = std::stod(f[9]);
    r.sdp_count = std::stoi(f[10]);
    r.iterations = std::stoi(f[11]);
    r.rank1_ok = std::stoi(f[12]) != 0;
    r.feasible = std::stoi(f[13]) != 0;
    r.wall_ms = std::stod(f[14]);
    out.push_back(r);
  }
  return out;
}

std::vector<std::string> figure_ids() {
  return {"tradeoff", "coop_vs_sinr", "coop_vs_density", "table3", "table5"};
}

void write_figdata(const std::vector<TrialRecord>& records, const std::string& figure,
                   std::ostream& os) {
  auto rows = aggregate(records);
  auto series_name = [](const AggregateRow& r) {
    return r.method + ":eps=" + fmt(r.epsilon);
  };
  // Delta-method standard error of 10*log10(mean power).
  auto se_dbm = [](const AggregateRow& r) {
    return r.mean_power_mw > 0.0
               ? 10.0 / std::log(10.0) * r.se_power_mw / r.mean_power_mw
               : 0.0;
  };
  if (figure == "tradeoff") {
    os << "x,series,mean,stderr\n";
    for (const auto& r : rows)
      os << fmt(r.mean_avg_coop) << ',' << series_name(r) << ','
         << fmt(r.mean_power_dbm) << ',' << fmt(se_dbm(r)) << '\n';
  } else if (figure == "coop_vs_sinr") {
    os << "x,series,mean,stderr\n";
    for (const auto& r : rows)
      os << fmt(r.gamma_db) << ',' << series_name(r) << ',' << fmt(r.mean_backhaul)
         << ',' << fmt(r.se_backhaul) << '\n';
  } else if (figure == "coop_vs_density") {
    // Realized user count stands in for the MS density on the x axis.
    struct Cell {
      double sum = 0, sq = 0;
      int n = 0;
    };
    std::map<std::pair<int, std::string>, Cell> cells;
    for (const auto& r : records) {
      if (!r.feasible || r.method == "screen") continue;
      auto& c = cells[{r.n_ms, r.method + ":eps=" + fmt(r.epsilon)}];
      c.sum += r.backhaul_cost;
      c.sq += static_cast<double>(r.backhaul_cost) * r.backhaul_cost;
      ++c.n;
    }
    os << "x,series,mean,stderr\n";
    for (const auto& [key, c] : cells) {
      double mean = c.sum / c.n;
      double se = 0.0;
      if (c.n >= 2) {
        double var = std::max(0.0, (c.sq - c.n * mean * mean) / (c.n - 1));
        se = std::sqrt(var / c.n);
      }
      os << key.first << ',' << key.second << ',' << fmt(mean) << ',' << fmt(se)
         << '\n';
    }
  } else if (figure == "table3") {
    os << "x,series,mean,stderr\n";
    for (const auto& r : rows)
      os << fmt(r.gamma_db) << ',' << series_name(r) << ',' << fmt(r.mean_power_dbm)
         << ',' << fmt(se_dbm(r)) << '\n';
  } else if (figure == "table5") {
    os << "epsilon,method,avg_pwr_dbm,avg_coop,sdp_count\n";
    for (const auto& r : rows)
      os << fmt(r.epsilon) << ',' << r.method << ',' << fmt(r.mean_power_dbm) << ','
         << fmt(r.mean_avg_coop) << ',' << fmt(r.mean_sdp_count) << '\n';
  } else {
    std::string valid;
    for (const auto& id : figure_ids()) valid += (valid.empty() ? "" : ", ") + id;
    throw StructuralError("unknown figure '" + figure + "'; expected one of: " + valid);
  }
}

}  // namespace sparsebf::sim
