#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "sparsebf/algorithm.hpp"
#include "sparsebf/baselines.hpp"
#include "sparsebf/config.hpp"

// Monte-Carlo driver over random cellular layouts: Poisson point processes
// for BS and MS positions on a rectangle, urban-macro pathloss with
// lognormal shadowing and Rayleigh fading, an SINR feasibility screen with
// resampling, and per-trial / aggregated CSV reporting.  Seeds for every
// trial are derived deterministically from the master seed, so results are
// reproducible for any worker count.

namespace sparsebf::sim {

struct SimConfig {
  double area_width_km = 1.0;
  double area_height_km = 1.0;
  double lambda_bs = 4.0;   // per km^2
  double lambda_ms = 8.0;   // per km^2
  int fixed_n_bs = 0;       // > 0 pins the BS count (positions stay uniform)
  int fixed_n_ms = 0;
  int antennas = 2;
  double antenna_gain_db = 9.0;
  double shadow_sigma_db = 8.0;      // standard deviation
  double pathloss_intercept_db = 148.1;
  double pathloss_slope_db = 37.6;   // per decade of distance in km
  double min_distance_km = 0.01;
  double noise_dbm = -102.0;

  std::vector<double> gamma_db{20.0};
  std::vector<double> epsilon_grid{0.0};
  std::vector<std::string> methods{"proposed"};

  int location_draws = 10;
  int fading_draws = 1;
  int trials = 0;  // cap on (location, fading) pairs; 0 = all of them
  int max_feasibility_resamples = 200;
  std::uint64_t master_seed = 1;
  int jobs = 1;

  algorithm::AlgorithmParams alg;
  baselines::BaselineParams base;
  conic::SolverOptions solver;

  void validate() const;
};

// Merges file values and overrides into a SimConfig, rejecting unknown keys.
SimConfig config_from(const config::Config& cfg);

struct TrialRecord {
  long trial_id = 0;
  std::uint64_t seed = 0;
  int n_bs = 0;
  int n_ms = 0;
  std::string method;
  double epsilon = 0.0;
  double gamma_db = 0.0;
  int backhaul_cost = 0;
  double avg_coop = 0.0;
  double power_dbm = 0.0;
  int sdp_count = 0;
  int iterations = 0;
  bool rank1_ok = true;
  bool feasible = true;
  double wall_ms = 0.0;
};

struct AggregateRow {
  std::string method;
  double epsilon = 0.0;
  double gamma_db = 0.0;
  int n_trials = 0;
  double mean_backhaul = 0.0;
  double se_backhaul = 0.0;
  double mean_avg_coop = 0.0;
  double se_avg_coop = 0.0;
  double mean_power_mw = 0.0;
  double mean_power_dbm = 0.0;  // 10*log10(mean mW)
  double se_power_mw = 0.0;
  double mean_sdp_count = 0.0;
  double mean_n_bs = 0.0;
  double mean_n_ms = 0.0;
};

struct MonteCarloResult {
  std::vector<TrialRecord> records;
  std::vector<AggregateRow> aggregates;
  int resampled_draws = 0;  // channel redraws forced by the feasibility screen
  int skipped_draws = 0;    // draws still infeasible after the resample budget
};

// Counter-mixed deterministic sub-seed derivation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

std::vector<Eigen::Vector2d> sample_ppp(double intensity_per_km2, double width_km,
                                        double height_km, std::mt19937_64& rng);
NetworkInstance draw_network(const SimConfig& cfg, std::mt19937_64& rng);
ChannelSet draw_channels(const NetworkInstance& net, const SimConfig& cfg,
                         std::mt19937_64& rng);
SinrSpec make_sinr_spec(int n_ms, double gamma_db, double noise_dbm);

// True when the SINR targets are attainable with unbounded power.
bool feasibility_screen(const ChannelSet& channels, const SinrSpec& spec,
                        const conic::SolverOptions& options);

MonteCarloResult run_monte_carlo(const SimConfig& cfg);

extern const char* kRecordsHeader;

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& os);
void write_aggregates_csv(const std::vector<AggregateRow>& rows, std::ostream& os);
std::vector<TrialRecord> read_records_csv(std::istream& is);
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);

// Figure-shaped views over a records table; `figure` is one of
// tradeoff, coop_vs_sinr, coop_vs_density, table3, table5.
void write_figdata(const std::vector<TrialRecord>& records, const std::string& figure,
                   std::ostream& os);
std::vector<std::string> figure_ids();

}  // namespace sparsebf::sim
