#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

#include "sparsebf/subproblems.hpp"

// Smoothed-l0 sparse beamforming: minimum-power initialization, perturbed
// projected-gradient ascent on the smoothed support objective with annealed
// smoothing width, zero-pattern detection, and a final minimum-power re-solve
// restricted to the detected cooperation pattern.

namespace sparsebf::algorithm {

struct AlgorithmParams {
  double epsilon = 0.0;              // power-cost weight
  double eta = 0.9;                  // theta decrease factor, in (0,1)
  double tau = 0.0;                  // theta-update control; 0 = auto rule
  double rho = 1e-4;                 // perturbation bound
  double theta_min = 1e-4;
  double theta_init_factor = 2.0;    // times max entry magnitude
  double step_factor = 2.0;          // mu = step_factor * theta^2
  int max_outer_iterations = 500;
  // Iterations without a theta decrease before one is forced.  The progress
  // test can be pinned high forever by a period-2 cycle of a block whose
  // norm feasibility holds near theta (the step rule flips its sign each
  // iteration); the forced decrease bounds the annealing schedule.
  int stall_window = 20;
  // Run a final pruning pass over the detected pattern: repeatedly try to
  // deactivate the smallest-norm active block and keep the removal only when
  // the masked re-solve stays feasible and the score C_B + epsilon * power
  // improves.  The annealing leaves a few removable links behind (its
  // gradient vanishes for blocks far above theta), and the pass cleans those
  // up at the cost of a handful of extra masked solves.
  bool polish = true;
  double zero_threshold_factor = kDefaultZeroThresholdFactor;
  std::uint64_t seed = 0;
  conic::SolverOptions solver;

  void validate() const;
  // Default control value K*L*N*sqrt(mean linear target)/2.
  double effective_tau(const ChannelSet& channels, const SinrSpec& spec) const;
};

struct IterationRow {
  int j = 0;
  double theta = 0.0;
  double mu = 0.0;
  double objective = 0.0;       // smoothed objective after the step
  double grad_progress = 0.0;   // |sum_k <delta_k, w_k^j - w_k^{j-1}>|
  double max_rank_ratio = 0.0;
  conic::SolveStatus sdp_status = conic::SolveStatus::MaxIterations;
  bool theta_decreased = false;
  bool forced = false;  // decrease came from the stall window, not the test
};

struct IterationTrace {
  std::vector<IterationRow> rows;
};

struct SolutionReport {
  BeamformerSet beams;
  CooperationPattern pattern;
  int backhaul_cost = 0;
  double total_power_mw = 0.0;
  double total_power_dbm = 0.0;
  double avg_coop = 0.0;
  int sdp_solve_count = 0;
  IterationTrace trace;
  bool converged = false;        // theta reached theta_min before the cap
  bool rank_fallback = false;    // any eigenvector-rescue event
  bool infeasible = false;       // instance failed the initialization solve
  double min_sinr_slack = 0.0;   // relative, over all users
};

struct StationarityReport {
  bool ok = false;
  double terminal_progress = 0.0;  // grad progress at the last theta decrease
  int violations = 0;              // theta decreases with progress >= tau*theta
};

BeamformerSet initialize(const ChannelSet& channels, const SinrSpec& spec,
                         const conic::SolverOptions& options = {});
double theta_init(const BeamformerSet& w0, double factor);
BeamformerSet gradient_step(const BeamformerSet& w, double theta,
                            const AlgorithmParams& params, std::mt19937_64& rng);
SolutionReport run_algorithm1(const ChannelSet& channels, const SinrSpec& spec,
                              const AlgorithmParams& params);
StationarityReport stationarity_check(const IterationTrace& trace, double tau);

void write_trace_csv(const IterationTrace& trace, std::ostream& os);

}  // namespace sparsebf::algorithm
