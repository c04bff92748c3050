#include "sparsebf/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

namespace sparsebf::algorithm {

namespace {

bool acceptable(const subproblems::LiftedSolution& sol) { return sol.solved(); }

// Step size mu = step_factor * theta^2, capped so the shrink applied by the
// power-cost term never flips the sign of an iterate (the literal rule
// diverges once 2*mu*epsilon > 2; see the parameter notes in the README).
double step_size(double theta, const AlgorithmParams& p) {
  double mu = p.step_factor * theta * theta;
  if (p.epsilon > 0.0) mu = std::min(mu, 0.45 / p.epsilon);
  return mu;
}

// The smoothing gradient acts radially on each block, scaling it by
// 1 + mu*coeff; for blocks far below theta that factor approaches -1, which
// would flip the sign every iteration in a neutral cycle instead of
// converging.  Descent along a radial direction stops at the origin, so the
// per-block scale is clamped at zero.  (Allowing the flip was tried and both
// converged slower and ended on denser cooperation patterns.)
BeamformerSet perturbed_step(const BeamformerSet& w, const SmoothingState& state,
                             double mu, double rho, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-rho, rho);
  const double t2 = state.theta * state.theta;
  BeamformerSet out = w;
  for (int k = 0; k < w.n_ms(); ++k) {
    double sigma = rho > 0.0 ? unif(rng) : 0.0;
    for (int n = 0; n < w.n_bs; ++n) {
      double bn = w.block_norm(k, n);
      double coeff = -std::exp(-bn * bn / (2.0 * t2)) / t2 - 2.0 * state.epsilon;
      double scale = std::max(0.0, 1.0 + mu * coeff - mu * sigma);
      out.beams[k].segment(n * w.antennas_per_bs, w.antennas_per_bs) *= scale;
    }
  }
  return out;
}

double real_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return a.dot(b).real();  // Eigen's dot conjugates the left argument
}

// Blocks at the conic solver's numerical floor (about sqrt(tolerance) of the
// iterate scale, well below the 1e-3 zero-detection rule) oscillate in sign
// under the step rule and would pin the progress metric at 2r^2/theta^2,
// stalling the annealing.  Snapping them to exact zero keeps the metric
// meaningful without touching any block the detection rule could classify
// as active.
constexpr double kSnapFactor = 5e-4;

void snap_dust(BeamformerSet& w) {
  double cutoff = kSnapFactor * max_block_norm(w);
  for (int k = 0; k < w.n_ms(); ++k)
    for (int n = 0; n < w.n_bs; ++n)
      if (w.block_norm(k, n) <= cutoff)
        w.beams[k].segment(n * w.antennas_per_bs, w.antennas_per_bs).setZero();
}

// Locking smallest-norm-first removal over the detected pattern.  A removal
// is kept only when the masked re-solve is feasible and the power increase
// costs less than the saved link under the score C_B + epsilon * power, so
// every accepted step strictly improves the reported score.  Users already
// served by a single base station are never touched.
void polish_pattern(const ChannelSet& channels, const SinrSpec& spec,
                    const AlgorithmParams& params, SolutionReport& report) {
  const int n = channels.n_bs;
  const int K = channels.n_ms();
  std::vector<std::vector<bool>> locked(K, std::vector<bool>(n, false));
  double power = total_power(report.beams);
  while (true) {
    int best_bs = -1, best_k = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int bs = 0; bs < n; ++bs)
      for (int k = 0; k < K; ++k) {
        if (!report.pattern.is_active(k, bs) || locked[k][bs]) continue;
        if (report.pattern.active_sets[k].size() <= 1) continue;
        double bn = report.beams.block_norm(k, bs);
        if (bn < best - 1e-15) {
          best = bn;
          best_bs = bs;
          best_k = k;
        }
      }
    if (best_bs < 0) break;
    CooperationPattern trial = report.pattern;
    auto& q = trial.active_sets[best_k];
    q.erase(std::remove(q.begin(), q.end(), best_bs), q.end());
    auto sol = subproblems::solve_min_power_with_pattern(channels, spec, trial,
                                                         params.solver);
    ++report.sdp_solve_count;
    bool ok = acceptable(sol) && sol.status != conic::SolveStatus::Infeasible &&
              *std::min_element(sol.sinr_margin.begin(), sol.sinr_margin.end()) >=
                  -subproblems::kFeasTol &&
              params.epsilon * (total_power(sol.beams) - power) < 1.0;
    if (ok) {
      report.pattern = trial;
      power = total_power(sol.beams);
      report.beams = sol.beams;
      report.rank_fallback |= sol.rescue_applied || !sol.rank1_ok;
    } else {
      locked[best_k][best_bs] = true;
    }
  }
}

}  // namespace

void AlgorithmParams::validate() const {
  if (epsilon < 0.0) throw StructuralError("epsilon must be >= 0");
  if (!(eta > 0.0 && eta < 1.0)) throw StructuralError("eta must be in (0,1)");
  if (tau < 0.0) throw StructuralError("tau must be >= 0");
  if (rho < 0.0) throw StructuralError("rho must be >= 0");
  if (theta_min <= 0.0) throw StructuralError("theta_min must be > 0");
  if (theta_init_factor <= 0.0) throw StructuralError("theta_init_factor must be > 0");
  if (step_factor <= 0.0) throw StructuralError("step_factor must be > 0");
  if (max_outer_iterations < 1) throw StructuralError("max_outer_iterations must be >= 1");
  if (stall_window < 1) throw StructuralError("stall_window must be >= 1");
}

double AlgorithmParams::effective_tau(const ChannelSet& channels,
                                      const SinrSpec& spec) const {
  if (tau > 0.0) return tau;
  double mean_gamma = spec.targets.mean();
  return channels.n_ms() * channels.antennas_per_bs * channels.n_bs *
         std::sqrt(mean_gamma) / 2.0;
}

BeamformerSet initialize(const ChannelSet& channels, const SinrSpec& spec,
                         const conic::SolverOptions& options) {
  auto sol = subproblems::solve_obp(channels, spec, options);
  if (sol.status == conic::SolveStatus::Infeasible)
    throw InvalidSolutionError("instance is SINR-infeasible");
  if (!acceptable(sol)) throw InvalidSolutionError("initialization solve failed");
  return sol.beams;
}

double theta_init(const BeamformerSet& w0, double factor) {
  double max_abs = 0.0;
  for (const auto& w : w0.beams) max_abs = std::max(max_abs, w.cwiseAbs().maxCoeff());
  if (max_abs <= 0.0) throw InvalidSolutionError("theta_init: all-zero starting point");
  return factor * max_abs;
}

BeamformerSet gradient_step(const BeamformerSet& w, double theta,
                            const AlgorithmParams& params, std::mt19937_64& rng) {
  SmoothingState state{theta, params.epsilon};
  return perturbed_step(w, state, step_size(theta, params), params.rho, rng);
}

SolutionReport run_algorithm1(const ChannelSet& channels, const SinrSpec& spec,
                              const AlgorithmParams& params) {
  params.validate();
  SolutionReport report;
  std::mt19937_64 rng(params.seed);

  subproblems::LiftedSolution init_sol =
      subproblems::solve_obp(channels, spec, params.solver);
  report.sdp_solve_count = 1;
  if (!acceptable(init_sol)) {
    report.infeasible = true;
    return report;
  }
  report.rank_fallback |= init_sol.rescue_applied;
  BeamformerSet w = init_sol.beams;

  // The annealing loop runs in scaled units w' = w/S with S the peak entry
  // magnitude of the initialization.  Dividing the noise powers by S^2 and
  // multiplying epsilon by S^2 reproduces the original objective exactly;
  // what the scaling fixes is everything that is *not* scale-free in the
  // parameter defaults: the perturbation mu*sigma (mu = 2 theta^2 explodes
  // quadratically with absolute beam scale and would amplify blocks by
  // orders of magnitude per iteration), theta_min, and the solver's dynamic
  // range.  All defaults then mean what they say for O(1) iterates.
  double scale = 0.0;
  for (const auto& wk : w.beams) scale = std::max(scale, wk.cwiseAbs().maxCoeff());
  if (scale <= 0.0) throw InvalidSolutionError("initialization returned zero beams");
  for (auto& wk : w.beams) wk /= scale;
  SinrSpec sspec = spec;
  sspec.noise_powers /= scale * scale;
  AlgorithmParams sparams = params;
  sparams.epsilon = params.epsilon * scale * scale;

  double theta = theta_init(w, params.theta_init_factor);
  const double tau = sparams.effective_tau(channels, sspec);

  bool aborted = false;
  int since_decrease = 0;
  for (int j = 1; j <= params.max_outer_iterations && theta >= params.theta_min; ++j) {
    SmoothingState state{theta, sparams.epsilon};
    BeamformerSet grad = smoothed_gradient(w, state);
    double mu = step_size(theta, sparams);
    BeamformerSet anchor = perturbed_step(w, state, mu, params.rho, rng);

    auto proj = subproblems::solve_ap(channels, sspec, anchor, params.solver);
    ++report.sdp_solve_count;
    IterationRow row;
    row.j = j;
    row.theta = theta;
    row.mu = mu;
    row.sdp_status = proj.status;
    if (!acceptable(proj)) {
      report.trace.rows.push_back(row);
      aborted = true;  // projection of a feasible instance failed
      break;
    }
    report.rank_fallback |= proj.rescue_applied || !proj.rank1_ok;

    BeamformerSet next = proj.beams;
    snap_dust(next);
    double progress = 0.0;
    for (int k = 0; k < w.n_ms(); ++k)
      progress += real_inner(grad.beams[k], next.beams[k] - w.beams[k]);
    progress = std::abs(progress);
    w = next;

    row.objective = smoothed_objective(w, state);
    row.grad_progress = progress;
    row.max_rank_ratio =
        *std::max_element(proj.rank_ratio.begin(), proj.rank_ratio.end());
    row.theta_decreased = progress < tau * theta;
    if (!row.theta_decreased && ++since_decrease >= params.stall_window) {
      row.theta_decreased = true;
      row.forced = true;
    }
    if (row.theta_decreased) {
      theta *= params.eta;
      since_decrease = 0;
    }
    report.trace.rows.push_back(row);
  }
  report.converged = !aborted && theta < params.theta_min;

  // Step 3: minimum power on the detected pattern.
  double zt = zero_threshold(w, params.zero_threshold_factor);
  CooperationPattern pattern = guarded_pattern(w, zt);
  auto final_sol =
      subproblems::solve_min_power_with_pattern(channels, spec, pattern, params.solver);
  ++report.sdp_solve_count;
  if (!acceptable(final_sol)) {
    // Hard-zeroing near-threshold blocks can in rare cases break feasibility;
    // fall back to the unmasked solve.
    pattern = CooperationPattern::full(channels.n_bs, channels.antennas_per_bs,
                                       channels.n_ms());
    final_sol =
        subproblems::solve_min_power_with_pattern(channels, spec, pattern, params.solver);
    ++report.sdp_solve_count;
    report.rank_fallback = true;
  }
  report.rank_fallback |= final_sol.rescue_applied || !final_sol.rank1_ok;
  report.beams = final_sol.beams;
  report.pattern = pattern;
  if (params.polish) polish_pattern(channels, spec, params, report);
  report.backhaul_cost = guarded_backhaul_cost(
      report.beams, zero_threshold(report.beams, params.zero_threshold_factor));
  report.total_power_mw = total_power(report.beams);
  report.total_power_dbm = mw_to_dbm(report.total_power_mw);
  report.avg_coop = static_cast<double>(report.backhaul_cost) / channels.n_ms();
  report.min_sinr_slack = min_relative_sinr_slack(channels, report.beams, spec);
  return report;
}

StationarityReport stationarity_check(const IterationTrace& trace, double tau) {
  StationarityReport rep;
  bool seen = false;
  for (const auto& row : trace.rows) {
    if (row.forced) continue;
    if (!row.theta_decreased) {
      if (row.grad_progress < tau * row.theta) ++rep.violations;
      continue;
    }
    seen = true;
    rep.terminal_progress = row.grad_progress;
    if (row.grad_progress >= tau * row.theta) ++rep.violations;
  }
  rep.ok = seen && rep.violations == 0;
  return rep;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& os) {
  os << "j,theta,mu,objective,grad_progress,max_rank_ratio,sdp_status\n";
  for (const auto& r : trace.rows) {
    os << r.j << ',' << r.theta << ',' << r.mu << ',' << r.objective << ','
       << r.grad_progress << ',' << r.max_rank_ratio << ','
       << conic::to_string(r.sdp_status) << '\n';
  }
}

}  // namespace sparsebf::algorithm
