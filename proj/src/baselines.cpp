#include "sparsebf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace sparsebf::baselines {

namespace {

using algorithm::SolutionReport;

void fill_metrics(SolutionReport& rep, const ChannelSet& channels, const SinrSpec& spec,
                  double zt_factor) {
  rep.total_power_mw = total_power(rep.beams);
  rep.total_power_dbm = mw_to_dbm(rep.total_power_mw);
  rep.backhaul_cost =
      guarded_backhaul_cost(rep.beams, zero_threshold(rep.beams, zt_factor));
  rep.avg_coop = static_cast<double>(rep.backhaul_cost) / channels.n_ms();
  rep.min_sinr_slack = min_relative_sinr_slack(channels, rep.beams, spec);
  rep.converged = true;
}

double score(const SolutionReport& rep, double epsilon) {
  return rep.backhaul_cost + epsilon * rep.total_power_mw;
}

}  // namespace

void BaselineParams::validate() const {
  if (epsilon < 0.0) throw StructuralError("epsilon must be >= 0");
  if (reweight_iterations < 1) throw StructuralError("reweight_iterations must be >= 1");
  if (reweight_floor <= 0.0) throw StructuralError("reweight_floor must be > 0");
}

long full_search_pattern_count(int n_bs, int n_ms) {
  double count = std::pow(std::pow(2.0, n_bs) - 1.0, n_ms);
  if (count > static_cast<double>(kFullSearchBudget))
    throw StructuralError(
        "full search budget exceeded: (2^N-1)^K patterns; reduce N or K, or use the "
        "proposed method");
  return static_cast<long>(std::llround(count));
}

algorithm::SolutionReport full_search(const ChannelSet& channels, const SinrSpec& spec,
                                      const BaselineParams& params) {
  params.validate();
  channels.validate();
  spec.validate();
  const int n = channels.n_bs;
  const int k_users = channels.n_ms();
  const long total = full_search_pattern_count(n, k_users);

  SolutionReport best;
  best.infeasible = true;
  double best_score = std::numeric_limits<double>::infinity();

  std::vector<int> subset(k_users, 1);  // per-user bitmask in 1 .. 2^N - 1
  const int top = (1 << n) - 1;
  long solves = 0;
  while (true) {
    CooperationPattern pattern;
    pattern.n_bs = n;
    pattern.antennas_per_bs = channels.antennas_per_bs;
    pattern.active_sets.resize(k_users);
    for (int k = 0; k < k_users; ++k)
      for (int bs = 0; bs < n; ++bs)
        if (subset[k] & (1 << bs)) pattern.active_sets[k].push_back(bs);

    auto sol = subproblems::solve_min_power_with_pattern(channels, spec, pattern,
                                                         params.solver);
    ++solves;
    if (sol.solved() && sol.sinr_margin.size() &&
        *std::min_element(sol.sinr_margin.begin(), sol.sinr_margin.end()) >=
            -subproblems::kFeasTol) {
      SolutionReport cand;
      cand.beams = sol.beams;
      cand.pattern = pattern;
      cand.rank_fallback = sol.rescue_applied || !sol.rank1_ok;
      fill_metrics(cand, channels, spec, params.zero_threshold_factor);
      double s = score(cand, params.epsilon);
      if (s < best_score - 1e-12) {
        best_score = s;
        best = cand;
        best.infeasible = false;
      }
    }

    int k = 0;
    while (k < k_users && subset[k] == top) subset[k++] = 1;
    if (k == k_users) break;
    ++subset[k];
  }
  best.sdp_solve_count = static_cast<int>(solves);
  (void)total;
  return best;
}

algorithm::SolutionReport iterative_link_removal(const ChannelSet& channels,
                                                 const SinrSpec& spec,
                                                 const BaselineParams& params) {
  params.validate();
  const int n = channels.n_bs;
  const int k_users = channels.n_ms();
  SolutionReport rep;

  auto current = subproblems::solve_obp(channels, spec, params.solver);
  rep.sdp_solve_count = 1;
  if (!current.solved() || current.status == conic::SolveStatus::Infeasible) {
    rep.infeasible = true;
    return rep;
  }
  CooperationPattern pattern = CooperationPattern::full(n, channels.antennas_per_bs, k_users);
  BeamformerSet w = current.beams;
  std::vector<std::vector<bool>> locked(k_users, std::vector<bool>(n, false));

  while (true) {
    // Smallest-norm active block among users that still have a spare BS,
    // ties broken by lowest (n, k).
    std::optional<std::pair<int, int>> pick;  // (bs, user)
    double best_norm = std::numeric_limits<double>::infinity();
    for (int bs = 0; bs < n; ++bs) {
      for (int k = 0; k < k_users; ++k) {
        if (!pattern.is_active(k, bs) || locked[k][bs]) continue;
        if (pattern.active_sets[k].size() <= 1) continue;
        double bn = w.block_norm(k, bs);
        if (bn < best_norm - 1e-15) {
          best_norm = bn;
          pick = {bs, k};
        }
      }
    }
    if (!pick) break;
    auto [bs, k] = *pick;
    CooperationPattern trial = pattern;
    auto& q = trial.active_sets[k];
    q.erase(std::remove(q.begin(), q.end(), bs), q.end());

    auto sol = subproblems::solve_min_power_with_pattern(channels, spec, trial,
                                                         params.solver);
    ++rep.sdp_solve_count;
    bool feasible = sol.solved() && sol.status != conic::SolveStatus::Infeasible &&
                    *std::min_element(sol.sinr_margin.begin(), sol.sinr_margin.end()) >=
                        -subproblems::kFeasTol;
    if (feasible) {
      pattern = trial;
      w = sol.beams;
      rep.rank_fallback |= sol.rescue_applied || !sol.rank1_ok;
    } else {
      locked[k][bs] = true;
    }
  }
  rep.beams = w;
  rep.pattern = pattern;
  fill_metrics(rep, channels, spec, params.zero_threshold_factor);
  return rep;
}

algorithm::SolutionReport reweighted_group_l1(const ChannelSet& channels,
                                              const SinrSpec& spec,
                                              const BaselineParams& params) {
  params.validate();
  const int n = channels.n_bs;
  const int ant = channels.antennas_per_bs;
  const int k_users = channels.n_ms();
  SolutionReport rep;

  auto [nch, nsp] = subproblems::normalized_instance(channels, spec);
  conic::SdpProblem base = subproblems::build_obp_sdp(nch, nsp);
  Eigen::MatrixXd weights = Eigen::MatrixXd::Ones(n, k_users);  // beta_{n,k}
  Eigen::MatrixXd group_power = Eigen::MatrixXd::Zero(n, k_users);

  for (int t = 0; t < params.reweight_iterations; ++t) {
    conic::SdpProblem p = base;
    for (int k = 0; k < k_users; ++k) {
      Eigen::VectorXcd diag(n * ant);
      for (int bs = 0; bs < n; ++bs)
        diag.segment(bs * ant, ant).setConstant(weights(bs, k) + params.epsilon);
      p.objective[k] =
          conic::embed_hermitian(Eigen::MatrixXcd(diag.asDiagonal()));
    }
    auto res = conic::solve(p, params.solver);
    ++rep.sdp_solve_count;
    bool usable = res.status == conic::SolveStatus::Optimal ||
                  (res.status == conic::SolveStatus::MaxIterations &&
                   res.residuals.primal <= 1e-6 && res.residuals.dual <= 1e-6);
    if (!usable) {
      rep.infeasible = true;
      return rep;
    }
    for (int k = 0; k < k_users; ++k) {
      Eigen::MatrixXcd wk = conic::unembed_hermitian(res.primal_blocks[k]);
      for (int bs = 0; bs < n; ++bs)
        group_power(bs, k) =
            wk.block(bs * ant, bs * ant, ant, ant).real().diagonal().sum();
    }
    weights = (group_power.array() + params.reweight_floor).inverse();
  }

  // Threshold group powers into a pattern, then refit the power-minimal beams.
  double max_norm = std::sqrt(group_power.maxCoeff());
  double zt = params.zero_threshold_factor * max_norm;
  CooperationPattern pattern;
  pattern.n_bs = n;
  pattern.antennas_per_bs = ant;
  pattern.active_sets.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    for (int bs = 0; bs < n; ++bs)
      if (std::sqrt(group_power(bs, k)) > zt) pattern.active_sets[k].push_back(bs);
    if (pattern.active_sets[k].empty()) {
      // Degenerate fall-back: keep the strongest block.
      int best = 0;
      group_power.col(k).maxCoeff(&best);
      pattern.active_sets[k].push_back(best);
    }
  }
  auto final_sol =
      subproblems::solve_min_power_with_pattern(channels, spec, pattern, params.solver);
  ++rep.sdp_solve_count;
  if (!final_sol.solved() || final_sol.status == conic::SolveStatus::Infeasible) {
    // Thresholding broke feasibility; refit with all links.
    pattern = CooperationPattern::full(n, ant, k_users);
    final_sol =
        subproblems::solve_min_power_with_pattern(channels, spec, pattern, params.solver);
    ++rep.sdp_solve_count;
  }
  if (!final_sol.solved()) {
    rep.infeasible = true;
    return rep;
  }
  rep.rank_fallback |= final_sol.rescue_applied || !final_sol.rank1_ok;
  rep.beams = final_sol.beams;
  rep.pattern = pattern;
  fill_metrics(rep, channels, spec, params.zero_threshold_factor);
  return rep;
}

}  // namespace sparsebf::baselines
