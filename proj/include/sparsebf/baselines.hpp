#pragma once

#include "sparsebf/algorithm.hpp"

// Comparison schemes sharing the same conic core: exhaustive search over
// cooperation patterns, iterative smallest-power link removal, and
// reweighted group-l1 minimization at the SDR level.

namespace sparsebf::baselines {

struct BaselineParams {
  double epsilon = 0.0;
  int reweight_iterations = 5;
  double reweight_floor = 1e-8;  // mW, keeps weights finite at zero power
  double zero_threshold_factor = kDefaultZeroThresholdFactor;
  conic::SolverOptions solver;

  void validate() const;
};

inline constexpr long kFullSearchBudget = 100000;

// Number of pattern combinations (2^N - 1)^K; throws when over budget.
long full_search_pattern_count(int n_bs, int n_ms);

algorithm::SolutionReport full_search(const ChannelSet& channels, const SinrSpec& spec,
                                      const BaselineParams& params);
algorithm::SolutionReport iterative_link_removal(const ChannelSet& channels,
                                                 const SinrSpec& spec,
                                                 const BaselineParams& params);
algorithm::SolutionReport reweighted_group_l1(const ChannelSet& channels,
                                              const SinrSpec& spec,
                                              const BaselineParams& params);

}  // namespace sparsebf::baselines
