#include <doctest.h>

#include <random>

#include "sparsebf/baselines.hpp"
#include "test_util.hpp"

using namespace sparsebf;
using testutil::random_channels;
using testutil::uniform_spec;

TEST_CASE("pattern count follows (2^N - 1)^K") {
  CHECK(baselines::full_search_pattern_count(3, 3) == 343);
  CHECK(baselines::full_search_pattern_count(2, 2) == 9);
  CHECK(baselines::full_search_pattern_count(1, 5) == 1);
  CHECK_THROWS_AS(baselines::full_search_pattern_count(8, 6), StructuralError);
}

TEST_CASE("full search dominates any fixed pattern") {
  std::mt19937_64 rng(301);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.1);
  baselines::BaselineParams params;
  params.epsilon = 0.1;
  auto best = baselines::full_search(ch, spec, params);
  REQUIRE(!best.infeasible);
  CHECK(best.sdp_solve_count == 9);
  CHECK(best.min_sinr_slack >= -1e-6);
  double best_score = best.backhaul_cost + params.epsilon * best.total_power_mw;

  // Any concrete pattern must not beat the exhaustive optimum.
  for (auto pat : {CooperationPattern::full(2, 1, 2)}) {
    auto sol = subproblems::solve_min_power_with_pattern(ch, spec, pat);
    REQUIRE(sol.solved());
    double c = backhaul_cost(sol.beams, zero_threshold(sol.beams));
    CHECK(best_score <= c + params.epsilon * total_power(sol.beams) + 1e-9);
  }
}

TEST_CASE("full search at epsilon 0 finds a minimum-link solution") {
  std::mt19937_64 rng(303);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 0.5, 0.1);
  baselines::BaselineParams params;
  auto best = baselines::full_search(ch, spec, params);
  REQUIRE(!best.infeasible);
  // Single-serving-BS assignments are feasible here at low targets, so the
  // exhaustive optimum uses no extra cooperation links.
  CHECK(best.backhaul_cost == 0);
}

TEST_CASE("full search flags infeasible instances") {
  ChannelSet ch;
  ch.n_bs = 1;
  ch.antennas_per_bs = 1;
  ch.channels = {Eigen::VectorXcd::Constant(1, 1.0),
                 Eigen::VectorXcd::Constant(1, 1.0)};
  SinrSpec spec = uniform_spec(2, 2.0, 0.1);
  baselines::BaselineParams params;
  auto best = baselines::full_search(ch, spec, params);
  CHECK(best.infeasible);
}

TEST_CASE("iterative link removal stays feasible and never adds links") {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 5; ++trial) {
    auto ch = random_channels(2, 2, 2, rng);
    SinrSpec spec = uniform_spec(2, 1.0, 0.1);
    baselines::BaselineParams params;
    auto rep = baselines::iterative_link_removal(ch, spec, params);
    REQUIRE(!rep.infeasible);
    CHECK(rep.min_sinr_slack >= -1e-6);
    CHECK(rep.backhaul_cost <= 2 * (2 - 1));  // at most the full pattern
    CHECK(rep.backhaul_cost >= 0);
    for (const auto& q : rep.pattern.active_sets) CHECK(!q.empty());
  }
}

TEST_CASE("link removal is at least as sparse as exhaustive search is at zero") {
  std::mt19937_64 rng(311);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.1);
  baselines::BaselineParams params;
  auto exhaustive = baselines::full_search(ch, spec, params);
  auto greedy = baselines::iterative_link_removal(ch, spec, params);
  REQUIRE(!exhaustive.infeasible);
  REQUIRE(!greedy.infeasible);
  CHECK(greedy.backhaul_cost >= exhaustive.backhaul_cost);
}

TEST_CASE("reweighted group-l1 returns a feasible sparse solution") {
  std::mt19937_64 rng(313);
  for (int trial = 0; trial < 5; ++trial) {
    auto ch = random_channels(2, 2, 2, rng);
    SinrSpec spec = uniform_spec(2, 1.0, 0.1);
    baselines::BaselineParams params;
    params.epsilon = 0.05;
    auto rep = baselines::reweighted_group_l1(ch, spec, params);
    REQUIRE(!rep.infeasible);
    CHECK(rep.min_sinr_slack >= -1e-6);
    CHECK(rep.sdp_solve_count >= params.reweight_iterations + 1);
    for (const auto& q : rep.pattern.active_sets) CHECK(!q.empty());
  }
}

TEST_CASE("one reweighting round reduces to the minimum-power problem") {
  std::mt19937_64 rng(317);
  auto ch = random_channels(2, 2, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.1);
  auto obp = subproblems::solve_obp(ch, spec);
  REQUIRE(obp.solved());
  baselines::BaselineParams params;
  params.reweight_iterations = 1;
  params.epsilon = 0.0;
  auto rep = baselines::reweighted_group_l1(ch, spec, params);
  REQUIRE(!rep.infeasible);
  // Unit weights make the first round a pure power minimization; the refit
  // on the thresholded pattern cannot beat the unconstrained optimum.
  CHECK(rep.total_power_mw >= total_power(obp.beams) * (1.0 - 1e-6));
}

TEST_CASE("baselines are deterministic") {
  std::mt19937_64 rng(331);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.1);
  baselines::BaselineParams params;
  params.epsilon = 0.2;
  auto a = baselines::full_search(ch, spec, params);
  auto b = baselines::full_search(ch, spec, params);
  CHECK(a.total_power_mw == b.total_power_mw);
  CHECK(a.backhaul_cost == b.backhaul_cost);
  auto c = baselines::reweighted_group_l1(ch, spec, params);
  auto d = baselines::reweighted_group_l1(ch, spec, params);
  CHECK(c.total_power_mw == d.total_power_mw);
}

TEST_CASE("baseline parameter validation") {
  baselines::BaselineParams p;
  p.reweight_iterations = 0;
  CHECK_THROWS_AS(p.validate(), StructuralError);
  p = {};
  p.epsilon = -1.0;
  CHECK_THROWS_AS(p.validate(), StructuralError);
}
