#include <doctest.h>

#include <random>
#include <sstream>

#include "sparsebf/algorithm.hpp"
#include "test_util.hpp"

using namespace sparsebf;
using testutil::random_beams;
using testutil::random_channels;
using testutil::uniform_spec;

TEST_CASE("theta initialization scales the largest entry magnitude") {
  BeamformerSet w = BeamformerSet::zeros(2, 1, 1);
  w.beams[0](0) = std::complex<double>(3.0, 4.0);  // |.| = 5
  w.beams[0](1) = 1.0;
  CHECK(algorithm::theta_init(w, 2.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(algorithm::theta_init(BeamformerSet::zeros(2, 1, 1), 2.0),
                  InvalidSolutionError);
}

TEST_CASE("default annealing control constant") {
  std::mt19937_64 rng(201);
  auto ch = random_channels(3, 2, 4, rng);
  SinrSpec spec = uniform_spec(4, 9.0, 0.1);
  algorithm::AlgorithmParams p;
  CHECK(p.effective_tau(ch, spec) == doctest::Approx(4 * 2 * 3 * 3.0 / 2.0));
  p.tau = 0.7;
  CHECK(p.effective_tau(ch, spec) == doctest::Approx(0.7));
}

TEST_CASE("parameter validation") {
  algorithm::AlgorithmParams p;
  p.eta = 1.0;
  CHECK_THROWS_AS(p.validate(), StructuralError);
  p = {};
  p.epsilon = -0.1;
  CHECK_THROWS_AS(p.validate(), StructuralError);
  p = {};
  p.theta_min = 0.0;
  CHECK_THROWS_AS(p.validate(), StructuralError);
}

TEST_CASE("runs are deterministic for a fixed seed") {
  std::mt19937_64 rng(203);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 2.0, 0.1);
  algorithm::AlgorithmParams p;
  p.epsilon = 0.05;
  p.seed = 42;
  auto a = algorithm::run_algorithm1(ch, spec, p);
  auto b = algorithm::run_algorithm1(ch, spec, p);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  CHECK(a.total_power_mw == b.total_power_mw);
  CHECK(a.backhaul_cost == b.backhaul_cost);
  for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
    CHECK(a.trace.rows[i].objective == b.trace.rows[i].objective);
    CHECK(a.trace.rows[i].grad_progress == b.trace.rows[i].grad_progress);
  }
  for (int k = 0; k < 2; ++k)
    CHECK((a.beams.beams[k] - b.beams.beams[k]).norm() == 0.0);
}

TEST_CASE("solution meets the SINR targets and reports its pattern") {
  std::mt19937_64 rng(207);
  auto ch = random_channels(2, 2, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.05);
  algorithm::AlgorithmParams p;
  auto rep = algorithm::run_algorithm1(ch, spec, p);
  REQUIRE(!rep.infeasible);
  CHECK(rep.converged);
  CHECK(rep.min_sinr_slack >= -1e-6);
  CHECK(rep.backhaul_cost >= 0);
  int links = 0;
  for (const auto& q : rep.pattern.active_sets) links += static_cast<int>(q.size());
  CHECK(rep.backhaul_cost == links - 2);
  CHECK(rep.avg_coop == doctest::Approx(rep.backhaul_cost / 2.0));
  CHECK(rep.total_power_dbm == doctest::Approx(mw_to_dbm(rep.total_power_mw)));
  // Initialization + one per iteration + final re-solve (+1 if the masked
  // re-solve needed the unmasked fallback).
  int rows = static_cast<int>(rep.trace.rows.size());
  CHECK(rep.sdp_solve_count >= 2 + rows);
  CHECK(rep.sdp_solve_count <= 3 + rows);
}

TEST_CASE("a large power weight drives the solution toward minimum power") {
  std::mt19937_64 rng(211);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.1);
  auto obp = subproblems::solve_obp(ch, spec);
  REQUIRE(obp.solved());
  algorithm::AlgorithmParams p;
  p.epsilon = 1e4;
  auto rep = algorithm::run_algorithm1(ch, spec, p);
  REQUIRE(!rep.infeasible);
  CHECK(rep.total_power_mw <=
        doctest::Approx(total_power(obp.beams) * 1.05));
  CHECK(rep.total_power_mw >= total_power(obp.beams) * (1.0 - 1e-6));
}

TEST_CASE("a dead base station never enters the pattern") {
  std::mt19937_64 rng(213);
  auto ch = random_channels(2, 2, 2, rng);
  for (auto& h : ch.channels) h.tail(2).setZero();  // BS 1 unreachable
  SinrSpec spec = uniform_spec(2, 0.8, 0.05);
  algorithm::AlgorithmParams p;
  auto rep = algorithm::run_algorithm1(ch, spec, p);
  REQUIRE(!rep.infeasible);
  for (int k = 0; k < 2; ++k) {
    CHECK(!rep.pattern.is_active(k, 1));
    CHECK(rep.beams.block_norm(k, 1) <= 1e-9);
  }
}

TEST_CASE("infeasible instances are flagged without throwing") {
  ChannelSet ch;
  ch.n_bs = 1;
  ch.antennas_per_bs = 1;
  ch.channels = {Eigen::VectorXcd::Constant(1, 1.0),
                 Eigen::VectorXcd::Constant(1, 1.0)};
  SinrSpec spec = uniform_spec(2, 2.0, 0.1);
  algorithm::AlgorithmParams p;
  auto rep = algorithm::run_algorithm1(ch, spec, p);
  CHECK(rep.infeasible);
  CHECK_THROWS_AS(algorithm::initialize(ch, spec), InvalidSolutionError);
}

TEST_CASE("theta decreases exactly on low-progress iterations") {
  std::mt19937_64 rng(217);
  auto ch = random_channels(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 0.1);
  algorithm::AlgorithmParams p;
  auto rep = algorithm::run_algorithm1(ch, spec, p);
  REQUIRE(!rep.trace.rows.empty());
  double tau = p.effective_tau(ch, spec);
  double theta = rep.trace.rows.front().theta;
  int run_without_decrease = 0;
  for (const auto& row : rep.trace.rows) {
    CHECK(row.theta == doctest::Approx(theta));
    if (!row.forced) {
      bool low = row.grad_progress < tau * row.theta;
      CHECK(row.theta_decreased == low);
    } else {
      CHECK(row.theta_decreased);
      CHECK(run_without_decrease == p.stall_window - 1);
    }
    run_without_decrease = row.theta_decreased ? 0 : run_without_decrease + 1;
    if (row.theta_decreased) theta *= p.eta;
  }
  CHECK(theta < p.theta_min);  // converged by annealing, not by the cap
  auto st = algorithm::stationarity_check(rep.trace, tau);
  CHECK(st.violations == 0);
}

TEST_CASE("gradient step is reproducible from the rng state") {
  std::mt19937_64 rng(219);
  auto w = random_beams(2, 1, 2, rng);
  algorithm::AlgorithmParams p;
  std::mt19937_64 r1(5), r2(5);
  auto s1 = algorithm::gradient_step(w, 0.7, p, r1);
  auto s2 = algorithm::gradient_step(w, 0.7, p, r2);
  for (int k = 0; k < 2; ++k) CHECK((s1.beams[k] - s2.beams[k]).norm() == 0.0);
}

TEST_CASE("trace csv has the contract header") {
  algorithm::IterationTrace trace;
  algorithm::IterationRow row;
  row.j = 1;
  row.theta = 0.5;
  trace.rows.push_back(row);
  std::ostringstream os;
  algorithm::write_trace_csv(trace, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "j,theta,mu,objective,grad_progress,max_rank_ratio,sdp_status");
}

TEST_CASE("pruning polish never hurts the score and keeps feasibility") {
  std::mt19937_64 rng(223);
  for (double eps : {0.0, 0.2}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto ch = random_channels(3, 1, 3, rng);
      SinrSpec spec = uniform_spec(3, 2.0, 0.1);
      algorithm::AlgorithmParams on, off;
      on.epsilon = off.epsilon = eps;
      off.polish = false;
      auto a = algorithm::run_algorithm1(ch, spec, on);
      auto b = algorithm::run_algorithm1(ch, spec, off);
      REQUIRE(!a.infeasible);
      double score_a = a.backhaul_cost + eps * a.total_power_mw;
      double score_b = b.backhaul_cost + eps * b.total_power_mw;
      CHECK(score_a <= score_b + 1e-9);
      CHECK(a.min_sinr_slack >= -subproblems::kFeasTol);
      CHECK(a.sdp_solve_count >= b.sdp_solve_count);
      // Every user keeps at least one active link.
      for (const auto& q : a.pattern.active_sets) CHECK(!q.empty());
    }
  }
}
