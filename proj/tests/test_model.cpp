#include <doctest.h>

#include <random>

#include "sparsebf/model.hpp"
#include "test_util.hpp"

using namespace sparsebf;
using testutil::random_beams;
using testutil::random_channels;
using testutil::uniform_spec;

TEST_CASE("sinr matches a hand-computed single-interferer case") {
  ChannelSet ch;
  ch.n_bs = 1;
  ch.antennas_per_bs = 2;
  ch.channels = {Eigen::VectorXcd(2), Eigen::VectorXcd(2)};
  ch.channels[0] << std::complex<double>(1, 0), std::complex<double>(0, 1);
  ch.channels[1] << std::complex<double>(0, 2), std::complex<double>(1, 0);
  BeamformerSet w = BeamformerSet::zeros(1, 2, 2);
  w.beams[0] << std::complex<double>(2, 0), std::complex<double>(0, 0);
  w.beams[1] << std::complex<double>(0, 0), std::complex<double>(3, 0);
  SinrSpec spec = uniform_spec(2, 1.0, 0.5);
  // user 0: |h0^H w0|^2 = 4, interference |h0^H w1|^2 = |conj(i)*3|^2 = 9.
  CHECK(sinr(ch, w, spec, 0) == doctest::Approx(4.0 / 9.5));
  // user 1: |h1^H w1|^2 = 9, interference |h1^H w0|^2 = |conj(2i)*2|^2 = 16.
  CHECK(sinr(ch, w, spec, 1) == doctest::Approx(9.0 / 16.5));
}

TEST_CASE("total_power equals the sum of squared norms") {
  std::mt19937_64 rng(7);
  auto w = random_beams(3, 2, 4, rng);
  double expect = 0.0;
  for (const auto& b : w.beams) expect += b.squaredNorm();
  CHECK(total_power(w) == doctest::Approx(expect));
}

TEST_CASE("block norms and mixed norm count active blocks") {
  BeamformerSet w = BeamformerSet::zeros(3, 2, 1);
  w.beams[0](0) = 3.0;
  w.beams[0](1) = 4.0;          // block 0 norm 5
  w.beams[0](4) = {0.0, 2.0};   // block 2 norm 2
  CHECK(w.block_norm(0, 0) == doctest::Approx(5.0));
  CHECK(w.block_norm(0, 1) == doctest::Approx(0.0));
  CHECK(w.block_norm(0, 2) == doctest::Approx(2.0));
  CHECK(mixed_norm_l02(w, 0, 0.0) == 2);
  CHECK(mixed_norm_l02(w, 0, 2.0) == 1);  // strictly greater than the threshold
  CHECK(mixed_norm_l02(w, 0, 1.9) == 2);
  CHECK(max_block_norm(w) == doctest::Approx(5.0));
  CHECK(zero_threshold(w) == doctest::Approx(5e-3));
}

TEST_CASE("backhaul cost counts links beyond one serving BS per user") {
  BeamformerSet w = BeamformerSet::zeros(2, 1, 2);
  w.beams[0](0) = 1.0;
  w.beams[0](1) = 1.0;
  w.beams[1](0) = 1.0;
  CHECK(backhaul_cost(w, 0.5) == 1);  // user 0 uses both BS, user 1 one
  w.beams[1](0) = 0.0;
  CHECK_THROWS_AS(backhaul_cost(w, 0.5), InvalidSolutionError);
}

TEST_CASE("smoothed objective approaches its two theta limits") {
  std::mt19937_64 rng(11);
  auto w = random_beams(2, 2, 3, rng);
  w.beams[0].segment(0, 2).setZero();  // one exactly-zero block
  const int total_blocks = 2 * 3;
  double power = total_power(w);

  SmoothingState wide{1e6, 0.25};
  CHECK(smoothed_objective(w, wide) ==
        doctest::Approx(total_blocks - 0.25 * power).epsilon(1e-9));

  SmoothingState narrow{1e-9, 0.25};
  CHECK(smoothed_objective(w, narrow) ==
        doctest::Approx(1.0 - 0.25 * power).epsilon(1e-9));
}

TEST_CASE("smoothed gradient matches central finite differences") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = random_beams(2, 2, 2, rng);
    SmoothingState state{0.5 + 0.1 * trial, trial % 2 ? 0.3 : 0.0};
    auto grad = smoothed_gradient(w, state);
    const double h = 1e-6;
    for (int k = 0; k < w.n_ms(); ++k) {
      for (int i = 0; i < w.dim(); ++i) {
        for (int part = 0; part < 2; ++part) {
          auto wp = w, wm = w;
          std::complex<double> delta = part == 0 ? std::complex<double>(h, 0)
                                                 : std::complex<double>(0, h);
          wp.beams[k](i) += delta;
          wm.beams[k](i) -= delta;
          double fd =
              (smoothed_objective(wp, state) - smoothed_objective(wm, state)) /
              (2.0 * h);
          double an = part == 0 ? grad.beams[k](i).real() : grad.beams[k](i).imag();
          CHECK(an == doctest::Approx(fd).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("pattern extraction uses a strict threshold") {
  BeamformerSet w = BeamformerSet::zeros(2, 1, 1);
  w.beams[0](0) = 1.0;
  w.beams[0](1) = 0.5;
  auto p = pattern_from_beamformers(w, 0.5);
  CHECK(p.active_sets[0] == std::vector<int>{0});
  p = pattern_from_beamformers(w, 0.49);
  CHECK(p.active_sets[0] == std::vector<int>({0, 1}));
  CHECK_THROWS_AS(pattern_from_beamformers(w, 2.0), InvalidSolutionError);
}

TEST_CASE("cooperation pattern mask marks deactivated blocks") {
  CooperationPattern p;
  p.n_bs = 3;
  p.antennas_per_bs = 2;
  p.active_sets = {{0, 2}};
  Eigen::VectorXd m = p.mask_diagonal(0);
  Eigen::VectorXd expect(6);
  expect << 0, 0, 1, 1, 0, 0;
  CHECK(m.isApprox(expect));
  CHECK(p.is_active(0, 0));
  CHECK(!p.is_active(0, 1));
}

TEST_CASE("unit conversions round-trip") {
  CHECK(mw_to_dbm(1.0) == doctest::Approx(0.0));
  CHECK(mw_to_dbm(1000.0) == doctest::Approx(30.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(mw_to_dbm(0.37)) == doctest::Approx(0.37));
}

TEST_CASE("validators reject malformed inputs") {
  ChannelSet ch;
  ch.n_bs = 1;
  ch.antennas_per_bs = 1;
  CHECK_THROWS_AS(ch.validate(), StructuralError);  // no users
  ch.channels = {Eigen::VectorXcd::Zero(1)};
  CHECK_THROWS_AS(ch.validate(), StructuralError);  // zero channel

  SinrSpec spec;
  spec.targets = Eigen::VectorXd::Constant(1, 1.0);
  spec.noise_powers = Eigen::VectorXd::Constant(1, 0.0);
  CHECK_THROWS_AS(spec.validate(), StructuralError);  // nonpositive noise

  CooperationPattern p;
  p.n_bs = 2;
  p.antennas_per_bs = 1;
  p.active_sets = {{}};
  CHECK_THROWS_AS(p.validate(), StructuralError);  // empty serving set
}

TEST_CASE("min relative sinr slack skips vacuous targets") {
  std::mt19937_64 rng(17);
  auto ch = random_channels(2, 1, 2, rng);
  auto w = random_beams(2, 1, 2, rng);
  SinrSpec spec = uniform_spec(2, 1.0, 1.0);
  spec.targets[1] = 0.0;
  double slack = min_relative_sinr_slack(ch, w, spec);
  double s0 = sinr(ch, w, spec, 0);
  CHECK(slack == doctest::Approx(s0 - 1.0));
}
