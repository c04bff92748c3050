#include "sparsebf/model.hpp"

#include <cmath>

#include "sparsebf/kernels.hpp"

namespace sparsebf {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw StructuralError(msg);
}

// Treats the L complex entries of a block as 2L packed doubles.
double block_norm_sq(const Eigen::VectorXcd& v, int n, int antennas) {
  const double* data = reinterpret_cast<const double*>(v.data() + n * antennas);
  return kern::sum_sq(data, 2 * static_cast<std::size_t>(antennas));
}

}  // namespace

void NetworkInstance::validate() const {
  require(n_bs >= 1 && n_ms >= 1 && antennas_per_bs >= 1, "network counts must be >= 1");
  require(static_cast<int>(bs_positions.size()) == n_bs, "bs_positions length mismatch");
  require(static_cast<int>(ms_positions.size()) == n_ms, "ms_positions length mismatch");
}

void ChannelSet::validate() const {
  require(n_bs >= 1 && antennas_per_bs >= 1, "channel set dimensions must be >= 1");
  require(!channels.empty(), "channel set must contain at least one user");
  for (const auto& h : channels) {
    require(h.size() == dim(), "channel vector length != L*N");
    require(h.allFinite(), "channel entries must be finite");
    require(h.norm() > 0.0, "channel vector must have nonzero norm");
  }
}

void SinrSpec::validate() const {
  require(targets.size() >= 1, "sinr spec must cover at least one user");
  require(targets.size() == noise_powers.size(), "targets/noise_powers length mismatch");
  require((targets.array() >= 0.0).all(), "sinr targets must be nonnegative");
  require((noise_powers.array() > 0.0).all(), "noise powers must be positive");
}

void BeamformerSet::validate() const {
  require(n_bs >= 1 && antennas_per_bs >= 1, "beamformer set dimensions must be >= 1");
  for (const auto& w : beams) {
    require(w.size() == dim(), "beamformer length != L*N");
    require(w.allFinite(), "beamformer entries must be finite");
  }
}

double BeamformerSet::block_norm(int k, int n) const {
  return std::sqrt(block_norm_sq(beams.at(k), n, antennas_per_bs));
}

BeamformerSet BeamformerSet::zeros(int n_bs, int antennas, int n_ms) {
  BeamformerSet b;
  b.n_bs = n_bs;
  b.antennas_per_bs = antennas;
  b.beams.assign(n_ms, Eigen::VectorXcd::Zero(n_bs * antennas));
  return b;
}

void CooperationPattern::validate() const {
  require(n_bs >= 1 && antennas_per_bs >= 1, "pattern dimensions must be >= 1");
  for (const auto& q : active_sets) {
    require(!q.empty(), "every user needs at least one active BS");
    for (int n : q) require(n >= 0 && n < n_bs, "active BS index out of range");
  }
}

bool CooperationPattern::is_active(int k, int n) const {
  const auto& q = active_sets.at(k);
  return std::find(q.begin(), q.end(), n) != q.end();
}

Eigen::VectorXd CooperationPattern::mask_diagonal(int k) const {
  Eigen::VectorXd m = Eigen::VectorXd::Ones(n_bs * antennas_per_bs);
  for (int n : active_sets.at(k))
    m.segment(n * antennas_per_bs, antennas_per_bs).setZero();
  return m;
}

CooperationPattern CooperationPattern::full(int n_bs, int antennas, int n_ms) {
  CooperationPattern p;
  p.n_bs = n_bs;
  p.antennas_per_bs = antennas;
  std::vector<int> all(n_bs);
  for (int n = 0; n < n_bs; ++n) all[n] = n;
  p.active_sets.assign(n_ms, all);
  return p;
}

double max_block_norm(const BeamformerSet& beams) {
  double best = 0.0;
  for (int k = 0; k < beams.n_ms(); ++k)
    for (int n = 0; n < beams.n_bs; ++n)
      best = std::max(best, beams.block_norm(k, n));
  return best;
}

double zero_threshold(const BeamformerSet& beams, double factor) {
  return factor * max_block_norm(beams);
}

double sinr(const ChannelSet& channels, const BeamformerSet& beams,
            const SinrSpec& spec, int k) {
  if (k < 0 || k >= channels.n_ms()) throw StructuralError("user index out of range");
  if (channels.n_ms() != beams.n_ms() || channels.dim() != beams.dim())
    throw StructuralError("channel/beamformer dimension mismatch");
  const auto& h = channels.channels[k];
  double signal = std::norm(h.dot(beams.beams[k]));
  double interference = 0.0;
  for (int m = 0; m < beams.n_ms(); ++m) {
    if (m == k) continue;
    interference += std::norm(h.dot(beams.beams[m]));
  }
  return signal / (interference + spec.noise_powers[k]);
}

double total_power(const BeamformerSet& beams) {
  double acc = 0.0;
  for (const auto& w : beams.beams) {
    const double* data = reinterpret_cast<const double*>(w.data());
    acc += kern::sum_sq(data, 2 * static_cast<std::size_t>(w.size()));
  }
  return acc;
}

int mixed_norm_l02(const BeamformerSet& beams, int k, double zero_thresh) {
  int count = 0;
  for (int n = 0; n < beams.n_bs; ++n)
    if (beams.block_norm(k, n) > zero_thresh) ++count;
  return count;
}

int backhaul_cost(const BeamformerSet& beams, double zero_thresh) {
  int total = 0;
  for (int k = 0; k < beams.n_ms(); ++k) {
    int active = mixed_norm_l02(beams, k, zero_thresh);
    if (active == 0)
      throw InvalidSolutionError("user with all-zero beamformer has no serving BS");
    total += active;
  }
  return total - beams.n_ms();
}

double smoothed_objective(const BeamformerSet& beams, const SmoothingState& state) {
  if (state.theta <= 0.0) throw StructuralError("theta must be positive");
  const double inv2t2 = 1.0 / (2.0 * state.theta * state.theta);
  double f = 0.0;
  for (int k = 0; k < beams.n_ms(); ++k)
    for (int n = 0; n < beams.n_bs; ++n) {
      double nsq = beams.block_norm(k, n);
      f += std::exp(-nsq * nsq * inv2t2);
    }
  return f - state.epsilon * total_power(beams);
}

BeamformerSet smoothed_gradient(const BeamformerSet& beams, const SmoothingState& state) {
  if (state.theta <= 0.0) throw StructuralError("theta must be positive");
  const double t2 = state.theta * state.theta;
  BeamformerSet grad = beams;
  for (int k = 0; k < beams.n_ms(); ++k) {
    for (int n = 0; n < beams.n_bs; ++n) {
      double bn = beams.block_norm(k, n);
      double coeff = -std::exp(-bn * bn / (2.0 * t2)) / t2 - 2.0 * state.epsilon;
      grad.beams[k].segment(n * beams.antennas_per_bs, beams.antennas_per_bs) *= coeff;
    }
  }
  return grad;
}

CooperationPattern pattern_from_beamformers(const BeamformerSet& beams,
                                            double zero_thresh) {
  CooperationPattern p;
  p.n_bs = beams.n_bs;
  p.antennas_per_bs = beams.antennas_per_bs;
  p.active_sets.resize(beams.n_ms());
  for (int k = 0; k < beams.n_ms(); ++k) {
    for (int n = 0; n < beams.n_bs; ++n)
      if (beams.block_norm(k, n) > zero_thresh) p.active_sets[k].push_back(n);
    if (p.active_sets[k].empty())
      throw InvalidSolutionError("user with all blocks below threshold");
  }
  return p;
}

namespace {

// Index of the largest block of user k (fallback serving BS).
int argmax_block(const BeamformerSet& beams, int k) {
  int best = 0;
  double best_norm = -1.0;
  for (int n = 0; n < beams.n_bs; ++n) {
    double bn = beams.block_norm(k, n);
    if (bn > best_norm) {
      best_norm = bn;
      best = n;
    }
  }
  return best;
}

}  // namespace

int guarded_backhaul_cost(const BeamformerSet& beams, double zero_thresh) {
  int total = 0;
  for (int k = 0; k < beams.n_ms(); ++k)
    total += std::max(1, mixed_norm_l02(beams, k, zero_thresh));
  return total - beams.n_ms();
}

CooperationPattern guarded_pattern(const BeamformerSet& beams, double zero_thresh) {
  CooperationPattern p;
  p.n_bs = beams.n_bs;
  p.antennas_per_bs = beams.antennas_per_bs;
  p.active_sets.resize(beams.n_ms());
  for (int k = 0; k < beams.n_ms(); ++k) {
    for (int n = 0; n < beams.n_bs; ++n)
      if (beams.block_norm(k, n) > zero_thresh) p.active_sets[k].push_back(n);
    if (p.active_sets[k].empty())
      p.active_sets[k].push_back(argmax_block(beams, k));
  }
  return p;
}

double min_relative_sinr_slack(const ChannelSet& channels, const BeamformerSet& beams,
                               const SinrSpec& spec) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < channels.n_ms(); ++k) {
    double gamma = spec.targets[k];
    if (gamma <= 0.0) continue;
    worst = std::min(worst, (sinr(channels, beams, spec, k) - gamma) / gamma);
  }
  return worst;
}

}  // namespace sparsebf
