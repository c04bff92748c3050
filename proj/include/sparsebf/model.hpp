#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

// Domain types for the multicell downlink: N base stations with L antennas
// each, K single-antenna users.  Aggregate channel and beamforming vectors
// have LN complex entries partitioned into N per-BS blocks of length L.
// Powers are in mW internally; dBm only at the reporting surface.

namespace sparsebf {

struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NetworkInstance {
  int n_bs = 0;
  int n_ms = 0;
  int antennas_per_bs = 0;
  std::vector<Eigen::Vector2d> bs_positions;  // km
  std::vector<Eigen::Vector2d> ms_positions;  // km

  void validate() const;
};

struct ChannelSet {
  int n_bs = 0;
  int antennas_per_bs = 0;
  std::vector<Eigen::VectorXcd> channels;  // K vectors of length L*N

  int n_ms() const { return static_cast<int>(channels.size()); }
  int dim() const { return n_bs * antennas_per_bs; }
  void validate() const;
};

struct SinrSpec {
  Eigen::VectorXd targets;       // linear SINR targets, >= 0
  Eigen::VectorXd noise_powers;  // mW, > 0

  int n_ms() const { return static_cast<int>(targets.size()); }
  void validate() const;
};

struct BeamformerSet {
  int n_bs = 0;
  int antennas_per_bs = 0;
  std::vector<Eigen::VectorXcd> beams;  // K vectors of length L*N

  int n_ms() const { return static_cast<int>(beams.size()); }
  int dim() const { return n_bs * antennas_per_bs; }
  void validate() const;

  // Euclidean norm of the n-th per-BS block of user k's beamformer.
  double block_norm(int k, int n) const;
  static BeamformerSet zeros(int n_bs, int antennas, int n_ms);
};

struct CooperationPattern {
  int n_bs = 0;
  int antennas_per_bs = 0;
  std::vector<std::vector<int>> active_sets;  // Q_k, sorted BS indices (0-based)

  int n_ms() const { return static_cast<int>(active_sets.size()); }
  void validate() const;
  bool is_active(int k, int n) const;

  // Diagonal 0/1 mask of size LN; 1 marks a deactivated block.
  Eigen::VectorXd mask_diagonal(int k) const;
  static CooperationPattern full(int n_bs, int antennas, int n_ms);
};

struct SmoothingState {
  double theta = 1.0;    // > 0
  double epsilon = 0.0;  // >= 0
};

// Zero-detection rule: a block counts as active when its norm is strictly
// greater than zero_threshold_factor * max block norm.
inline constexpr double kDefaultZeroThresholdFactor = 1e-3;

double max_block_norm(const BeamformerSet& beams);
double zero_threshold(const BeamformerSet& beams,
                      double factor = kDefaultZeroThresholdFactor);

double sinr(const ChannelSet& channels, const BeamformerSet& beams,
            const SinrSpec& spec, int k);
double total_power(const BeamformerSet& beams);
int mixed_norm_l02(const BeamformerSet& beams, int k, double zero_thresh);
int backhaul_cost(const BeamformerSet& beams, double zero_thresh);
double smoothed_objective(const BeamformerSet& beams, const SmoothingState& state);
BeamformerSet smoothed_gradient(const BeamformerSet& beams, const SmoothingState& state);
CooperationPattern pattern_from_beamformers(const BeamformerSet& beams,
                                            double zero_thresh);

// Guarded variants for scoring realized solutions.  The zero threshold is
// relative to the global maximum block norm, so when user powers span more
// than three decades a low-power user can fall entirely below it even though
// it is genuinely served.  These keep each such user's largest block active
// instead of raising the all-zero-user error.
int guarded_backhaul_cost(const BeamformerSet& beams, double zero_thresh);
CooperationPattern guarded_pattern(const BeamformerSet& beams, double zero_thresh);

// Smallest relative SINR slack min_k (sinr_k - gamma_k) / gamma_k; users with
// gamma_k = 0 are skipped (their constraint is vacuous).
double min_relative_sinr_slack(const ChannelSet& channels, const BeamformerSet& beams,
                               const SinrSpec& spec);

inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sparsebf
