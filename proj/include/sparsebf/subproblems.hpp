#pragma once

#include "sparsebf/conic.hpp"
#include "sparsebf/model.hpp"

// Builders for the three lifted problems behind the sparse-beamforming
// algorithm, all sharing the conic solver through the Hermitian real
// embedding:
//   - minimum-power beamforming over all cooperation links,
//   - the same with a per-user deactivation mask,
//   - the feasible-set projection of an arbitrary anchor point,
// plus rank-1 extraction with tightness diagnostics.

namespace sparsebf::subproblems {

inline constexpr double kRank1Tol = 1e-6;
inline constexpr double kFeasTol = 1e-6;

struct LiftedSolution {
  conic::SolveStatus status = conic::SolveStatus::MaxIterations;
  std::vector<Eigen::MatrixXcd> lifted;  // per-user W_k (or homogenized)
  std::vector<double> rank_ratio;        // lambda2/lambda1 per user
  BeamformerSet beams;
  std::vector<double> sinr_margin;       // relative slack per user
  double objective = 0.0;                // complex-form objective
  bool rank1_ok = true;                  // all ratios <= kRank1Tol
  bool rescue_applied = false;           // eigenvector fallback + rescale used
  int solver_iterations = 0;

  // True when the solver produced a usable (near-)optimal point; lifted
  // matrices and beams are populated only in that case.
  bool solved() const { return !lifted.empty(); }
};

enum class LiftKind { Plain, Homogenized };

// Per-user channel normalization h_k / ||h_k|| with the noise scaled by
// 1/||h_k||^2.  The SINR-feasible set and all beam powers are unchanged, but
// the conic data loses the pathloss dynamic range (up to ~1e13 raw), which
// the interior-point method needs.  The solve_* wrappers apply this
// internally; it is exposed for callers that build problems directly.
std::pair<ChannelSet, SinrSpec> normalized_instance(const ChannelSet& channels,
                                                    const SinrSpec& spec);

conic::SdpProblem build_obp_sdp(const ChannelSet& channels, const SinrSpec& spec);
conic::SdpProblem build_obp_ac_sdp(const ChannelSet& channels, const SinrSpec& spec,
                                   const CooperationPattern& pattern);
conic::SdpProblem build_ap_sdp(const ChannelSet& channels, const SinrSpec& spec,
                               const BeamformerSet& anchor);

struct Extraction {
  Eigen::VectorXcd beam;
  double rank_ratio = 0.0;
  bool degenerate = false;  // lambda1 ~ 0, beam is zero
};

// Plain: principal eigenpair, global phase fixed so the largest-magnitude
// entry is real nonnegative.  Homogenized: corner-normalized first-column
// read-off consistent with w_tilde = [1; w].
Extraction extract_rank1(const Eigen::MatrixXcd& lifted, LiftKind kind);

// Minimum-power solve over all links (complex form; embeds, solves, extracts).
LiftedSolution solve_obp(const ChannelSet& channels, const SinrSpec& spec,
                         const conic::SolverOptions& options = {});

// Projection of the anchor onto the SINR-feasible set.
LiftedSolution solve_ap(const ChannelSet& channels, const SinrSpec& spec,
                        const BeamformerSet& anchor,
                        const conic::SolverOptions& options = {});

// Minimum power under a fixed cooperation pattern.  Solved on the reduced
// coordinate set of each user's active blocks (equivalent to the masked
// trace-equality form, but strictly feasible), then re-inflated with zeros.
LiftedSolution solve_min_power_with_pattern(const ChannelSet& channels,
                                            const SinrSpec& spec,
                                            const CooperationPattern& pattern,
                                            const conic::SolverOptions& options = {});

}  // namespace sparsebf::subproblems
