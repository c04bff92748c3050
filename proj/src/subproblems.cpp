#include "sparsebf/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparsebf::subproblems {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

MatrixXcd outer(const VectorXcd& v) { return v * v.adjoint(); }

// SINR trace constraints shared by all three problems; channel_rows[k] is the
// channel matrix H_k lifted to the block dimension of each user variable.
void add_sinr_constraints(conic::SdpProblem& p, const std::vector<MatrixXcd>& h_mats,
                          const SinrSpec& spec) {
  const int k_users = static_cast<int>(h_mats.size());
  for (int k = 0; k < k_users; ++k) {
    conic::Constraint c;
    c.sense = conic::Sense::Ge;
    c.rhs = 2.0 * spec.targets[k] * spec.noise_powers[k];
    c.coeff.resize(k_users);
    for (int m = 0; m < k_users; ++m) {
      MatrixXcd a = (m == k) ? h_mats[k] : MatrixXcd(-spec.targets[k] * h_mats[k]);
      c.coeff[m] = conic::embed_hermitian(a);
    }
    p.constraints.push_back(std::move(c));
  }
}

bool acceptable(const conic::SdpResult& r) {
  if (r.status == conic::SolveStatus::Optimal) return true;
  if (r.status == conic::SolveStatus::MaxIterations) {
    return r.residuals.primal <= 1e-6 && r.residuals.dual <= 1e-6;
  }
  return false;
}

void fill_margins(LiftedSolution& sol, const ChannelSet& channels, const SinrSpec& spec) {
  const int k_users = channels.n_ms();
  sol.sinr_margin.assign(k_users, std::numeric_limits<double>::infinity());
  for (int k = 0; k < k_users; ++k) {
    if (spec.targets[k] <= 0.0) continue;
    double s = sinr(channels, sol.beams, spec, k);
    sol.sinr_margin[k] = (s - spec.targets[k]) / spec.targets[k];
  }
}

// Common rescue for non-rank-1 or marginally infeasible extractions: keep the
// principal directions and scale all users' beams up by the smallest common
// factor that restores every SINR constraint.
void rescue_scale(LiftedSolution& sol, const ChannelSet& channels, const SinrSpec& spec) {
  const int k_users = channels.n_ms();
  double c_sq = 1.0;
  for (int k = 0; k < k_users; ++k) {
    double gamma = spec.targets[k];
    if (gamma <= 0.0) continue;
    const auto& h = channels.channels[k];
    double signal = std::norm(h.dot(sol.beams.beams[k]));
    double interf = 0.0;
    for (int m = 0; m < k_users; ++m)
      if (m != k) interf += std::norm(h.dot(sol.beams.beams[m]));
    double headroom = signal - gamma * interf;
    if (headroom <= 0.0) return;  // direction profile cannot be rescued
    c_sq = std::max(c_sq, gamma * spec.noise_powers[k] / headroom);
  }
  double c = std::sqrt(c_sq) * (1.0 + 1e-12);
  for (auto& w : sol.beams.beams) w *= c;
  sol.rescue_applied = true;
}

LiftedSolution extract_all(const conic::SdpResult& res, const ChannelSet& channels,
                           const SinrSpec& spec, LiftKind kind) {
  LiftedSolution sol;
  sol.status = res.status;
  sol.solver_iterations = res.iterations;
  const int k_users = channels.n_ms();
  sol.beams = BeamformerSet::zeros(channels.n_bs, channels.antennas_per_bs, k_users);
  if (!acceptable(res)) return sol;
  sol.objective = res.objective / 2.0;  // undo embedding doubling
  sol.lifted.resize(k_users);
  sol.rank_ratio.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    sol.lifted[k] = conic::unembed_hermitian(res.primal_blocks[k]);
    Extraction e = extract_rank1(sol.lifted[k], kind);
    sol.rank_ratio[k] = e.rank_ratio;
    if (kind == LiftKind::Homogenized) {
      sol.beams.beams[k] = e.beam;
    } else if (!e.degenerate) {
      sol.beams.beams[k] = e.beam;
    }
    if (e.rank_ratio > kRank1Tol) sol.rank1_ok = false;
  }
  fill_margins(sol, channels, spec);
  double worst = *std::min_element(sol.sinr_margin.begin(), sol.sinr_margin.end());
  if (!sol.rank1_ok || worst < -kFeasTol) {
    rescue_scale(sol, channels, spec);
    if (sol.rescue_applied) fill_margins(sol, channels, spec);
  }
  return sol;
}

}  // namespace

std::pair<ChannelSet, SinrSpec> normalized_instance(const ChannelSet& channels,
                                                    const SinrSpec& spec) {
  ChannelSet ch = channels;
  SinrSpec sp = spec;
  for (int k = 0; k < ch.n_ms(); ++k) {
    double a = ch.channels[k].norm();
    if (a > 0.0) {
      ch.channels[k] /= a;
      sp.noise_powers[k] /= a * a;
    }
  }
  return {std::move(ch), std::move(sp)};
}

conic::SdpProblem build_obp_sdp(const ChannelSet& channels, const SinrSpec& spec) {
  channels.validate();
  spec.validate();
  if (channels.n_ms() != spec.n_ms())
    throw StructuralError("obp: channel/spec user count mismatch");
  const int dim = channels.dim();
  const int k_users = channels.n_ms();
  conic::SdpProblem p;
  p.block_sizes.assign(k_users, 2 * dim);
  p.objective.assign(k_users, MatrixXd::Identity(2 * dim, 2 * dim));
  std::vector<MatrixXcd> h_mats(k_users);
  for (int k = 0; k < k_users; ++k) h_mats[k] = outer(channels.channels[k]);
  add_sinr_constraints(p, h_mats, spec);
  return p;
}

conic::SdpProblem build_obp_ac_sdp(const ChannelSet& channels, const SinrSpec& spec,
                                   const CooperationPattern& pattern) {
  pattern.validate();
  if (pattern.n_ms() != channels.n_ms() || pattern.n_bs != channels.n_bs ||
      pattern.antennas_per_bs != channels.antennas_per_bs)
    throw StructuralError("obp-ac: pattern dimension mismatch");
  conic::SdpProblem p = build_obp_sdp(channels, spec);
  const int dim = channels.dim();
  const int k_users = channels.n_ms();
  for (int k = 0; k < k_users; ++k) {
    conic::Constraint c;
    c.sense = conic::Sense::Eq;
    c.rhs = 0.0;
    c.coeff.assign(k_users, MatrixXd::Zero(2 * dim, 2 * dim));
    Eigen::VectorXd mask = pattern.mask_diagonal(k);
    c.coeff[k] = conic::embed_hermitian(mask.cast<std::complex<double>>().asDiagonal());
    p.constraints.push_back(std::move(c));
  }
  return p;
}

conic::SdpProblem build_ap_sdp(const ChannelSet& channels, const SinrSpec& spec,
                               const BeamformerSet& anchor) {
  channels.validate();
  spec.validate();
  anchor.validate();
  if (anchor.n_ms() != channels.n_ms() || anchor.dim() != channels.dim())
    throw StructuralError("ap: anchor dimension mismatch");
  const int dim = channels.dim();
  const int k_users = channels.n_ms();
  conic::SdpProblem p;
  p.block_sizes.assign(k_users, 2 * (dim + 1));
  p.objective.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    const VectorXcd& wbar = anchor.beams[k];
    MatrixXcd a = MatrixXcd::Zero(dim + 1, dim + 1);
    a(0, 0) = wbar.squaredNorm();
    a.block(0, 1, 1, dim) = -wbar.adjoint();
    a.block(1, 0, dim, 1) = -wbar;
    a.block(1, 1, dim, dim) = MatrixXcd::Identity(dim, dim);
    p.objective[k] = conic::embed_hermitian(a);
  }
  std::vector<MatrixXcd> h_mats(k_users);
  for (int k = 0; k < k_users; ++k) {
    MatrixXcd hb = MatrixXcd::Zero(dim + 1, dim + 1);
    hb.block(1, 1, dim, dim) = outer(channels.channels[k]);
    h_mats[k] = hb;
  }
  add_sinr_constraints(p, h_mats, spec);
  // Corner normalization tr(I00 W~) = 1 per user.
  for (int k = 0; k < k_users; ++k) {
    conic::Constraint c;
    c.sense = conic::Sense::Eq;
    c.rhs = 2.0;
    c.coeff.assign(k_users, MatrixXd::Zero(2 * (dim + 1), 2 * (dim + 1)));
    MatrixXcd corner = MatrixXcd::Zero(dim + 1, dim + 1);
    corner(0, 0) = 1.0;
    c.coeff[k] = conic::embed_hermitian(corner);
    p.constraints.push_back(std::move(c));
  }
  return p;
}

Extraction extract_rank1(const Eigen::MatrixXcd& lifted, LiftKind kind) {
  Extraction e;
  const int n = static_cast<int>(lifted.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(lifted);
  double l1 = eig.eigenvalues()(n - 1);
  double l2 = n >= 2 ? std::max(0.0, eig.eigenvalues()(n - 2)) : 0.0;
  if (l1 <= 0.0) {
    e.degenerate = true;
    e.rank_ratio = 0.0;
    e.beam = VectorXcd::Zero(kind == LiftKind::Homogenized ? n - 1 : n);
    return e;
  }
  e.rank_ratio = l2 / l1;
  if (kind == LiftKind::Homogenized) {
    double corner = std::real(lifted(0, 0));
    if (corner <= kRank1Tol * l1) {
      e.degenerate = true;
      e.beam = VectorXcd::Zero(n - 1);
      return e;
    }
    // Read off w from the first column, consistent with w_tilde = [1; w].
    e.beam = lifted.col(0).tail(n - 1) / lifted(0, 0);
    return e;
  }
  VectorXcd v = eig.eigenvectors().col(n - 1);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  std::complex<double> phase = v(imax) / std::abs(v(imax));
  e.beam = std::sqrt(l1) * (v / phase);
  return e;
}

LiftedSolution solve_obp(const ChannelSet& channels, const SinrSpec& spec,
                         const conic::SolverOptions& options) {
  auto [nch, nsp] = normalized_instance(channels, spec);
  auto res = conic::solve(build_obp_sdp(nch, nsp), options);
  return extract_all(res, channels, spec, LiftKind::Plain);
}

LiftedSolution solve_ap(const ChannelSet& channels, const SinrSpec& spec,
                        const BeamformerSet& anchor, const conic::SolverOptions& options) {
  auto [nch, nsp] = normalized_instance(channels, spec);
  // Exact change of variables w -> w/s with s the anchor scale: the SINR
  // constraint set maps onto itself with noise powers divided by s^2, and the
  // projection distance scales by s^2.  Without this the interior-point solve
  // has to span the full beam dynamic range and stalls on high-power anchors.
  const double s = std::max(1.0, max_block_norm(anchor));
  BeamformerSet sanchor = anchor;
  for (auto& w : sanchor.beams) w /= s;
  nsp.noise_powers /= s * s;
  SinrSpec sspec = spec;  // original channels, scaled noise (extraction units)
  sspec.noise_powers /= s * s;

  auto res = conic::solve(build_ap_sdp(nch, nsp, sanchor), options);
  LiftedSolution sol = extract_all(res, channels, sspec, LiftKind::Homogenized);
  if (!acceptable(res)) return sol;
  // Homogenized rescue path: a degenerate first-column read can leave an
  // infeasible beam; fall back to the principal direction of the lower-right
  // subblock before rescaling.
  double worst = *std::min_element(sol.sinr_margin.begin(), sol.sinr_margin.end());
  if (worst < -kFeasTol && !sol.rescue_applied) {
    const int dim = channels.dim();
    for (int k = 0; k < channels.n_ms(); ++k) {
      Extraction e = extract_rank1(sol.lifted[k].block(1, 1, dim, dim), LiftKind::Plain);
      if (!e.degenerate) sol.beams.beams[k] = e.beam;
    }
    fill_margins(sol, channels, sspec);
    rescue_scale(sol, channels, sspec);
    if (sol.rescue_applied) fill_margins(sol, channels, sspec);
  }
  // Undo the change of variables: beams scale by s, the homogenized lifted
  // block [[1, w^H],[w, W]] scales by s on the cross terms and s^2 inside.
  for (auto& w : sol.beams.beams) w *= s;
  for (auto& L : sol.lifted) {
    const int d = static_cast<int>(L.rows()) - 1;
    L.block(0, 1, 1, d) *= s;
    L.block(1, 0, d, 1) *= s;
    L.block(1, 1, d, d) *= s * s;
  }
  sol.objective *= s * s;
  fill_margins(sol, channels, spec);
  return sol;
}

LiftedSolution solve_min_power_with_pattern(const ChannelSet& channels,
                                            const SinrSpec& spec,
                                            const CooperationPattern& pattern,
                                            const conic::SolverOptions& options) {
  pattern.validate();
  channels.validate();
  spec.validate();
  if (pattern.n_ms() != channels.n_ms() || pattern.n_bs != channels.n_bs)
    throw StructuralError("pattern solve: dimension mismatch");
  const int k_users = channels.n_ms();
  const int ant = channels.antennas_per_bs;
  auto [nch, nsp] = normalized_instance(channels, spec);

  // Active-coordinate index lists per user.
  std::vector<std::vector<int>> idx(k_users);
  for (int k = 0; k < k_users; ++k)
    for (int n : pattern.active_sets[k])
      for (int l = 0; l < ant; ++l) idx[k].push_back(n * ant + l);

  conic::SdpProblem p;
  p.block_sizes.resize(k_users);
  p.objective.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    int d = static_cast<int>(idx[k].size());
    p.block_sizes[k] = 2 * d;
    p.objective[k] = MatrixXd::Identity(2 * d, 2 * d);
  }
  for (int k = 0; k < k_users; ++k) {
    conic::Constraint c;
    c.sense = conic::Sense::Ge;
    c.rhs = 2.0 * nsp.targets[k] * nsp.noise_powers[k];
    c.coeff.resize(k_users);
    for (int m = 0; m < k_users; ++m) {
      int d = static_cast<int>(idx[m].size());
      VectorXcd hk(d);
      for (int j = 0; j < d; ++j) hk[j] = nch.channels[k][idx[m][j]];
      MatrixXcd a = outer(hk);
      if (m != k) a *= -spec.targets[k];
      c.coeff[m] = conic::embed_hermitian(a);
    }
    p.constraints.push_back(std::move(c));
  }

  auto res = conic::solve(p, options);
  LiftedSolution sol;
  sol.status = res.status;
  sol.solver_iterations = res.iterations;
  sol.beams = BeamformerSet::zeros(channels.n_bs, ant, k_users);
  if (!acceptable(res)) return sol;
  sol.objective = res.objective / 2.0;
  sol.lifted.resize(k_users);
  sol.rank_ratio.resize(k_users);
  const int dim = channels.dim();
  for (int k = 0; k < k_users; ++k) {
    MatrixXcd wred = conic::unembed_hermitian(res.primal_blocks[k]);
    Extraction e = extract_rank1(wred, LiftKind::Plain);
    sol.rank_ratio[k] = e.rank_ratio;
    if (e.rank_ratio > kRank1Tol) sol.rank1_ok = false;
    MatrixXcd wfull = MatrixXcd::Zero(dim, dim);
    for (std::size_t a = 0; a < idx[k].size(); ++a)
      for (std::size_t b = 0; b < idx[k].size(); ++b)
        wfull(idx[k][a], idx[k][b]) = wred(a, b);
    sol.lifted[k] = wfull;
    if (!e.degenerate)
      for (std::size_t a = 0; a < idx[k].size(); ++a)
        sol.beams.beams[k][idx[k][a]] = e.beam[a];
  }
  fill_margins(sol, channels, spec);
  double worst = *std::min_element(sol.sinr_margin.begin(), sol.sinr_margin.end());
  if (!sol.rank1_ok || worst < -kFeasTol) {
    rescue_scale(sol, channels, spec);
    if (sol.rescue_applied) fill_margins(sol, channels, spec);
  }
  return sol;
}

}  // namespace sparsebf::subproblems
