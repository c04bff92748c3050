#include "sparsebf/conic.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sparsebf/kernels.hpp"
#include "sparsebf/model.hpp"

namespace sparsebf::conic {

namespace {

double frob_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return kern::dot(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

void symmetrize(Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

// Internal equality-standard form: one extra 1x1 slack block per inequality,
//   sum_b tr(A_{i,b} X_b) - s_i = b_i,  s_i >= 0.
struct Internal {
  const SdpProblem* prob;
  int n_main = 0;                // declared blocks
  int n_blocks = 0;              // declared + slack
  int m = 0;                     // constraints
  std::vector<int> sizes;        // internal block sizes
  std::vector<int> slack_of;     // constraint -> slack block index (-1 for Eq)
  Eigen::VectorXd b;
  double norm_b = 0.0;
  double norm_c = 0.0;
  double norm_a = 0.0;

  explicit Internal(const SdpProblem& p) : prob(&p) {
    n_main = static_cast<int>(p.block_sizes.size());
    m = static_cast<int>(p.constraints.size());
    sizes = p.block_sizes;
    slack_of.assign(m, -1);
    b.resize(m);
    for (int i = 0; i < m; ++i) {
      b[i] = p.constraints[i].rhs;
      if (p.constraints[i].sense == Sense::Ge) {
        slack_of[i] = static_cast<int>(sizes.size());
        sizes.push_back(1);
      }
      for (const auto& a : p.constraints[i].coeff)
        norm_a = std::max(norm_a, a.norm());
    }
    n_blocks = static_cast<int>(sizes.size());
    norm_b = b.norm();
    for (const auto& c : p.objective) norm_c += c.squaredNorm();
    norm_c = std::sqrt(norm_c);
  }

  // r_i = sum_b tr(A_{i,b} X_b) - s_i
  Eigen::VectorXd applyA(const std::vector<Eigen::MatrixXd>& x) const {
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      for (int bix = 0; bix < n_main; ++bix)
        v += frob_inner(prob->constraints[i].coeff[bix], x[bix]);
      if (slack_of[i] >= 0) v -= x[slack_of[i]](0, 0);
      r[i] = v;
    }
    return r;
  }

  std::vector<Eigen::MatrixXd> applyAT(const Eigen::VectorXd& y) const {
    std::vector<Eigen::MatrixXd> r(n_blocks);
    for (int bix = 0; bix < n_main; ++bix) {
      r[bix] = Eigen::MatrixXd::Zero(sizes[bix], sizes[bix]);
      for (int i = 0; i < m; ++i)
        r[bix].noalias() += y[i] * prob->constraints[i].coeff[bix];
    }
    for (int i = 0; i < m; ++i)
      if (slack_of[i] >= 0) {
        r[slack_of[i]] = Eigen::MatrixXd::Constant(1, 1, -y[i]);
      }
    return r;
  }

  const Eigen::MatrixXd* cost(int bix, Eigen::MatrixXd& zero_storage) const {
    if (bix < n_main) return &prob->objective[bix];
    if (zero_storage.size() == 0) zero_storage = Eigen::MatrixXd::Zero(1, 1);
    return &zero_storage;
  }

  double cost_inner(const std::vector<Eigen::MatrixXd>& x) const {
    double v = 0.0;
    for (int bix = 0; bix < n_main; ++bix)
      v += frob_inner(prob->objective[bix], x[bix]);
    return v;
  }
};

struct BlockScaling {
  Eigen::MatrixXd w;     // NT scaling point, W Z W = X
  Eigen::MatrixXd zinv;  // Z^{-1}
};

BlockScaling nt_scaling(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z) {
  BlockScaling s;
  if (x.rows() == 1) {
    double xi = x(0, 0), zi = z(0, 0);
    s.w = Eigen::MatrixXd::Constant(1, 1, std::sqrt(xi / zi));
    s.zinv = Eigen::MatrixXd::Constant(1, 1, 1.0 / zi);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ze(z);
  Eigen::VectorXd zl = ze.eigenvalues().cwiseMax(1e-300);
  Eigen::MatrixXd zsqrt = ze.eigenvectors() * zl.cwiseSqrt().asDiagonal() *
                          ze.eigenvectors().transpose();
  Eigen::MatrixXd zisqrt = ze.eigenvectors() * zl.cwiseSqrt().cwiseInverse().asDiagonal() *
                           ze.eigenvectors().transpose();
  s.zinv = ze.eigenvectors() * zl.cwiseInverse().asDiagonal() * ze.eigenvectors().transpose();
  Eigen::MatrixXd mid = zsqrt * x * zsqrt;
  symmetrize(mid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> me(mid);
  Eigen::MatrixXd midsqrt = me.eigenvectors() *
                            me.eigenvalues().cwiseMax(1e-300).cwiseSqrt().asDiagonal() *
                            me.eigenvectors().transpose();
  s.w = zisqrt * midsqrt * zisqrt;
  symmetrize(s.w);
  return s;
}

// Largest step a in [0, cap] with m + a*dm staying positive definite.
double psd_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& dm, double cap) {
  if (m.rows() == 1) {
    double d = dm(0, 0);
    if (d >= 0) return cap;
    return std::min(cap, -m(0, 0) / d);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd s = l.triangularView<Eigen::Lower>().solve(dm);
  s = l.triangularView<Eigen::Lower>().solve(s.transpose().eval());
  symmetrize(s);
  double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().minCoeff();
  if (lmin >= 0) return cap;
  return std::min(cap, -1.0 / lmin);
}

struct Direction {
  std::vector<Eigen::MatrixXd> dx, dz;
  Eigen::VectorXd dy;
  double dtau = 0.0, dkappa = 0.0;
};

}  // namespace

void SdpProblem::validate() const {
  if (block_sizes.empty()) throw StructuralError("sdp: no blocks");
  if (constraints.empty()) throw StructuralError("sdp: at least one constraint required");
  if (objective.size() != block_sizes.size())
    throw StructuralError("sdp: objective block count mismatch");
  for (std::size_t bix = 0; bix < block_sizes.size(); ++bix) {
    int n = block_sizes[bix];
    if (n < 1) throw StructuralError("sdp: block size must be >= 1");
    if (objective[bix].rows() != n || objective[bix].cols() != n)
      throw StructuralError("sdp: objective dimension mismatch");
    if (!objective[bix].isApprox(objective[bix].transpose(), 1e-12))
      throw StructuralError("sdp: objective block not symmetric");
  }
  for (const auto& c : constraints) {
    if (c.coeff.size() != block_sizes.size())
      throw StructuralError("sdp: constraint block count mismatch");
    for (std::size_t bix = 0; bix < block_sizes.size(); ++bix) {
      int n = block_sizes[bix];
      if (c.coeff[bix].rows() != n || c.coeff[bix].cols() != n)
        throw StructuralError("sdp: constraint dimension mismatch");
      if (!c.coeff[bix].isApprox(c.coeff[bix].transpose(), 1e-12))
        throw StructuralError("sdp: constraint block not symmetric");
    }
  }
}

SdpResult solve(const SdpProblem& problem, const SolverOptions& options) {
  problem.validate();
  if (options.tolerance <= 0) throw StructuralError("sdp: tolerance must be positive");
  Internal in(problem);
  const int m = in.m;
  const int nb = in.n_blocks;
  Eigen::MatrixXd zero11;

  int ndim = 0;
  for (int s : in.sizes) ndim += s;

  std::vector<Eigen::MatrixXd> X(nb), Z(nb);
  for (int bix = 0; bix < nb; ++bix) {
    X[bix] = Eigen::MatrixXd::Identity(in.sizes[bix], in.sizes[bix]);
    Z[bix] = X[bix];
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  double tau = 1.0, kappa = 1.0;

  SdpResult result;
  auto inner_xz = [&]() {
    double v = 0.0;
    for (int bix = 0; bix < nb; ++bix) v += frob_inner(X[bix], Z[bix]);
    return v;
  };
  const double mu0 = (inner_xz() + tau * kappa) / (ndim + 1);

  auto finalize_optimal = [&]() {
    result.status = SolveStatus::Optimal;
    result.primal_blocks.resize(in.n_main);
    result.dual_slacks.resize(in.n_main);
    for (int bix = 0; bix < in.n_main; ++bix) {
      result.primal_blocks[bix] = X[bix] / tau;
      result.dual_slacks[bix] = Z[bix] / tau;
    }
    result.duals = y / tau;
    result.inequality_slacks = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i)
      if (in.slack_of[i] >= 0) result.inequality_slacks[i] = X[in.slack_of[i]](0, 0) / tau;
    result.objective = in.cost_inner(X) / tau;
    result.residuals = check_kkt(problem, result);
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    double mu = (inner_xz() + tau * kappa) / (ndim + 1);

    // Scaled-point convergence test.
    Eigen::VectorXd ax = in.applyA(X);
    auto aty = in.applyAT(y);
    double pobj = in.cost_inner(X) / tau;
    double dobj = in.b.dot(y) / tau;
    double pres = (ax / tau - in.b).norm() / (1.0 + in.norm_b);
    double dres_sq = 0.0;
    for (int bix = 0; bix < nb; ++bix) {
      const Eigen::MatrixXd* c = in.cost(bix, zero11);
      dres_sq += ((aty[bix] + Z[bix]) / tau - *c).squaredNorm();
    }
    double dres = std::sqrt(dres_sq) / (1.0 + in.norm_c);
    double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (pres <= options.tolerance && dres <= options.tolerance && gap <= options.tolerance) {
      finalize_optimal();
      return result;
    }

    // Certificate tests (scale-invariant).
    double by = in.b.dot(y);
    if (by > 0) {
      double cert_sq = 0.0;
      for (int bix = 0; bix < nb; ++bix) cert_sq += (aty[bix] + Z[bix]).squaredNorm();
      double cert = std::sqrt(cert_sq) / by / (1.0 + in.norm_a);
      if (cert <= options.tolerance) {
        result.status = SolveStatus::Infeasible;
        result.duals = y / by;
        result.dual_slacks.assign(Z.begin(), Z.begin() + in.n_main);
        for (auto& zb : result.dual_slacks) zb /= by;
        result.residuals.dual = cert;
        return result;
      }
    }
    double neg_cx = -in.cost_inner(X);
    if (neg_cx > 0) {
      double cert = ax.norm() / neg_cx / (1.0 + in.norm_a);
      if (cert <= options.tolerance) {
        result.status = SolveStatus::Unbounded;
        result.primal_blocks.assign(X.begin(), X.begin() + in.n_main);
        for (auto& xb : result.primal_blocks) xb /= neg_cx;
        result.residuals.primal = cert;
        return result;
      }
    }
    if (mu < 1e-18 * mu0 || tau < options.infeasibility_threshold * std::max(1.0, kappa)) {
      break;  // numerically resolved but no clean certificate
    }

    // Residuals of the homogeneous model.
    Eigen::VectorXd r1 = in.b * tau - ax;
    std::vector<Eigen::MatrixXd> r2(nb);
    for (int bix = 0; bix < nb; ++bix) {
      const Eigen::MatrixXd* c = in.cost(bix, zero11);
      r2[bix] = Z[bix] + aty[bix] - *c * tau;
    }
    double r3 = kappa - in.b.dot(y) + in.cost_inner(X);

    // NT scaling and Schur complement (shared by both passes).
    std::vector<BlockScaling> sc(nb);
    for (int bix = 0; bix < nb; ++bix) sc[bix] = nt_scaling(X[bix], Z[bix]);

    // T_{i,b} = W A_i W for the main blocks.
    std::vector<std::vector<Eigen::MatrixXd>> T(m);
    for (int i = 0; i < m; ++i) {
      T[i].resize(in.n_main);
      for (int bix = 0; bix < in.n_main; ++bix)
        T[i][bix].noalias() = sc[bix].w * problem.constraints[i].coeff[bix] * sc[bix].w;
    }
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double v = 0.0;
        for (int bix = 0; bix < in.n_main; ++bix)
          v += frob_inner(problem.constraints[i].coeff[bix], T[j][bix]);
        M(i, j) = M(j, i) = v;
      }
      if (in.slack_of[i] >= 0) {
        double w = sc[in.slack_of[i]].w(0, 0);
        M(i, i) += w * w;
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> mfac(M);
    if (mfac.info() != Eigen::Success) break;

    std::vector<Eigen::MatrixXd> wcw(nb);
    for (int bix = 0; bix < nb; ++bix) {
      const Eigen::MatrixXd* c = in.cost(bix, zero11);
      wcw[bix].noalias() = sc[bix].w * (*c) * sc[bix].w;
    }
    Eigen::VectorXd u = in.applyA(wcw);
    double cwcw = in.cost_inner(wcw);
    Eigen::VectorXd q1 = mfac.solve(in.b + u);

    std::vector<Eigen::MatrixXd> wr2w(nb);
    for (int bix = 0; bix < nb; ++bix) {
      wr2w[bix].noalias() = sc[bix].w * r2[bix] * sc[bix].w;
      symmetrize(wr2w[bix]);
    }
    double c_wr2w = in.cost_inner(wr2w);
    Eigen::VectorXd a_wr2w = in.applyA(wr2w);

    auto compute_direction = [&](double gamma, double rtk_corr) {
      Direction d;
      double eta = 1.0 - gamma;
      std::vector<Eigen::MatrixXd> rc(nb);
      for (int bix = 0; bix < nb; ++bix) {
        rc[bix] = gamma * mu * sc[bix].zinv - X[bix];
      }
      double rtk = gamma * mu - tau * kappa - rtk_corr;
      Eigen::VectorXd a_rc = in.applyA(rc);
      Eigen::VectorXd rhs2 = eta * r1 - a_rc - eta * a_wr2w;
      Eigen::VectorXd q2 = mfac.solve(rhs2);
      double c_rc = in.cost_inner(rc);

      double denom = (in.b - u).dot(q1) + cwcw + kappa / tau;
      double numer = rtk / tau - (in.b - u).dot(q2) + c_rc + eta * c_wr2w + eta * r3;
      d.dtau = numer / denom;
      d.dy = d.dtau * q1 + q2;
      auto atdy = in.applyAT(d.dy);
      d.dz.resize(nb);
      d.dx.resize(nb);
      for (int bix = 0; bix < nb; ++bix) {
        const Eigen::MatrixXd* c = in.cost(bix, zero11);
        d.dz[bix] = -eta * r2[bix] - atdy[bix] + (*c) * d.dtau;
        symmetrize(d.dz[bix]);
        d.dx[bix] = rc[bix] - sc[bix].w * d.dz[bix] * sc[bix].w;
        symmetrize(d.dx[bix]);
      }
      d.dkappa = (rtk - kappa * d.dtau) / tau;
      return d;
    };

    auto max_step = [&](const Direction& d) {
      double a = 1.0;
      for (int bix = 0; bix < nb; ++bix) {
        a = psd_step(X[bix], d.dx[bix], a);
        a = psd_step(Z[bix], d.dz[bix], a);
      }
      if (d.dtau < 0) a = std::min(a, -tau / d.dtau);
      if (d.dkappa < 0) a = std::min(a, -kappa / d.dkappa);
      return a;
    };

    // Predictor.
    Direction aff = compute_direction(0.0, 0.0);
    double a_aff = 0.98 * max_step(aff);
    double mu_aff = tau * kappa;
    {
      double acc = 0.0;
      for (int bix = 0; bix < nb; ++bix)
        acc += frob_inner(X[bix] + a_aff * aff.dx[bix], Z[bix] + a_aff * aff.dz[bix]);
      mu_aff = (acc + (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) / (ndim + 1);
    }
    double gamma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);
    gamma = std::clamp(gamma, 1e-6, 0.9999);

    // Corrector (tau-kappa second-order term only).
    Direction d = compute_direction(gamma, aff.dtau * aff.dkappa);
    double alpha = 0.98 * max_step(d);
    if (alpha <= 1e-14) break;

    for (int bix = 0; bix < nb; ++bix) {
      X[bix] += alpha * d.dx[bix];
      Z[bix] += alpha * d.dz[bix];
      symmetrize(X[bix]);
      symmetrize(Z[bix]);
    }
    y += alpha * d.dy;
    tau += alpha * d.dtau;
    kappa += alpha * d.dkappa;
  }

  // No convergence: report the best scaled point with its residuals.
  result.status = SolveStatus::MaxIterations;
  result.primal_blocks.resize(in.n_main);
  result.dual_slacks.resize(in.n_main);
  for (int bix = 0; bix < in.n_main; ++bix) {
    result.primal_blocks[bix] = X[bix] / tau;
    result.dual_slacks[bix] = Z[bix] / tau;
  }
  result.duals = y / tau;
  result.inequality_slacks = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    if (in.slack_of[i] >= 0) result.inequality_slacks[i] = X[in.slack_of[i]](0, 0) / tau;
  result.objective = in.cost_inner(X) / tau;
  result.residuals = check_kkt(problem, result);
  return result;
}

Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw StructuralError("embed: matrix must be square");
  if (!m.isApprox(m.adjoint(), 1e-10)) throw StructuralError("embed: matrix must be Hermitian");
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = m.real();
  e.bottomRightCorner(n, n) = m.real();
  e.topRightCorner(n, n) = -m.imag();
  e.bottomLeftCorner(n, n) = m.imag();
  return e;
}

Eigen::MatrixXcd unembed_hermitian(const Eigen::MatrixXd& e) {
  if (e.rows() != e.cols() || e.rows() % 2 != 0)
    throw StructuralError("unembed: matrix must be square with even dimension");
  const int n = static_cast<int>(e.rows()) / 2;
  Eigen::MatrixXd re = 0.5 * (e.topLeftCorner(n, n) + e.bottomRightCorner(n, n));
  Eigen::MatrixXd im = 0.5 * (e.bottomLeftCorner(n, n) - e.topRightCorner(n, n));
  Eigen::MatrixXcd m = re.cast<std::complex<double>>() +
                       std::complex<double>(0, 1) * im.cast<std::complex<double>>();
  return 0.5 * (m + m.adjoint());
}

Residuals check_kkt(const SdpProblem& problem, const SdpResult& result) {
  Residuals r;
  const int m = static_cast<int>(problem.constraints.size());
  const int nb = static_cast<int>(problem.block_sizes.size());
  double bscale = 1.0;
  for (const auto& c : problem.constraints) bscale = std::max(bscale, std::abs(c.rhs));

  for (int i = 0; i < m; ++i) {
    double v = 0.0;
    for (int bix = 0; bix < nb; ++bix)
      v += frob_inner(problem.constraints[i].coeff[bix], result.primal_blocks[bix]);
    double viol = problem.constraints[i].sense == Sense::Eq
                      ? std::abs(v - problem.constraints[i].rhs)
                      : std::max(0.0, problem.constraints[i].rhs - v);
    r.primal = std::max(r.primal, viol / bscale);
  }
  for (int bix = 0; bix < nb; ++bix) {
    double lmin =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(result.primal_blocks[bix])
            .eigenvalues()
            .minCoeff();
    r.primal = std::max(r.primal, std::max(0.0, -lmin));
  }

  double cscale = 1.0;
  for (const auto& c : problem.objective) cscale = std::max(cscale, c.norm());
  for (int bix = 0; bix < nb; ++bix) {
    Eigen::MatrixXd z = problem.objective[bix];
    for (int i = 0; i < m; ++i) z.noalias() -= result.duals[i] * problem.constraints[i].coeff[bix];
    r.dual = std::max(r.dual, (z - result.dual_slacks[bix]).norm() / cscale);
    double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(result.dual_slacks[bix])
                      .eigenvalues()
                      .minCoeff();
    r.dual = std::max(r.dual, std::max(0.0, -lmin));
  }
  for (int i = 0; i < m; ++i)
    if (problem.constraints[i].sense == Sense::Ge)
      r.dual = std::max(r.dual, std::max(0.0, -result.duals[i]));

  // Complementarity is measured relative to the magnitude of the pair, to
  // match the solver's scale-free stopping rule.
  double pair_scale = 1.0;
  for (int bix = 0; bix < nb; ++bix)
    pair_scale = std::max(pair_scale, result.primal_blocks[bix].norm() *
                                          result.dual_slacks[bix].norm());
  // <X,Z> >= 0 for a PSD pair, and it vanishes exactly when XZ = 0, so the
  // inner product is the complementarity measure (the product norm decays
  // only like the square root of the gap).
  for (int bix = 0; bix < nb; ++bix) {
    double gap = frob_inner(result.primal_blocks[bix], result.dual_slacks[bix]);
    r.complementarity = std::max(r.complementarity, std::abs(gap) / pair_scale);
  }
  if (result.inequality_slacks.size() == m) {
    for (int i = 0; i < m; ++i)
      if (problem.constraints[i].sense == Sense::Ge)
        r.complementarity = std::max(
            r.complementarity,
            std::abs(result.inequality_slacks[i] * result.duals[i]) / pair_scale);
  }
  return r;
}

void dump_problem(const SdpProblem& problem, std::ostream& os) {
  os.precision(17);
  os << "sparsebf-sdp 1\n";
  os << "blocks " << problem.block_sizes.size() << "\n";
  for (int s : problem.block_sizes) os << s << " ";
  os << "\n" << "objective\n";
  for (const auto& c : problem.objective) {
    for (int i = 0; i < c.rows(); ++i) {
      for (int j = 0; j < c.cols(); ++j) os << c(i, j) << " ";
      os << "\n";
    }
  }
  os << "constraints " << problem.constraints.size() << "\n";
  for (const auto& c : problem.constraints) {
    os << (c.sense == Sense::Ge ? "ge" : "eq") << " " << c.rhs << "\n";
    for (const auto& a : c.coeff) {
      for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) os << a(i, j) << " ";
        os << "\n";
      }
    }
  }
}

SdpProblem parse_problem_dump(std::istream& is) {
  SdpProblem p;
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "sparsebf-sdp" || version != 1)
    throw StructuralError("sdp dump: unrecognized header");
  std::size_t nb = 0;
  is >> tag >> nb;
  if (tag != "blocks") throw StructuralError("sdp dump: expected 'blocks'");
  p.block_sizes.resize(nb);
  for (auto& s : p.block_sizes) is >> s;
  is >> tag;
  if (tag != "objective") throw StructuralError("sdp dump: expected 'objective'");
  auto read_mats = [&](std::vector<Eigen::MatrixXd>& mats) {
    mats.resize(nb);
    for (std::size_t bix = 0; bix < nb; ++bix) {
      int n = p.block_sizes[bix];
      mats[bix].resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) is >> mats[bix](i, j);
    }
  };
  read_mats(p.objective);
  std::size_t m = 0;
  is >> tag >> m;
  if (tag != "constraints") throw StructuralError("sdp dump: expected 'constraints'");
  p.constraints.resize(m);
  for (auto& c : p.constraints) {
    std::string sense;
    is >> sense >> c.rhs;
    if (sense == "ge") c.sense = Sense::Ge;
    else if (sense == "eq") c.sense = Sense::Eq;
    else throw StructuralError("sdp dump: bad sense");
    read_mats(c.coeff);
  }
  if (!is) throw StructuralError("sdp dump: truncated input");
  return p;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

}  // namespace sparsebf::conic
