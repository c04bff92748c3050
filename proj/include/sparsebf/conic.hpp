#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

// Dense semidefinite programming over block-diagonal real symmetric cones:
//
//   minimize    sum_b tr(C_b X_b)
//   subject to  sum_b tr(A_{i,b} X_b)  {>=,=}  b_i,   X_b >= 0.
//
// Solved by a homogeneous self-dual primal-dual path-following method with
// NT scaling; infeasibility is certified, never approximated.  Problem sizes
// here are tiny (blocks of a few tens of rows, tens of constraints), so all
// linear algebra is dense.

namespace sparsebf::conic {

enum class Sense { Ge, Eq };

struct Constraint {
  std::vector<Eigen::MatrixXd> coeff;  // one symmetric matrix per block
  double rhs = 0.0;
  Sense sense = Sense::Eq;
};

struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<Eigen::MatrixXd> objective;  // C_b
  std::vector<Constraint> constraints;

  void validate() const;
};

struct SolverOptions {
  double tolerance = 1e-8;
  int max_iterations = 200;
  double infeasibility_threshold = 1e-10;  // on tau relative to kappa
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIterations };

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
};

struct SdpResult {
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<Eigen::MatrixXd> primal_blocks;  // X_b
  Eigen::VectorXd duals;                       // y_i
  std::vector<Eigen::MatrixXd> dual_slacks;    // Z_b
  Eigen::VectorXd inequality_slacks;           // s_i (0 for equalities)
  double objective = 0.0;
  Residuals residuals;
  int iterations = 0;
};

SdpResult solve(const SdpProblem& problem, const SolverOptions& options = {});

// Real symmetric embedding [[Re M, -Im M], [Im M, Re M]] of a Hermitian matrix.
Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& m);
// Inverse map: averages the two redundant real copies back to Hermitian form.
Eigen::MatrixXcd unembed_hermitian(const Eigen::MatrixXd& e);

// KKT residuals of a claimed optimal primal/dual pair measured against the
// problem data (not against the solver's internal state).
Residuals check_kkt(const SdpProblem& problem, const SdpResult& result);

// Self-describing text dump for cross-checking against external solvers.
void dump_problem(const SdpProblem& problem, std::ostream& os);
SdpProblem parse_problem_dump(std::istream& is);

std::string to_string(SolveStatus status);

}  // namespace sparsebf::conic
