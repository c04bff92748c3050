#include <doctest.h>

#include <random>
#include <sstream>

#include "sparsebf/conic.hpp"
#include "test_util.hpp"

using namespace sparsebf;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_sym(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return MatrixXd((m + m.transpose()) / 2.0);
}

conic::SdpProblem min_eigenvalue_problem(const MatrixXd& c) {
  conic::SdpProblem p;
  const int n = static_cast<int>(c.rows());
  p.block_sizes = {n};
  p.objective = {c};
  conic::Constraint tr1;
  tr1.sense = conic::Sense::Eq;
  tr1.rhs = 1.0;
  tr1.coeff = {MatrixXd::Identity(n, n)};
  p.constraints.push_back(tr1);
  return p;
}

}  // namespace

TEST_CASE("minimum over the spectrahedron recovers the smallest eigenvalue") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + trial % 6;
    MatrixXd c = random_sym(n, rng);
    auto res = conic::solve(min_eigenvalue_problem(c));
    REQUIRE(res.status == conic::SolveStatus::Optimal);
    double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(c).eigenvalues()(0);
    CHECK(res.objective == doctest::Approx(lmin).epsilon(1e-6));
  }
}

TEST_CASE("diagonal blocks reduce to linear programming") {
  // min x0 + 2 x1  s.t.  x0 + x1 >= 1, x >= 0  ->  x = (1, 0).
  conic::SdpProblem p;
  p.block_sizes = {1, 1};
  p.objective = {MatrixXd::Constant(1, 1, 1.0), MatrixXd::Constant(1, 1, 2.0)};
  conic::Constraint c;
  c.sense = conic::Sense::Ge;
  c.rhs = 1.0;
  c.coeff = {MatrixXd::Constant(1, 1, 1.0), MatrixXd::Constant(1, 1, 1.0)};
  p.constraints.push_back(c);
  auto res = conic::solve(p);
  REQUIRE(res.status == conic::SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(res.primal_blocks[0](0, 0) == doctest::Approx(1.0));
  CHECK(res.primal_blocks[1](0, 0) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("mixed equality and inequality constraints") {
  // min tr(X) over 2x2 X >= 0 with X_00 = 2 and tr(X) >= 3.
  conic::SdpProblem p;
  p.block_sizes = {2};
  p.objective = {MatrixXd::Identity(2, 2)};
  conic::Constraint fix;
  fix.sense = conic::Sense::Eq;
  fix.rhs = 2.0;
  fix.coeff = {MatrixXd::Zero(2, 2)};
  fix.coeff[0](0, 0) = 1.0;
  p.constraints.push_back(fix);
  conic::Constraint tr;
  tr.sense = conic::Sense::Ge;
  tr.rhs = 3.0;
  tr.coeff = {MatrixXd::Identity(2, 2)};
  p.constraints.push_back(tr);
  auto res = conic::solve(p);
  REQUIRE(res.status == conic::SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(3.0));
  CHECK(res.primal_blocks[0](0, 0) == doctest::Approx(2.0));
}

TEST_CASE("primal infeasibility is certified") {
  conic::SdpProblem p;
  p.block_sizes = {1};
  p.objective = {MatrixXd::Zero(1, 1)};
  conic::Constraint c;
  c.sense = conic::Sense::Eq;
  c.rhs = -1.0;
  c.coeff = {MatrixXd::Identity(1, 1)};
  p.constraints.push_back(c);
  auto res = conic::solve(p);
  CHECK(res.status == conic::SolveStatus::Infeasible);
}

TEST_CASE("conflicting inequalities are certified infeasible") {
  // x >= 2 and -x >= -1 on a 1x1 block.
  conic::SdpProblem p;
  p.block_sizes = {1};
  p.objective = {MatrixXd::Identity(1, 1)};
  conic::Constraint a;
  a.sense = conic::Sense::Ge;
  a.rhs = 2.0;
  a.coeff = {MatrixXd::Identity(1, 1)};
  conic::Constraint b;
  b.sense = conic::Sense::Ge;
  b.rhs = -1.0;
  b.coeff = {-MatrixXd::Identity(1, 1)};
  p.constraints = {a, b};
  auto res = conic::solve(p);
  CHECK(res.status == conic::SolveStatus::Infeasible);
}

TEST_CASE("dual infeasibility is reported as unbounded") {
  conic::SdpProblem p;
  p.block_sizes = {1};
  p.objective = {-MatrixXd::Identity(1, 1)};
  conic::Constraint c;
  c.sense = conic::Sense::Ge;
  c.rhs = 1.0;
  c.coeff = {MatrixXd::Identity(1, 1)};
  p.constraints.push_back(c);
  auto res = conic::solve(p);
  CHECK(res.status == conic::SolveStatus::Unbounded);
}

TEST_CASE("kkt residuals are small on random solvable problems") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 4;
    conic::SdpProblem p;
    p.block_sizes = {n, 1};
    MatrixXd c = random_sym(n, rng) + 3.0 * n * MatrixXd::Identity(n, n);
    p.objective = {c, MatrixXd::Identity(1, 1)};
    MatrixXd g = random_sym(n, rng);
    MatrixXd x0 = g * g.transpose() + MatrixXd::Identity(n, n);  // strictly feasible
    double s0 = 0.5;
    for (int i = 0; i < 2; ++i) {
      conic::Constraint con;
      con.sense = i == 0 ? conic::Sense::Eq : conic::Sense::Ge;
      con.coeff = {random_sym(n, rng), MatrixXd::Identity(1, 1)};
      double at_x0 = (con.coeff[0] * x0).trace() + s0;
      con.rhs = i == 0 ? at_x0 : at_x0 - 1.0;
      p.constraints.push_back(con);
    }
    auto res = conic::solve(p);
    REQUIRE(res.status == conic::SolveStatus::Optimal);
    auto kkt = conic::check_kkt(p, res);
    CHECK(kkt.primal <= 1e-6);
    CHECK(kkt.dual <= 1e-6);
    CHECK(kkt.complementarity <= 1e-5);
  }
}

TEST_CASE("objective scale invariance of the optimizer") {
  std::mt19937_64 rng(9);
  MatrixXd c = random_sym(4, rng);
  auto p = min_eigenvalue_problem(c);
  auto res1 = conic::solve(p);
  p.objective[0] *= 100.0;
  auto res2 = conic::solve(p);
  REQUIRE(res1.status == conic::SolveStatus::Optimal);
  REQUIRE(res2.status == conic::SolveStatus::Optimal);
  CHECK(res2.objective == doctest::Approx(100.0 * res1.objective).epsilon(1e-6));
  CHECK((res1.primal_blocks[0] - res2.primal_blocks[0]).norm() <= 1e-5);
}

TEST_CASE("weak duality holds at the returned primal/dual pair") {
  std::mt19937_64 rng(21);
  MatrixXd c = random_sym(3, rng) + 4.0 * MatrixXd::Identity(3, 3);
  auto p = min_eigenvalue_problem(c);
  auto res = conic::solve(p);
  REQUIRE(res.status == conic::SolveStatus::Optimal);
  // Dual objective b'y must not exceed the primal objective.
  double dual_obj = res.duals(0) * p.constraints[0].rhs;
  CHECK(dual_obj <= res.objective + 1e-7);
}

TEST_CASE("hermitian embedding doubles traces and pairs eigenvalues") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + trial % 3;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = std::complex<double>(std::normal_distribution<double>()(rng),
                                       std::normal_distribution<double>()(rng));
    m = ((m + m.adjoint()) / 2.0).eval();
    MatrixXd e = conic::embed_hermitian(m);
    CHECK(e.trace() == doctest::Approx(2.0 * m.trace().real()));
    CHECK((e - e.transpose()).norm() <= 1e-12);
    VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(e).eigenvalues();
    VectorXd hv =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues();
    for (int i = 0; i < n; ++i) {
      CHECK(ev(2 * i) == doctest::Approx(hv(i)));
      CHECK(ev(2 * i + 1) == doctest::Approx(hv(i)));
    }
    CHECK((conic::unembed_hermitian(e) - m).norm() <= 1e-12);
  }
}

TEST_CASE("problem dump round-trips") {
  std::mt19937_64 rng(41);
  conic::SdpProblem p;
  p.block_sizes = {3, 1};
  p.objective = {random_sym(3, rng), MatrixXd::Identity(1, 1)};
  conic::Constraint c;
  c.sense = conic::Sense::Ge;
  c.rhs = 0.125;
  c.coeff = {random_sym(3, rng), MatrixXd::Constant(1, 1, -2.0)};
  p.constraints.push_back(c);

  std::stringstream ss;
  conic::dump_problem(p, ss);
  auto q = conic::parse_problem_dump(ss);
  REQUIRE(q.block_sizes == p.block_sizes);
  REQUIRE(q.constraints.size() == p.constraints.size());
  CHECK((q.objective[0] - p.objective[0]).norm() <= 1e-12);
  CHECK(q.constraints[0].rhs == doctest::Approx(p.constraints[0].rhs));
  CHECK(q.constraints[0].sense == conic::Sense::Ge);
  CHECK((q.constraints[0].coeff[1] - p.constraints[0].coeff[1]).norm() <= 1e-12);
}

TEST_CASE("problem validation rejects inconsistent shapes") {
  conic::SdpProblem p;
  p.block_sizes = {2};
  p.objective = {MatrixXd::Identity(3, 3)};
  CHECK_THROWS_AS(p.validate(), StructuralError);
}
