#include <sstream>

#include "bessplan/error.hpp"
#include "bessplan/lp/lp.hpp"
#include "doctest.h"
#include "lp_oracle.hpp"

using namespace bessplan::lp;

namespace {

LpInstance one_var(double cost, double lo, double up) {
  LpBuilder b;
  b.add_variable(lo, up, cost, "x");
  return b.build();
}

bool objective_matches(double got, double want) {
  return std::abs(got - want) <= 1e-6 || std::abs(got - want) <= 1e-8 * std::abs(want);
}

}  // namespace

TEST_CASE("bound-active single variable") {
  const LpResult r = solve(one_var(-1, 0, 5));
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(5));
  CHECK(r.objective_value == doctest::Approx(-5));
}

TEST_CASE("equality forces the objective") {
  LpBuilder b;
  const auto x1 = b.add_variable(0, kInf, 1), x2 = b.add_variable(0, kInf, 1);
  const auto row = b.add_row(1);
  b.add_coefficient(row, x1, 1);
  b.add_coefficient(row, x2, 1);
  for (LpMethod m : {LpMethod::Simplex, LpMethod::InteriorPoint}) {
    SolveOptions o;
    o.method = m;
    const LpResult r = solve(b.build(), o);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective_value == doctest::Approx(1).epsilon(1e-9));
  }
}

TEST_CASE("contradictory equalities are infeasible") {
  LpBuilder b;
  const auto x = b.add_variable(-kInf, kInf, 0);
  b.add_coefficient(b.add_row(1), x, 1);
  b.add_coefficient(b.add_row(0), x, 1);
  CHECK(solve(b.build()).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded ray") {
  LpBuilder b;
  const auto x = b.add_variable(0, kInf, -1), y = b.add_variable(0, kInf, 0);
  const auto row = b.add_row(1);
  b.add_coefficient(row, x, 1);
  b.add_coefficient(row, y, -1);
  CHECK(solve(b.build()).status == LpStatus::Unbounded);
}

TEST_CASE("free variables") {
  // min x + 2y, x - y = 3, x free, -1 <= y <= 4  ->  y = -1, x = 2
  LpBuilder b;
  const auto x = b.add_variable(-kInf, kInf, 1), y = b.add_variable(-1, 4, 2);
  const auto row = b.add_row(3);
  b.add_coefficient(row, x, 1);
  b.add_coefficient(row, y, -1);
  const LpResult r = solve(b.build());
  REQUIRE(r.optimal());
  CHECK(r.x[0] == doctest::Approx(2));
  CHECK(r.x[1] == doctest::Approx(-1));
}

TEST_CASE("invalid instances are rejected at construction") {
  LpInstance lp = one_var(1, 0, 1);
  lp.triplets.emplace_back(0, 3, 1.0);
  CHECK_THROWS_AS(solve(lp), bessplan::LpConstructionError);
  LpInstance nan = one_var(1, 0, 1);
  nan.objective[0] = std::nan("");
  CHECK_THROWS_AS(solve(nan), bessplan::LpConstructionError);
  LpInstance crossed = one_var(1, 0, 1);
  crossed.lower[0] = 2;
  CHECK_THROWS_AS(crossed.validate(), bessplan::LpConstructionError);
  LpBuilder b;
  b.add_variable(2, 1, 0);
  CHECK_THROWS_AS(b.build(), bessplan::LpConstructionError);
}

TEST_CASE("presolve removes fixed columns and empty rows") {
  SUBCASE("fixed variable substituted, rhs adjusted") {
    LpBuilder b;
    const auto x = b.add_variable(3, 3, 1), y = b.add_variable(0, 10, 1);
    const auto row = b.add_row(5);
    b.add_coefficient(row, x, 1);
    b.add_coefficient(row, y, 1);
    const PresolveResult p = presolve(b.build());
    REQUIRE_FALSE(p.infeasible);
    CHECK(p.reduced.n_vars == 1);
    CHECK(p.reduced.rhs[0] == doctest::Approx(2));
    CHECK(p.map.col_to_reduced[0] == -1);
    CHECK(p.map.fixed_value[0] == 3);
    const LpResult r = solve(b.build());
    CHECK(r.x[0] == 3);
    CHECK(r.x[1] == doctest::Approx(2));
  }
  SUBCASE("empty row with zero rhs is dropped") {
    LpBuilder b;
    b.add_variable(0, 1, 1);
    b.add_row(0);
    const PresolveResult p = presolve(b.build());
    CHECK_FALSE(p.infeasible);
    CHECK(p.reduced.n_rows == 0);
  }
  SUBCASE("empty row with nonzero rhs is infeasible") {
    LpBuilder b;
    b.add_variable(0, 1, 1);
    b.add_row(1, "lonely");
    const PresolveResult p = presolve(b.build());
    CHECK(p.infeasible);
    CHECK(p.infeasible_row == 0);
    const LpResult r = solve(b.build());
    CHECK(r.status == LpStatus::Infeasible);
    CHECK(r.infeasible_row == 0);
  }
}

TEST_CASE("check_solution audits residuals and bounds") {
  LpBuilder b;
  const auto x = b.add_variable(0, 2, 1), y = b.add_variable(0, 4, 0);
  const auto r0 = b.add_row(3);
  b.add_coefficient(r0, x, 1);
  b.add_coefficient(r0, y, 2);
  const auto r1 = b.add_row(1);
  b.add_coefficient(r1, x, -1);
  b.add_coefficient(r1, y, 1);
  const LpInstance lp = b.build();
  const LpResult sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(check_solution(lp, sol.x, 1e-7).feasible);

  SUBCASE("perturbing a tight bound is reported") {
    Vector bad = sol.x;
    bad[0] = -1;  // x = 1/3 at optimum; push below its lower bound by 1
    const SolutionReport rep = check_solution(lp, bad, 1e-7);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.max_bound_violation == doctest::Approx(1));
    CHECK(rep.worst_col == 0);
  }
  SUBCASE("matches a dense residual computation") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, -1, 1;
    const Vector p = (Vector(2) << 0.5, 1.0).finished();
    const Vector resid = a * p - lp.rhs;
    const SolutionReport rep = check_solution(lp, p, 1e-7);
    CHECK(rep.max_residual == doctest::Approx(resid.cwiseAbs().maxCoeff()));
    CHECK(rep.worst_row == (std::abs(resid[0]) >= std::abs(resid[1]) ? 0 : 1));
  }
}

TEST_CASE("random instances agree with basis enumeration") {
  std::mt19937_64 rng(20240501);
  int feasible = 0, infeasible = 0;
  for (int k = 0; k < 250; ++k) {
    const LpInstance lp = oracle::random_lp(rng);
    const auto want = oracle::brute_force_lp(lp);
    CAPTURE(k);
    const LpResult got = solve(lp);
    if (!want.feasible) {
      ++infeasible;
      CHECK(got.status == LpStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(got.status == LpStatus::Optimal);
    CHECK(objective_matches(got.objective_value, want.objective));
    CHECK(check_solution(lp, got.x, 1e-7).feasible);

    // Interior point on the same feasible instance.
    SolveOptions ipm;
    ipm.method = LpMethod::InteriorPoint;
    const LpResult alt = solve(lp, ipm);
    REQUIRE(alt.status == LpStatus::Optimal);
    CHECK(objective_matches(alt.objective_value, want.objective));
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 10);
}

TEST_CASE("duality and complementary slackness at the optimum") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 60; ++k) {
    const LpInstance lp = oracle::random_lp(rng);
    for (LpMethod m : {LpMethod::Simplex, LpMethod::InteriorPoint}) {
      SolveOptions o;
      o.method = m;
      const LpResult r = solve(lp, o);
      if (!r.optimal()) continue;
      const OptimalityReport rep = check_optimality(lp, r.x, r.duals);
      CAPTURE(k);
      CHECK(rep.dual_infeasibility <= 1e-6);
      CHECK(rep.complementarity <= 1e-6);
      CHECK(std::abs(rep.primal_objective - rep.dual_objective) <=
            1e-6 * std::max(1.0, std::abs(rep.primal_objective)));
    }
  }
}

TEST_CASE("scaling the objective scales the optimum") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 40; ++k) {
    LpInstance lp = oracle::random_lp(rng);
    const LpResult base = solve(lp);
    if (!base.optimal()) continue;
    for (double factor : {0.5, 3.0, 1000.0}) {
      LpInstance scaled = lp;
      scaled.objective *= factor;
      const LpResult r = solve(scaled);
      REQUIRE(r.optimal());
      CHECK(r.objective_value == doctest::Approx(factor * base.objective_value).epsilon(1e-9));
    }
  }
}

TEST_CASE("repeated solves are bit-identical") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const LpInstance lp = oracle::random_lp(rng);
    const LpResult a = solve(lp), b = solve(lp);
    CHECK(a.status == b.status);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.x == b.x);
  }
}

TEST_CASE("MPS-like dump keeps long names whole") {
  LpBuilder b;
  const auto x = b.add_variable(0, 1, 1, "charge_y1_s3_t40");
  const auto r1 = b.add_row(1, "bal_y1_s3_t40");
  const auto r2 = b.add_row(1, "bal_y1_s3_t41");
  b.add_coefficient(r1, x, 1);
  b.add_coefficient(r2, x, 1);
  std::ostringstream out;
  write_mps(out, b.build(), "LONG");
  const std::string text = out.str();
  CHECK(text.find(" E  bal_y1_s3_t40\n E  bal_y1_s3_t41\n") != std::string::npos);
  CHECK(text.find("    charge_y1_s3_t40  bal_y1_s3_t41     1\n") != std::string::npos);
  CHECK(text.find("    RHS               bal_y1_s3_t40     1\n") != std::string::npos);
}

TEST_CASE("MPS-like dump layout") {
  LpBuilder b;
  const auto x = b.add_variable(0, 4, 2, "x");
  const auto y = b.add_variable(1, 1, 0, "y");
  const auto z = b.add_variable(-kInf, kInf, -1, "z");
  const auto row = b.add_row(3, "bal");
  b.add_coefficient(row, x, 1);
  b.add_coefficient(row, y, 1);
  b.add_coefficient(row, z, -1);
  std::ostringstream out;
  write_mps(out, b.build(), "TINY");
  CHECK(out.str() ==
        "NAME          TINY\n"
        "ROWS\n"
        " N  COST\n"
        " E  bal\n"
        "COLUMNS\n"
        "    x         COST      2\n"
        "    x         bal       1\n"
        "    y         bal       1\n"
        "    z         COST      -1\n"
        "    z         bal       -1\n"
        "RHS\n"
        "    RHS       bal       3\n"
        "BOUNDS\n"
        " UP BND       x         4\n"
        " FX BND       y         1\n"
        " FR BND       z\n"
        "ENDATA\n");
}
