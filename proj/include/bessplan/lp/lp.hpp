#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace bessplan::lp {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x  s.t.  A x = b,  lower <= x <= upper.
struct LpInstance {
  Index n_vars = 0;
  Index n_rows = 0;
  Vector objective;
  std::vector<Triplet> triplets;  // duplicates are summed
  Vector rhs;
  Vector lower;
  Vector upper;
  std::vector<std::string> row_names;  // optional, empty or n_rows long
  std::vector<std::string> col_names;  // optional, empty or n_vars long

  /// Throws LpConstructionError when indices, sizes, or values are invalid.
  void validate() const;
  SparseMatrix matrix() const;
  std::string row_name(Index i) const;
  std::string col_name(Index j) const;
};

/// Incremental construction of an LpInstance.
class LpBuilder {
 public:
  Index add_variable(double lower, double upper, double cost, std::string name = {});
  Index add_row(double rhs, std::string name = {});
  void add_coefficient(Index row, Index col, double value);
  void set_cost(Index col, double cost) { cost_[col] = cost; }
  void add_cost(Index col, double cost) { cost_[col] += cost; }
  void set_bounds(Index col, double lower, double upper);
  void set_rhs(Index row, double rhs) { rhs_[row] = rhs; }

  Index n_vars() const { return static_cast<Index>(cost_.size()); }
  Index n_rows() const { return static_cast<Index>(rhs_.size()); }
  LpInstance build() const;

 private:
  std::vector<double> cost_, lower_, upper_, rhs_;
  std::vector<std::string> col_names_, row_names_;
  std::vector<Triplet> triplets_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus s);

enum class LpMethod { Auto, Simplex, InteriorPoint };

struct SolveOptions {
  double feas_tol = 1e-7;
  double pivot_tol = 1e-9;
  double dual_tol = 1e-6;
  /// 0 selects 50 * (n_vars + n_rows).
  std::int64_t iteration_limit = 0;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 1000;
  LpMethod method = LpMethod::Auto;
  /// Auto picks the simplex up to this many rows, the interior point beyond.
  Index auto_simplex_max_rows = 12000;
  bool presolve = true;
  /// Interior point: relative gap and residual targets.
  double ipm_tol = 1e-10;
  int ipm_max_iterations = 200;
};

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  Vector x;
  double objective_value = 0;
  Vector duals;           // one per row
  Vector reduced_costs;   // c - A'y
  std::int64_t iterations = 0;
  LpMethod method = LpMethod::Simplex;
  std::string message;
  /// Row with the largest residual when infeasibility was detected, else -1.
  Index infeasible_row = -1;

  bool optimal() const { return status == LpStatus::Optimal; }
};

LpResult solve(const LpInstance& lp, const SolveOptions& opts = {});

// Individual engines, on an already validated instance without presolve.
LpResult solve_simplex(const LpInstance& lp, const SolveOptions& opts);
LpResult solve_interior_point(const LpInstance& lp, const SolveOptions& opts);

/// Maps a presolved solution back onto the original variables and rows.
struct BackMap {
  std::vector<Index> col_to_reduced;  // -1 when the column was removed
  Vector fixed_value;                 // value of removed columns
  std::vector<Index> row_to_reduced;  // -1 when the row was removed
};

struct PresolveResult {
  LpInstance reduced;
  BackMap map;
  bool infeasible = false;
  Index infeasible_row = -1;
  std::string message;
};

/// Removes fixed columns and empty rows.
PresolveResult presolve(const LpInstance& lp);
/// Expands a reduced result; recomputes objective and reduced costs on `original`.
LpResult postsolve(const LpInstance& original, const BackMap& map, const LpResult& reduced);

struct SolutionReport {
  double max_residual = 0;  // |Ax - b|_inf
  Index worst_row = -1;
  double max_bound_violation = 0;
  Index worst_col = -1;
  double objective = 0;
  bool feasible = false;
};

SolutionReport check_solution(const LpInstance& lp, const Vector& x, double tol);

struct OptimalityReport {
  double dual_infeasibility = 0;  // wrong-signed reduced cost at an inactive bound
  double complementarity = 0;     // max |d_j| * distance to the bound it prices
  double primal_objective = 0;
  double dual_objective = 0;
};

OptimalityReport check_optimality(const LpInstance& lp, const Vector& x, const Vector& duals);

/// Fixed-width MPS-like dump; see docs/lp_dump_format.md.
void write_mps(std::ostream& out, const LpInstance& lp, const std::string& name = "BESSPLAN");

}  // namespace bessplan::lp
