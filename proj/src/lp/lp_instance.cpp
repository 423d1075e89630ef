#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bessplan/error.hpp"
#include "bessplan/lp/lp.hpp"

namespace bessplan::lp {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

void LpInstance::validate() const {
  auto fail = [](const std::string& m) { throw LpConstructionError("invalid LP: " + m); };
  if (n_vars < 0 || n_rows < 0) fail("negative dimensions");
  if (objective.size() != n_vars) fail("objective length differs from n_vars");
  if (lower.size() != n_vars || upper.size() != n_vars) fail("bounds length differs from n_vars");
  if (rhs.size() != n_rows) fail("rhs length differs from n_rows");
  if (!objective.allFinite()) fail("objective has NaN/Inf");
  if (!rhs.allFinite()) fail("rhs has NaN/Inf");
  for (Index j = 0; j < n_vars; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) fail("NaN bound on " + col_name(j));
    if (lower[j] > upper[j]) fail("lower > upper on " + col_name(j));
    if (lower[j] == kInf || upper[j] == -kInf) fail("empty bound range on " + col_name(j));
  }
  for (const Triplet& t : triplets) {
    if (t.row() < 0 || t.row() >= n_rows) fail("triplet row out of range");
    if (t.col() < 0 || t.col() >= n_vars) fail("triplet column out of range");
    if (!std::isfinite(t.value())) fail("matrix entry is NaN/Inf");
  }
  if (!row_names.empty() && static_cast<Index>(row_names.size()) != n_rows)
    fail("row_names length differs from n_rows");
  if (!col_names.empty() && static_cast<Index>(col_names.size()) != n_vars)
    fail("col_names length differs from n_vars");
}

SparseMatrix LpInstance::matrix() const {
  SparseMatrix a(n_rows, n_vars);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

std::string LpInstance::row_name(Index i) const {
  if (i >= 0 && i < static_cast<Index>(row_names.size()) && !row_names[i].empty())
    return row_names[i];
  return "R" + std::to_string(i);
}

std::string LpInstance::col_name(Index j) const {
  if (j >= 0 && j < static_cast<Index>(col_names.size()) && !col_names[j].empty())
    return col_names[j];
  return "C" + std::to_string(j);
}

Index LpBuilder::add_variable(double lower, double upper, double cost, std::string name) {
  lower_.push_back(lower);
  upper_.push_back(upper);
  cost_.push_back(cost);
  col_names_.push_back(std::move(name));
  return n_vars() - 1;
}

Index LpBuilder::add_row(double rhs, std::string name) {
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return n_rows() - 1;
}

void LpBuilder::add_coefficient(Index row, Index col, double value) {
  if (value != 0) triplets_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

void LpBuilder::set_bounds(Index col, double lower, double upper) {
  lower_[col] = lower;
  upper_[col] = upper;
}

LpInstance LpBuilder::build() const {
  LpInstance lp;
  lp.n_vars = n_vars();
  lp.n_rows = n_rows();
  lp.objective = Eigen::Map<const Vector>(cost_.data(), lp.n_vars);
  lp.lower = Eigen::Map<const Vector>(lower_.data(), lp.n_vars);
  lp.upper = Eigen::Map<const Vector>(upper_.data(), lp.n_vars);
  lp.rhs = Eigen::Map<const Vector>(rhs_.data(), lp.n_rows);
  lp.triplets = triplets_;
  lp.row_names = row_names_;
  lp.col_names = col_names_;
  lp.validate();
  return lp;
}

PresolveResult presolve(const LpInstance& lp) {
  PresolveResult out;
  BackMap& map = out.map;
  map.col_to_reduced.assign(lp.n_vars, -1);
  map.fixed_value = Vector::Zero(lp.n_vars);
  map.row_to_reduced.assign(lp.n_rows, -1);

  Index kept_cols = 0;
  for (Index j = 0; j < lp.n_vars; ++j) {
    if (lp.lower[j] == lp.upper[j])
      map.fixed_value[j] = lp.lower[j];
    else
      map.col_to_reduced[j] = kept_cols++;
  }

  Vector rhs = lp.rhs;
  std::vector<Index> live(lp.n_rows, 0);
  std::vector<double> row_scale(lp.n_rows, 0.0);
  for (const Triplet& t : lp.triplets) {
    if (map.col_to_reduced[t.col()] < 0) {
      rhs[t.row()] -= t.value() * map.fixed_value[t.col()];
    } else {
      ++live[t.row()];
    }
    row_scale[t.row()] = std::max(row_scale[t.row()], std::abs(t.value()));
  }

  Index kept_rows = 0;
  for (Index i = 0; i < lp.n_rows; ++i) {
    if (live[i] > 0) {
      map.row_to_reduced[i] = kept_rows++;
      continue;
    }
    // Empty row: must read 0 = rhs.
    const double tol = 1e-9 * std::max({1.0, std::abs(lp.rhs[i]), row_scale[i]});
    if (std::abs(rhs[i]) > tol && !out.infeasible) {
      out.infeasible = true;
      out.infeasible_row = i;
      std::ostringstream msg;
      msg << "row " << lp.row_name(i) << " has no free variables but needs " << rhs[i];
      out.message = msg.str();
    }
  }

  LpInstance& r = out.reduced;
  r.n_vars = kept_cols;
  r.n_rows = kept_rows;
  r.objective.resize(kept_cols);
  r.lower.resize(kept_cols);
  r.upper.resize(kept_cols);
  r.rhs.resize(kept_rows);
  const bool names = !lp.col_names.empty() || !lp.row_names.empty();
  if (names) {
    r.col_names.resize(kept_cols);
    r.row_names.resize(kept_rows);
  }
  for (Index j = 0; j < lp.n_vars; ++j) {
    const Index k = map.col_to_reduced[j];
    if (k < 0) continue;
    r.objective[k] = lp.objective[j];
    r.lower[k] = lp.lower[j];
    r.upper[k] = lp.upper[j];
    if (names) r.col_names[k] = lp.col_name(j);
  }
  for (Index i = 0; i < lp.n_rows; ++i) {
    const Index k = map.row_to_reduced[i];
    if (k < 0) continue;
    r.rhs[k] = rhs[i];
    if (names) r.row_names[k] = lp.row_name(i);
  }
  r.triplets.reserve(lp.triplets.size());
  for (const Triplet& t : lp.triplets) {
    const Index c = map.col_to_reduced[t.col()];
    const Index row = map.row_to_reduced[t.row()];
    if (c >= 0 && row >= 0)
      r.triplets.emplace_back(static_cast<int>(row), static_cast<int>(c), t.value());
  }
  return out;
}

LpResult postsolve(const LpInstance& original, const BackMap& map, const LpResult& reduced) {
  LpResult out = reduced;
  out.x = map.fixed_value;
  out.duals = Vector::Zero(original.n_rows);
  for (Index j = 0; j < original.n_vars; ++j)
    if (map.col_to_reduced[j] >= 0 && reduced.x.size() > 0) out.x[j] = reduced.x[map.col_to_reduced[j]];
  for (Index i = 0; i < original.n_rows; ++i)
    if (map.row_to_reduced[i] >= 0 && reduced.duals.size() > 0)
      out.duals[i] = reduced.duals[map.row_to_reduced[i]];
  if (reduced.infeasible_row >= 0) {
    for (Index i = 0; i < original.n_rows; ++i)
      if (map.row_to_reduced[i] == reduced.infeasible_row) out.infeasible_row = i;
  }
  const SparseMatrix a = original.matrix();
  out.reduced_costs = original.objective - a.transpose() * out.duals;
  out.objective_value = original.objective.dot(out.x);
  return out;
}

SolutionReport check_solution(const LpInstance& lp, const Vector& x, double tol) {
  SolutionReport rep;
  if (x.size() != lp.n_vars) return rep;
  Vector ax = Vector::Zero(lp.n_rows);
  for (const Triplet& t : lp.triplets) ax[t.row()] += t.value() * x[t.col()];
  for (Index i = 0; i < lp.n_rows; ++i) {
    const double r = std::abs(ax[i] - lp.rhs[i]);
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst_row = i;
    }
  }
  for (Index j = 0; j < lp.n_vars; ++j) {
    const double v = std::max({0.0, lp.lower[j] - x[j], x[j] - lp.upper[j]});
    if (v > rep.max_bound_violation) {
      rep.max_bound_violation = v;
      rep.worst_col = j;
    }
  }
  rep.objective = lp.objective.dot(x);
  rep.feasible = rep.max_residual <= tol && rep.max_bound_violation <= tol && x.allFinite();
  return rep;
}

OptimalityReport check_optimality(const LpInstance& lp, const Vector& x, const Vector& duals) {
  OptimalityReport rep;
  Vector aty = Vector::Zero(lp.n_vars);
  for (const Triplet& t : lp.triplets) aty[t.col()] += t.value() * duals[t.row()];
  const Vector d = lp.objective - aty;
  rep.primal_objective = lp.objective.dot(x);
  rep.dual_objective = lp.rhs.dot(duals);
  for (Index j = 0; j < lp.n_vars; ++j) {
    // A positive reduced cost is paid by the lower bound, a negative one by the upper.
    if (d[j] > 0) {
      if (std::isfinite(lp.lower[j])) {
        rep.dual_objective += d[j] * lp.lower[j];
        rep.complementarity = std::max(rep.complementarity, d[j] * std::abs(x[j] - lp.lower[j]));
      } else {
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, d[j]);
      }
    } else if (d[j] < 0) {
      if (std::isfinite(lp.upper[j])) {
        rep.dual_objective += d[j] * lp.upper[j];
        rep.complementarity = std::max(rep.complementarity, -d[j] * std::abs(lp.upper[j] - x[j]));
      } else {
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, -d[j]);
      }
    }
  }
  return rep;
}

namespace {

std::string mps_number(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}


}  // namespace

void write_mps(std::ostream& out, const LpInstance& lp, const std::string& name) {
  // Name fields are as wide as the longest name, at least 8, so long row
  // and column names never collide.
  std::size_t w = 8;
  for (Index i = 0; i < lp.n_rows; ++i) w = std::max(w, lp.row_name(i).size());
  for (Index j = 0; j < lp.n_vars; ++j) w = std::max(w, lp.col_name(j).size());
  const int width = static_cast<int>(w);
  auto field = [width](const std::string& s) {
    std::ostringstream o;
    o << std::left << std::setw(width) << s;
    return o.str();
  };
  out << "NAME          " << name << '\n';
  out << "ROWS\n";
  out << " N  " << "COST" << '\n';
  for (Index i = 0; i < lp.n_rows; ++i) out << " E  " << lp.row_name(i) << '\n';
  out << "COLUMNS\n";
  const SparseMatrix a = lp.matrix();
  for (Index j = 0; j < lp.n_vars; ++j) {
    const std::string col = field(lp.col_name(j));
    if (lp.objective[j] != 0)
      out << "    " << col << "  " << field("COST") << "  " << mps_number(lp.objective[j]) << '\n';
    for (SparseMatrix::InnerIterator it(a, j); it; ++it)
      out << "    " << col << "  " << field(lp.row_name(it.row())) << "  " << mps_number(it.value()) << '\n';
  }
  out << "RHS\n";
  for (Index i = 0; i < lp.n_rows; ++i)
    if (lp.rhs[i] != 0)
      out << "    " << field("RHS") << "  " << field(lp.row_name(i)) << "  " << mps_number(lp.rhs[i]) << '\n';
  out << "BOUNDS\n";
  for (Index j = 0; j < lp.n_vars; ++j) {
    const std::string bare = lp.col_name(j);
    const std::string col = field(bare);
    const double lo = lp.lower[j], up = lp.upper[j];
    if (lo == up) {
      out << " FX " << field("BND") << "  " << col << "  " << mps_number(lo) << '\n';
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << " FR " << field("BND") << "  " << bare << '\n';
      continue;
    }
    if (lo == -kInf)
      out << " MI " << field("BND") << "  " << bare << '\n';
    else if (lo != 0)
      out << " LO " << field("BND") << "  " << col << "  " << mps_number(lo) << '\n';
    if (up != kInf)
      out << " UP " << field("BND") << "  " << col << "  " << mps_number(up) << '\n';
  }
  out << "ENDATA\n";
}

LpResult solve(const LpInstance& lp, const SolveOptions& opts) {
  lp.validate();
  LpMethod method = opts.method;
  auto run = [&](const LpInstance& inst) {
    if (method == LpMethod::Auto)
      method = inst.n_rows <= opts.auto_simplex_max_rows ? LpMethod::Simplex
                                                         : LpMethod::InteriorPoint;
    return method == LpMethod::Simplex ? solve_simplex(inst, opts)
                                       : solve_interior_point(inst, opts);
  };
  if (!opts.presolve) {
    LpResult r = run(lp);
    r.method = method;
    return r;
  }
  PresolveResult pre = presolve(lp);
  if (pre.infeasible) {
    LpResult r;
    r.status = LpStatus::Infeasible;
    r.message = "presolve: " + pre.message;
    r.infeasible_row = pre.infeasible_row;
    r.x = pre.map.fixed_value;
    r.duals = Vector::Zero(lp.n_rows);
    return r;
  }
  LpResult reduced;
  if (pre.reduced.n_vars == 0) {
    reduced.status = LpStatus::Optimal;
    reduced.x = Vector::Zero(0);
    reduced.duals = Vector::Zero(pre.reduced.n_rows);
  } else {
    reduced = run(pre.reduced);
  }
  LpResult out = postsolve(lp, pre.map, reduced);
  out.method = method == LpMethod::Auto ? LpMethod::Simplex : method;
  return out;
}

}  // namespace bessplan::lp
