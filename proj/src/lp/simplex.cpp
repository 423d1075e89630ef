// Bounded-variable revised primal simplex.
//
// Two phases over [A | D] where D holds one signed artificial per row. The
// basis inverse is a sparse LU of B0 followed by a product-form eta file; it
// is rebuilt every kRefactorEvery updates.

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bessplan/lp/lp.hpp"

namespace bessplan::lp {

namespace {

constexpr int kRefactorEvery = 100;

enum class State : std::uint8_t { Basic, AtLower, AtUpper, FreeZero, Fixed };

class BasisFactor {
 public:
  bool refactor(const SparseMatrix& basis_matrix) {
    etas_.clear();
    lu_.analyzePattern(basis_matrix);
    lu_.factorize(basis_matrix);
    return lu_.info() == Eigen::Success;
  }

  void ftran(Vector& v) {
    v = lu_.solve(v).eval();
    for (const Eta& e : etas_) {
      const double xr = v[e.r] / e.pivot;
      if (xr != 0)
        for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * xr;
      v[e.r] = xr;
    }
  }

  void btran(Vector& v) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->r];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * v[it->idx[k]];
      v[it->r] = s / it->pivot;
    }
    v = lu_.transpose().solve(v).eval();
  }

  /// Records the pivot on row `r` with FTRAN'd entering column `alpha`.
  void push(Index r, const Vector& alpha) {
    Eta e;
    e.r = r;
    e.pivot = alpha[r];
    for (Index i = 0; i < alpha.size(); ++i)
      if (i != r && alpha[i] != 0) {
        e.idx.push_back(i);
        e.val.push_back(alpha[i]);
      }
    etas_.push_back(std::move(e));
  }

  int updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    Index r = 0;
    double pivot = 1;
    std::vector<Index> idx;
    std::vector<double> val;
  };
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

class Simplex {
 public:
  Simplex(const LpInstance& lp, const SolveOptions& opts) : lp_(lp), opts_(opts) {
    m_ = lp.n_rows;
    n_ = lp.n_vars;
    limit_ = opts.iteration_limit > 0 ? opts.iteration_limit : 50 * (n_ + m_);
    setup();
  }

  LpResult run() {
    LpResult res;
    res.method = LpMethod::Simplex;

    // Phase 1: drive the artificials to zero.
    Vector phase1 = Vector::Zero(n_ + m_);
    phase1.tail(m_).setOnes();
    LpStatus st = iterate(phase1);
    res.iterations = iterations_;
    if (st == LpStatus::IterationLimit || numerical_trouble_) {
      return finish(res, LpStatus::IterationLimit,
                    numerical_trouble_ ? "singular basis" : "iteration limit in phase 1");
    }
    double infeas = 0;
    Index worst = -1;
    double worst_val = 0;
    for (Index i = 0; i < m_; ++i) {
      const double v = std::abs(x_[n_ + i]);
      infeas += v;
      if (v > worst_val) {
        worst_val = v;
        worst = i;
      }
    }
    if (worst_val > opts_.feas_tol) {
      std::ostringstream msg;
      msg << "phase 1 ended with infeasibility " << infeas << "; largest on row "
          << lp_.row_name(worst);
      res.infeasible_row = worst;
      return finish(res, LpStatus::Infeasible, msg.str());
    }

    // Phase 2: artificials are pinned at zero.
    for (Index i = 0; i < m_; ++i) {
      const Index j = n_ + i;
      lo_[j] = up_[j] = 0;
      if (state_[j] != State::Basic) {
        state_[j] = State::Fixed;
        x_[j] = 0;
      }
    }
    Vector cost = Vector::Zero(n_ + m_);
    cost.head(n_) = lp_.objective;
    degenerate_run_ = 0;
    st = iterate(cost);
    res.iterations = iterations_;
    if (numerical_trouble_) return finish(res, LpStatus::IterationLimit, "singular basis");
    if (st != LpStatus::Optimal) return finish(res, st, st == LpStatus::Unbounded ? "unbounded ray" : "iteration limit in phase 2");

    // Final clean solve from a fresh factorization.
    refactor();
    Vector y = cost_of_basis(cost);
    factor_.btran(y);
    res.duals = y;
    return finish(res, LpStatus::Optimal, "optimal");
  }

 private:
  void setup() {
    a_ = lp_.matrix();
    const Index total = n_ + m_;
    lo_.resize(total);
    up_.resize(total);
    x_ = Vector::Zero(total);
    state_.assign(total, State::AtLower);
    for (Index j = 0; j < n_; ++j) {
      lo_[j] = lp_.lower[j];
      up_[j] = lp_.upper[j];
      if (lo_[j] == up_[j]) {
        x_[j] = lo_[j];
        state_[j] = State::Fixed;
      } else if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        state_[j] = State::AtLower;
      } else if (std::isfinite(up_[j])) {
        x_[j] = up_[j];
        state_[j] = State::AtUpper;
      } else {
        x_[j] = 0;
        state_[j] = State::FreeZero;
      }
    }
    const Vector r = lp_.rhs - a_ * x_.head(n_);
    sign_.resize(m_);
    basis_.resize(m_);
    for (Index i = 0; i < m_; ++i) {
      sign_[i] = r[i] >= 0 ? 1.0 : -1.0;
      const Index j = n_ + i;
      lo_[j] = 0;
      up_[j] = kInf;
      x_[j] = std::abs(r[i]);
      state_[j] = State::Basic;
      basis_[i] = j;
    }
    refactor();
  }

  // Column j of [A | D] added into `v` scaled by `s`.
  void axpy_column(Index j, double s, Vector& v) const {
    if (j < n_) {
      for (SparseMatrix::InnerIterator it(a_, j); it; ++it) v[it.row()] += s * it.value();
    } else {
      v[j - n_] += s * sign_[j - n_];
    }
  }

  double dot_column(Index j, const Vector& y) const {
    if (j >= n_) return sign_[j - n_] * y[j - n_];
    double s = 0;
    for (SparseMatrix::InnerIterator it(a_, j); it; ++it) s += it.value() * y[it.row()];
    return s;
  }

  Vector cost_of_basis(const Vector& cost) const {
    Vector cb(m_);
    for (Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    return cb;
  }

  void refactor() {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(m_) * 4);
    for (Index i = 0; i < m_; ++i) {
      const Index j = basis_[i];
      if (j < n_) {
        for (SparseMatrix::InnerIterator it(a_, j); it; ++it)
          t.emplace_back(static_cast<int>(it.row()), static_cast<int>(i), it.value());
      } else {
        t.emplace_back(static_cast<int>(j - n_), static_cast<int>(i), sign_[j - n_]);
      }
    }
    SparseMatrix b(m_, m_);
    b.setFromTriplets(t.begin(), t.end());
    b.makeCompressed();
    if (!factor_.refactor(b)) {
      numerical_trouble_ = true;
      return;
    }
    // Recompute basic values from the nonbasic ones.
    Vector rhs = lp_.rhs;
    for (Index j = 0; j < n_ + m_; ++j)
      if (state_[j] != State::Basic && x_[j] != 0) axpy_column(j, -x_[j], rhs);
    factor_.ftran(rhs);
    for (Index i = 0; i < m_; ++i) x_[basis_[i]] = rhs[i];
  }

  LpStatus iterate(const Vector& cost) {
    const double dtol = opts_.dual_tol;
    const double ptol = opts_.pivot_tol;
    const double ftol = opts_.feas_tol;
    Vector y(m_), alpha(m_);
    for (;;) {
      if (numerical_trouble_) return LpStatus::IterationLimit;
      if (factor_.updates() >= kRefactorEvery) refactor();
      if (iterations_ >= limit_) return LpStatus::IterationLimit;

      y = cost_of_basis(cost);
      factor_.btran(y);

      // Pricing.
      const bool bland = degenerate_run_ >= opts_.bland_after;
      Index q = -1;
      double best = 0;
      int dir = 0;
      for (Index j = 0; j < n_ + m_; ++j) {
        const State s = state_[j];
        if (s == State::Basic || s == State::Fixed) continue;
        const double d = cost[j] - dot_column(j, y);
        int jd = 0;
        if (d < -dtol && (s == State::AtLower || s == State::FreeZero)) jd = 1;
        if (d > dtol && (s == State::AtUpper || s == State::FreeZero)) jd = -1;
        if (jd == 0) continue;
        if (bland) {
          q = j;
          dir = jd;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = jd;
        }
      }
      if (q < 0) return LpStatus::Optimal;

      alpha.setZero();
      axpy_column(q, 1.0, alpha);
      factor_.ftran(alpha);

      // Harris two-pass ratio test. Basic i moves by -dir * alpha_i * t.
      double t_max = up_[q] - lo_[q];  // bound flip distance (may be inf)
      for (Index i = 0; i < m_; ++i) {
        const double a = alpha[i];
        if (std::abs(a) <= ptol) continue;
        const Index j = basis_[i];
        const double delta = -dir * a;
        if (delta < 0 && std::isfinite(lo_[j]))
          t_max = std::min(t_max, (x_[j] - lo_[j] + ftol) / -delta);
        else if (delta > 0 && std::isfinite(up_[j]))
          t_max = std::min(t_max, (up_[j] - x_[j] + ftol) / delta);
      }
      if (!std::isfinite(t_max)) return LpStatus::Unbounded;

      Index r = -1;
      double t = 0, best_pivot = 0;
      for (Index i = 0; i < m_; ++i) {
        const double a = alpha[i];
        if (std::abs(a) <= ptol) continue;
        const Index j = basis_[i];
        const double delta = -dir * a;
        double ti;
        if (delta < 0 && std::isfinite(lo_[j]))
          ti = (x_[j] - lo_[j]) / -delta;
        else if (delta > 0 && std::isfinite(up_[j]))
          ti = (up_[j] - x_[j]) / delta;
        else
          continue;
        if (ti <= t_max && std::abs(a) > best_pivot) {
          best_pivot = std::abs(a);
          r = i;
          t = std::max(ti, 0.0);
        }
      }
      const double flip = up_[q] - lo_[q];
      const bool bound_flip = r < 0 || (std::isfinite(flip) && flip <= t);
      if (bound_flip) t = flip;

      // Step.
      x_[q] += dir * t;
      for (Index i = 0; i < m_; ++i)
        if (alpha[i] != 0) x_[basis_[i]] -= dir * t * alpha[i];

      if (bound_flip) {
        state_[q] = dir > 0 ? State::AtUpper : State::AtLower;
        x_[q] = dir > 0 ? up_[q] : lo_[q];
      } else {
        const Index leave = basis_[r];
        const double delta = -dir * alpha[r];
        if (delta < 0) {
          x_[leave] = lo_[leave];
          state_[leave] = lo_[leave] == up_[leave] && leave >= n_ ? State::Fixed : State::AtLower;
        } else {
          x_[leave] = up_[leave];
          state_[leave] = lo_[leave] == up_[leave] && leave >= n_ ? State::Fixed : State::AtUpper;
        }
        basis_[r] = q;
        state_[q] = State::Basic;
        factor_.push(r, alpha);
      }
      degenerate_run_ = t <= 1e-12 ? degenerate_run_ + 1 : 0;
      ++iterations_;
    }
  }

  LpResult& finish(LpResult& res, LpStatus st, std::string msg) {
    res.status = st;
    res.message = std::move(msg);
    res.x = x_.head(n_);
    // Snap tiny bound violations left by the Harris tolerance.
    for (Index j = 0; j < n_; ++j) res.x[j] = std::clamp(res.x[j], lp_.lower[j], lp_.upper[j]);
    if (res.duals.size() != m_) res.duals = Vector::Zero(m_);
    res.reduced_costs = lp_.objective - a_.transpose() * res.duals;
    res.objective_value = lp_.objective.dot(res.x);
    return res;
  }

  const LpInstance& lp_;
  const SolveOptions& opts_;
  Index m_ = 0, n_ = 0;
  std::int64_t limit_ = 0;
  std::int64_t iterations_ = 0;
  int degenerate_run_ = 0;
  bool numerical_trouble_ = false;

  SparseMatrix a_;
  Vector lo_, up_, x_, sign_;
  std::vector<State> state_;
  std::vector<Index> basis_;
  BasisFactor factor_;
};

}  // namespace

LpResult solve_simplex(const LpInstance& lp, const SolveOptions& opts) {
  lp.validate();
  if (lp.n_rows == 0) {
    // Every variable sits at its cheapest bound.
    LpResult res;
    res.method = LpMethod::Simplex;
    res.x = Vector::Zero(lp.n_vars);
    res.duals = Vector::Zero(0);
    for (Index j = 0; j < lp.n_vars; ++j) {
      const double c = lp.objective[j];
      const double target = c > 0 ? lp.lower[j] : c < 0 ? lp.upper[j]
                                                        : (std::isfinite(lp.lower[j]) ? lp.lower[j]
                                                           : std::isfinite(lp.upper[j]) ? lp.upper[j] : 0.0);
      if (!std::isfinite(target)) {
        res.status = LpStatus::Unbounded;
        res.message = "unbounded column " + lp.col_name(j);
        return res;
      }
      res.x[j] = target;
    }
    res.status = LpStatus::Optimal;
    res.reduced_costs = lp.objective;
    res.objective_value = lp.objective.dot(res.x);
    res.message = "optimal";
    return res;
  }
  return Simplex(lp, opts).run();
}

}  // namespace bessplan::lp
