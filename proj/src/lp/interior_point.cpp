// Primal-dual interior point (Mehrotra predictor-corrector) for
//   min c'x  s.t.  Ax = b,  l <= x <= u
// using sparse normal equations A D A' dy = r factored by SimplicialLDLT.

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bessplan/lp/lp.hpp"

namespace bessplan::lp {

namespace {

using Array = Eigen::ArrayXd;

struct Scaling {
  Vector row;  // A_s = diag(row) A diag(col)
  Vector col;
  double cost = 1;
};

Scaling equilibrate(const SparseMatrix& a, const Vector& c) {
  Scaling s;
  s.row = Vector::Ones(a.rows());
  s.col = Vector::Ones(a.cols());
  for (int pass = 0; pass < 10; ++pass) {
    Vector rmax = Vector::Zero(a.rows()), cmax = Vector::Zero(a.cols());
    for (Index j = 0; j < a.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
        const double v = std::abs(it.value() * s.row[it.row()] * s.col[j]);
        rmax[it.row()] = std::max(rmax[it.row()], v);
        cmax[j] = std::max(cmax[j], v);
      }
    for (Index i = 0; i < a.rows(); ++i)
      if (rmax[i] > 0) s.row[i] /= std::sqrt(rmax[i]);
    for (Index j = 0; j < a.cols(); ++j)
      if (cmax[j] > 0) s.col[j] /= std::sqrt(cmax[j]);
  }
  const double cmax = (s.col.cwiseProduct(c)).lpNorm<Eigen::Infinity>();
  s.cost = cmax > 1 ? cmax : 1.0;
  return s;
}

// Largest step in [0, 1] keeping v + step * dv >= 0 on the masked entries.
double max_step(const Array& v, const Array& dv, const Array& mask) {
  double step = 1.0;
  for (Index i = 0; i < v.size(); ++i)
    if (mask[i] > 0 && dv[i] < 0) step = std::min(step, -v[i] / dv[i]);
  return step;
}

}  // namespace

LpResult solve_interior_point(const LpInstance& lp, const SolveOptions& opts) {
  lp.validate();
  LpResult res;
  res.method = LpMethod::InteriorPoint;
  const Index m = lp.n_rows, n = lp.n_vars;

  const SparseMatrix a0 = lp.matrix();
  const Scaling sc = equilibrate(a0, lp.objective);
  const SparseMatrix a = sc.row.asDiagonal() * a0 * sc.col.asDiagonal();
  const SparseMatrix at = a.transpose();
  const Vector b = sc.row.cwiseProduct(lp.rhs);
  const Vector c = sc.col.cwiseProduct(lp.objective) / sc.cost;
  Array lo(n), up(n), has_l(n), has_u(n);
  for (Index j = 0; j < n; ++j) {
    lo[j] = lp.lower[j] / sc.col[j];
    up[j] = lp.upper[j] / sc.col[j];
    has_l[j] = std::isfinite(lo[j]) ? 1.0 : 0.0;
    has_u[j] = std::isfinite(up[j]) ? 1.0 : 0.0;
  }
  const double n_compl = std::max(1.0, has_l.sum() + has_u.sum());

  Array x(n), sl = Array::Zero(n), su = Array::Zero(n), zl = Array::Zero(n), zu = Array::Zero(n);
  Vector y(m);

  const double bnorm = 1.0 + b.lpNorm<Eigen::Infinity>();
  const double cnorm = 1.0 + c.lpNorm<Eigen::Infinity>();
  const double reg_primal = 1e-10;
  double reg_dual = 1e-12;

  SparseMatrix ident(m, m);
  ident.setIdentity();
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  bool analyzed = false;

  Array dinv(n), dvec(n);
  SparseMatrix normal;
  auto factor = [&]() -> bool {
    for (int attempt = 0; attempt < 6; ++attempt) {
      const SparseMatrix adat = a * dvec.matrix().asDiagonal() * at;
      // Relative to the diagonal so dependent rows stay well posed as D grows.
      double scale = 1.0;
      for (Index j = 0; j < n; ++j) scale = std::max(scale, dvec[j]);
      normal = adat + (reg_dual * scale) * ident;
      if (!analyzed) {
        ldlt.analyzePattern(normal);
        analyzed = true;
      }
      ldlt.factorize(normal);
      if (ldlt.info() == Eigen::Success) return true;
      reg_dual = std::max(reg_dual * 100, 1e-10);
    }
    return false;
  };
  auto solve_normal = [&](const Vector& rhs) {
    Vector dy = ldlt.solve(rhs);
    for (int k = 0; k < 2; ++k) dy += ldlt.solve(rhs - normal * dy);
    return dy;
  };

  // Starting point: least-norm primal and least-squares dual, shifted into
  // the interior of the bounds.
  {
    dvec = Array::Ones(n);
    if (!factor()) {
      res.status = LpStatus::IterationLimit;
      res.message = "normal equations could not be factored";
      return res;
    }
    const Vector xt = at * solve_normal(b);
    y = solve_normal(a * c);
    const Array zt = (c - at * y).array();
    double smin = kInf, zmin = kInf;
    for (Index j = 0; j < n; ++j) {
      if (has_l[j]) smin = std::min(smin, xt[j] - lo[j]);
      if (has_u[j]) smin = std::min(smin, up[j] - xt[j]);
      if (has_l[j]) zmin = std::min(zmin, zt[j]);
      if (has_u[j]) zmin = std::min(zmin, -zt[j]);
    }
    double dp = std::max(-1.5 * smin, 0.0), dd = std::max(-1.5 * zmin, 0.0);
    // Raw slacks and duals after the uniform shift, before recentring.
    double sz = 0, ssum = 0, zsum = 0;
    for (Index j = 0; j < n; ++j) {
      if (has_l[j]) {
        const double s_ = xt[j] - lo[j] + dp, z_ = std::max(zt[j], 0.0) + dd;
        sz += s_ * z_, ssum += s_, zsum += z_;
      }
      if (has_u[j]) {
        const double s_ = up[j] - xt[j] + dp, z_ = std::max(-zt[j], 0.0) + dd;
        sz += s_ * z_, ssum += s_, zsum += z_;
      }
    }
    if (zsum > 0) dp += 0.5 * sz / zsum;
    if (ssum > 0) dd += 0.5 * sz / ssum;
    dp = std::max(dp, 1e-2);
    dd = std::max(dd, 1e-2);
    for (Index j = 0; j < n; ++j) {
      if (has_l[j] && has_u[j]) {
        const double margin = std::min(dp, 0.5 * (up[j] - lo[j]));
        x[j] = std::clamp(xt[j], lo[j] + margin, up[j] - margin);
      } else if (has_l[j]) {
        x[j] = std::max(xt[j], lo[j]) + dp;
      } else if (has_u[j]) {
        x[j] = std::min(xt[j], up[j]) - dp;
      } else {
        x[j] = xt[j];
      }
      if (has_l[j]) {
        sl[j] = x[j] - lo[j];
        zl[j] = std::max(zt[j], 0.0) + dd;
      }
      if (has_u[j]) {
        su[j] = up[j] - x[j];
        zu[j] = std::max(-zt[j], 0.0) + dd;
      }
    }
  }

  Array dx(n), dzl(n), dzu(n), dsl(n), dsu(n);
  Vector dy(m);
  // Solves the Newton system for the given complementarity right-hand sides.
  auto newton = [&](const Vector& rb, const Array& rc, const Array& rl, const Array& ru) {
    Array rho = rc;
    for (Index j = 0; j < n; ++j) {
      if (has_l[j]) rho[j] -= rl[j] / sl[j];
      if (has_u[j]) rho[j] += ru[j] / su[j];
    }
    const Vector rhs = rb + a * (dvec * rho).matrix();
    dy = solve_normal(rhs);
    dx = dvec * ((at * dy).array() - rho);
    for (Index j = 0; j < n; ++j) {
      dsl[j] = has_l[j] ? dx[j] : 0.0;
      dsu[j] = has_u[j] ? -dx[j] : 0.0;
      dzl[j] = has_l[j] ? (rl[j] - zl[j] * dx[j]) / sl[j] : 0.0;
      dzu[j] = has_u[j] ? (ru[j] + zu[j] * dx[j]) / su[j] : 0.0;
    }
  };

  const int max_iter = opts.ipm_max_iterations;
  const double tol = opts.ipm_tol;
  int stall = 0;
  LpStatus status = LpStatus::IterationLimit;
  std::string message = "iteration limit";
  struct Best {
    double merit = kInf, pres = kInf, dres = kInf, gap = kInf;
    Array x;
    Vector y;
  } best;
  double progress_mark = kInf;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Vector rb = b - a * x.matrix();
    const Array rc = (c - at * y).array() - zl + zu;
    const double mu = ((sl * zl).sum() + (su * zu).sum()) / n_compl;
    const double pres = rb.lpNorm<Eigen::Infinity>() / bnorm;
    const double dres = rc.matrix().lpNorm<Eigen::Infinity>() / cnorm;
    const double pobj = c.dot(x.matrix());
    double dobj = b.dot(y);
    for (Index j = 0; j < n; ++j) {
      if (has_l[j]) dobj += lo[j] * zl[j];
      if (has_u[j]) dobj -= up[j] * zu[j];
    }
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    if (pres <= tol && dres <= tol && gap <= tol) {
      status = LpStatus::Optimal;
      message = "optimal";
      break;
    }
    const double merit = std::max({pres, dres, gap});
    if (merit < best.merit) {
      best = {merit, pres, dres, gap, x, y};
    }
    // Progress is judged on residuals and complementarity; the duality gap
    // itself oscillates while the iterate is still primal infeasible.
    const double progress = std::max({pres, dres, mu * n_compl / (1.0 + std::abs(pobj))});
    if (progress < progress_mark * 0.99) {
      progress_mark = progress;
      stall = 0;
    } else if (++stall >= 20) {
      // Accept a slightly looser optimum rather than spin.
      if (best.merit <= 1e3 * tol) {
        x = best.x;
        y = best.y;
        status = LpStatus::Optimal;
        message = "optimal (relaxed tolerance)";
      } else if (best.pres > 1e-6) {
        status = LpStatus::Infeasible;
        message = "primal residual stalled";
      } else if (best.dres > 1e-6) {
        status = LpStatus::Unbounded;
        message = "dual residual stalled";
      } else {
        message = "no progress";
      }
      break;
    }
    const double xnorm = x.abs().maxCoeff();
    const double ynorm = std::max(y.lpNorm<Eigen::Infinity>(),
                                  std::max(zl.abs().maxCoeff(), zu.abs().maxCoeff()));
    if (ynorm > 1e13 && pres > 1e-6) {
      status = LpStatus::Infeasible;
      message = "dual ray detected";
      break;
    }
    if (xnorm > 1e13 && dres > 1e-6) {
      status = LpStatus::Unbounded;
      message = "primal ray detected";
      break;
    }

    for (Index j = 0; j < n; ++j) {
      double d = reg_primal;
      if (has_l[j]) d += zl[j] / sl[j];
      if (has_u[j]) d += zu[j] / su[j];
      dinv[j] = d;
    }
    dvec = dinv.inverse();
    if (!factor()) {
      message = "normal equations could not be factored";
      break;
    }

    // Predictor.
    newton(rb, rc, -sl * zl, -su * zu);
    const double ap_aff = std::min(max_step(sl, dsl, has_l), max_step(su, dsu, has_u));
    const double ad_aff = std::min(max_step(zl, dzl, has_l), max_step(zu, dzu, has_u));
    const double mu_aff = (((sl + ap_aff * dsl) * (zl + ad_aff * dzl)).sum() +
                           ((su + ap_aff * dsu) * (zu + ad_aff * dzu)).sum()) /
                          n_compl;
    const double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3);

    // Corrector.
    const Array rl = (sigma * mu - sl * zl - dsl * dzl) * has_l;
    const Array ru = (sigma * mu - su * zu - dsu * dzu) * has_u;
    newton(rb, rc, rl, ru);
    const double eta = 0.95;
    const double ap = std::min(1.0, eta * std::min(max_step(sl, dsl, has_l), max_step(su, dsu, has_u)));
    const double ad = std::min(1.0, eta * std::min(max_step(zl, dzl, has_l), max_step(zu, dzu, has_u)));

    x += ap * dx;
    sl += ap * dsl;
    su += ap * dsu;
    y += ad * dy;
    zl += ad * dzl;
    zu += ad * dzu;
    for (Index j = 0; j < n; ++j) {
      if (has_l[j]) sl[j] = std::max(sl[j], 1e-300);
      if (has_u[j]) su[j] = std::max(su[j], 1e-300);
    }
  }

  res.status = status;
  res.message = message;
  res.iterations = iter;
  res.x = (x * sc.col.array()).matrix();
  for (Index j = 0; j < n; ++j) res.x[j] = std::clamp(res.x[j], lp.lower[j], lp.upper[j]);
  res.duals = sc.row.cwiseProduct(y) * sc.cost;
  res.reduced_costs = lp.objective - a0.transpose() * res.duals;
  res.objective_value = lp.objective.dot(res.x);
  if (status == LpStatus::Infeasible) {
    const Vector r = lp.rhs - a0 * res.x;
    Index worst = 0;
    r.cwiseAbs().maxCoeff(&worst);
    res.infeasible_row = m > 0 ? worst : -1;
  }
  return res;
}

}  // namespace bessplan::lp
