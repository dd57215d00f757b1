#include "gridpart/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "gridpart/lu.hpp"

namespace gridpart {

namespace {
constexpr double kPivTol = 1e-9;       // minimum |pivot| in the ratio test
constexpr long kBlandTrigger = 400;    // degenerate pivots before Bland
constexpr long kRefactorEvery = 120;
}  // namespace

SimplexSolver::SimplexSolver(const MilpModel& model) {
  n_ = model.num_vars();
  m_ = model.num_constraints();
  ncols_ = n_ + m_;

  // CSC of the structural columns.
  std::vector<int> count(n_, 0);
  for (const auto& c : model.constraints())
    for (const auto& t : c.terms) ++count[t.var.value];
  aptr_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) aptr_[j + 1] = aptr_[j] + count[j];
  aidx_.assign(aptr_[n_], 0);
  aval_.assign(aptr_[n_], 0.0);
  std::vector<int> fill = aptr_;
  rhs_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const auto& c = model.constraints()[i];
    rhs_[i] = c.rhs;
    for (const auto& t : c.terms) {
      aidx_[fill[t.var.value]] = i;
      aval_[fill[t.var.value]] = t.coef;
      ++fill[t.var.value];
    }
  }

  model_lo_.resize(ncols_);
  model_hi_.resize(ncols_);
  for (int j = 0; j < n_; ++j) {
    model_lo_[j] = model.variables()[j].lower;
    model_hi_[j] = model.variables()[j].upper;
  }
  // Logical column bounds encode the row sense: Ax + s = b.
  for (int i = 0; i < m_; ++i) {
    switch (model.constraints()[i].sense) {
      case Sense::LessEqual:
        model_lo_[n_ + i] = 0.0;
        model_hi_[n_ + i] = kInf;
        break;
      case Sense::GreaterEqual:
        model_lo_[n_ + i] = -kInf;
        model_hi_[n_ + i] = 0.0;
        break;
      case Sense::Equal:
        model_lo_[n_ + i] = 0.0;
        model_hi_[n_ + i] = 0.0;
        break;
    }
  }
  obj_.assign(n_, 0.0);
  for (const auto& t : model.objective()) obj_[t.var.value] = t.coef;

  lo_ = model_lo_;
  hi_ = model_hi_;
  lu_ = new BasisLu();
  reset_basis();
}

SimplexSolver::~SimplexSolver() { delete static_cast<BasisLu*>(lu_); }

void SimplexSolver::set_bound(int var, double lo, double hi) {
  lo_[var] = lo;
  hi_[var] = hi;
}

void SimplexSolver::reset_bounds() {
  std::copy(model_lo_.begin(), model_lo_.begin() + n_, lo_.begin());
  std::copy(model_hi_.begin(), model_hi_.begin() + n_, hi_.begin());
}

void SimplexSolver::reset_basis() {
  basis_.resize(m_);
  pos_of_.assign(ncols_, -1);
  status_.assign(ncols_, AtLower);
  x_.assign(ncols_, 0.0);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    pos_of_[n_ + i] = i;
    status_[n_ + i] = Basic;
  }
  lu_valid_ = false;
}

void SimplexSolver::gather_column(int col, std::vector<double>& dense,
                                  std::vector<int>& idx) const {
  if (col >= n_) {
    dense[col - n_] += 1.0;
    idx.push_back(col - n_);
    return;
  }
  for (int k = aptr_[col]; k < aptr_[col + 1]; ++k) {
    dense[aidx_[k]] += aval_[k];
    idx.push_back(aidx_[k]);
  }
}

bool SimplexSolver::refactorize() {
  auto* lu = static_cast<BasisLu*>(lu_);
  std::vector<BasisLu::SparseCol> cols(m_);
  for (int p = 0; p < m_; ++p) {
    const int col = basis_[p];
    if (col >= n_) {
      cols[p] = {{col - n_, 1.0}};
    } else {
      for (int k = aptr_[col]; k < aptr_[col + 1]; ++k)
        cols[p].push_back({aidx_[k], aval_[k]});
    }
  }
  etas_.clear();
  pivots_since_factor_ = 0;
  lu_valid_ = lu->factorize(m_, cols);
  return lu_valid_;
}

void SimplexSolver::ftran(std::vector<double>& v) const {
  static_cast<const BasisLu*>(lu_)->ftran(v);
  for (const auto& e : etas_) {
    const double t = v[e.pos] / e.pivot;
    if (t != 0.0)
      for (const auto& [i, w] : e.rest) v[i] -= w * t;
    v[e.pos] = t;
  }
}

void SimplexSolver::btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[it->pos];
    for (const auto& [i, w] : it->rest) acc -= w * v[i];
    v[it->pos] = acc / it->pivot;
  }
  static_cast<const BasisLu*>(lu_)->btran(v);
}

void SimplexSolver::compute_basic_values() {
  // x_B = B^{-1} (rhs - sum over nonbasic columns of a_j x_j)
  std::vector<double> r = rhs_;
  for (int j = 0; j < ncols_; ++j) {
    if (status_[j] == Basic || x_[j] == 0.0) continue;
    if (j >= n_) {
      r[j - n_] -= x_[j];
    } else {
      for (int k = aptr_[j]; k < aptr_[j + 1]; ++k)
        r[aidx_[k]] -= aval_[k] * x_[j];
    }
  }
  ftran(r);
  for (int p = 0; p < m_; ++p) x_[basis_[p]] = r[p];
}

double SimplexSolver::infeasibility() const {
  // Worst bound violation among basic variables.
  double s = 0.0;
  for (int p = 0; p < m_; ++p) {
    const int j = basis_[p];
    s = std::max(s, lo_[j] - x_[j]);
    s = std::max(s, x_[j] - hi_[j]);
  }
  return s;
}

double SimplexSolver::residual_norm() {
  // || A x - rhs ||_inf over rows, with x as currently stored.
  std::vector<double> r = rhs_;
  for (int j = 0; j < ncols_; ++j) {
    if (x_[j] == 0.0) continue;
    if (j >= n_) {
      r[j - n_] -= x_[j];
    } else {
      for (int k = aptr_[j]; k < aptr_[j + 1]; ++k)
        r[aidx_[k]] -= aval_[k] * x_[j];
    }
  }
  double nrm = 0.0;
  for (double v : r) nrm = std::max(nrm, std::fabs(v));
  return nrm;
}

LpResult SimplexSolver::solve(const LpOptions& opt, bool warm) {
  if (!warm) reset_basis();

  // Re-anchor nonbasic variables to bounds that may have moved.
  for (int j = 0; j < ncols_; ++j) {
    switch (status_[j]) {
      case Basic:
        break;
      case AtLower:
        if (lo_[j] == -kInf) {
          if (hi_[j] == kInf) {
            status_[j] = FreeNb;
            x_[j] = 0.0;
          } else {
            status_[j] = AtUpper;
            x_[j] = hi_[j];
          }
        } else {
          x_[j] = lo_[j];
        }
        break;
      case AtUpper:
        if (hi_[j] == kInf) {
          if (lo_[j] == -kInf) {
            status_[j] = FreeNb;
            x_[j] = 0.0;
          } else {
            status_[j] = AtLower;
            x_[j] = lo_[j];
          }
        } else {
          x_[j] = hi_[j];
        }
        break;
      case FreeNb:
        if (lo_[j] != -kInf) {
          status_[j] = AtLower;
          x_[j] = lo_[j];
        } else if (hi_[j] != kInf) {
          status_[j] = AtUpper;
          x_[j] = hi_[j];
        } else {
          x_[j] = 0.0;
        }
        break;
    }
  }

  if (!lu_valid_ && !refactorize()) {
    reset_basis();
    refactorize();  // identity basis always factorizes
  }
  compute_basic_values();
  return run(opt);
}

struct SimplexSolver::IterState {
  bool phase1 = false;
  bool bland = false;
  long degenerate_run = 0;
};

LpResult SimplexSolver::run(const LpOptions& opt) {
  LpResult res;
  const long max_iters =
      opt.max_iters > 0 ? opt.max_iters : 2000 + 60L * (m_ + n_);
  const double ftol = opt.feas_tol;

  IterState st;
  std::vector<double> y(m_), col(m_);
  std::vector<int> colidx;
  long iter = 0;

  auto phase1_costs = [&](std::vector<double>& cb) {
    cb.assign(m_, 0.0);
    for (int p = 0; p < m_; ++p) {
      const int j = basis_[p];
      if (x_[j] < lo_[j] - ftol) cb[p] = -1.0;
      else if (x_[j] > hi_[j] + ftol) cb[p] = 1.0;
    }
  };

  st.phase1 = infeasibility() > ftol;

  while (true) {
    if (++iter > max_iters) {
      res.status = LpStatus::IterLimit;
      res.message = "iteration limit";
      break;
    }
    if (pivots_since_factor_ >= kRefactorEvery) {
      if (!refactorize()) {
        res.status = LpStatus::Numerical;
        res.message = "basis became singular";
        break;
      }
      compute_basic_values();
      if (st.phase1 && infeasibility() <= ftol) st.phase1 = false;
    }

    // Reduced costs via duals y = B^{-T} c_B.
    std::vector<double> cb(m_);
    bool any_infeasible = false;
    if (st.phase1) {
      phase1_costs(cb);
      for (double v : cb) any_infeasible = any_infeasible || v != 0.0;
      if (!any_infeasible) st.phase1 = false;
    }
    if (!st.phase1)
      for (int p = 0; p < m_; ++p)
        cb[p] = basis_[p] < n_ ? obj_[basis_[p]] : 0.0;
    y = cb;
    btran(y);

    // Pricing: Dantzig, or Bland when degeneracy persists.
    int enter = -1;
    double best = st.bland ? 0.0 : opt.opt_tol;
    int enter_dir = 0;
    for (int j = 0; j < ncols_; ++j) {
      const Status sj = status_[j];
      if (sj == Basic || lo_[j] == hi_[j]) continue;
      double d;
      if (j >= n_) {
        d = -y[j - n_];
      } else {
        d = st.phase1 ? 0.0 : obj_[j];
        for (int k = aptr_[j]; k < aptr_[j + 1]; ++k)
          d -= y[aidx_[k]] * aval_[k];
      }
      int dir = 0;
      if ((sj == AtLower || sj == FreeNb) && d < -opt.opt_tol) dir = 1;
      else if ((sj == AtUpper || sj == FreeNb) && d > opt.opt_tol) dir = -1;
      if (dir == 0) continue;
      if (st.bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (std::fabs(d) > best) {
        best = std::fabs(d);
        enter = j;
        enter_dir = dir;
      }
    }

    if (enter < 0) {
      if (st.phase1) {
        res.status = LpStatus::Infeasible;
        res.message = "phase 1 optimum positive";
      } else {
        res.status = LpStatus::Optimal;
      }
      break;
    }

    // Direction through the basis.
    std::fill(col.begin(), col.end(), 0.0);
    colidx.clear();
    gather_column(enter, col, colidx);
    ftran(col);

    // Ratio test. Entering moves by t*dir; basic p moves by -dir*col[p].
    double t_max = hi_[enter] - lo_[enter];  // bound flip distance
    int leave_pos = -1;
    bool leave_to_upper = false;
    for (int p = 0; p < m_; ++p) {
      const double w = col[p];
      if (std::fabs(w) < kPivTol) continue;
      const int j = basis_[p];
      const double delta = -enter_dir * w;  // d x_j / d t
      double limit = kInf;
      bool to_upper = false;
      if (st.phase1) {
        const bool below = x_[j] < lo_[j] - ftol;
        const bool above = x_[j] > hi_[j] + ftol;
        if (below) {
          if (delta > 0) {  // rising toward feasibility, block at lower
            limit = (lo_[j] - x_[j]) / delta;
            to_upper = false;
          }
        } else if (above) {
          if (delta < 0) {
            limit = (hi_[j] - x_[j]) / delta;
            to_upper = true;
          }
        } else {
          if (delta > 0 && hi_[j] != kInf) {
            limit = (hi_[j] - x_[j]) / delta;
            to_upper = true;
          } else if (delta < 0 && lo_[j] != -kInf) {
            limit = (lo_[j] - x_[j]) / delta;
            to_upper = false;
          }
        }
      } else {
        if (delta > 0 && hi_[j] != kInf) {
          limit = (hi_[j] - x_[j]) / delta;
          to_upper = true;
        } else if (delta < 0 && lo_[j] != -kInf) {
          limit = (lo_[j] - x_[j]) / delta;
          to_upper = false;
        }
      }
      if (limit < 0) limit = 0;
      if (limit < t_max - 1e-12 ||
          (limit < t_max + 1e-12 && leave_pos >= 0 &&
           std::fabs(w) > std::fabs(col[leave_pos]))) {
        t_max = limit;
        leave_pos = p;
        leave_to_upper = to_upper;
      }
    }

    if (t_max == kInf) {
      if (st.phase1) {
        res.status = LpStatus::Numerical;
        res.message = "unbounded phase-1 direction";
      } else {
        res.status = LpStatus::Unbounded;
      }
      break;
    }

    if (t_max <= 1e-12) {
      if (++st.degenerate_run > kBlandTrigger) st.bland = true;
    } else {
      st.degenerate_run = 0;
      st.bland = false;
    }

    // Apply the step.
    const double step = enter_dir * t_max;
    if (step != 0.0) {
      x_[enter] += step;
      for (int p = 0; p < m_; ++p)
        if (col[p] != 0.0) x_[basis_[p]] -= step * col[p];
    }

    if (leave_pos < 0) {
      // Bound flip: entering runs to its opposite bound.
      status_[enter] = enter_dir > 0 ? AtUpper : AtLower;
      x_[enter] = enter_dir > 0 ? hi_[enter] : lo_[enter];
    } else {
      const int out = basis_[leave_pos];
      x_[out] = leave_to_upper ? hi_[out] : lo_[out];
      status_[out] = leave_to_upper ? AtUpper : AtLower;
      if (hi_[out] == kInf && lo_[out] == -kInf) status_[out] = FreeNb;
      status_[enter] = Basic;
      basis_[leave_pos] = enter;
      pos_of_[enter] = leave_pos;
      pos_of_[out] = -1;

      Eta eta;
      eta.pos = leave_pos;
      eta.pivot = col[leave_pos];
      for (int p = 0; p < m_; ++p)
        if (p != leave_pos && col[p] != 0.0) eta.rest.push_back({p, col[p]});
      etas_.push_back(std::move(eta));
      ++pivots_since_factor_;
      if (etas_.size() > 90) {
        if (!refactorize()) {
          res.status = LpStatus::Numerical;
          res.message = "basis became singular";
          break;
        }
        compute_basic_values();
      }
    }

    if (st.phase1 && infeasibility() <= ftol) {
      st.phase1 = false;
      st.degenerate_run = 0;
      st.bland = false;
    }
  }

  res.iterations = iter;
  if (res.status == LpStatus::Optimal) {
    // Final consistency check; a wrong "optimal" is never returned.
    if (!refactorize()) {
      res.status = LpStatus::Numerical;
      res.message = "final refactorization failed";
      return res;
    }
    compute_basic_values();
    const double rn = residual_norm();
    double rhs_scale = 1.0;
    for (double v : rhs_) rhs_scale = std::max(rhs_scale, std::fabs(v));
    if (rn > 1e-6 * rhs_scale || infeasibility() > 1e-7) {
      res.status = LpStatus::Numerical;
      res.message = "residual check failed";
      return res;
    }
    res.x.assign(x_.begin(), x_.begin() + n_);
    std::vector<double> cb(m_);
    for (int p = 0; p < m_; ++p)
      cb[p] = basis_[p] < n_ ? obj_[basis_[p]] : 0.0;
    btran(cb);
    res.duals = std::move(cb);
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += obj_[j] * x_[j];
  }
  return res;
}

LpResult solve_lp(const MilpModel& m, const LpOptions& opt) {
  for (const auto& v : m.variables())
    if (v.kind == VarKind::Binary && (v.lower < -1e-9 || v.upper > 1 + 1e-9))
      throw std::invalid_argument("binary variable with bounds outside [0,1]");
  SimplexSolver s(m);
  return s.solve(opt, /*warm=*/false);
}

}  // namespace gridpart
