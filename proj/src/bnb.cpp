#include "gridpart/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace gridpart {

namespace {

struct BoundChange {
  int var;
  double lo, hi;
};

struct Node {
  double lb;  // parent LP objective (valid lower bound for the subtree)
  long long id;
  std::vector<BoundChange> path;  // accumulated from the root
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;  // min-heap on bound
    return a.id > b.id;
  }
};

// Activity-based bound tightening on binaries; returns false when some
// variable's domain empties (root infeasible).
bool tighten_bounds(const MilpModel& m, std::vector<double>& lo,
                    std::vector<double>& hi) {
  for (int round = 0; round < 3; ++round) {
    bool changed = false;
    for (const auto& c : m.constraints()) {
      // min/max activity with infinity counting
      double minact = 0, maxact = 0;
      int min_inf = 0, max_inf = 0;
      for (const auto& t : c.terms) {
        const int j = t.var.value;
        const double a = t.coef;
        const double l = a > 0 ? lo[j] : hi[j];
        const double u = a > 0 ? hi[j] : lo[j];
        if (std::isinf(l)) ++min_inf; else minact += a * l;
        if (std::isinf(u)) ++max_inf; else maxact += a * u;
      }
      // Only binaries are fixed; continuous bounds stay untouched so
      // floating-point noise can never cut off feasible points.
      auto tighten_le = [&](bool flipped) {
        for (const auto& t : c.terms) {
          const int j = t.var.value;
          if (m.variables()[j].kind != VarKind::Binary) continue;
          const double a = flipped ? -t.coef : t.coef;
          if (a == 0.0) continue;
          const double rhs = flipped ? -c.rhs : c.rhs;
          const double mact = flipped ? -maxact : minact;
          const int inf_count = flipped ? max_inf : min_inf;
          const double contrib_lo = a > 0 ? a * lo[j] : a * hi[j];
          double rest;
          if (inf_count == 0) rest = mact - contrib_lo;
          else if (inf_count == 1 && std::isinf(a > 0 ? lo[j] : hi[j]))
            rest = mact;
          else
            continue;
          const double room = rhs - rest;
          const double nb = room / a;
          if (a > 0) {
            if (nb < 1.0 - 1e-7 && hi[j] > 0.5) {
              hi[j] = 0.0;
              changed = true;
            }
          } else {
            if (nb > 1e-7 && lo[j] < 0.5) {
              lo[j] = 1.0;
              changed = true;
            }
          }
        }
      };
      if (c.sense == Sense::LessEqual || c.sense == Sense::Equal)
        tighten_le(false);
      if (c.sense == Sense::GreaterEqual || c.sense == Sense::Equal)
        tighten_le(true);
    }
    for (int j = 0; j < m.num_vars(); ++j)
      if (lo[j] > hi[j] + 1e-9) return false;
    if (!changed) break;
  }
  return true;
}

}  // namespace

MilpResult solve_milp(const MilpModel& m, const SolveOptions& opt,
                      const Assignment* initial_incumbent) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  MilpResult res;
  std::vector<int> binaries;
  for (int j = 0; j < m.num_vars(); ++j)
    if (m.variables()[j].kind == VarKind::Binary) binaries.push_back(j);

  if (initial_incumbent) {
    const Evaluation ev = evaluate(m, *initial_incumbent, 1e-6);
    if (ev.feasible) {
      res.has_incumbent = true;
      res.incumbent = *initial_incumbent;
      res.objective = ev.objective;
    }
  }

  // Root bound tightening (applied as node-level bounds, model untouched).
  std::vector<double> root_lo(m.num_vars()), root_hi(m.num_vars());
  for (int j = 0; j < m.num_vars(); ++j) {
    root_lo[j] = m.variables()[j].lower;
    root_hi[j] = m.variables()[j].upper;
  }
  bool root_ok = true;
  if (opt.presolve) root_ok = tighten_bounds(m, root_lo, root_hi);
  if (!root_ok) {
    res.status = res.has_incumbent ? MilpStatus::Optimal : MilpStatus::Infeasible;
    if (res.has_incumbent) {
      res.bound = res.objective;
      res.gap = 0.0;
    }
    res.wall_time_sec = elapsed();
    return res;
  }

  SimplexSolver lp(m);
  LpOptions lpopt;

  auto apply_node_bounds = [&](const Node& node) {
    for (int j = 0; j < m.num_vars(); ++j) lp.set_bound(j, root_lo[j], root_hi[j]);
    for (const auto& bc : node.path) lp.set_bound(bc.var, bc.lo, bc.hi);
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::vector<double> stuck_bounds;  // nodes abandoned after LP failures
  long long next_id = 0;
  open.push(Node{-kInf, next_id++, {}});

  auto current_gap = [&] {
    if (!res.has_incumbent) return kInf;
    return (res.objective - res.bound) / std::max(1.0, std::fabs(res.objective));
  };
  auto record_bound = [&](double b) {
    b = std::min(b, res.has_incumbent ? res.objective : kInf);
    if (b > res.bound) {
      res.bound = b;
      res.bound_history.push_back(b);
    }
  };

  bool out_of_budget = false;
  while (!open.empty()) {
    // Global bound: best of the frontier and any abandoned subtrees.
    {
      double frontier = open.top().lb;
      for (double s : stuck_bounds) frontier = std::min(frontier, s);
      record_bound(frontier);
    }
    if (res.has_incumbent && current_gap() <= opt.gap_tol) break;
    if (elapsed() > opt.time_limit_sec ||
        (opt.node_limit >= 0 && res.nodes >= opt.node_limit)) {
      out_of_budget = true;
      break;
    }

    Node node = open.top();
    open.pop();
    if (res.has_incumbent && node.lb >= res.objective - 1e-9) continue;

    // Depth-first dive from this node.
    bool diving = true;
    while (diving) {
      diving = false;
      if (elapsed() > opt.time_limit_sec ||
          (opt.node_limit >= 0 && res.nodes >= opt.node_limit)) {
        open.push(node);  // keep the subtree accounted in the bound
        out_of_budget = true;
        break;
      }
      ++res.nodes;
      apply_node_bounds(node);
      LpResult lr = lp.solve(lpopt, /*warm=*/true);
      if (lr.status == LpStatus::IterLimit || lr.status == LpStatus::Numerical) {
        lr = lp.solve(lpopt, /*warm=*/false);  // one cold retry
      }
      if (lr.status == LpStatus::Infeasible) break;
      if (lr.status != LpStatus::Optimal) {
        ++res.lp_failures;
        stuck_bounds.push_back(node.lb);
        break;
      }
      if (res.has_incumbent && lr.objective >= res.objective - 1e-9) break;

      // Most fractional binary, ties to the lowest index.
      int branch_var = -1;
      double best_frac = opt.int_tol;
      for (int j : binaries) {
        const double f = std::fabs(lr.x[j] - std::round(lr.x[j]));
        if (f > best_frac + 1e-15) {
          best_frac = f;
          branch_var = j;
        }
      }

      if (branch_var < 0) {
        // Integral: fix binaries and repolish the continuous part so the
        // incumbent satisfies constraints exactly at integer values.
        for (int j : binaries)
          lp.set_bound(j, std::round(lr.x[j]), std::round(lr.x[j]));
        LpResult pol = lp.solve(lpopt, /*warm=*/true);
        if (pol.status != LpStatus::Optimal) {
          ++res.lp_failures;
          stuck_bounds.push_back(node.lb);
          break;
        }
        Assignment a;
        a.values = pol.x;
        for (int j : binaries) a.values[j] = std::round(a.values[j]);
        const Evaluation ev = evaluate(m, a, 1e-6);
        if (!ev.feasible) {
          ++res.lp_failures;
          stuck_bounds.push_back(node.lb);
          break;
        }
        if (!res.has_incumbent || ev.objective < res.objective) {
          res.has_incumbent = true;
          res.incumbent = std::move(a);
          res.objective = ev.objective;
        }
        break;
      }

      const double frac = lr.x[branch_var];
      const int up_first = frac >= 0.5 ? 1 : 0;
      Node down{lr.objective, next_id++, node.path};
      down.path.push_back({branch_var, 0.0, 0.0});
      Node up{lr.objective, next_id++, node.path};
      up.path.push_back({branch_var, 1.0, 1.0});
      if (up_first) {
        open.push(std::move(down));
        node = std::move(up);
      } else {
        open.push(std::move(up));
        node = std::move(down);
      }
      diving = true;
    }
    if (out_of_budget) break;
  }

  if (open.empty() && !out_of_budget) {
    double frontier = res.has_incumbent ? res.objective : kInf;
    for (double s : stuck_bounds) frontier = std::min(frontier, s);
    if (stuck_bounds.empty()) {
      record_bound(res.has_incumbent ? res.objective : -kInf);
      if (res.has_incumbent) res.bound = res.objective;
    } else {
      record_bound(frontier);
    }
  }

  res.gap = current_gap();
  if (res.has_incumbent) {
    if (res.gap <= opt.gap_tol)
      res.status = MilpStatus::Optimal;
    else
      res.status = out_of_budget ? MilpStatus::TimeLimit : MilpStatus::Feasible;
  } else {
    res.status = out_of_budget || !stuck_bounds.empty() ? MilpStatus::TimeLimit
                                                        : MilpStatus::Infeasible;
  }
  res.wall_time_sec = elapsed();
  return res;
}

}  // namespace gridpart
