#ifndef GRIDPART_SIMPLEX_HPP
#define GRIDPART_SIMPLEX_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gridpart/milp.hpp"

namespace gridpart {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit, Numerical };

struct LpResult {
  LpStatus status = LpStatus::Numerical;
  double objective = 0.0;
  std::vector<double> x;      // structural variable values
  std::vector<double> duals;  // one per constraint row
  long iterations = 0;
  std::string message;
};

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  long max_iters = 0;  // 0: derived from problem size
};

// Bounded-variable primal revised simplex over a MilpModel snapshot
// (binaries relaxed to [0,1]). Sparse LU basis with product-form updates,
// periodic refactorization, composite phase 1 and a Bland fallback.
// Bounds can be overridden per solve; the basis persists across solves
// so related problems restart warm.
class SimplexSolver {
 public:
  explicit SimplexSolver(const MilpModel& m);

  void set_bound(int var, double lo, double hi);
  void reset_bounds();  // back to the model's own bounds
  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return hi_[var]; }

  // warm=false resets to the all-logical basis first.
  LpResult solve(const LpOptions& opt = LpOptions(), bool warm = true);

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

 private:
  enum Status : std::uint8_t { AtLower, AtUpper, Basic, FreeNb };

  void reset_basis();
  bool refactorize();
  void compute_basic_values();
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void gather_column(int col, std::vector<double>& dense,
                     std::vector<int>& idx) const;
  double infeasibility() const;
  double residual_norm();

  struct IterState;
  LpResult run(const LpOptions& opt);

  // problem snapshot
  int n_ = 0, m_ = 0, ncols_ = 0;
  std::vector<int> aptr_, aidx_;
  std::vector<double> aval_;
  std::vector<double> rhs_;
  std::vector<double> model_lo_, model_hi_;
  std::vector<double> obj_;  // structural objective coefficients

  // working state
  std::vector<double> lo_, hi_;  // current bounds, all columns
  std::vector<double> x_;       // all column values
  std::vector<int> basis_;      // column basic in each row position
  std::vector<int> pos_of_;     // column -> basis position or -1
  std::vector<Status> status_;

  // factorization
  class BasisLuHolder;
  std::vector<double> eta_buf_;
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> rest;  // (position, value)
  };
  std::vector<Eta> etas_;
  void* lu_ = nullptr;  // BasisLu, kept opaque here
  bool lu_valid_ = false;
  long pivots_since_factor_ = 0;

 public:
  ~SimplexSolver();
  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;
};

// One-shot interface used by tests and the validator.
LpResult solve_lp(const MilpModel& m, const LpOptions& opt = LpOptions());

}  // namespace gridpart

#endif  // GRIDPART_SIMPLEX_HPP
