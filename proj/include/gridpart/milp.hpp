#ifndef GRIDPART_MILP_HPP
#define GRIDPART_MILP_HPP

#include <limits>
#include <string>
#include <vector>

namespace gridpart {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };

struct VarId {
  int value = -1;
  bool valid() const { return value >= 0; }
  friend bool operator==(VarId a, VarId b) { return a.value == b.value; }
};

struct Variable {
  VarKind kind = VarKind::Continuous;
  double lower = -kInf;
  double upper = kInf;
  std::string name;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct LinearTerm {
  VarId var;
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;  // no duplicate variables, finite coefs
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

// Value per variable handle; complete over the model when used to evaluate.
struct Assignment {
  std::vector<double> values;

  double operator[](VarId v) const { return values[v.value]; }
  double& operator[](VarId v) { return values[v.value]; }
};

struct Evaluation {
  bool feasible = false;
  double max_violation = 0.0;
  double objective = 0.0;
};

// Language-neutral optimization IR: bounded continuous / binary variables,
// sparse linear constraints, linear minimization objective.
class MilpModel {
 public:
  VarId add_continuous(double lower, double upper, std::string name);
  VarId add_binary(std::string name);

  // Returns the constraint index. Throws on duplicate variables in terms,
  // non-finite coefficients, or unregistered handles.
  int add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                     std::string name);

  void set_objective(std::vector<LinearTerm> terms);
  void add_objective_term(VarId var, double coef);

  // Tighten a variable's bounds in place (used by presolve and tests).
  void set_bounds(VarId var, double lower, double upper);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return cons_; }
  const std::vector<LinearTerm>& objective() const { return objective_; }
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  int num_binaries() const { return num_binaries_; }

  std::string name = "model";
  std::string notes;

 private:
  void check_term(const LinearTerm& t) const;
  std::vector<Variable> vars_;
  std::vector<LinearConstraint> cons_;
  std::vector<LinearTerm> objective_;
  int num_binaries_ = 0;
};

// Worst constraint violation and objective value of `a` on `m`.
// Bound and integrality violations count toward max_violation as well.
Evaluation evaluate(const MilpModel& m, const Assignment& a, double tol = 1e-6);

// Adds z = x * y for binary x and continuous y in [y_lo, y_hi] via the four
// envelope inequalities; exact because x is binary.
VarId mccormick_product(MilpModel& m, VarId x, VarId y, double y_lo,
                        double y_hi, const std::string& name);

// Human-readable listing of variables and tagged constraints.
std::string debug_dump(const MilpModel& m);

}  // namespace gridpart

#endif  // GRIDPART_MILP_HPP
