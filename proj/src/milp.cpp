#include "gridpart/milp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace gridpart {

VarId MilpModel::add_continuous(double lower, double upper, std::string name) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw std::invalid_argument("bad bounds for variable '" + name + "'");
  vars_.push_back(Variable{VarKind::Continuous, lower, upper, std::move(name)});
  return VarId{static_cast<int>(vars_.size()) - 1};
}

VarId MilpModel::add_binary(std::string name) {
  vars_.push_back(Variable{VarKind::Binary, 0.0, 1.0, std::move(name)});
  ++num_binaries_;
  return VarId{static_cast<int>(vars_.size()) - 1};
}

void MilpModel::check_term(const LinearTerm& t) const {
  if (!t.var.valid() || t.var.value >= static_cast<int>(vars_.size()))
    throw std::invalid_argument("term references unregistered variable");
  if (!std::isfinite(t.coef))
    throw std::invalid_argument("non-finite coefficient on variable '" +
                                vars_[t.var.value].name + "'");
}

int MilpModel::add_constraint(std::vector<LinearTerm> terms, Sense sense,
                              double rhs, std::string name) {
  std::unordered_set<int> seen;
  for (const auto& t : terms) {
    check_term(t);
    if (!seen.insert(t.var.value).second)
      throw std::invalid_argument("duplicate variable in constraint '" + name +
                                  "'");
  }
  if (!std::isfinite(rhs))
    throw std::invalid_argument("non-finite rhs in constraint '" + name + "'");
  cons_.push_back(LinearConstraint{std::move(terms), sense, rhs, std::move(name)});
  return static_cast<int>(cons_.size()) - 1;
}

void MilpModel::set_objective(std::vector<LinearTerm> terms) {
  std::unordered_set<int> seen;
  for (const auto& t : terms) {
    check_term(t);
    if (!seen.insert(t.var.value).second)
      throw std::invalid_argument("duplicate variable in objective");
  }
  objective_ = std::move(terms);
}

void MilpModel::add_objective_term(VarId var, double coef) {
  check_term(LinearTerm{var, coef});
  for (auto& t : objective_) {
    if (t.var == var) {
      t.coef += coef;
      return;
    }
  }
  objective_.push_back(LinearTerm{var, coef});
}

void MilpModel::set_bounds(VarId var, double lower, double upper) {
  if (!var.valid() || var.value >= static_cast<int>(vars_.size()))
    throw std::invalid_argument("set_bounds: unregistered variable");
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw std::invalid_argument("set_bounds: bad bounds");
  vars_[var.value].lower = lower;
  vars_[var.value].upper = upper;
}

Evaluation evaluate(const MilpModel& m, const Assignment& a, double tol) {
  if (a.values.size() != static_cast<size_t>(m.num_vars()))
    throw std::invalid_argument("assignment incomplete: expected " +
                                std::to_string(m.num_vars()) + " values, got " +
                                std::to_string(a.values.size()));
  double worst = 0.0;
  for (int j = 0; j < m.num_vars(); ++j) {
    const Variable& v = m.variables()[j];
    const double x = a.values[j];
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    worst = std::max(worst, v.lower - x);
    worst = std::max(worst, x - v.upper);
    if (v.kind == VarKind::Binary)
      worst = std::max(worst, std::fabs(x - std::round(x)));
  }
  for (const auto& c : m.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * a.values[t.var.value];
    switch (c.sense) {
      case Sense::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
      case Sense::Equal: worst = std::max(worst, std::fabs(lhs - c.rhs)); break;
    }
  }
  double obj = 0.0;
  for (const auto& t : m.objective()) obj += t.coef * a.values[t.var.value];
  return Evaluation{worst <= tol, worst, obj};
}

VarId mccormick_product(MilpModel& m, VarId x, VarId y, double y_lo,
                        double y_hi, const std::string& name) {
  if (!x.valid() || m.variables()[x.value].kind != VarKind::Binary)
    throw std::invalid_argument("mccormick_product: x must be binary");
  if (!std::isfinite(y_lo) || !std::isfinite(y_hi))
    throw std::invalid_argument("mccormick_product: y bounds must be finite");
  if (y_lo > y_hi)
    throw std::invalid_argument("mccormick_product: y_lo > y_hi");

  VarId z = m.add_continuous(std::min(0.0, y_lo), std::max(0.0, y_hi), name);
  // x*y_lo <= z <= x*y_hi
  m.add_constraint({{x, y_lo}, {z, -1.0}}, Sense::LessEqual, 0.0, name + "_lo");
  m.add_constraint({{z, 1.0}, {x, -y_hi}}, Sense::LessEqual, 0.0, name + "_hi");
  // y + (x-1)*y_hi <= z <= y + (x-1)*y_lo
  m.add_constraint({{y, 1.0}, {x, y_hi}, {z, -1.0}}, Sense::LessEqual, y_hi,
                   name + "_cut_lo");
  m.add_constraint({{z, 1.0}, {y, -1.0}, {x, -y_lo}}, Sense::LessEqual, -y_lo,
                   name + "_cut_hi");
  return z;
}

std::string debug_dump(const MilpModel& m) {
  std::ostringstream os;
  os << "model " << m.name << ": " << m.num_vars() << " vars ("
     << m.num_binaries() << " binary), " << m.num_constraints()
     << " constraints\n";
  os << "minimize:";
  for (const auto& t : m.objective())
    os << " " << (t.coef >= 0 ? "+" : "") << t.coef << "*"
       << m.variables()[t.var.value].name;
  os << "\n";
  for (const auto& c : m.constraints()) {
    os << c.name << ":";
    for (const auto& t : c.terms)
      os << " " << (t.coef >= 0 ? "+" : "") << t.coef << "*"
         << m.variables()[t.var.value].name;
    switch (c.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::Equal: os << " = "; break;
      case Sense::GreaterEqual: os << " >= "; break;
    }
    os << c.rhs << "\n";
  }
  return os.str();
}

}  // namespace gridpart
