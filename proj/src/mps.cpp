#include "gridpart/mps.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gridpart {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sanitize(const std::string& raw, int index, const char* prefix) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (out.empty() || (out[0] >= '0' && out[0] <= '9'))
    out = std::string(prefix) + out;
  if (out.size() > 48) out.resize(48);
  // Uniqueness by index suffix keeps names deterministic.
  return out + "_" + std::to_string(index);
}

std::vector<std::string> row_names(const MilpModel& m) {
  std::vector<std::string> names;
  names.reserve(m.constraints().size());
  for (size_t i = 0; i < m.constraints().size(); ++i)
    names.push_back(sanitize(m.constraints()[i].name, static_cast<int>(i), "r"));
  return names;
}

}  // namespace

std::vector<std::string> mps_var_names(const MilpModel& m) {
  std::vector<std::string> names;
  names.reserve(m.variables().size());
  for (size_t j = 0; j < m.variables().size(); ++j)
    names.push_back(sanitize(m.variables()[j].name, static_cast<int>(j), "x"));
  return names;
}

std::string export_mps(const MilpModel& m) {
  const auto vnames = mps_var_names(m);
  const auto rnames = row_names(m);

  std::ostringstream os;
  os << "NAME " << sanitize(m.name, 0, "m") << "\n";
  os << "OBJSENSE\n    MIN\n";
  os << "ROWS\n";
  os << " N  OBJ\n";
  for (size_t i = 0; i < m.constraints().size(); ++i) {
    char c = 'L';
    switch (m.constraints()[i].sense) {
      case Sense::LessEqual: c = 'L'; break;
      case Sense::Equal: c = 'E'; break;
      case Sense::GreaterEqual: c = 'G'; break;
    }
    os << " " << c << "  " << rnames[i] << "\n";
  }

  // Column-major entries: objective first, then rows in index order.
  std::vector<std::vector<std::pair<int, double>>> col_rows(m.num_vars());
  std::vector<double> obj_coef(m.num_vars(), 0.0);
  for (const auto& t : m.objective()) obj_coef[t.var.value] = t.coef;
  for (size_t i = 0; i < m.constraints().size(); ++i)
    for (const auto& t : m.constraints()[i].terms)
      col_rows[t.var.value].push_back({static_cast<int>(i), t.coef});

  os << "COLUMNS\n";
  bool in_int = false;
  for (int j = 0; j < m.num_vars(); ++j) {
    const bool is_bin = m.variables()[j].kind == VarKind::Binary;
    if (is_bin && !in_int) {
      os << "    MARKER                 'MARKER'                 'INTORG'\n";
      in_int = true;
    } else if (!is_bin && in_int) {
      os << "    MARKER                 'MARKER'                 'INTEND'\n";
      in_int = false;
    }
    if (obj_coef[j] != 0.0)
      os << "    " << vnames[j] << " OBJ " << fmt(obj_coef[j]) << "\n";
    for (const auto& [row, coef] : col_rows[j])
      os << "    " << vnames[j] << " " << rnames[row] << " " << fmt(coef)
         << "\n";
    if (obj_coef[j] == 0.0 && col_rows[j].empty())
      os << "    " << vnames[j] << " OBJ 0\n";  // keep the column declared
  }
  if (in_int) os << "    MARKER                 'MARKER'                 'INTEND'\n";

  os << "RHS\n";
  for (size_t i = 0; i < m.constraints().size(); ++i)
    if (m.constraints()[i].rhs != 0.0)
      os << "    RHS " << rnames[i] << " " << fmt(m.constraints()[i].rhs)
         << "\n";

  os << "BOUNDS\n";
  for (int j = 0; j < m.num_vars(); ++j) {
    const Variable& v = m.variables()[j];
    if (v.kind == VarKind::Binary) {
      os << " BV BND " << vnames[j] << "\n";
      continue;
    }
    const bool lo_def = v.lower == 0.0;
    const bool up_def = v.upper == kInf;
    if (lo_def && up_def) continue;
    if (v.lower == v.upper) {
      os << " FX BND " << vnames[j] << " " << fmt(v.lower) << "\n";
      continue;
    }
    if (v.lower == -kInf && v.upper == kInf) {
      os << " FR BND " << vnames[j] << "\n";
      continue;
    }
    if (v.lower == -kInf)
      os << " MI BND " << vnames[j] << "\n";
    else if (!lo_def)
      os << " LO BND " << vnames[j] << " " << fmt(v.lower) << "\n";
    if (v.upper != kInf) os << " UP BND " << vnames[j] << " " << fmt(v.upper) << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("MPS: bad numeric field '" + s + "'");
  }
}

}  // namespace

MilpModel import_mps(const std::string& text) {
  MilpModel m;
  enum Section { None, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, Done };
  Section sec = None;

  struct RowInfo {
    Sense sense;
    int index = -1;  // -1 for the objective row
  };
  std::unordered_map<std::string, RowInfo> rows;
  std::string obj_row;
  std::unordered_map<std::string, VarId> cols;
  std::unordered_map<std::string, bool> integer_col;
  // Constraint terms accumulate here; materialized after parsing.
  struct PendingRow {
    Sense sense;
    std::vector<LinearTerm> terms;
    double rhs = 0.0;
    std::string name;
  };
  std::vector<PendingRow> pending;
  std::vector<LinearTerm> objective;
  std::unordered_map<std::string, std::pair<bool, bool>> bound_seen;  // lo, up
  bool in_int = false;

  auto get_col = [&](const std::string& name) -> VarId {
    auto it = cols.find(name);
    if (it != cols.end()) return it->second;
    VarId v = m.add_continuous(0.0, kInf, name);
    cols.emplace(name, v);
    integer_col.emplace(name, in_int);
    return v;
  };

  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '*') continue;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const bool header = line[0] != ' ' && line[0] != '\t';
    if (header) {
      const std::string& h = toks[0];
      if (h == "NAME") {
        if (toks.size() > 1) m.name = toks[1];
      } else if (h == "OBJSENSE") {
        sec = ObjSense;
      } else if (h == "ROWS") {
        sec = Rows;
      } else if (h == "COLUMNS") {
        sec = Columns;
      } else if (h == "RHS") {
        sec = Rhs;
      } else if (h == "RANGES") {
        sec = Ranges;
      } else if (h == "BOUNDS") {
        sec = Bounds;
      } else if (h == "ENDATA") {
        sec = Done;
        break;
      } else {
        throw std::runtime_error("MPS: unknown section '" + h + "'");
      }
      continue;
    }
    switch (sec) {
      case ObjSense: {
        if (toks[0] == "MAX" || toks[0] == "MAXIMIZE")
          throw std::runtime_error("MPS: only MIN objective supported");
        break;
      }
      case Rows: {
        if (toks.size() != 2) throw std::runtime_error("MPS: bad ROWS line");
        const std::string& type = toks[0];
        if (type == "N") {
          if (obj_row.empty()) obj_row = toks[1];
        } else {
          Sense s;
          if (type == "L") s = Sense::LessEqual;
          else if (type == "G") s = Sense::GreaterEqual;
          else if (type == "E") s = Sense::Equal;
          else throw std::runtime_error("MPS: bad row type '" + type + "'");
          rows[toks[1]] = RowInfo{s, static_cast<int>(pending.size())};
          pending.push_back(PendingRow{s, {}, 0.0, toks[1]});
        }
        break;
      }
      case Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          if (toks[2] == "'INTORG'") in_int = true;
          else if (toks[2] == "'INTEND'") in_int = false;
          break;
        }
        if (toks.size() < 3 || (toks.size() - 1) % 2 != 0)
          throw std::runtime_error("MPS: bad COLUMNS line");
        VarId v = get_col(toks[0]);
        for (size_t i = 1; i + 1 < toks.size(); i += 2) {
          const std::string& rname = toks[i];
          const double coef = parse_num(toks[i + 1]);
          if (rname == obj_row) {
            if (coef != 0.0) objective.push_back({v, coef});
          } else {
            auto it = rows.find(rname);
            if (it == rows.end())
              throw std::runtime_error("MPS: unknown row '" + rname + "'");
            if (coef != 0.0) pending[it->second.index].terms.push_back({v, coef});
          }
        }
        break;
      }
      case Rhs: {
        if (toks.size() < 3 || (toks.size() - 1) % 2 != 0)
          throw std::runtime_error("MPS: bad RHS line");
        for (size_t i = 1; i + 1 < toks.size(); i += 2) {
          if (toks[i] == obj_row) continue;  // objective constant ignored
          auto it = rows.find(toks[i]);
          if (it == rows.end())
            throw std::runtime_error("MPS: RHS for unknown row '" + toks[i] + "'");
          pending[it->second.index].rhs = parse_num(toks[i + 1]);
        }
        break;
      }
      case Ranges:
        throw std::runtime_error("MPS: RANGES not supported");
      case Bounds: {
        if (toks.size() < 3) throw std::runtime_error("MPS: bad BOUNDS line");
        const std::string& code = toks[0];
        VarId v = get_col(toks[2]);
        Variable& var = const_cast<Variable&>(m.variables()[v.value]);
        auto& seen = bound_seen[toks[2]];
        if (code == "BV") {
          var.kind = VarKind::Binary;
          var.lower = 0.0;
          var.upper = 1.0;
        } else if (code == "FR") {
          var.lower = -kInf;
          var.upper = kInf;
        } else if (code == "MI") {
          var.lower = -kInf;
        } else if (code == "PL") {
          var.upper = kInf;
        } else if (code == "FX") {
          var.lower = var.upper = parse_num(toks[3]);
        } else if (code == "LO") {
          var.lower = parse_num(toks[3]);
          seen.first = true;
        } else if (code == "UP") {
          var.upper = parse_num(toks[3]);
          seen.second = true;
          // Classic MPS quirk: UP with negative value and no LO implies
          // a free lower bound; emitters here never rely on it.
          if (!seen.first && var.upper < 0.0) var.lower = -kInf;
        } else {
          throw std::runtime_error("MPS: bound code '" + code + "' unsupported");
        }
        break;
      }
      case None:
      case Done:
        throw std::runtime_error("MPS: data before first section");
    }
  }
  if (sec != Done) throw std::runtime_error("MPS: missing ENDATA");

  // Binary count bookkeeping: re-add binaries registered as continuous.
  // (MilpModel tracks the count on add; fix up via a rebuild.)
  MilpModel out;
  out.name = m.name;
  std::vector<VarId> remap(m.num_vars());
  for (int j = 0; j < m.num_vars(); ++j) {
    const Variable& v = m.variables()[j];
    const bool is_int = integer_col[v.name];
    if (v.kind == VarKind::Binary ||
        (is_int && v.lower == 0.0 && v.upper == 1.0)) {
      remap[j] = out.add_binary(v.name);
    } else if (is_int) {
      throw std::runtime_error("MPS: general integer column '" + v.name +
                               "' unsupported");
    } else {
      remap[j] = out.add_continuous(v.lower, v.upper, v.name);
    }
  }
  auto remap_terms = [&](const std::vector<LinearTerm>& in) {
    std::vector<LinearTerm> t;
    t.reserve(in.size());
    for (const auto& x : in) t.push_back({remap[x.var.value], x.coef});
    return t;
  };
  for (auto& p : pending)
    out.add_constraint(remap_terms(p.terms), p.sense, p.rhs, p.name);
  out.set_objective(remap_terms(objective));
  return out;
}

}  // namespace gridpart
