#include "gridpart/backend.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "gridpart/mps.hpp"

namespace gridpart {

namespace fs = std::filesystem;

namespace {

std::string substitute(std::string tmpl, const std::string& key,
                       const std::string& value) {
  size_t pos;
  while ((pos = tmpl.find(key)) != std::string::npos)
    tmpl.replace(pos, key.size(), value);
  return tmpl;
}

std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string format_solution_file(const MilpModel& m, const MilpResult& r) {
  std::ostringstream os;
  switch (r.status) {
    case MilpStatus::Optimal: os << "status optimal\n"; break;
    case MilpStatus::Feasible: os << "status feasible\n"; break;
    case MilpStatus::TimeLimit: os << "status time_limit\n"; break;
    case MilpStatus::Infeasible: os << "status infeasible\n"; break;
  }
  if (r.has_incumbent) {
    os << "objective " << fmt(r.objective) << "\n";
    const auto names = mps_var_names(m);
    for (int j = 0; j < m.num_vars(); ++j)
      if (r.incumbent.values[j] != 0.0)
        os << names[j] << " " << fmt(r.incumbent.values[j]) << "\n";
  }
  return os.str();
}

MilpResult solve_via_backend(const MilpModel& m, const BackendSpec& backend) {
  const fs::path dir = backend.workdir.empty()
                           ? fs::temp_directory_path()
                           : fs::path(backend.workdir);
  fs::create_directories(dir);
  static int counter = 0;
  const std::string stem =
      "gridpart_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const fs::path mps_path = dir / (stem + ".mps");
  const fs::path sol_path = dir / (stem + ".sol");

  {
    std::ofstream out(mps_path);
    out << export_mps(m);
  }

  std::string cmd = substitute(backend.command, "{mps}", mps_path.string());
  cmd = substitute(cmd, "{sol}", sol_path.string());
  const int rc = std::system(cmd.c_str());
  if (rc != 0)
    throw std::runtime_error("backend command failed (exit " +
                             std::to_string(rc) + "): " + cmd);

  std::ifstream in(sol_path);
  if (!in)
    throw std::runtime_error("backend produced no solution file: " +
                             sol_path.string());

  std::unordered_map<std::string, int> var_of;
  {
    const auto names = mps_var_names(m);
    for (size_t j = 0; j < names.size(); ++j)
      var_of[names[j]] = static_cast<int>(j);
  }

  MilpResult res;
  res.incumbent.values.assign(m.num_vars(), 0.0);
  bool saw_objective = false;
  std::string status_str = "unknown";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "status") {
      is >> status_str;
    } else if (key == "objective") {
      is >> res.objective;
      saw_objective = true;
    } else {
      double v;
      if (!(is >> v))
        throw std::runtime_error("backend solution: bad line '" + line + "'");
      auto it = var_of.find(key);
      if (it == var_of.end())
        throw std::runtime_error("backend solution names unknown variable '" +
                                 key + "'");
      res.incumbent.values[it->second] = v;
    }
  }

  if (status_str == "infeasible") {
    res.status = MilpStatus::Infeasible;
    res.has_incumbent = false;
    fs::remove(mps_path);
    fs::remove(sol_path);
    return res;
  }
  if (!saw_objective)
    throw std::runtime_error("backend solution lacks an objective line");

  const Evaluation ev = evaluate(m, res.incumbent, 1e-6);
  if (!ev.feasible)
    throw std::runtime_error(
        "backend solution failed validation (max violation " +
        fmt(ev.max_violation) + ")");
  res.objective = ev.objective;  // trust our own arithmetic
  res.has_incumbent = true;
  res.bound = -kInf;
  res.status = status_str == "optimal" ? MilpStatus::Optimal
             : status_str == "time_limit" ? MilpStatus::TimeLimit
                                          : MilpStatus::Feasible;
  if (res.status == MilpStatus::Optimal) {
    res.bound = res.objective;
    res.gap = 0.0;
  }
  fs::remove(mps_path);
  fs::remove(sol_path);
  return res;
}

}  // namespace gridpart
