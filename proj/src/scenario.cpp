#include "gridpart/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridpart/rng.hpp"
#include "json.hpp"

namespace gridpart {

using nlohmann::json;

void ScenarioSet::validate() const {
  const int d = dim();
  for (const auto& s : scenarios) {
    if (s.gp.size() != static_cast<size_t>(d) ||
        s.gq.size() != static_cast<size_t>(d) ||
        s.dp.size() != static_cast<size_t>(d) ||
        s.dq.size() != static_cast<size_t>(d))
      throw InputError("scenario set has non-uniform dimensions");
    for (const auto* v : {&s.gp, &s.gq, &s.dp, &s.dq})
      for (double x : *v)
        if (!(x >= 0.0)) throw InputError("negative scenario entry");
  }
}

ProfileFamily parse_family(const std::string& s) {
  if (s == "residential") return ProfileFamily::Residential;
  if (s == "commercial") return ProfileFamily::Commercial;
  if (s == "solar") return ProfileFamily::Solar;
  if (s == "constant") return ProfileFamily::Constant;
  throw InputError("unknown profile family '" + s + "'");
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  int rank = static_cast<int>(std::ceil(p * n));
  rank = std::clamp(rank, 1, n);
  return values[rank - 1];
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Daily demand templates, hour in [0,24).
double residential_shape(int hour_of_day, bool weekend) {
  const double h = hour_of_day;
  double v = 0.45;
  v += 0.35 * std::exp(-0.5 * std::pow((h - 7.5) / 1.8, 2));   // morning
  v += 0.55 * std::exp(-0.5 * std::pow((h - 19.0) / 2.6, 2));  // evening
  if (weekend) v *= 1.12;
  return v;
}

double commercial_shape(int hour_of_day, bool weekend) {
  const double h = hour_of_day;
  double v = 0.3;
  if (h >= 8 && h <= 18) v += 0.7 * std::sin(kTwoPi / 2 * (h - 8) / 10.0);
  if (weekend) v *= 0.45;
  return v;
}

double solar_shape(int hour_of_day, int day_of_year) {
  const double h = hour_of_day;
  if (h < 6.0 || h > 18.0) return 0.0;
  const double bell = std::pow(std::sin(kTwoPi / 2 * (h - 6.0) / 12.0), 2);
  const double season = 1.0 - 0.28 * std::cos(kTwoPi * (day_of_year - 172) / 365.0);
  return bell * season;
}

double seasonal_load(int day_of_year) {
  // Mild winter/summer peaks.
  return 1.0 + 0.15 * std::cos(kTwoPi * day_of_year / 365.0) +
         0.10 * std::cos(2 * kTwoPi * day_of_year / 365.0);
}

}  // namespace

ScenarioSet synthesize(const FeederNetwork& net, const SynthesisConfig& config,
                       std::uint64_t seed) {
  if (config.hours <= 0) throw InputError("synthesize: hours must be positive");
  const PartitionGraph g = partition_graph(net);
  const int nv = g.num_vertices();
  const int T = config.hours;

  ScenarioSet out;
  out.seed = seed;
  out.provenance = "synthetic hours=" + std::to_string(T);
  out.scenarios.assign(T, Scenario{});
  for (auto& s : out.scenarios) {
    s.gp.assign(nv, 0.0);
    s.gq.assign(nv, 0.0);
    s.dp.assign(nv, 0.0);
    s.dq.assign(nv, 0.0);
  }

  for (int v = 0; v < nv; ++v) {
    const Bus& bus = net.buses[g.vertex_bus[v]];
    ProfileFamily fam;
    auto it = config.family.find(bus.id);
    if (it != config.family.end()) {
      fam = it->second;
    } else if (bus.gen_cap_p > 0.0 || bus.grid_forming) {
      fam = bus.grid_forming ? ProfileFamily::Constant : ProfileFamily::Solar;
    } else {
      fam = ProfileFamily::Residential;
    }

    Rng rng(mix_seed(seed, 0x67656e, static_cast<std::uint64_t>(v)));

    // Generation capacity series.
    if (bus.gen_cap_p > 0.0) {
      std::vector<double> raw(T);
      double mx = 0.0;
      for (int t = 0; t < T; ++t) {
        const int hod = t % 24, doy = (t / 24) % 365;
        double base;
        if (fam == ProfileFamily::Solar) {
          base = solar_shape(hod, doy);
          base *= std::max(0.0, 1.0 + config.noise * rng.next_normal());
        } else {
          base = 1.0;  // machine-rated units hold rating
        }
        raw[t] = base;
        mx = std::max(mx, base);
      }
      const double scale = mx > 0.0 ? bus.gen_cap_p / mx : 0.0;
      for (int t = 0; t < T; ++t) out.scenarios[t].gp[v] = raw[t] * scale;
    }
    // Reactive capability stays at rating.
    for (int t = 0; t < T; ++t) out.scenarios[t].gq[v] = bus.gen_cap_q;

    // Demand series.
    if (bus.nominal_demand_p > 0.0) {
      std::vector<double> raw(T);
      for (int t = 0; t < T; ++t) {
        const int hod = t % 24;
        const int day = t / 24;
        const int dow = day % 7;
        const bool weekend = dow >= 5;
        double base = fam == ProfileFamily::Commercial
                          ? commercial_shape(hod, weekend)
                          : residential_shape(hod, weekend);
        base *= seasonal_load(day % 365);
        base *= std::max(0.05, 1.0 + config.noise * rng.next_normal());
        raw[t] = base;
      }
      const double p75 = percentile(raw, 0.75);
      const double scale = p75 > 0.0 ? bus.nominal_demand_p / p75 : 0.0;
      const double pf_ratio = bus.nominal_demand_q / bus.nominal_demand_p;
      for (int t = 0; t < T; ++t) {
        out.scenarios[t].dp[v] = raw[t] * scale;
        out.scenarios[t].dq[v] = raw[t] * scale * pf_ratio;
      }
    }
  }
  return out;
}

ScenarioSet sample_uniform(const ScenarioSet& s, int n, std::uint64_t seed) {
  if (n < 0) throw InputError("sample_uniform: negative count");
  if (n > 0 && s.size() == 0)
    throw InputError("sample_uniform: empty source set");
  ScenarioSet out;
  out.seed = seed;
  out.provenance = "uniform n=" + std::to_string(n) + " of " + s.provenance;
  Rng rng(mix_seed(seed, 0x756e6966));
  out.scenarios.reserve(n);
  for (int i = 0; i < n; ++i)
    out.scenarios.push_back(
        s.scenarios[rng.next_below(static_cast<std::uint64_t>(s.size()))]);
  return out;
}

Scenario nominal_scenario(const FeederNetwork& net) {
  const PartitionGraph g = partition_graph(net);
  Scenario s;
  s.gp.reserve(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    const Bus& b = net.buses[g.vertex_bus[v]];
    s.gp.push_back(b.gen_cap_p);
    s.gq.push_back(b.gen_cap_q);
    s.dp.push_back(b.nominal_demand_p);
    s.dq.push_back(b.nominal_demand_q);
  }
  return s;
}

namespace {
std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}
}  // namespace

std::string scenarios_to_csv(const ScenarioSet& s, const FeederNetwork& net) {
  const PartitionGraph g = partition_graph(net);
  if (s.size() > 0 && s.dim() != g.num_vertices())
    throw InputError("scenario set does not match network dimension");
  std::ostringstream os;
  os << "scenario_idx,bus_id,gp,gq,dp,dq\n";
  for (int i = 0; i < s.size(); ++i) {
    const Scenario& sc = s.scenarios[i];
    for (int v = 0; v < g.num_vertices(); ++v)
      os << i << "," << net.buses[g.vertex_bus[v]].id << "," << fmt(sc.gp[v])
         << "," << fmt(sc.gq[v]) << "," << fmt(sc.dp[v]) << "," << fmt(sc.dq[v])
         << "\n";
  }
  return os.str();
}

ScenarioSet scenarios_from_csv(const std::string& text,
                               const FeederNetwork& net) {
  const PartitionGraph g = partition_graph(net);
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) ||
      line.find("scenario_idx") == std::string::npos)
    throw InputError("scenario CSV: missing header");
  ScenarioSet out;
  out.provenance = "csv";
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw InputError("scenario CSV: bad row '" + line + "'");
    const int idx = std::stoi(fields[0]);
    auto vit = g.vertex_of_id.find(fields[1]);
    if (vit == g.vertex_of_id.end())
      throw InputError("scenario CSV: unknown bus '" + fields[1] + "'");
    while (out.size() <= idx) {
      Scenario blank;
      blank.gp.assign(g.num_vertices(), 0.0);
      blank.gq.assign(g.num_vertices(), 0.0);
      blank.dp.assign(g.num_vertices(), 0.0);
      blank.dq.assign(g.num_vertices(), 0.0);
      out.scenarios.push_back(std::move(blank));
    }
    Scenario& sc = out.scenarios[idx];
    const int v = vit->second;
    sc.gp[v] = std::stod(fields[2]);
    sc.gq[v] = std::stod(fields[3]);
    sc.dp[v] = std::stod(fields[4]);
    sc.dq[v] = std::stod(fields[5]);
  }
  out.validate();
  return out;
}

std::string scenarios_to_json(const ScenarioSet& s, const FeederNetwork& net) {
  const PartitionGraph g = partition_graph(net);
  json doc;
  doc["seed"] = s.seed;
  doc["provenance"] = s.provenance;
  json ids = json::array();
  for (int v = 0; v < g.num_vertices(); ++v)
    ids.push_back(net.buses[g.vertex_bus[v]].id);
  doc["bus_ids"] = ids;
  doc["scenarios"] = json::array();
  for (const auto& sc : s.scenarios) {
    json js;
    js["gp"] = sc.gp;
    js["gq"] = sc.gq;
    js["dp"] = sc.dp;
    js["dq"] = sc.dq;
    doc["scenarios"].push_back(std::move(js));
  }
  return doc.dump();
}

ScenarioSet scenarios_from_json(const std::string& text,
                                const FeederNetwork& net) {
  const PartitionGraph g = partition_graph(net);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario JSON parse error: ") + e.what());
  }
  ScenarioSet out;
  try {
    out.seed = doc.value("seed", 0ULL);
    out.provenance = doc.value("provenance", "json");
    std::vector<std::string> ids = doc.at("bus_ids");
    std::vector<int> vmap(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) {
      auto it = g.vertex_of_id.find(ids[i]);
      if (it == g.vertex_of_id.end())
        throw InputError("scenario JSON: unknown bus '" + ids[i] + "'");
      vmap[i] = it->second;
    }
    for (const auto& js : doc.at("scenarios")) {
      Scenario sc;
      sc.gp.assign(g.num_vertices(), 0.0);
      sc.gq.assign(g.num_vertices(), 0.0);
      sc.dp.assign(g.num_vertices(), 0.0);
      sc.dq.assign(g.num_vertices(), 0.0);
      const std::vector<double> gp = js.at("gp"), gq = js.at("gq"),
                                dp = js.at("dp"), dq = js.at("dq");
      if (gp.size() != ids.size() || gq.size() != ids.size() ||
          dp.size() != ids.size() || dq.size() != ids.size())
        throw InputError("scenario JSON: dimension mismatch");
      for (size_t i = 0; i < ids.size(); ++i) {
        sc.gp[vmap[i]] = gp[i];
        sc.gq[vmap[i]] = gq[i];
        sc.dp[vmap[i]] = dp[i];
        sc.dq[vmap[i]] = dq[i];
      }
      out.scenarios.push_back(std::move(sc));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario JSON schema violation: ") + e.what());
  }
  out.validate();
  return out;
}

ScenarioSet load_scenarios_file(const std::string& path,
                                const FeederNetwork& net) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return scenarios_from_csv(text, net);
  return scenarios_from_json(text, net);
}

}  // namespace gridpart
