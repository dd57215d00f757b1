#include "gridpart/network.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gridpart {

using nlohmann::json;

int FeederNetwork::bus_index(const std::string& id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

void FeederNetwork::validate() const {
  if (buses.empty()) throw InputError("network has no buses");
  std::set<std::string> ids;
  for (const auto& b : buses) {
    if (b.id.empty()) throw InputError("bus with empty id");
    if (!ids.insert(b.id).second)
      throw InputError("duplicate bus id '" + b.id + "'");
    if (b.nominal_demand_p < 0 || b.nominal_demand_q < 0 || b.gen_cap_p < 0 ||
        b.gen_cap_q < 0 || b.q_min_absorb < 0)
      throw InputError("negative quantity at bus '" + b.id + "'");
  }
  if (bus_index(substation_id) < 0)
    throw InputError("missing substation '" + substation_id + "'");
  bool any_former = false;
  for (const auto& b : buses) any_former = any_former || b.grid_forming;
  if (!any_former) throw InputError("no grid-forming bus in network");

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& l : lines) {
    if (l.from == l.to)
      throw InputError("line with identical endpoints '" + l.from + "'");
    if (bus_index(l.from) < 0)
      throw InputError("line endpoint '" + l.from + "' is not a bus");
    if (bus_index(l.to) < 0)
      throw InputError("line endpoint '" + l.to + "' is not a bus");
    auto key = std::minmax(l.from, l.to);
    if (!pairs.insert(key).second)
      throw InputError("duplicate edge between '" + l.from + "' and '" + l.to +
                       "'");
    if (l.r < 0 || l.x < 0 || l.p_max < 0 || l.q_max < 0)
      throw InputError("negative line parameter on '" + l.from + "-" + l.to +
                       "'");
  }

  // Base graph connectivity over all lines (switch status included).
  std::vector<std::vector<int>> adj(buses.size());
  for (const auto& l : lines) {
    int a = bus_index(l.from), b = bus_index(l.to);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(buses.size(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
  }
  if (count != static_cast<int>(buses.size())) {
    for (size_t i = 0; i < buses.size(); ++i)
      if (!seen[i])
        throw InputError("disconnected base graph: bus '" + buses[i].id +
                         "' unreachable");
  }
}

FeederNetwork load_network(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("network document is not valid JSON: ") +
                     e.what());
  }
  FeederNetwork net;
  try {
    net.name = doc.value("name", "network");
    net.base_mva = doc.value("base_mva", 1.0);
    net.substation_id = doc.at("substation").get<std::string>();
    for (const auto& jb : doc.at("buses")) {
      Bus b;
      b.id = jb.at("id").get<std::string>();
      b.nominal_demand_p = jb.value("dp", 0.0);
      b.nominal_demand_q = jb.value("dq", 0.0);
      b.gen_cap_p = jb.value("gp", 0.0);
      b.gen_cap_q = jb.value("gq", 0.0);
      b.q_min_absorb = jb.value("qmin", 0.0);
      b.grid_forming = jb.value("grid_forming", false);
      net.buses.push_back(std::move(b));
    }
    for (const auto& jl : doc.at("lines")) {
      Line l;
      l.from = jl.at("from").get<std::string>();
      l.to = jl.at("to").get<std::string>();
      l.r = jl.value("r", 0.0);
      l.x = jl.value("x", 0.0);
      l.p_max = jl.value("pmax", 0.0);
      l.q_max = jl.value("qmax", 0.0);
      l.normally_open = jl.value("normally_open", false);
      net.lines.push_back(std::move(l));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("network schema violation: ") + e.what());
  }
  net.validate();
  return net;
}

FeederNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_network(ss.str());
}

std::string network_to_json(const FeederNetwork& net) {
  json doc;
  doc["name"] = net.name;
  doc["base_mva"] = net.base_mva;
  doc["substation"] = net.substation_id;
  doc["buses"] = json::array();
  for (const auto& b : net.buses) {
    json jb;
    jb["id"] = b.id;
    jb["dp"] = b.nominal_demand_p;
    jb["dq"] = b.nominal_demand_q;
    jb["gp"] = b.gen_cap_p;
    jb["gq"] = b.gen_cap_q;
    jb["qmin"] = b.q_min_absorb;
    jb["grid_forming"] = b.grid_forming;
    doc["buses"].push_back(jb);
  }
  doc["lines"] = json::array();
  for (const auto& l : net.lines) {
    json jl;
    jl["from"] = l.from;
    jl["to"] = l.to;
    jl["r"] = l.r;
    jl["x"] = l.x;
    jl["pmax"] = l.p_max;
    jl["qmax"] = l.q_max;
    jl["normally_open"] = l.normally_open;
    doc["lines"].push_back(jl);
  }
  return doc.dump(2);
}

PartitionGraph partition_graph(const FeederNetwork& net) {
  PartitionGraph g;
  const int sub = net.bus_index(net.substation_id);
  for (size_t i = 0; i < net.buses.size(); ++i) {
    if (static_cast<int>(i) == sub) continue;
    g.vertex_of_id[net.buses[i].id] = static_cast<int>(g.vertex_bus.size());
    g.vertex_bus.push_back(static_cast<int>(i));
  }
  for (size_t li = 0; li < net.lines.size(); ++li) {
    const Line& l = net.lines[li];
    auto fi = g.vertex_of_id.find(l.from);
    auto ti = g.vertex_of_id.find(l.to);
    if (fi == g.vertex_of_id.end() || ti == g.vertex_of_id.end()) continue;
    g.edges.push_back({fi->second, ti->second, static_cast<int>(li)});
  }
  return g;
}

std::vector<std::vector<double>> SparseMatrix::dense() const {
  std::vector<std::vector<double>> d(rows, std::vector<double>(cols, 0.0));
  for (const auto& e : entries) d[e.row][e.col] += e.value;
  return d;
}

SparseMatrix incidence_matrix(const PartitionGraph& g) {
  SparseMatrix a;
  a.rows = g.num_edges();
  a.cols = g.num_vertices();
  for (int e = 0; e < g.num_edges(); ++e) {
    a.entries.push_back({e, g.edges[e].from, 1.0});
    a.entries.push_back({e, g.edges[e].to, -1.0});
  }
  return a;
}

SparseMatrix reduced_incidence(const SparseMatrix& a, int ref) {
  if (ref < 0 || ref >= a.cols)
    throw std::out_of_range("reduced_incidence: reference column " +
                            std::to_string(ref) + " out of range");
  SparseMatrix r;
  r.rows = a.rows;
  r.cols = a.cols - 1;
  for (const auto& e : a.entries) {
    if (e.col == ref) continue;
    r.entries.push_back({e.row, e.col < ref ? e.col : e.col - 1, e.value});
  }
  return r;
}

TopologyReport check_topology(const PartitionGraph& g,
                              const std::vector<bool>& energized_nodes,
                              const std::vector<bool>& energized_edges,
                              const std::vector<int>& grid_formers) {
  if (energized_nodes.size() != static_cast<size_t>(g.num_vertices()) ||
      energized_edges.size() != static_cast<size_t>(g.num_edges()))
    throw std::invalid_argument("check_topology: size mismatch");

  TopologyReport rep;
  std::vector<bool> former(g.num_vertices(), false);
  for (int v : grid_formers) former.at(v) = true;

  std::vector<std::vector<std::pair<int, int>>> adj(g.num_vertices());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!energized_edges[e]) continue;
    const auto& ed = g.edges[e];
    if (!energized_nodes[ed.from] || !energized_nodes[ed.to]) {
      rep.dangling_energized_edges.push_back(e);
      continue;
    }
    adj[ed.from].push_back({ed.to, e});
    adj[ed.to].push_back({ed.from, e});
  }

  std::vector<int> comp(g.num_vertices(), -1);
  rep.is_forest = true;
  for (int s = 0; s < g.num_vertices(); ++s) {
    if (!energized_nodes[s] || comp[s] >= 0) continue;
    const int c = static_cast<int>(rep.components.size());
    rep.components.push_back({});
    int edge_count = 0;
    bool has_former = false;
    std::queue<int> q;
    q.push(s);
    comp[s] = c;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      rep.components[c].push_back(u);
      has_former = has_former || former[u];
      for (auto [v, e] : adj[u]) {
        ++edge_count;
        if (comp[v] < 0) {
          comp[v] = c;
          q.push(v);
        }
      }
    }
    edge_count /= 2;  // both endpoints counted
    if (edge_count != static_cast<int>(rep.components[c].size()) - 1)
      rep.is_forest = false;
    if (!has_former) rep.components_without_grid_former.push_back(c);
  }
  return rep;
}

std::vector<int> grid_former_vertices(const FeederNetwork& net,
                                      const PartitionGraph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (net.buses[g.vertex_bus[v]].grid_forming) out.push_back(v);
  return out;
}

}  // namespace gridpart
