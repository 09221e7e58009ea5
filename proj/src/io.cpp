#include "stroll/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "json.hpp"

namespace stroll {

namespace {

using Json = nlohmann::ordered_json;

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return rational_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) {
    // snap to a fixed 1e-6 grid so ingestion stays exact
    double v = j.get<double>();
    return Rational(static_cast<std::int64_t>(std::llround(v * 1000000.0)), 1000000);
  }
  throw std::invalid_argument("expected a number or \"p/q\" string");
}

Json rational_to_json(const Rational& r) {
  if (r.is_integer()) return Json(r.num());
  return Json(rational_to_string(r));
}

std::vector<std::vector<Rational>> parse_table(const Json& j) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : j) {
    out.emplace_back();
    for (const auto& cell : row) out.back().push_back(rational_from_json(cell));
  }
  return out;
}

Json table_to_json(const std::vector<std::vector<Rational>>& t) {
  Json j = Json::array();
  for (const auto& row : t) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(rational_to_json(cell));
    j.push_back(std::move(r));
  }
  return j;
}

}  // namespace

std::string rational_to_string(const Rational& r) {
  if (r.is_integer()) return std::to_string(r.num());
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(s));
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

int Instance::index_of(const std::string& id) const {
  auto it = std::find(nodes.begin(), nodes.end(), id);
  if (it == nodes.end()) throw std::invalid_argument("unknown node id: " + id);
  return static_cast<int>(it - nodes.begin());
}

Instance parse_instance(const std::string& text) {
  Json j = Json::parse(text);
  Instance inst;
  if (!j.contains("nodes")) throw std::invalid_argument("instance needs \"nodes\"");
  for (const auto& id : j.at("nodes")) inst.nodes.push_back(id.get<std::string>());
  int geometries = 0;
  if (j.contains("matrix")) {
    inst.matrix = parse_table(j.at("matrix"));
    ++geometries;
  }
  if (j.contains("coords")) {
    inst.coords = parse_table(j.at("coords"));
    ++geometries;
  }
  if (j.contains("edges")) {
    inst.edges.emplace();
    for (const auto& e : j.at("edges"))
      inst.edges->emplace_back(inst.index_of(e.at(0).get<std::string>()),
                               inst.index_of(e.at(1).get<std::string>()),
                               rational_from_json(e.at(2)));
    ++geometries;
  }
  if (geometries != 1)
    throw std::invalid_argument("instance needs exactly one of matrix/coords/edges");
  if (j.contains("start")) inst.start = inst.index_of(j.at("start").get<std::string>());
  if (j.contains("end")) inst.end = inst.index_of(j.at("end").get<std::string>());
  if (j.contains("deadlines"))
    for (const auto& [id, d] : j.at("deadlines").items())
      inst.deadlines[inst.index_of(id)] = rational_from_json(d);
  if (j.contains("budget")) inst.budget = rational_from_json(j.at("budget"));
  if (j.contains("k")) inst.k = j.at("k").get<int>();
  if (j.contains("bags")) {
    TreeDecomposition t;
    const auto& bags = j.at("bags");
    t.bags.resize(bags.size());
    for (const auto& [key, bag] : bags.items()) {
      int idx = std::stoi(key);
      if (idx < 0 || idx >= static_cast<int>(t.bags.size()))
        throw std::invalid_argument("bag indices must be 0..count-1");
      for (const auto& id : bag) t.bags[idx].push_back(inst.index_of(id.get<std::string>()));
      std::sort(t.bags[idx].begin(), t.bags[idx].end());
    }
    if (j.contains("bag_tree"))
      for (const auto& e : j.at("bag_tree"))
        t.tree_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    inst.decomposition = std::move(t);
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  Json j;
  j["nodes"] = inst.nodes;
  if (inst.matrix) j["matrix"] = table_to_json(*inst.matrix);
  if (inst.coords) j["coords"] = table_to_json(*inst.coords);
  if (inst.edges) {
    Json es = Json::array();
    for (const auto& [u, v, w] : *inst.edges)
      es.push_back(Json::array({inst.nodes[u], inst.nodes[v], rational_to_json(w)}));
    j["edges"] = std::move(es);
  }
  if (inst.start) j["start"] = inst.nodes[*inst.start];
  if (inst.end) j["end"] = inst.nodes[*inst.end];
  if (!inst.deadlines.empty()) {
    Json d = Json::object();
    for (const auto& [v, dl] : inst.deadlines) d[inst.nodes[v]] = rational_to_json(dl);
    j["deadlines"] = std::move(d);
  }
  if (inst.budget) j["budget"] = rational_to_json(*inst.budget);
  if (inst.k) j["k"] = *inst.k;
  if (inst.decomposition) {
    Json bags = Json::object();
    for (std::size_t i = 0; i < inst.decomposition->bags.size(); ++i) {
      Json bag = Json::array();
      for (int v : inst.decomposition->bags[i]) bag.push_back(inst.nodes[v]);
      bags[std::to_string(i)] = std::move(bag);
    }
    j["bags"] = std::move(bags);
    Json te = Json::array();
    for (const auto& [a, b] : inst.decomposition->tree_edges)
      te.push_back(Json::array({a, b}));
    j["bag_tree"] = std::move(te);
  }
  return j.dump(2) + "\n";
}

MetricInstance to_metric(const Instance& inst) {
  std::vector<std::string> ids = inst.nodes;
  if (inst.matrix) return MetricInstance::from_matrix(std::move(ids), *inst.matrix);
  if (inst.coords) return MetricInstance::from_coords(std::move(ids), *inst.coords);
  if (inst.edges) return MetricInstance::from_graph(std::move(ids), *inst.edges);
  throw std::invalid_argument("instance has no geometry");
}

WeightedGraph to_graph(const Instance& inst) {
  WeightedGraph g;
  g.n = static_cast<int>(inst.nodes.size());
  if (inst.edges) {
    g.edges = *inst.edges;
    return g;
  }
  const auto* table = inst.matrix ? &*inst.matrix : nullptr;
  if (table) {
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j) g.edges.emplace_back(i, j, (*table)[i][j]);
    return g;
  }
  throw std::invalid_argument("graph instances need edges or a matrix");
}

}  // namespace stroll
