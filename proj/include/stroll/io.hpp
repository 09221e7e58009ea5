#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stroll/metric.hpp"
#include "stroll/treewidth.hpp"

namespace stroll {

/// On-disk instance: exactly one of matrix / coords / edges carries the
/// geometry; the remaining fields are per-problem extras. All vertex
/// references use node ids.
struct Instance {
  std::vector<std::string> nodes;
  std::optional<std::vector<std::vector<Rational>>> matrix;
  std::optional<std::vector<std::vector<Rational>>> coords;
  std::optional<std::vector<std::tuple<int, int, Rational>>> edges;
  std::optional<int> start;
  std::optional<int> end;
  std::map<int, Rational> deadlines;
  std::optional<Rational> budget;
  std::optional<int> k;
  std::optional<TreeDecomposition> decomposition;

  int index_of(const std::string& id) const;
};

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);  // deterministic key order

MetricInstance to_metric(const Instance& inst);
WeightedGraph to_graph(const Instance& inst);  // edges, or the complete graph

/// "p/q" for non-integers, plain integer string otherwise.
std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

}  // namespace stroll
