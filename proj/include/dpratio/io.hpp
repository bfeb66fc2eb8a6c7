#pragma once

// Digraph file formats.
//
//   edge list:  first line "n m", then m lines "u v" (0-based vertices)
//   JSON:       {"n": int, "edges": [[u, v], ...], "parts": [[v, ...], ...]}
//               ("parts" optional)

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dpratio/digraph.hpp"

namespace dpratio {

inline void write_edge_list(std::ostream& os, const Digraph& g) {
  os << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Digraph read_edge_list(std::istream& is) {
  long n = 0, m = 0;
  require(static_cast<bool>(is >> n >> m), "edge list: missing header \"n m\"");
  require(n >= 1 && m >= 0, "edge list: bad header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (long t = 0; t < m; ++t) {
    int u, v;
    require(static_cast<bool>(is >> u >> v), "edge list: truncated edge lines");
    edges.emplace_back(u, v);
  }
  std::string extra;
  require(!(is >> extra), "edge list: trailing data after m edges");
  return Digraph(static_cast<int>(n), std::move(edges));
}

inline nlohmann::json to_json(const Digraph& g) {
  nlohmann::json j;
  j["n"] = g.vertex_count();
  j["edges"] = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) j["edges"].push_back({u, v});
  if (!g.parts.empty()) j["parts"] = g.parts;
  return j;
}

inline Digraph digraph_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("n") && j.contains("edges"),
          "digraph JSON: expected object with \"n\" and \"edges\"");
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    require(e.is_array() && e.size() == 2, "digraph JSON: each edge must be [u, v]");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  Digraph g(j.at("n").get<int>(), std::move(edges));
  if (j.contains("parts")) {
    g.parts = j.at("parts").get<std::vector<std::vector<int>>>();
    for (const auto& part : g.parts)
      for (int v : part)
        require(v >= 0 && v < g.vertex_count(), "digraph JSON: part vertex out of range");
  }
  return g;
}

/// Reads either format; JSON is recognised by a leading '{'.
inline Digraph read_digraph(std::istream& is) {
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(std::string("digraph JSON: ") + e.what());
    }
    return digraph_from_json(j);
  }
  std::istringstream in(text);
  return read_edge_list(in);
}

}  // namespace dpratio
