#pragma once

// Digraphs, the blow-up of a directed cycle, and its uniform m-edge subgraphs.
//
// Vertex numbering used everywhere (including the file formats): vertex i of
// part c (both 0-based here) has index c * k + i. Part c sends edges only to
// part (c + 1) mod ell.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "dpratio/bigint.hpp"
#include "dpratio/rng.hpp"

namespace dpratio {

using Edge = std::pair<int, int>;

/// Simple loopless digraph on vertices [0, n).
class Digraph {
 public:
  explicit Digraph(int n, std::vector<Edge> edges = {}) : n_(n) {
    require(n >= 1, "Digraph: vertex count must be positive");
    std::set<Edge> seen;
    for (const auto& [u, v] : edges) {
      require(u >= 0 && u < n && v >= 0 && v < n, "Digraph: endpoint out of range");
      require(u != v, "Digraph: self-loops are not allowed");
      require(seen.insert({u, v}).second, "Digraph: duplicate edge");
    }
    edges_.assign(seen.begin(), seen.end());
  }

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int u, int v) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
  }

  /// Row-major 0/1 adjacency matrix.
  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> a(n_, std::vector<int>(n_, 0));
    for (const auto& [u, v] : edges_) a[u][v] = 1;
    return a;
  }

  /// Copy with one more edge (no-op if present).
  Digraph with_edge(int u, int v) const {
    auto e = edges_;
    if (!has_edge(u, v)) e.emplace_back(u, v);
    return Digraph(n_, std::move(e));
  }

  /// Optional grouping of vertices into parts, carried through the file formats.
  std::vector<std::vector<int>> parts;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// D_{k,ell}: ell blocks of k vertices arranged on a directed cycle, with every
/// edge from block c to block c+1 (mod ell) present.
class BlowupDigraph {
 public:
  BlowupDigraph(int k, int ell) : k_(k), ell_(ell) {
    require(k >= 1, "build_blowup: k must be >= 1");
    require(ell >= 2, "build_blowup: ell must be >= 2");
    require(k <= 64, "build_blowup: k must be <= 64 (row masks are 64-bit)");
  }

  int k() const { return k_; }
  int ell() const { return ell_; }
  int vertex_count() const { return k_ * ell_; }
  long edge_count() const { return static_cast<long>(k_) * k_ * ell_; }
  int vertex(int part, int i) const { return part * k_ + i; }
  int successor(int part) const { return (part + 1) % ell_; }

  std::vector<int> part(int c) const {
    std::vector<int> p(k_);
    std::iota(p.begin(), p.end(), c * k_);
    return p;
  }

  /// Edge with linear index e in [0, k^2 ell): layer e / k^2, row, column.
  struct EdgeSlot {
    int layer, row, col;
  };
  EdgeSlot slot(long e) const {
    const long kk = static_cast<long>(k_) * k_;
    return {static_cast<int>(e / kk), static_cast<int>((e % kk) / k_),
            static_cast<int>(e % k_)};
  }

  friend bool operator==(const BlowupDigraph&, const BlowupDigraph&) = default;

 private:
  int k_;
  int ell_;
};

inline BlowupDigraph build_blowup(int k, int ell) { return BlowupDigraph(k, ell); }

/// An edge subset of a blow-up, stored per layer as k row masks: bit j of
/// layers[c][i] is set iff vertex i of part c keeps its edge to vertex j of
/// part c+1.
class SampledSubgraph {
 public:
  using Layer = std::vector<std::uint64_t>;

  explicit SampledSubgraph(BlowupDigraph base)
      : base_(base), layers_(base.ell(), Layer(base.k(), 0)) {}

  static SampledSubgraph full(BlowupDigraph base) {
    SampledSubgraph g(base);
    const std::uint64_t all =
        base.k() == 64 ? ~0ULL : ((1ULL << base.k()) - 1);
    for (auto& layer : g.layers_) std::fill(layer.begin(), layer.end(), all);
    return g;
  }

  const BlowupDigraph& base() const { return base_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(int c) const { return layers_[c]; }

  bool has(int c, int row, int col) const { return (layers_[c][row] >> col) & 1ULL; }
  void set(int c, int row, int col) { layers_[c][row] |= (1ULL << col); }
  void clear(int c, int row, int col) { layers_[c][row] &= ~(1ULL << col); }

  long edge_count() const {
    long m = 0;
    for (const auto& layer : layers_)
      for (auto row : layer) m += std::popcount(row);
    return m;
  }

  friend bool operator==(const SampledSubgraph&, const SampledSubgraph&) = default;

 private:
  BlowupDigraph base_;
  std::vector<Layer> layers_;
};

/// Uniform m-subset of the k^2 ell edges by partial Fisher-Yates over the edge
/// index array. Deterministic in (base, m, seed).
inline SampledSubgraph sample_subgraph(const BlowupDigraph& base, long m, Seed seed) {
  const long total = base.edge_count();
  require(m >= 0 && m <= total, "sample_subgraph: m out of range [0, k^2 ell]");
  std::vector<long> idx(total);
  std::iota(idx.begin(), idx.end(), 0L);
  Rng rng(seed);
  for (long t = 0; t < m; ++t) {
    const long j = t + static_cast<long>(rng.uniform_below(total - t));
    std::swap(idx[t], idx[j]);
  }
  SampledSubgraph g(base);
  for (long t = 0; t < m; ++t) {
    const auto s = base.slot(idx[t]);
    g.set(s.layer, s.row, s.col);
  }
  return g;
}

inline constexpr long kDefaultEnumerationCap = 10'000'000;

/// Visits every m-edge subgraph of `base` exactly once (lexicographic order of
/// edge index sets). Throws if C(k^2 ell, m) exceeds `cap`.
inline void enumerate_subgraphs(const BlowupDigraph& base, long m,
                                const std::function<void(const SampledSubgraph&)>& visit,
                                long cap = kDefaultEnumerationCap) {
  const long total = base.edge_count();
  require(m >= 0 && m <= total, "enumerate_subgraphs: m out of range");
  require(binomial(total, m) <= cap, "enumerate_subgraphs: C(k^2 ell, m) exceeds cap");
  std::vector<long> comb(m);
  std::iota(comb.begin(), comb.end(), 0L);
  while (true) {
    SampledSubgraph g(base);
    for (long e : comb) {
      const auto s = base.slot(e);
      g.set(s.layer, s.row, s.col);
    }
    visit(g);
    long pos = m - 1;
    while (pos >= 0 && comb[pos] == total - m + pos) --pos;
    if (pos < 0) return;
    ++comb[pos];
    for (long q = pos + 1; q < m; ++q) comb[q] = comb[q - 1] + 1;
  }
}

inline std::vector<std::vector<int>> blowup_parts(const BlowupDigraph& b) {
  std::vector<std::vector<int>> parts;
  for (int c = 0; c < b.ell(); ++c) parts.push_back(b.part(c));
  return parts;
}

inline Digraph to_general(const SampledSubgraph& g) {
  const auto& b = g.base();
  std::vector<Edge> edges;
  for (int c = 0; c < b.ell(); ++c)
    for (int i = 0; i < b.k(); ++i)
      for (int j = 0; j < b.k(); ++j)
        if (g.has(c, i, j)) edges.emplace_back(b.vertex(c, i), b.vertex(b.successor(c), j));
  Digraph d(b.vertex_count(), std::move(edges));
  d.parts = blowup_parts(b);
  return d;
}

inline Digraph to_general(const BlowupDigraph& b) {
  return to_general(SampledSubgraph::full(b));
}

/// Inverse of to_general: reads g as a subgraph of D_{k,ell} under the standard
/// numbering. Throws if some edge is not an edge of D_{k,ell}.
inline SampledSubgraph subgraph_from_general(const Digraph& g, int k, int ell) {
  const BlowupDigraph b = build_blowup(k, ell);
  require(g.vertex_count() == b.vertex_count(), "subgraph_from_general: vertex count is not k*ell");
  SampledSubgraph out(b);
  for (const auto& [u, v] : g.edges()) {
    const int c = u / k, i = u % k, d = v / k, j = v % k;
    require(d == b.successor(c), "subgraph_from_general: edge is not between consecutive parts");
    out.set(c, i, j);
  }
  return out;
}

/// Recovers (k, ell) from a digraph's part list when it has the standard
/// blow-up layout: ell >= 2 parts of k consecutive vertices each.
inline std::pair<int, int> blowup_shape_from_parts(const Digraph& g) {
  const auto& parts = g.parts;
  require(parts.size() >= 2, "graph has no blow-up part structure");
  const int k = static_cast<int>(parts.front().size());
  const int ell = static_cast<int>(parts.size());
  require(k >= 1 && k * ell == g.vertex_count(), "parts do not partition the vertices");
  for (int c = 0; c < ell; ++c) {
    require(static_cast<int>(parts[c].size()) == k, "parts have unequal sizes");
    for (int i = 0; i < k; ++i)
      require(parts[c][i] == c * k + i, "parts do not follow the c*k + i numbering");
  }
  return {k, ell};
}

}  // namespace dpratio
