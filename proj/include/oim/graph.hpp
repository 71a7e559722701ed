#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace oim {

struct Edge {
  std::size_t u;
  std::size_t v;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph with 0-based node indices.
///
/// Construction validates that every edge joins two distinct in-range nodes
/// and that no unordered pair appears twice.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  double total_weight() const noexcept;
  bool is_integer_weighted() const noexcept;
  /// Edge density |E| / (n(n-1)/2); zero for n < 2.
  double density() const noexcept;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

/// Parses the rudy / G-set edge-list format: a header line "n m" followed by
/// m lines "u v [w]" with 1-based indices. Lines starting with '#' and blank
/// lines are skipped. Throws ParseError (with line number) or InputError.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);

/// Writes `g` in the same format load_graph reads.
void write_graph(std::ostream& out, const Graph& g);

/// m distinct unit-weight edges drawn by rejection sampling from the
/// seeded generator in random.hpp. Deterministic for fixed (n, m, seed).
Graph generate_random_graph(std::size_t n, std::size_t m, std::uint64_t seed);

std::size_t max_edge_count(std::size_t n) noexcept;

}  // namespace oim
