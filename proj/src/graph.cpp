#include "oim/graph.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "oim/errors.hpp"
#include "oim/random.hpp"

namespace oim {

namespace {

std::pair<std::size_t, std::size_t> ordered(std::size_t u, std::size_t v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

bool is_blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ == 0) throw InputError("graph must have at least one node");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.u >= n_ || e.v >= n_)
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") out of range for " + std::to_string(n_) + " nodes");
    if (e.u == e.v) throw InputError("self-loop on node " + std::to_string(e.u));
    if (!std::isfinite(e.weight)) throw InputError("non-finite edge weight");
    if (!seen.insert(ordered(e.u, e.v)).second)
      throw InputError("duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ")");
  }
}

double Graph::total_weight() const noexcept {
  double sum = 0.0;
  for (const auto& e : edges_) sum += e.weight;
  return sum;
}

bool Graph::is_integer_weighted() const noexcept {
  for (const auto& e : edges_)
    if (e.weight != std::round(e.weight)) return false;
  return true;
}

double Graph::density() const noexcept {
  const auto max_edges = max_edge_count(n_);
  return max_edges == 0 ? 0.0 : static_cast<double>(edges_.size()) / static_cast<double>(max_edges);
}

std::size_t max_edge_count(std::size_t n) noexcept { return n * (n - (n > 0 ? 1 : 0)) / 2; }

Graph load_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0, m = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream fields(line);
    if (!have_header) {
      long long nn = 0, mm = 0;
      if (!(fields >> nn >> mm)) throw ParseError(line_no, "expected header \"n m\"");
      std::string extra;
      if (fields >> extra) throw ParseError(line_no, "unexpected trailing field '" + extra + "'");
      if (nn < 1) throw ParseError(line_no, "node count must be positive");
      if (mm < 0) throw ParseError(line_no, "edge count must be non-negative");
      n = static_cast<std::size_t>(nn);
      m = static_cast<std::size_t>(mm);
      if (m > max_edge_count(n))
        throw ParseError(line_no, "edge count " + std::to_string(m) + " exceeds n(n-1)/2");
      edges.reserve(m);
      have_header = true;
      continue;
    }
    if (edges.size() == m) throw ParseError(line_no, "more edges than declared in header");
    long long u = 0, v = 0;
    if (!(fields >> u >> v)) throw ParseError(line_no, "expected \"u v [w]\"");
    double weight = 1.0;
    std::string token;
    if (fields >> token) {
      try {
        std::size_t used = 0;
        weight = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad weight '" + token + "'");
      }
      if (!std::isfinite(weight)) throw ParseError(line_no, "non-finite weight");
      if (fields >> token) throw ParseError(line_no, "unexpected trailing field '" + token + "'");
    }
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n || static_cast<std::size_t>(v) > n)
      throw ParseError(line_no, "node index out of range 1.." + std::to_string(n));
    if (u == v) throw ParseError(line_no, "self-loop on node " + std::to_string(u));
    const auto a = static_cast<std::size_t>(u - 1);
    const auto b = static_cast<std::size_t>(v - 1);
    if (!seen.insert(ordered(a, b)).second)
      throw ParseError(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    edges.push_back({a, b, weight});
  }
  if (!have_header) throw ParseError(line_no, "missing header \"n m\"");
  if (edges.size() != m)
    throw ParseError(line_no, "expected " + std::to_string(m) + " edges, found " +
                                  std::to_string(edges.size()));
  return Graph(n, std::move(edges));
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  try {
    return load_graph(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  std::ostringstream weight;
  weight.precision(17);
  for (const auto& e : g.edges()) {
    out << e.u + 1 << ' ' << e.v + 1;
    if (e.weight != 1.0) {
      weight.str("");
      weight << e.weight;
      out << ' ' << weight.str();
    }
    out << '\n';
  }
}

Graph generate_random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw InputError("graph must have at least one node");
  if (m > max_edge_count(n))
    throw InputError("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) +
                     " nodes (max " + std::to_string(max_edge_count(n)) + ")");
  Rng rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    const auto u = static_cast<std::size_t>(rng.uniform_index(n));
    const auto v = static_cast<std::size_t>(rng.uniform_index(n));
    if (u == v) continue;
    const auto key = ordered(u, v);
    if (!seen.insert(key).second) continue;
    edges.push_back({key.first, key.second, 1.0});
  }
  return Graph(n, std::move(edges));
}

}  // namespace oim
