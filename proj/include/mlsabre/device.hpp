#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlsabre/error.hpp"

namespace mlsabre {

struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

/// Undirected hardware coupling graph with precomputed hop distances.
class CouplingGraph {
 public:
  CouplingGraph() = default;

  /// Duplicate edges are dropped (see duplicates_dropped()); self-loops and
  /// out-of-range endpoints throw std::invalid_argument.
  CouplingGraph(int num_physical, std::vector<std::pair<int, int>> edges) : n_(num_physical) {
    if (num_physical < 0) throw std::invalid_argument("negative node count");
    edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n_ || b >= n_) {
        throw std::invalid_argument("edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
      }
      if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
      edges_.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(edges_.begin(), edges_.end());
    const auto before = edges_.size();
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    duplicates_ = before - edges_.size();

    adjacency_.assign(n_, {});
    adjacent_.assign(static_cast<std::size_t>(n_) * n_, 0);
    edge_index_.assign(static_cast<std::size_t>(n_) * n_, -1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto [a, b] = edges_[i];
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
      adjacent_[index(a, b)] = adjacent_[index(b, a)] = 1;
      edge_index_[index(a, b)] = edge_index_[index(b, a)] = static_cast<int>(i);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
    compute_distances();
  }

  int num_physical() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const int> neighbors(int u) const { return adjacency_[u]; }
  int degree(int u) const { return static_cast<int>(adjacency_[u].size()); }
  bool adjacent(int u, int v) const { return adjacent_[index(u, v)] != 0; }
  int distance(int u, int v) const { return dist_[index(u, v)]; }
  /// Row-major |P|x|P| hop-count matrix; kUnreachable across components.
  std::span<const int> distances() const noexcept { return dist_; }
  int edge_index(int u, int v) const { return edge_index_[index(u, v)]; }
  std::size_t duplicates_dropped() const noexcept { return duplicates_; }

  int max_degree() const {
    int d = 0;
    for (const auto& a : adjacency_) d = std::max(d, static_cast<int>(a.size()));
    return d;
  }

  bool connected() const {
    if (n_ <= 1) return true;
    for (int v = 1; v < n_; ++v) {
      if (dist_[index(0, v)] >= kUnreachable) return false;
    }
    return true;
  }

  friend bool operator==(const CouplingGraph& a, const CouplingGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }

  void compute_distances() {
    dist_.assign(static_cast<std::size_t>(n_) * n_, kUnreachable);
    std::vector<int> queue(n_);
    for (int s = 0; s < n_; ++s) {
      int* row = dist_.data() + index(s, 0);
      row[s] = 0;
      int head = 0;
      int tail = 0;
      queue[tail++] = s;
      while (head < tail) {
        const int u = queue[head++];
        for (int w : adjacency_[u]) {
          if (row[w] == kUnreachable) {
            row[w] = row[u] + 1;
            queue[tail++] = w;
          }
        }
      }
    }
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::uint8_t> adjacent_;
  std::vector<int> edge_index_;
  std::vector<int> dist_;
  std::size_t duplicates_ = 0;
};

/// Row-major copy of the BFS hop-count matrix; kUnreachable marks pairs in
/// different components.
inline std::vector<int> all_pairs_distances(const CouplingGraph& g) {
  auto d = g.distances();
  return {d.begin(), d.end()};
}

/// rows x cols grid; node (r, c) has index r * cols + c.
inline CouplingGraph grid_device(int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid dimensions must be positive");
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(v, v + 1);
      if (r + 1 < rows) edges.emplace_back(v, v + cols);
    }
  }
  return CouplingGraph(rows * cols, std::move(edges));
}

/// Heavy-hex lattice of `hex_rows` x `hex_cols` hexagons in the brick layout
/// used by IBM devices: hex_rows + 1 horizontal chains joined by bridge
/// qubits every four chain positions, with bridge offsets alternating by two
/// between consecutive gaps. A 1x1 lattice is a 12-cycle.
inline CouplingGraph heavy_hex_device(int hex_rows, int hex_cols) {
  if (hex_rows <= 0 || hex_cols <= 0) throw std::invalid_argument("heavy-hex dimensions must be positive");
  const int chains = hex_rows + 1;
  const int width = hex_rows == 1 ? 4 * hex_cols + 1 : 4 * hex_cols + 3;
  std::vector<std::pair<int, int>> edges;
  int next = 0;
  std::vector<int> chain_start(chains);
  for (int r = 0; r < chains; ++r) {
    chain_start[r] = next;
    for (int p = 0; p + 1 < width; ++p) edges.emplace_back(next + p, next + p + 1);
    next += width;
  }
  for (int gap = 0; gap < hex_rows; ++gap) {
    const int offset = (gap % 2 == 0) ? 0 : 2;
    for (int j = 0; j <= hex_cols; ++j) {
      const int p = offset + 4 * j;
      if (p >= width) break;
      const int bridge = next++;
      edges.emplace_back(chain_start[gap] + p, bridge);
      edges.emplace_back(bridge, chain_start[gap + 1] + p);
    }
  }
  return CouplingGraph(next, std::move(edges));
}

/// The published 127-qubit IBM Eagle coupling map (144 edges).
inline CouplingGraph eagle127_device() {
  static constexpr std::array<std::array<int, 2>, 144> kEdges = {{
      {0, 1},     {1, 2},     {2, 3},     {3, 4},     {4, 5},     {5, 6},     {6, 7},     {7, 8},
      {8, 9},     {9, 10},    {10, 11},   {11, 12},   {12, 13},   {0, 14},    {14, 18},   {4, 15},
      {15, 22},   {8, 16},    {16, 26},   {12, 17},   {17, 30},   {18, 19},   {19, 20},   {20, 21},
      {21, 22},   {22, 23},   {23, 24},   {24, 25},   {25, 26},   {26, 27},   {27, 28},   {28, 29},
      {29, 30},   {30, 31},   {31, 32},   {20, 33},   {33, 39},   {24, 34},   {34, 43},   {28, 35},
      {35, 47},   {32, 36},   {36, 51},   {37, 38},   {38, 39},   {39, 40},   {40, 41},   {41, 42},
      {42, 43},   {43, 44},   {44, 45},   {45, 46},   {46, 47},   {47, 48},   {48, 49},   {49, 50},
      {50, 51},   {37, 52},   {52, 56},   {41, 53},   {53, 60},   {45, 54},   {54, 64},   {49, 55},
      {55, 68},   {56, 57},   {57, 58},   {58, 59},   {59, 60},   {60, 61},   {61, 62},   {62, 63},
      {63, 64},   {64, 65},   {65, 66},   {66, 67},   {67, 68},   {68, 69},   {69, 70},   {58, 71},
      {71, 77},   {62, 72},   {72, 81},   {66, 73},   {73, 85},   {70, 74},   {74, 89},   {75, 76},
      {76, 77},   {77, 78},   {78, 79},   {79, 80},   {80, 81},   {81, 82},   {82, 83},   {83, 84},
      {84, 85},   {85, 86},   {86, 87},   {87, 88},   {88, 89},   {75, 90},   {90, 94},   {79, 91},
      {91, 98},   {83, 92},   {92, 102},  {87, 93},   {93, 106},  {94, 95},   {95, 96},   {96, 97},
      {97, 98},   {98, 99},   {99, 100},  {100, 101}, {101, 102}, {102, 103}, {103, 104}, {104, 105},
      {105, 106}, {106, 107}, {107, 108}, {96, 109},  {109, 114}, {100, 110}, {110, 118}, {104, 111},
      {111, 122}, {108, 112}, {112, 126}, {113, 114}, {114, 115}, {115, 116}, {116, 117}, {117, 118},
      {118, 119}, {119, 120}, {120, 121}, {121, 122}, {122, 123}, {123, 124}, {124, 125}, {125, 126},
  }};
  std::vector<std::pair<int, int>> edges;
  edges.reserve(kEdges.size());
  for (const auto& e : kEdges) edges.emplace_back(e[0], e[1]);
  return CouplingGraph(127, std::move(edges));
}

/// Google Willow stand-in: a 7 x 15 grid with 105 qubits.
inline CouplingGraph willow105_device() { return grid_device(7, 15); }

enum class HeavyHexPreset { Eagle127 };

inline CouplingGraph heavy_hex_device(HeavyHexPreset preset) {
  switch (preset) {
    case HeavyHexPreset::Eagle127:
      return eagle127_device();
  }
  throw std::invalid_argument("unknown heavy-hex preset");
}

/// Device text: first line holds the node count, each further line one
/// "u v" edge. '#' starts a comment. Duplicate edges produce a warning.
inline CouplingGraph parse_device(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<long long> values;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        values.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(line_no, 0, "expected integer, got '" + tok + "'");
      }
    }
    if (values.empty()) continue;
    if (n < 0) {
      if (values.size() != 1 || values[0] < 0 || values[0] > (1 << 20)) {
        throw ParseError(line_no, 0, "first line must be a node count");
      }
      n = static_cast<int>(values[0]);
      continue;
    }
    if (values.size() != 2) throw ParseError(line_no, 0, "edge lines hold exactly two node indices");
    const long long a = values[0];
    const long long b = values[1];
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ParseError(line_no, 0, "node index out of range (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    if (a == b) throw ParseError(line_no, 0, "self-loop on node " + std::to_string(a));
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    edge_lines.push_back(line_no);
  }
  if (n < 0) throw ParseError(line_no, 0, "missing node count");
  if (warnings) {
    std::vector<Edge> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      Edge e{std::min(edges[i].first, edges[i].second), std::max(edges[i].first, edges[i].second)};
      if (std::find(seen.begin(), seen.end(), e) != seen.end()) {
        warnings->push_back("line " + std::to_string(edge_lines[i]) + ": duplicate edge (" + std::to_string(e.u) +
                            "," + std::to_string(e.v) + ") ignored");
      } else {
        seen.push_back(e);
      }
    }
  }
  return CouplingGraph(n, std::move(edges));
}

inline std::string serialize_device(const CouplingGraph& g) {
  std::ostringstream os;
  os << g.num_physical() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

/// Resolves "eagle127", "willow105", "grid:RxC" and "heavyhex:RxC".
/// Returns false for names that are not presets.
inline bool preset_device(std::string_view name, CouplingGraph& out) {
  auto dims = [](std::string_view spec, int& r, int& c) {
    auto x = spec.find('x');
    if (x == std::string_view::npos) return false;
    try {
      std::size_t used = 0;
      std::string rs(spec.substr(0, x));
      std::string cs(spec.substr(x + 1));
      r = std::stoi(rs, &used);
      if (used != rs.size()) return false;
      c = std::stoi(cs, &used);
      if (used != cs.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    return true;
  };
  int r = 0;
  int c = 0;
  if (name == "eagle127") {
    out = eagle127_device();
  } else if (name == "willow105") {
    out = willow105_device();
  } else if (name.rfind("grid:", 0) == 0) {
    if (!dims(name.substr(5), r, c)) throw std::invalid_argument("malformed grid spec '" + std::string(name) + "'");
    out = grid_device(r, c);
  } else if (name.rfind("heavyhex:", 0) == 0) {
    if (!dims(name.substr(9), r, c)) throw std::invalid_argument("malformed heavy-hex spec '" + std::string(name) + "'");
    out = heavy_hex_device(r, c);
  } else {
    return false;
  }
  return true;
}

}  // namespace mlsabre
