#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/error.hpp"
#include "mlsabre/mapping.hpp"

namespace mlsabre {

struct StructureClass {
  enum class Kind { Line, StarLike, General };
  Kind kind = Kind::General;
  /// Hub qubit when kind == StarLike, otherwise -1.
  int center = -1;

  friend bool operator==(const StructureClass&, const StructureClass&) = default;
};

namespace detail {

inline std::vector<int> interacting_qubits(const InteractionGraph& ig) {
  std::vector<int> out;
  for (int q = 0; q < ig.num_qubits(); ++q) {
    if (ig.degree(q) > 0) out.push_back(q);
  }
  return out;
}

/// Whether the subgraph on `nodes` minus `removed` has max degree <= 2 and no cycle.
inline bool linear_forest_without(const InteractionGraph& ig, const std::vector<int>& nodes, int removed) {
  std::vector<int> parent(ig.num_qubits());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int q : nodes) {
    if (q == removed) continue;
    int deg = 0;
    for (auto [w, weight] : ig.neighbors(q)) {
      if (w != removed) ++deg;
    }
    if (deg > 2) return false;
  }
  for (const auto& e : ig.edges()) {
    if (e.a == removed || e.b == removed) continue;
    const int ra = find(e.a);
    const int rb = find(e.b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

/// Index of the first two-qubit gate touching each qubit; size() when none.
inline std::vector<int> first_appearance(const Circuit& c) {
  std::vector<int> first(c.num_qubits(), static_cast<int>(c.size()));
  for (const Gate& g : c.gates()) {
    if (!g.two_qubit()) continue;
    for (int q : g.qubits) first[q] = std::min(first[q], g.id);
  }
  return first;
}

inline void check_embeddable_size(const Circuit& c, const CouplingGraph& g) {
  if (c.num_qubits() > g.num_physical()) {
    throw InfeasibleError("circuit has " + std::to_string(c.num_qubits()) + " qubits but the device has " +
                          std::to_string(g.num_physical()));
  }
}

/// Places the not-yet-placed program qubits on free physical qubits in index order.
inline Mapping complete_mapping(std::vector<int> forward, int num_physical) {
  std::vector<char> used(num_physical, 0);
  for (int p : forward) {
    if (p >= 0) used[p] = 1;
  }
  int next = 0;
  for (int& p : forward) {
    if (p >= 0) continue;
    while (used[next]) ++next;
    p = next;
    used[next] = 1;
  }
  return Mapping(std::move(forward), num_physical);
}

/// Deepest root-to-leaf path of a DFS tree rooted at `root`, neighbors in index order.
inline std::vector<int> dfs_deepest_path(const CouplingGraph& g, int root, std::vector<int>& parent,
                                         std::vector<int>& depth, std::vector<std::size_t>& cursor,
                                         std::vector<int>& stack) {
  std::fill(parent.begin(), parent.end(), -2);
  std::fill(cursor.begin(), cursor.end(), 0);
  stack.clear();
  stack.push_back(root);
  parent[root] = -1;
  depth[root] = 0;
  int deepest = root;
  while (!stack.empty()) {
    const int u = stack.back();
    const auto nb = g.neighbors(u);
    bool pushed = false;
    while (cursor[u] < nb.size()) {
      const int w = nb[cursor[u]++];
      if (parent[w] != -2) continue;
      parent[w] = u;
      depth[w] = depth[u] + 1;
      if (depth[w] > depth[deepest]) deepest = w;
      stack.push_back(w);
      pushed = true;
      break;
    }
    if (!pushed) stack.pop_back();
  }
  std::vector<int> path;
  for (int v = deepest; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

inline StructureClass classify_interaction_graph(const InteractionGraph& ig) {
  const auto nodes = detail::interacting_qubits(ig);
  const auto k = nodes.size();
  if (k < 2) return {};

  bool max_two = true;
  for (int q : nodes) max_two = max_two && ig.degree(q) <= 2;
  if (max_two && ig.edges().size() == k - 1 && detail::linear_forest_without(ig, nodes, -1)) {
    return {StructureClass::Kind::Line, -1};
  }
  for (int c : nodes) {
    if (static_cast<std::size_t>(ig.degree(c)) != k - 1) continue;
    if (detail::linear_forest_without(ig, nodes, c)) return {StructureClass::Kind::StarLike, c};
  }
  return {};
}

/// Longest simple path found by a greedy DFS from every node; the first
/// longest path found wins.
inline std::vector<int> greedy_longest_path(const CouplingGraph& g) {
  const int n = g.num_physical();
  std::vector<int> parent(n), depth(n), stack;
  std::vector<std::size_t> cursor(n);
  std::vector<int> best;
  for (int root = 0; root < n; ++root) {
    auto path = detail::dfs_deepest_path(g, root, parent, depth, cursor, stack);
    if (path.size() > best.size()) best = std::move(path);
    if (static_cast<int>(best.size()) == n) break;
  }
  return best;
}

/// Maps a path-shaped interaction graph along a long device path; when the
/// path is too short, side branches grown by BFS from path nodes are filled
/// before their path node.
inline Mapping embed_line(const Circuit& c, const CouplingGraph& g) {
  detail::check_embeddable_size(c, g);
  const InteractionGraph ig = interaction_graph(c);
  const auto nodes = detail::interacting_qubits(ig);
  std::vector<int> forward(c.num_qubits(), -1);
  if (nodes.empty()) return detail::complete_mapping(std::move(forward), g.num_physical());
  if (classify_interaction_graph(ig).kind != StructureClass::Kind::Line) {
    throw std::invalid_argument("embed_line requires a path-shaped interaction graph");
  }

  // Program qubits in path order, starting at the endpoint that acts first.
  const auto first = detail::first_appearance(c);
  std::vector<int> ends;
  for (int q : nodes) {
    if (ig.degree(q) == 1) ends.push_back(q);
  }
  const int start = first[ends[0]] <= first[ends[1]] ? ends[0] : ends[1];
  std::vector<int> order{start};
  for (int prev = -1, cur = start; static_cast<int>(order.size()) < static_cast<int>(nodes.size());) {
    for (auto [w, weight] : ig.neighbors(cur)) {
      if (w != prev) {
        prev = cur;
        cur = w;
        break;
      }
    }
    order.push_back(cur);
  }

  const auto path = greedy_longest_path(g);
  const std::size_t need = order.size();
  std::vector<int> slots;
  if (path.size() >= need) {
    slots.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(need));
  } else {
    const int n = g.num_physical();
    std::vector<int> root(n, -1);
    std::vector<int> queue;
    for (int p : path) {
      root[p] = p;
      queue.push_back(p);
    }
    // Branch nodes per path node, in BFS discovery order.
    std::vector<std::vector<int>> branches(n);
    std::size_t extra = 0;
    for (std::size_t head = 0; head < queue.size() && path.size() + extra < need; ++head) {
      const int u = queue[head];
      for (int w : g.neighbors(u)) {
        if (root[w] != -1) continue;
        root[w] = root[u];
        branches[root[u]].push_back(w);
        queue.push_back(w);
        if (path.size() + ++extra >= need) break;
      }
    }
    for (int p : path) {
      for (int b : branches[p]) slots.push_back(b);
      slots.push_back(p);
    }
  }
  for (std::size_t i = 0; i < need; ++i) forward[order[i]] = slots[i];
  return detail::complete_mapping(std::move(forward), g.num_physical());
}

/// Selects a region of |Q| nodes grown greedily around the highest-degree
/// node and pairs busy program qubits with well-connected region nodes.
inline Mapping embed_dense(const Circuit& c, const CouplingGraph& g) {
  detail::check_embeddable_size(c, g);
  const int nq = c.num_qubits();
  const int n = g.num_physical();
  if (nq == 0) return Mapping({}, n);
  int seed = 0;
  for (int p = 1; p < n; ++p) {
    if (g.degree(p) > g.degree(seed)) seed = p;
  }
  std::vector<char> in(n, 0);
  std::vector<int> inside(n, 0);
  std::vector<int> region{seed};
  in[seed] = 1;
  for (int w : g.neighbors(seed)) ++inside[w];
  while (static_cast<int>(region.size()) < nq) {
    int best = -1;
    for (int p = 0; p < n; ++p) {
      if (in[p]) continue;
      // Disconnected leftovers are only taken once the component is exhausted.
      if (best < 0 || std::make_pair(inside[p], g.degree(p)) > std::make_pair(inside[best], g.degree(best))) best = p;
    }
    in[best] = 1;
    region.push_back(best);
    for (int w : g.neighbors(best)) ++inside[w];
  }

  std::vector<int> internal(n, 0);
  for (int p : region) {
    for (int w : g.neighbors(p)) internal[p] += in[w];
  }
  std::stable_sort(region.begin(), region.end(), [&](int a, int b) {
    if (internal[a] != internal[b]) return internal[a] > internal[b];
    return a < b;
  });
  const InteractionGraph ig = interaction_graph(c);
  std::vector<int> progs(nq);
  std::iota(progs.begin(), progs.end(), 0);
  std::stable_sort(progs.begin(), progs.end(), [&](int a, int b) { return ig.degree(a) > ig.degree(b); });
  std::vector<int> forward(nq);
  for (int i = 0; i < nq; ++i) forward[progs[i]] = region[i];
  return Mapping(std::move(forward), n);
}

/// Hub-and-leaves embedding: finds the shortest walk whose closed
/// neighbourhood covers all interacting qubits, puts the hub at the walk's
/// start and hands leaves, in order of first use, to the neighbours of each
/// walk node in turn so the hub only moves forward.
inline Mapping embed_star(const Circuit& c, const CouplingGraph& g, std::vector<std::string>* warnings = nullptr) {
  detail::check_embeddable_size(c, g);
  const InteractionGraph ig = interaction_graph(c);
  const StructureClass cls = classify_interaction_graph(ig);
  if (cls.kind != StructureClass::Kind::StarLike) {
    throw std::invalid_argument("embed_star requires a star-like interaction graph");
  }
  const auto nodes = detail::interacting_qubits(ig);
  const std::size_t need = nodes.size();
  const int n = g.num_physical();

  std::vector<int> best_walk;
  std::vector<char> in_ext(n), in_walk(n);
  for (int s = 0; s < n; ++s) {
    std::fill(in_ext.begin(), in_ext.end(), 0);
    std::fill(in_walk.begin(), in_walk.end(), 0);
    std::deque<int> walk{s};
    in_walk[s] = 1;
    std::size_t covered = 0;
    auto absorb = [&](int x) {
      if (!in_ext[x]) {
        in_ext[x] = 1;
        ++covered;
      }
      for (int w : g.neighbors(x)) {
        if (!in_ext[w]) {
          in_ext[w] = 1;
          ++covered;
        }
      }
    };
    auto gain = [&](int x) {
      int add = in_ext[x] ? 0 : 1;
      for (int w : g.neighbors(x)) add += in_ext[w] ? 0 : 1;
      return add;
    };
    absorb(s);
    bool failed = false;
    while (covered < need) {
      if (!best_walk.empty() && walk.size() >= best_walk.size()) {
        failed = true;
        break;
      }
      int best_node = -1;
      int best_gain = 0;
      bool at_front = false;
      for (int side = 0; side < 2; ++side) {
        const int end = side == 0 ? walk.back() : walk.front();
        if (side == 1 && walk.size() == 1) break;
        for (int w : g.neighbors(end)) {
          if (in_walk[w]) continue;
          const int gw = gain(w);
          if (gw > best_gain) {
            best_gain = gw;
            best_node = w;
            at_front = side == 1;
          }
        }
      }
      if (best_node < 0) {
        // Stagnation: restart from the best extended-set node off the walk.
        for (int x = 0; x < n; ++x) {
          if (!in_ext[x] || in_walk[x]) continue;
          const int gx = gain(x);
          if (gx > best_gain) {
            best_gain = gx;
            best_node = x;
          }
        }
        at_front = false;
      }
      if (best_node < 0) {
        failed = true;
        break;
      }
      if (at_front) {
        walk.push_front(best_node);
      } else {
        walk.push_back(best_node);
      }
      in_walk[best_node] = 1;
      absorb(best_node);
    }
    if (!failed && (best_walk.empty() || walk.size() < best_walk.size())) best_walk.assign(walk.begin(), walk.end());
  }
  if (best_walk.empty()) {
    if (warnings) warnings->push_back("no covering walk for the star embedding; used the dense embedding");
    return embed_dense(c, g);
  }

  const auto first = detail::first_appearance(c);
  std::vector<int> leaves;
  for (int q : nodes) {
    if (q != cls.center) leaves.push_back(q);
  }
  std::stable_sort(leaves.begin(), leaves.end(), [&](int a, int b) { return first[a] < first[b]; });

  std::vector<int> forward(c.num_qubits(), -1);
  std::vector<char> used(n, 0);
  std::fill(in_walk.begin(), in_walk.end(), 0);
  for (int w : best_walk) in_walk[w] = 1;
  forward[cls.center] = best_walk[0];
  used[best_walk[0]] = 1;
  std::size_t next_leaf = 0;
  auto place = [&](int p) {
    if (next_leaf < leaves.size() && !used[p]) {
      forward[leaves[next_leaf++]] = p;
      used[p] = 1;
    }
  };
  for (std::size_t i = 0; i < best_walk.size() && next_leaf < leaves.size(); ++i) {
    for (int w : g.neighbors(best_walk[i])) {
      if (!in_walk[w]) place(w);
    }
    if (i + 1 < best_walk.size()) place(best_walk[i + 1]);
  }
  // Leaves left over (possible only after a walk restart) go to the nearest free nodes.
  while (next_leaf < leaves.size()) {
    int best = -1;
    for (int p = 0; p < n; ++p) {
      if (!used[p] && (best < 0 || g.distance(best_walk.back(), p) < g.distance(best_walk.back(), best))) best = p;
    }
    place(best);
  }
  return detail::complete_mapping(std::move(forward), n);
}

/// Dispatches on the interaction structure.
inline Mapping initial_embedding(const Circuit& c, const CouplingGraph& g, std::vector<std::string>* warnings = nullptr) {
  detail::check_embeddable_size(c, g);
  if (!g.connected()) throw InfeasibleError("coupling graph is disconnected");
  const StructureClass cls = classify_interaction_graph(interaction_graph(c));
  switch (cls.kind) {
    case StructureClass::Kind::Line:
      return embed_line(c, g);
    case StructureClass::Kind::StarLike:
      return embed_star(c, g, warnings);
    case StructureClass::Kind::General:
      break;
  }
  return embed_dense(c, g);
}

}  // namespace mlsabre
