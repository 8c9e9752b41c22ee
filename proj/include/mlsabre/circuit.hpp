#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlsabre {

enum class GateKind : std::uint8_t {
  OneQubit,
  TwoQubit,
  /// Routing swap. A `swap` in program text is a TwoQubit gate named "swap".
  Swap,
};

struct Gate {
  int id = 0;
  GateKind kind = GateKind::OneQubit;
  std::string name;
  /// Parameter text without the surrounding parentheses, kept verbatim.
  std::string params;
  std::array<int, 2> qubits{-1, -1};

  int arity() const noexcept { return kind == GateKind::OneQubit ? 1 : 2; }
  bool two_qubit() const noexcept { return kind != GateKind::OneQubit; }
};

/// Ordering constraint between the gates before `position` and those at or
/// after it, restricted to `qubits`.
struct Barrier {
  int position = 0;
  std::vector<int> qubits;
};

enum class SwapModel : std::uint8_t { Unit, Cx3 };

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 0) throw std::invalid_argument("negative qubit count");
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }
  const std::vector<Barrier>& barriers() const noexcept { return barriers_; }

  int add_one_qubit(std::string name, int q, std::string params = {}) {
    Gate g;
    g.kind = GateKind::OneQubit;
    g.name = std::move(name);
    g.params = std::move(params);
    g.qubits = {q, -1};
    return add(std::move(g));
  }

  int add_two_qubit(std::string name, int a, int b, std::string params = {}) {
    Gate g;
    g.kind = GateKind::TwoQubit;
    g.name = std::move(name);
    g.params = std::move(params);
    g.qubits = {a, b};
    return add(std::move(g));
  }

  int add_swap(int a, int b) {
    Gate g;
    g.kind = GateKind::Swap;
    g.name = "swap";
    g.qubits = {a, b};
    return add(std::move(g));
  }

  int add(Gate g) {
    for (int i = 0; i < g.arity(); ++i) {
      if (g.qubits[i] < 0 || g.qubits[i] >= num_qubits_) throw std::out_of_range("qubit index out of range");
    }
    if (g.two_qubit() && g.qubits[0] == g.qubits[1]) throw std::invalid_argument("duplicate operands");
    if (!g.two_qubit()) g.qubits[1] = -1;
    g.id = static_cast<int>(gates_.size());
    gates_.push_back(std::move(g));
    return gates_.back().id;
  }

  void add_barrier(std::vector<int> qubits) {
    for (int q : qubits) {
      if (q < 0 || q >= num_qubits_) throw std::out_of_range("qubit index out of range");
    }
    std::sort(qubits.begin(), qubits.end());
    qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
    barriers_.push_back({static_cast<int>(gates_.size()), std::move(qubits)});
  }

  int num_two_qubit_gates() const noexcept {
    return static_cast<int>(std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.two_qubit(); }));
  }

  /// Same gates in reverse order; barriers are mirrored.
  Circuit reversed() const {
    Circuit r(num_qubits_);
    const int n = static_cast<int>(gates_.size());
    std::size_t b = barriers_.size();
    for (int i = n; i >= 0; --i) {
      while (b > 0 && barriers_[b - 1].position == i) {
        r.add_barrier(barriers_[b - 1].qubits);
        --b;
      }
      if (i > 0) {
        Gate g = gates_[i - 1];
        r.add(std::move(g));
      }
    }
    return r;
  }

 private:
  int num_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<Barrier> barriers_;
};

struct GateDag {
  std::vector<std::vector<int>> successors;
  std::vector<std::vector<int>> predecessors;
  std::vector<int> front;

  std::size_t size() const noexcept { return successors.size(); }
};

inline GateDag dependency_dag(const Circuit& c) {
  const int n = static_cast<int>(c.size());
  GateDag dag;
  dag.successors.resize(n);
  dag.predecessors.resize(n);

  auto link = [&](int from, int to) {
    auto& succ = dag.successors[from];
    if (std::find(succ.begin(), succ.end(), to) != succ.end()) return;
    succ.push_back(to);
    dag.predecessors[to].push_back(from);
  };

  std::vector<int> last(c.num_qubits(), -1);
  // Barriers waiting for the first subsequent gate on each of their qubits.
  std::vector<std::vector<int>> pending(c.num_qubits());
  std::size_t next_barrier = 0;
  const auto& barriers = c.barriers();

  for (int i = 0; i < n; ++i) {
    while (next_barrier < barriers.size() && barriers[next_barrier].position == i) {
      const auto& qs = barriers[next_barrier].qubits;
      std::vector<int> prior;
      for (int q : qs) {
        if (last[q] >= 0) prior.push_back(last[q]);
      }
      for (int q : qs) {
        for (int p : prior) pending[q].push_back(p);
      }
      ++next_barrier;
    }
    const Gate& g = c[i];
    for (int k = 0; k < g.arity(); ++k) {
      const int q = g.qubits[k];
      if (last[q] >= 0) link(last[q], i);
      for (int p : pending[q]) link(p, i);
      pending[q].clear();
      last[q] = i;
    }
  }
  for (int i = 0; i < n; ++i) {
    auto& s = dag.successors[i];
    std::sort(s.begin(), s.end());
    auto& p = dag.predecessors[i];
    std::sort(p.begin(), p.end());
    if (p.empty()) dag.front.push_back(i);
  }
  return dag;
}

struct InteractionEdge {
  int a = 0;
  int b = 0;
  int weight = 0;

  friend bool operator==(const InteractionEdge&, const InteractionEdge&) = default;
};

/// Weighted program-qubit interaction graph. Edges are stored with a < b,
/// sorted lexicographically.
class InteractionGraph {
 public:
  InteractionGraph() = default;
  InteractionGraph(int num_qubits, std::vector<InteractionEdge> edges)
      : num_qubits_(num_qubits), edges_(std::move(edges)), adjacency_(num_qubits) {
    for (const auto& e : edges_) {
      adjacency_[e.a].push_back({e.b, e.weight});
      adjacency_[e.b].push_back({e.a, e.weight});
    }
    for (auto& a : adjacency_) std::sort(a.begin(), a.end());
  }

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<InteractionEdge>& edges() const noexcept { return edges_; }
  int degree(int q) const { return static_cast<int>(adjacency_[q].size()); }

  /// (neighbor, weight) pairs sorted by neighbor.
  const std::vector<std::pair<int, int>>& neighbors(int q) const { return adjacency_[q]; }

  int weight(int a, int b) const {
    const auto& adj = adjacency_[a];
    auto it = std::lower_bound(adj.begin(), adj.end(), std::pair<int, int>{b, 0});
    return (it != adj.end() && it->first == b) ? it->second : 0;
  }

  int total_weight() const noexcept {
    int s = 0;
    for (const auto& e : edges_) s += e.weight;
    return s;
  }

 private:
  int num_qubits_ = 0;
  std::vector<InteractionEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

inline InteractionGraph interaction_graph(const Circuit& c) {
  std::vector<std::pair<int, int>> pairs;
  for (const Gate& g : c.gates()) {
    if (!g.two_qubit()) continue;
    pairs.emplace_back(std::min(g.qubits[0], g.qubits[1]), std::max(g.qubits[0], g.qubits[1]));
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<InteractionEdge> edges;
  for (const auto& p : pairs) {
    if (!edges.empty() && edges.back().a == p.first && edges.back().b == p.second) {
      ++edges.back().weight;
    } else {
      edges.push_back({p.first, p.second, 1});
    }
  }
  return InteractionGraph(c.num_qubits(), std::move(edges));
}

inline int gate_cost(const Gate& g, SwapModel model) noexcept {
  return (g.kind == GateKind::Swap && model == SwapModel::Cx3) ? 3 : 1;
}

/// Longest weighted chain through the dependency DAG.
inline int depth(const Circuit& c, SwapModel model = SwapModel::Unit) {
  const GateDag dag = dependency_dag(c);
  std::vector<int> finish(c.size(), 0);
  int best = 0;
  // Gate ids are a topological order.
  for (std::size_t i = 0; i < c.size(); ++i) {
    int start = 0;
    for (int p : dag.predecessors[i]) start = std::max(start, finish[p]);
    finish[i] = start + gate_cost(c[i], model);
    best = std::max(best, finish[i]);
  }
  return best;
}

}  // namespace mlsabre
