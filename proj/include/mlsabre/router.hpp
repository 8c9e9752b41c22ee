#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/error.hpp"
#include "mlsabre/mapping.hpp"
#include "mlsabre/random.hpp"

namespace mlsabre {

struct RouterConfig {
  int extended_set_size = 20;
  double extended_weight = 0.5;
  double decay_increment = 0.001;
  /// Decay factors return to 1 after this many swaps; 0 disables the periodic reset.
  int decay_reset_interval = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (extended_set_size < 0) throw std::invalid_argument("extended_set_size must be >= 0");
    if (!(extended_weight >= 0.0 && extended_weight <= 1.0)) {
      throw std::invalid_argument("extended_weight must lie in [0, 1]");
    }
    if (!(decay_increment >= 0.0)) throw std::invalid_argument("decay_increment must be >= 0");
    if (decay_reset_interval < 0) throw std::invalid_argument("decay_reset_interval must be >= 0");
  }
};

/// One schedule step: an original gate, or (gate == -1) a swap on `edge`.
struct ScheduleEntry {
  int gate = -1;
  Edge edge{};

  bool is_swap() const noexcept { return gate < 0; }
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct CompiledCircuit {
  std::vector<ScheduleEntry> schedule;
  Mapping initial_mapping;
  Mapping final_mapping;
  int swap_count = 0;
  int depth_unit = 0;
  int depth_cx3 = 0;

  std::vector<int> gate_order() const {
    std::vector<int> order;
    for (const auto& e : schedule) {
      if (!e.is_swap()) order.push_back(e.gate);
    }
    return order;
  }
};

/// ASAP depth of a routed schedule over physical qubits. Barrier edges of the
/// original circuit's DAG also delay their successors.
inline int schedule_depth(const Circuit& c, const GateDag& dag, const Mapping& initial,
                          const std::vector<ScheduleEntry>& schedule, SwapModel model) {
  Mapping m = initial;
  std::vector<int> busy(m.num_physical(), 0);
  std::vector<int> finish(c.size(), 0);
  const int swap_cost = model == SwapModel::Cx3 ? 3 : 1;
  int best = 0;
  for (const auto& e : schedule) {
    if (e.is_swap()) {
      const int t = std::max(busy[e.edge.u], busy[e.edge.v]) + swap_cost;
      busy[e.edge.u] = busy[e.edge.v] = t;
      m.swap_physical(e.edge.u, e.edge.v);
      best = std::max(best, t);
      continue;
    }
    const Gate& g = c[e.gate];
    int start = 0;
    for (int p : dag.predecessors[e.gate]) start = std::max(start, finish[p]);
    for (int k = 0; k < g.arity(); ++k) start = std::max(start, busy[m.phys(g.qubits[k])]);
    const int t = start + gate_cost(g, model);
    for (int k = 0; k < g.arity(); ++k) busy[m.phys(g.qubits[k])] = t;
    finish[e.gate] = t;
    best = std::max(best, t);
  }
  return best;
}

namespace detail {

inline double combine_score(double decay, double front_sum, std::size_t front_size, double ext_sum,
                            std::size_t ext_size, double extended_weight) {
  const double f = front_size == 0 ? 0.0 : front_sum / static_cast<double>(front_size);
  const double e = extended_weight * ext_sum / static_cast<double>(std::max<std::size_t>(1, ext_size));
  return decay * (f + e);
}

}  // namespace detail

/// Heuristic cost of tentatively applying `swap`. Gates are program-qubit
/// pairs; `decay` holds one factor per physical qubit, and the larger factor
/// of the two swapped qubits scales the score.
inline double swap_candidate_score(const std::vector<std::pair<int, int>>& front,
                                   const std::vector<std::pair<int, int>>& extended, const Mapping& mapping,
                                   Edge swap, const std::vector<double>& decay, const CouplingGraph& g,
                                   double extended_weight) {
  auto moved = [&](int q) {
    const int p = mapping.phys(q);
    return p == swap.u ? swap.v : (p == swap.v ? swap.u : p);
  };
  double fs = 0.0;
  for (auto [a, b] : front) fs += g.distance(moved(a), moved(b));
  double es = 0.0;
  for (auto [a, b] : extended) es += g.distance(moved(a), moved(b));
  return detail::combine_score(std::max(decay[swap.u], decay[swap.v]), fs, front.size(), es, extended.size(),
                               extended_weight);
}

namespace detail {

/// Circuit data the router needs, precomputed once per direction.
struct RoutingProblem {
  int num_qubits = 0;
  std::vector<std::array<int, 2>> ops;
  std::vector<char> two;
  GateDag dag;
  std::vector<int> indegree;

  explicit RoutingProblem(const Circuit& c) : num_qubits(c.num_qubits()), dag(dependency_dag(c)) {
    const std::size_t n = c.size();
    ops.resize(n);
    two.resize(n);
    indegree.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ops[i] = c[i].qubits;
      two[i] = c[i].two_qubit() ? 1 : 0;
      indegree[i] = static_cast<int>(dag.predecessors[i].size());
    }
  }

  std::size_t size() const noexcept { return ops.size(); }
};

/// Reusable buffers for a single routing thread.
class SabrePass {
 public:
  /// Routes `problem` from `layout` (updated in place to the final mapping).
  /// Appends to `schedule` when non-null.
  void run(const RoutingProblem& problem, const CouplingGraph& g, Mapping& layout, const RouterConfig& cfg,
           Rng& rng, std::vector<ScheduleEntry>* schedule) {
    problem_ = &problem;
    g_ = &g;
    layout_ = &layout;
    schedule_ = schedule;
    const int np = g.num_physical();
    const std::size_t n = problem.size();
    remaining_.assign(problem.indegree.begin(), problem.indegree.end());
    ready_.clear();
    front_.clear();
    for (int f : problem.dag.front) ready_.push_back(f);
    decay_.assign(np, 1.0);
    front_at_.assign(np, -1);
    ext_head_.assign(np, -1);
    edge_stamp_.assign(g.num_edges(), 0);
    if (gate_stamp_.size() < n) gate_stamp_.assign(n, 0);
    swap_count_ = 0;

    drain();
    int since_progress = 0;
    int since_reset = 0;
    const long long guard = static_cast<long long>(np) * np;
    while (!front_.empty()) {
      if (since_progress >= guard) {
        force_progress();
        since_progress = 0;
        since_reset = 0;
        std::fill(decay_.begin(), decay_.end(), 1.0);
        continue;
      }
      const Edge chosen = choose_swap(cfg, rng);
      apply_swap(chosen);
      ++since_progress;
      decay_[chosen.u] += cfg.decay_increment;
      decay_[chosen.v] += cfg.decay_increment;
      if (cfg.decay_reset_interval > 0 && ++since_reset >= cfg.decay_reset_interval) {
        std::fill(decay_.begin(), decay_.end(), 1.0);
        since_reset = 0;
      }
      if (release_after_swap(chosen)) {
        since_progress = 0;
        since_reset = 0;
        std::fill(decay_.begin(), decay_.end(), 1.0);
      }
    }
  }

  int swap_count() const noexcept { return swap_count_; }

 private:
  bool executable(int gate) const {
    if (!problem_->two[gate]) return true;
    const auto& q = problem_->ops[gate];
    return g_->adjacent(layout_->phys(q[0]), layout_->phys(q[1]));
  }

  void execute(int gate) {
    if (schedule_) schedule_->push_back({gate, {}});
    for (int s : problem_->dag.successors[gate]) {
      if (--remaining_[s] == 0) ready_.push_back(s);
    }
  }

  void drain() {
    while (!ready_.empty()) {
      const int gate = ready_.front();
      ready_.pop_front();
      if (executable(gate)) {
        execute(gate);
      } else {
        front_.push_back(gate);
      }
    }
  }

  void apply_swap(Edge e) {
    layout_->swap_physical(e.u, e.v);
    ++swap_count_;
    if (schedule_) schedule_->push_back({-1, e});
  }

  /// Executes front gates on the swapped qubits; true if any ran.
  bool release_after_swap(Edge e) {
    bool progressed = false;
    for (std::size_t i = 0; i < front_.size();) {
      const int gate = front_[i];
      const auto& q = problem_->ops[gate];
      const int pa = layout_->phys(q[0]);
      const int pb = layout_->phys(q[1]);
      const bool touches = pa == e.u || pa == e.v || pb == e.u || pb == e.v;
      if (touches && g_->adjacent(pa, pb)) {
        front_.erase(front_.begin() + static_cast<std::ptrdiff_t>(i));
        execute(gate);
        progressed = true;
      } else {
        ++i;
      }
    }
    if (progressed) drain();
    return progressed;
  }

  /// Walks the oldest front gate's first operand along a shortest path.
  void force_progress() {
    const int gate = *std::min_element(front_.begin(), front_.end());
    const auto& q = problem_->ops[gate];
    while (true) {
      const int pa = layout_->phys(q[0]);
      const int pb = layout_->phys(q[1]);
      if (g_->adjacent(pa, pb)) break;
      int next = -1;
      for (int w : g_->neighbors(pa)) {
        if (g_->distance(w, pb) == g_->distance(pa, pb) - 1) {
          next = w;
          break;
        }
      }
      const Edge e{std::min(pa, next), std::max(pa, next)};
      apply_swap(e);
      release_after_swap(e);
      if (std::find(front_.begin(), front_.end(), gate) == front_.end()) break;
    }
  }

  void collect_extended(std::size_t limit) {
    ext_.clear();
    if (limit == 0) return;
    ++stamp_;
    bfs_.clear();
    for (int f : front_) {
      for (int s : problem_->dag.successors[f]) {
        if (gate_stamp_[s] != stamp_) {
          gate_stamp_[s] = stamp_;
          bfs_.push_back(s);
        }
      }
    }
    for (std::size_t head = 0; head < bfs_.size() && ext_.size() < limit; ++head) {
      const int gate = bfs_[head];
      if (problem_->two[gate]) ext_.push_back(gate);
      for (int s : problem_->dag.successors[gate]) {
        if (gate_stamp_[s] != stamp_) {
          gate_stamp_[s] = stamp_;
          bfs_.push_back(s);
        }
      }
    }
  }

  Edge choose_swap(const RouterConfig& cfg, Rng& rng) {
    const Mapping& m = *layout_;
    const auto& ops = problem_->ops;
    collect_extended(static_cast<std::size_t>(cfg.extended_set_size));

    double front_sum = 0.0;
    for (std::size_t i = 0; i < front_.size(); ++i) {
      const auto& q = ops[front_[i]];
      const int pa = m.phys(q[0]);
      const int pb = m.phys(q[1]);
      front_at_[pa] = front_at_[pb] = static_cast<int>(i);
      front_sum += g_->distance(pa, pb);
    }
    double ext_sum = 0.0;
    ext_next_.assign(2 * ext_.size(), -1);
    for (std::size_t i = 0; i < ext_.size(); ++i) {
      const auto& q = ops[ext_[i]];
      for (int k = 0; k < 2; ++k) {
        const int p = m.phys(q[k]);
        const int slot = static_cast<int>(2 * i + k);
        ext_next_[slot] = ext_head_[p];
        ext_head_[p] = slot;
      }
      ext_sum += g_->distance(m.phys(q[0]), m.phys(q[1]));
    }

    candidates_.clear();
    ++edge_round_;
    for (int f : front_) {
      for (int k = 0; k < 2; ++k) {
        const int p = m.phys(ops[f][k]);
        for (int w : g_->neighbors(p)) {
          const int eid = g_->edge_index(p, w);
          if (edge_stamp_[eid] == edge_round_) continue;
          edge_stamp_[eid] = edge_round_;
          candidates_.push_back({std::min(p, w), std::max(p, w)});
        }
      }
    }

    scores_.resize(candidates_.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      const Edge e = candidates_[c];
      auto moved = [&](int p) { return p == e.u ? e.v : (p == e.v ? e.u : p); };
      auto delta_of = [&](int gate) {
        const auto& q = ops[gate];
        const int pa = m.phys(q[0]);
        const int pb = m.phys(q[1]);
        return g_->distance(moved(pa), moved(pb)) - g_->distance(pa, pb);
      };
      double df = 0.0;
      const int fu = front_at_[e.u];
      const int fv = front_at_[e.v];
      if (fu >= 0) df += delta_of(front_[fu]);
      if (fv >= 0 && fv != fu) df += delta_of(front_[fv]);
      double de = 0.0;
      for (int slot = ext_head_[e.u]; slot >= 0; slot = ext_next_[slot]) de += delta_of(ext_[slot / 2]);
      for (int slot = ext_head_[e.v]; slot >= 0; slot = ext_next_[slot]) {
        const int gate = ext_[slot / 2];
        const int other = m.phys(ops[gate][1 - slot % 2]);
        if (other != e.u) de += delta_of(gate);
      }
      const double s = combine_score(std::max(decay_[e.u], decay_[e.v]), front_sum + df, front_.size(),
                                     ext_sum + de, ext_.size(), cfg.extended_weight);
      scores_[c] = s;
      best = std::min(best, s);
    }

    const double tol = 1e-10 * std::max(1.0, std::abs(best));
    ties_.clear();
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      if (scores_[c] <= best + tol) ties_.push_back(static_cast<int>(c));
    }
    const Edge chosen = candidates_[ties_[rng.below(ties_.size())]];

    for (int f : front_) {
      front_at_[m.phys(ops[f][0])] = -1;
      front_at_[m.phys(ops[f][1])] = -1;
    }
    for (int gate : ext_) {
      ext_head_[m.phys(ops[gate][0])] = -1;
      ext_head_[m.phys(ops[gate][1])] = -1;
    }
    return chosen;
  }

  const RoutingProblem* problem_ = nullptr;
  const CouplingGraph* g_ = nullptr;
  Mapping* layout_ = nullptr;
  std::vector<ScheduleEntry>* schedule_ = nullptr;
  std::vector<int> remaining_;
  std::deque<int> ready_;
  std::vector<int> front_;
  std::vector<int> ext_;
  std::vector<int> bfs_;
  std::vector<double> decay_;
  std::vector<int> front_at_;
  std::vector<int> ext_head_;
  std::vector<int> ext_next_;
  std::vector<std::uint32_t> gate_stamp_;
  std::vector<std::uint32_t> edge_stamp_;
  std::uint32_t stamp_ = 0;
  std::uint32_t edge_round_ = 0;
  std::vector<Edge> candidates_;
  std::vector<double> scores_;
  std::vector<int> ties_;
  int swap_count_ = 0;
};

inline void check_routable(const Circuit& c, const CouplingGraph& g) {
  if (c.num_qubits() > g.num_physical()) {
    throw InfeasibleError("circuit has " + std::to_string(c.num_qubits()) + " qubits but the device has " +
                          std::to_string(g.num_physical()));
  }
  if (!g.connected()) throw InfeasibleError("coupling graph is disconnected");
}

inline void check_mapping(const Mapping& m, const Circuit& c, const CouplingGraph& g) {
  if (m.num_program() != c.num_qubits() || m.num_physical() != g.num_physical()) {
    throw std::invalid_argument("mapping size does not match circuit and device");
  }
}

/// Forward, reverse, forward. Returns the last pass's initial mapping and
/// fills `schedule` with that pass's output.
struct TrialOutcome {
  Mapping initial;
  Mapping final_mapping;
  std::vector<ScheduleEntry> schedule;
  int swaps = 0;
};

inline void run_bidirectional(const RoutingProblem& fwd, const RoutingProblem& rev, const CouplingGraph& g,
                              const Mapping& start, const RouterConfig& cfg, std::uint64_t trial_seed,
                              SabrePass& pass, TrialOutcome& out) {
  Rng rng(trial_seed);
  Mapping layout = start;
  pass.run(fwd, g, layout, cfg, rng, nullptr);
  pass.run(rev, g, layout, cfg, rng, nullptr);
  out.initial = layout;
  out.schedule.clear();
  pass.run(fwd, g, layout, cfg, rng, &out.schedule);
  out.final_mapping = std::move(layout);
  out.swaps = pass.swap_count();
}

}  // namespace detail

/// Single forward pass from f0.
inline CompiledCircuit route_once(const Circuit& c, const CouplingGraph& g, const Mapping& f0,
                                  const RouterConfig& cfg = {}) {
  cfg.validate();
  detail::check_routable(c, g);
  detail::check_mapping(f0, c, g);
  const detail::RoutingProblem problem(c);
  detail::SabrePass pass;
  Rng rng(mix_seed(cfg.seed, 0));
  CompiledCircuit out;
  out.initial_mapping = f0;
  Mapping layout = f0;
  pass.run(problem, g, layout, cfg, rng, &out.schedule);
  out.final_mapping = std::move(layout);
  out.swap_count = pass.swap_count();
  out.depth_unit = schedule_depth(c, problem.dag, f0, out.schedule, SwapModel::Unit);
  out.depth_cx3 = schedule_depth(c, problem.dag, f0, out.schedule, SwapModel::Cx3);
  return out;
}

struct RouteResult {
  Mapping mapping;
  CompiledCircuit compiled;
  /// Index of the winning trial: seeds first, then random trials.
  int trial = -1;
};

/// Best of bidirectional trials from each seed mapping and from
/// `random_trials` random injections, ranked by (swaps, unit depth, trial
/// index). Trial t uses seed mix_seed(cfg.seed, t), so results do not depend
/// on `jobs`.
inline RouteResult route_best_of(const Circuit& c, const CouplingGraph& g, const std::vector<Mapping>& seeds,
                                 int random_trials, const RouterConfig& cfg = {}, int jobs = 1) {
  cfg.validate();
  detail::check_routable(c, g);
  if (random_trials < 0) throw std::invalid_argument("random_trials must be >= 0");
  if (seeds.empty() && random_trials == 0) throw std::invalid_argument("route_best_of needs at least one trial");
  for (const auto& s : seeds) detail::check_mapping(s, c, g);

  const detail::RoutingProblem fwd(c);
  const detail::RoutingProblem rev(c.reversed());
  const int total = static_cast<int>(seeds.size()) + random_trials;
  const int workers = std::clamp(jobs, 1, total);

  struct Best {
    int swaps = std::numeric_limits<int>::max();
    int depth = std::numeric_limits<int>::max();
    int trial = -1;
    detail::TrialOutcome outcome;
  };
  std::vector<Best> bests(workers);

  auto work = [&](int worker) {
    detail::SabrePass pass;
    detail::TrialOutcome trial;
    Best& best = bests[worker];
    for (int t = worker; t < total; t += workers) {
      const auto trial_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
      Mapping start;
      if (t < static_cast<int>(seeds.size())) {
        start = seeds[t];
      } else {
        Rng init(mix_seed(trial_seed, 0x696e6974ULL));
        start = Mapping::random(c.num_qubits(), g.num_physical(), init);
      }
      detail::run_bidirectional(fwd, rev, g, start, cfg, trial_seed, pass, trial);
      if (trial.swaps > best.swaps) continue;
      const int d = schedule_depth(c, fwd.dag, trial.initial, trial.schedule, SwapModel::Unit);
      if (std::tie(trial.swaps, d, t) < std::tie(best.swaps, best.depth, best.trial) || best.trial < 0) {
        best.swaps = trial.swaps;
        best.depth = d;
        best.trial = t;
        std::swap(best.outcome, trial);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
  }

  const Best* winner = nullptr;
  for (const auto& b : bests) {
    if (b.trial < 0) continue;
    if (!winner || std::tie(b.swaps, b.depth, b.trial) < std::tie(winner->swaps, winner->depth, winner->trial)) {
      winner = &b;
    }
  }
  RouteResult result;
  result.trial = winner->trial;
  result.mapping = winner->outcome.initial;
  auto& cc = result.compiled;
  cc.initial_mapping = winner->outcome.initial;
  cc.final_mapping = winner->outcome.final_mapping;
  cc.schedule = winner->outcome.schedule;
  cc.swap_count = winner->swaps;
  cc.depth_unit = winner->depth;
  cc.depth_cx3 = schedule_depth(c, fwd.dag, cc.initial_mapping, cc.schedule, SwapModel::Cx3);
  return result;
}

}  // namespace mlsabre
