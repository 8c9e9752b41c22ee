#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mlsabre {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  std::int64_t weight = 0;
};

struct WeightedGraph {
  int num_nodes = 0;
  std::vector<WeightedEdge> edges;
};

struct Matching {
  /// Matched pairs with u < v, sorted.
  std::vector<std::pair<int, int>> edges;
  /// mate[v] is v's partner or -1.
  std::vector<int> mate;

  std::size_t size() const noexcept { return edges.size(); }
};

namespace detail {

/// Edmonds' weighted blossom algorithm with the primal-dual update scheme,
/// O(n^3). Weights must be non-negative integers and are doubled internally
/// so every dual stays integral. Returns mate[v] (or -1).
class BlossomMatcher {
 public:
  BlossomMatcher(int num_nodes, std::vector<WeightedEdge> edges)
      : nvertex_(num_nodes), edges_(std::move(edges)) {}

  std::vector<int> solve() {
    const int n = nvertex_;
    const int nedge = static_cast<int>(edges_.size());
    if (n == 0 || nedge == 0) return std::vector<int>(n, -1);

    std::int64_t maxweight = 0;
    for (auto& e : edges_) {
      e.weight *= 2;
      maxweight = std::max(maxweight, e.weight);
    }
    endpoint_.resize(2 * nedge);
    for (int p = 0; p < 2 * nedge; ++p) endpoint_[p] = (p % 2 == 0) ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(n, {});
    for (int k = 0; k < nedge; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(n, -1);
    label_.assign(2 * n, 0);
    labelend_.assign(2 * n, -1);
    inblossom_.resize(n);
    for (int i = 0; i < n; ++i) inblossom_[i] = i;
    blossomparent_.assign(2 * n, -1);
    blossomchilds_.assign(2 * n, {});
    blossombase_.assign(2 * n, -1);
    for (int i = 0; i < n; ++i) blossombase_[i] = i;
    blossomendps_.assign(2 * n, {});
    bestedge_.assign(2 * n, -1);
    blossombestedges_.assign(2 * n, {});
    has_bestedges_.assign(2 * n, false);
    unusedblossoms_.clear();
    for (int b = n; b < 2 * n; ++b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * n, 0);
    for (int i = 0; i < n; ++i) dualvar_[i] = maxweight;
    allowedge_.assign(nedge, false);

    for (int stage = 0; stage < n; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = n; b < 2 * n; ++b) {
        blossombestedges_[b].clear();
        has_bestedges_[b] = false;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();
      for (int v = 0; v < n; ++v) {
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
      }
      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          const int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[v]) {
            const int k = p / 2;
            const int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            std::int64_t kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              const int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = 1;
        std::int64_t delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n);
        int deltaedge = -1;
        int deltablossom = -1;
        for (int v = 0; v < n; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const std::int64_t d = slack(bestedge_[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * n; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const std::int64_t d = slack(bestedge_[b]) / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = n; b < 2 * n; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 && dualvar_[b] < delta) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        for (int v = 0; v < n; ++v) {
          if (label_[inblossom_[v]] == 1) {
            dualvar_[v] -= delta;
          } else if (label_[inblossom_[v]] == 2) {
            dualvar_[v] += delta;
          }
        }
        for (int b = n; b < 2 * n; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) {
              dualvar_[b] += delta;
            } else if (label_[b] == 2) {
              dualvar_[b] -= delta;
            }
          }
        }
        if (deltatype == 1) {
          break;
        } else if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          int i = edges_[deltaedge].u;
          int j = edges_[deltaedge].v;
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          queue_.push_back(edges_[deltaedge].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (int b = n; b < 2 * n; ++b) {
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
          expand_blossom(b, true);
        }
      }
    }
    std::vector<int> result(n, -1);
    for (int v = 0; v < n; ++v) {
      if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
    }
    return result;
  }

 private:
  std::int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
  }

  static int wrap(int j, int size) { return ((j % size) + size) % size; }

  void blossom_leaves(int b, std::vector<int>& out) const {
    if (b < nvertex_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[b]) blossom_leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    blossom_leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      blossom_leaves(b, queue_);
    } else if (t == 2) {
      const int base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (int leaf : leaves(b)) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }
    std::vector<int> bestedgeto(2 * nvertex_, -1);
    for (int child : path) {
      std::vector<std::vector<int>> nblists;
      if (!has_bestedges_[child]) {
        for (int leaf : leaves(child)) {
          std::vector<int> list;
          for (int p : neighbend_[leaf]) list.push_back(p / 2);
          nblists.push_back(std::move(list));
        }
      } else {
        nblists.push_back(blossombestedges_[child]);
      }
      for (const auto& nblist : nblists) {
        for (int kk : nblist) {
          int i = edges_[kk].u;
          int j = edges_[kk].v;
          if (inblossom_[j] == b) std::swap(i, j);
          const int bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
            bestedgeto[bj] = kk;
          }
        }
      }
      blossombestedges_[child].clear();
      has_bestedges_[child] = false;
      bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int kk : bestedgeto) {
      if (kk != -1) blossombestedges_[b].push_back(kk);
    }
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int kk : blossombestedges_[b]) {
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }
  }

  void expand_blossom(int b, bool endstage) {
    const std::vector<int> childs = blossomchilds_[b];
    for (int s : childs) {
      blossomparent_[s] = -1;
      if (s < nvertex_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (int leaf : leaves(s)) inblossom_[leaf] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      const auto& ch = blossomchilds_[b];
      const auto& ep = blossomendps_[b];
      const int size = static_cast<int>(ch.size());
      const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
      int jstep;
      int endptrick;
      if (j & 1) {
        j -= size;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[ep[wrap(j - endptrick, size)] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[ep[wrap(j - endptrick, size)] / 2] = true;
        j += jstep;
        p = ep[wrap(j - endptrick, size)] ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      int bv = ch[wrap(j, size)];
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (ch[wrap(j, size)] != entrychild) {
        bv = ch[wrap(j, size)];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        int found = -1;
        for (int leaf : leaves(bv)) {
          if (label_[leaf] != 0) {
            found = leaf;
            break;
          }
        }
        if (found >= 0) {
          label_[found] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nvertex_) augment_blossom(t, v);
    auto& ch = blossomchilds_[b];
    auto& ep = blossomendps_[b];
    const int size = static_cast<int>(ch.size());
    const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
      j -= size;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = ch[wrap(j, size)];
      const int p = ep[wrap(j - endptrick, size)] ^ endptrick;
      if (t >= nvertex_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = ch[wrap(j, size)];
      if (t >= nvertex_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
  }

  void augment_matching(int k) {
    const int v = edges_[k].u;
    const int w = edges_[k].v;
    const std::pair<int, int> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
    for (auto [s, p] : starts) {
      while (true) {
        const int bs = inblossom_[s];
        if (bs >= nvertex_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const int t = endpoint_[labelend_[bs]];
        const int bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nvertex_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  int nvertex_;
  std::vector<WeightedEdge> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<std::int64_t> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

/// Validates, merges parallel edges (keeping the heavier one) and orders
/// edges as (min, max) lexicographically; the position in this order is the
/// tie-break rank.
inline std::vector<WeightedEdge> canonical_edges(const WeightedGraph& g) {
  std::vector<WeightedEdge> edges;
  edges.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.num_nodes || e.v >= g.num_nodes) {
      throw std::invalid_argument("matching edge endpoint out of range");
    }
    if (e.u == e.v) throw std::invalid_argument("matching edge is a self-loop");
    if (e.weight < 0) throw std::invalid_argument("matching weights must be non-negative");
    edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.weight > b.weight;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const WeightedEdge& a, const WeightedEdge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  return edges;
}

inline Matching to_matching(int n, const std::vector<int>& mate) {
  Matching m;
  m.mate = mate;
  for (int v = 0; v < n; ++v) {
    if (mate[v] > v) m.edges.emplace_back(v, mate[v]);
  }
  return m;
}

/// Scales each weight by K and adds a rank bonus (E - rank), K larger than the
/// sum of all bonuses, so ties in the primary objective favour edges earlier
/// in canonical order. `shift` is added to weights before scaling.
inline Matching solve_with_tiebreak(const WeightedGraph& g, std::int64_t shift) {
  auto edges = canonical_edges(g);
  const auto m = static_cast<std::int64_t>(edges.size());
  const std::int64_t scale = m * (m + 1) / 2 + 1;
  for (std::int64_t r = 0; r < m; ++r) {
    auto& e = edges[static_cast<std::size_t>(r)];
    e.weight = (e.weight + shift) * scale + (m - r);
  }
  BlossomMatcher matcher(g.num_nodes, std::move(edges));
  return to_matching(g.num_nodes, matcher.solve());
}

}  // namespace detail

/// Maximum total weight, cardinality ignored.
inline Matching max_weight_matching(const WeightedGraph& g) { return detail::solve_with_tiebreak(g, 0); }

/// Among matchings of maximum cardinality, one of maximum weight. Every edge
/// weight is shifted by 1 + sum of weights so that an extra matched edge
/// outweighs any weight difference.
inline Matching max_card_max_weight_matching(const WeightedGraph& g) {
  std::int64_t total = 0;
  for (const auto& e : g.edges) total += std::max<std::int64_t>(e.weight, 0);
  return detail::solve_with_tiebreak(g, 1 + total);
}

}  // namespace mlsabre
