#pragma once

// Brute-force reference computations used by the tests. These work from raw
// edge lists and never call into the library's metrics code.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "xtrapulp/bsp.hpp"
#include "xtrapulp/graph.hpp"
#include "xtrapulp/partition.hpp"

namespace oracle {

using xtrapulp::Edge;
using xtrapulp::part_t;
using xtrapulp::vid_t;

inline std::vector<Edge> without_loops(const std::vector<Edge>& edges) {
  std::vector<Edge> out;
  for (const auto& e : edges) {
    if (e.u != e.v) out.push_back(e);
  }
  return out;
}

struct Counts {
  std::vector<std::int64_t> vertices, internal, cut;
};

inline Counts counts(const std::vector<Edge>& edges, const std::vector<part_t>& parts, part_t p) {
  Counts c{std::vector<std::int64_t>(p), std::vector<std::int64_t>(p),
           std::vector<std::int64_t>(p)};
  for (part_t x : parts) c.vertices[x] += 1;
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    const part_t a = parts[e.u];
    const part_t b = parts[e.v];
    if (a == b) {
      c.internal[a] += 1;
    } else {
      c.cut[a] += 1;
      c.cut[b] += 1;
    }
  }
  return c;
}

inline std::uint64_t edge_cut(const std::vector<Edge>& edges, const std::vector<part_t>& parts) {
  std::uint64_t cut = 0;
  for (const auto& e : edges) cut += (e.u != e.v && parts[e.u] != parts[e.v]) ? 1 : 0;
  return cut;
}

// Max over parts of cut-edge incidences, lowest part on ties.
inline std::pair<std::uint64_t, part_t> max_part_cut(const std::vector<Edge>& edges,
                                                     const std::vector<part_t>& parts, part_t p) {
  std::uint64_t best = 0;
  part_t arg = 0;
  for (part_t i = 0; i < p; ++i) {
    std::uint64_t c = 0;
    for (const auto& e : edges) {
      if (e.u == e.v) continue;
      if (parts[e.u] != parts[e.v] && (parts[e.u] == i || parts[e.v] == i)) ++c;
    }
    if (c > best) {
      best = c;
      arg = i;
    }
  }
  return {best, arg};
}

inline std::pair<double, double> imbalance(const std::vector<Edge>& edges,
                                           const std::vector<part_t>& parts, part_t p) {
  const auto c = counts(edges, parts, p);
  std::uint64_t m = 0;
  for (const auto& e : edges) m += e.u != e.v;
  const double n = static_cast<double>(parts.size());
  const double vmax = static_cast<double>(*std::max_element(c.vertices.begin(), c.vertices.end()));
  const double emax = static_cast<double>(*std::max_element(c.internal.begin(), c.internal.end()));
  return {vmax * p / n, m == 0 ? 0.0 : emax * p / static_cast<double>(m)};
}

// Ghost labels must equal the owner's label.
inline bool ghosts_coherent(const xtrapulp::Partitioner& pt) {
  for (int t = 0; t < pt.num_tasks(); ++t) {
    const auto& lg = pt.graph(t);
    const auto parts = pt.parts(t);
    for (xtrapulp::lid_t g = lg.num_owned(); g < lg.num_local(); ++g) {
      const vid_t gid = lg.global_id(g);
      const int owner = lg.owner(g);
      const auto& og = pt.graph(owner);
      const auto lid = og.local_id(gid);
      if (!lid || !og.is_owned(*lid)) return false;
      if (pt.parts(owner)[*lid] != parts[g]) return false;
    }
  }
  return true;
}

inline std::vector<part_t> owned_labels(const xtrapulp::Partitioner& pt, vid_t n) {
  std::vector<part_t> out(n, -1);
  for (int t = 0; t < pt.num_tasks(); ++t) {
    const auto& lg = pt.graph(t);
    for (xtrapulp::lid_t v = 0; v < lg.num_owned(); ++v) out[lg.global_id(v)] = pt.parts(t)[v];
  }
  return out;
}

// Every task's ledger sizes equal a recount from the owned labels.
inline bool ledger_honest(const xtrapulp::Partitioner& pt, const std::vector<Edge>& edges,
                          vid_t n) {
  const auto labels = owned_labels(pt, n);
  const auto c = counts(edges, labels, pt.config().parts);
  for (int t = 0; t < pt.num_tasks(); ++t) {
    const auto& l = pt.ledger(t);
    if (l.size_v != c.vertices || l.size_e != c.internal || l.size_c != c.cut) return false;
  }
  return true;
}

// Pairs each task should receive: one copy of (v, w) per distinct
// neighbouring task of v other than its owner. Sorted per receiver.
inline std::vector<std::vector<xtrapulp::UpdatePair>> expected_delivery(
    const std::vector<Edge>& edges, const xtrapulp::Distribution& dist,
    const std::vector<xtrapulp::UpdateQueue>& queues) {
  std::map<vid_t, std::set<int>> nbr_tasks;
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    nbr_tasks[e.u].insert(dist.owner(e.v));
    nbr_tasks[e.v].insert(dist.owner(e.u));
  }
  std::vector<std::vector<xtrapulp::UpdatePair>> out(dist.num_tasks());
  for (const auto& q : queues) {
    for (const auto& pair : q) {
      std::set<int> seen;
      for (int t : nbr_tasks[pair.vertex]) {
        if (t != dist.owner(pair.vertex)) out[t].push_back(pair);
      }
    }
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

// Exact eccentricities by BFS from every vertex of the largest component.
inline std::uint64_t exact_diameter(const std::vector<std::vector<vid_t>>& adj) {
  std::uint64_t best = 0;
  for (vid_t s = 0; s < adj.size(); ++s) {
    std::vector<std::int64_t> dist(adj.size(), -1);
    std::deque<vid_t> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      const vid_t u = q.front();
      q.pop_front();
      for (vid_t w : adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          best = std::max<std::uint64_t>(best, dist[w]);
          q.push_back(w);
        }
      }
    }
  }
  return best;
}

}  // namespace oracle
