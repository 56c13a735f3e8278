#include "xtrapulp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xtrapulp/random.hpp"

namespace xtrapulp {

GlobalGraph::GlobalGraph(std::vector<std::uint64_t> offsets, std::vector<vid_t> adjacency)
    : offsets_(std::move(offsets)), adjacency_(std::move(adjacency)) {
  if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != adjacency_.size() ||
      adjacency_.size() % 2 != 0) {
    throw InputError("malformed CSR arrays");
  }
}

std::uint64_t GlobalGraph::max_degree() const {
  std::uint64_t best = 0;
  for (vid_t v = 0; v < num_vertices(); ++v) best = std::max(best, degree(v));
  return best;
}

double GlobalGraph::average_degree() const {
  if (num_vertices() == 0) return 0.0;
  return static_cast<double>(adjacency_.size()) / static_cast<double>(num_vertices());
}

EdgeList GlobalGraph::edges() const {
  // Parallel copies of (u, v) appear k times in both lists; emitting from the
  // lower endpoint only keeps each copy exactly once.
  EdgeList out;
  out.reserve(num_edges());
  for (vid_t u = 0; u < num_vertices(); ++u) {
    for (vid_t v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

GlobalGraph build_csr(std::span<const Edge> edges, vid_t n, bool dedup) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (u >= n || v >= n) {
      throw InputError("edge #" + std::to_string(i) + " (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") has an endpoint outside [0, " +
                       std::to_string(n) + ")");
    }
  }

  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    ++offsets[e.u + 1];
    ++offsets[e.v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<vid_t> adjacency(offsets[n]);
  std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    adjacency[fill[e.u]++] = e.v;
    adjacency[fill[e.v]++] = e.u;
  }
  for (vid_t v = 0; v < n; ++v) {
    std::sort(adjacency.begin() + offsets[v], adjacency.begin() + offsets[v + 1]);
  }

  if (dedup) {
    std::vector<std::uint64_t> compact_offsets(n + 1, 0);
    std::size_t out = 0;
    for (vid_t v = 0; v < n; ++v) {
      const auto begin = adjacency.begin() + offsets[v];
      const auto end = adjacency.begin() + offsets[v + 1];
      const auto last = std::unique(begin, end);
      out = static_cast<std::size_t>(
          std::copy(begin, last, adjacency.begin() + out) - adjacency.begin());
      compact_offsets[v + 1] = out;
    }
    adjacency.resize(out);
    offsets = std::move(compact_offsets);
  }
  return GlobalGraph(std::move(offsets), std::move(adjacency));
}

Distribution Distribution::block(vid_t n, int num_tasks) {
  if (num_tasks < 1) throw ConfigError("task count must be at least 1");
  Distribution d;
  d.kind_ = DistKind::Block;
  d.num_tasks_ = num_tasks;
  d.n_ = n;
  const auto t = static_cast<vid_t>(num_tasks);
  d.base_ = n / t;
  d.rem_ = n % t;
  d.cuts_.resize(t + 1);
  for (vid_t i = 0; i <= t; ++i) d.cuts_[i] = i * d.base_ + std::min(i, d.rem_);
  return d;
}

Distribution Distribution::random_hash(vid_t n, int num_tasks, std::uint64_t seed) {
  if (num_tasks < 1) throw ConfigError("task count must be at least 1");
  Distribution d;
  d.kind_ = DistKind::RandomHash;
  d.num_tasks_ = num_tasks;
  d.n_ = n;
  d.seed_ = seed;
  d.hash_key_ = derive_seed(seed, Stream::Distribution);
  return d;
}

int Distribution::owner(vid_t v) const {
  if (kind_ == DistKind::RandomHash) {
    return static_cast<int>(mix64(v ^ hash_key_) % static_cast<std::uint64_t>(num_tasks_));
  }
  const vid_t big = rem_ * (base_ + 1);
  if (v < big) return static_cast<int>(v / (base_ + 1));
  return static_cast<int>(rem_ + (v - big) / base_);
}

std::optional<lid_t> LocalGraph::local_id(vid_t g) const {
  const auto it = global_to_local_.find(g);
  if (it == global_to_local_.end()) return std::nullopt;
  return it->second;
}

std::vector<LocalGraph> distribute(const GlobalGraph& g, const Distribution& dist) {
  const vid_t n = g.num_vertices();
  const int num_tasks = dist.num_tasks();
  if (static_cast<vid_t>(num_tasks) > n) {
    throw ConfigError("task count " + std::to_string(num_tasks) + " exceeds vertex count " +
                      std::to_string(n));
  }

  std::vector<std::vector<vid_t>> owned(num_tasks);
  for (vid_t v = 0; v < n; ++v) owned[dist.owner(v)].push_back(v);

  std::vector<LocalGraph> out;
  out.reserve(num_tasks);
  for (int t = 0; t < num_tasks; ++t) {
    LocalGraph lg(dist);
    lg.task_ = t;
    lg.num_owned_ = static_cast<lid_t>(owned[t].size());
    lg.local_to_global_ = owned[t];

    std::vector<vid_t> ghosts;
    for (vid_t v : owned[t]) {
      for (vid_t u : g.neighbors(v)) {
        if (dist.owner(u) != t) ghosts.push_back(u);
      }
    }
    std::sort(ghosts.begin(), ghosts.end());
    ghosts.erase(std::unique(ghosts.begin(), ghosts.end()), ghosts.end());
    lg.local_to_global_.insert(lg.local_to_global_.end(), ghosts.begin(), ghosts.end());

    lg.global_to_local_.reserve(lg.local_to_global_.size());
    for (lid_t i = 0; i < lg.local_to_global_.size(); ++i) {
      lg.global_to_local_.emplace(lg.local_to_global_[i], i);
    }

    lg.offsets_.assign(lg.num_owned_ + 1, 0);
    for (lid_t i = 0; i < lg.num_owned_; ++i) {
      lg.offsets_[i + 1] = lg.offsets_[i] + g.degree(owned[t][i]);
    }
    lg.adjacency_.reserve(lg.offsets_.back());
    for (vid_t v : owned[t]) {
      for (vid_t u : g.neighbors(v)) lg.adjacency_.push_back(lg.global_to_local_.at(u));
    }

    lg.ghost_degree_.reserve(ghosts.size());
    lg.ghost_owner_.reserve(ghosts.size());
    for (vid_t u : ghosts) {
      lg.ghost_degree_.push_back(g.degree(u));
      lg.ghost_owner_.push_back(dist.owner(u));
    }
    out.push_back(std::move(lg));
  }
  return out;
}

}  // namespace xtrapulp
