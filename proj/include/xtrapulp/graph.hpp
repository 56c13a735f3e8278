#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "xtrapulp/types.hpp"

namespace xtrapulp {

struct Edge {
  vid_t u;
  vid_t v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

/// Whole-graph CSR. Every undirected edge is stored in both endpoint lists,
/// so adjacency().size() == 2 * num_edges(). Parallel edges are kept.
class GlobalGraph {
 public:
  GlobalGraph() : offsets_{0} {}
  GlobalGraph(std::vector<std::uint64_t> offsets, std::vector<vid_t> adjacency);

  vid_t num_vertices() const { return offsets_.size() - 1; }
  std::uint64_t num_edges() const { return adjacency_.size() / 2; }

  std::uint64_t degree(vid_t v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const vid_t> neighbors(vid_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::uint64_t max_degree() const;
  double average_degree() const;

  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  const std::vector<vid_t>& adjacency() const { return adjacency_; }

  /// Each undirected edge once, as (u, v) with u <= v, in CSR order.
  EdgeList edges() const;

  friend bool operator==(const GlobalGraph&, const GlobalGraph&) = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<vid_t> adjacency_;
};

/// Builds a symmetric CSR over n vertices. Self-loops are dropped; duplicate
/// edges are kept unless `dedup` is set. Neighbor lists are sorted.
/// Throws InputError naming the first pair with an ID outside [0, n).
GlobalGraph build_csr(std::span<const Edge> edges, vid_t n, bool dedup = false);

enum class DistKind { Block, RandomHash };

/// Assignment of vertices to T tasks. owner() is a pure function of the
/// vertex ID and this object.
class Distribution {
 public:
  static Distribution block(vid_t n, int num_tasks);
  static Distribution random_hash(vid_t n, int num_tasks, std::uint64_t seed);

  DistKind kind() const { return kind_; }
  int num_tasks() const { return num_tasks_; }
  vid_t num_vertices() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  /// Block only: task t owns [cut_points()[t], cut_points()[t+1]).
  const std::vector<vid_t>& cut_points() const { return cuts_; }

  int owner(vid_t v) const;

 private:
  Distribution() = default;

  DistKind kind_ = DistKind::Block;
  int num_tasks_ = 1;
  vid_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t hash_key_ = 0;
  vid_t base_ = 0;
  vid_t rem_ = 0;
  std::vector<vid_t> cuts_;
};

/// One task's view of the graph: owned vertices with their full adjacency
/// (neighbor entries are local IDs) plus one-hop ghost vertices.
/// Owned vertices occupy local IDs [0, num_owned()); ghosts follow.
class LocalGraph {
 public:
  int task() const { return task_; }
  int num_tasks() const { return dist_.num_tasks(); }
  const Distribution& distribution() const { return dist_; }

  lid_t num_owned() const { return num_owned_; }
  lid_t num_ghosts() const { return static_cast<lid_t>(local_to_global_.size()) - num_owned_; }
  lid_t num_local() const { return static_cast<lid_t>(local_to_global_.size()); }
  bool is_owned(lid_t v) const { return v < num_owned_; }

  vid_t global_id(lid_t v) const { return local_to_global_[v]; }
  std::optional<lid_t> local_id(vid_t g) const;
  const std::vector<vid_t>& local_to_global() const { return local_to_global_; }

  std::span<const lid_t> neighbors(lid_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  /// Global degree; valid for owned and ghost vertices alike.
  std::uint64_t degree(lid_t v) const {
    return is_owned(v) ? offsets_[v + 1] - offsets_[v] : ghost_degree_[v - num_owned_];
  }
  /// Owning task of a local vertex.
  int owner(lid_t v) const { return is_owned(v) ? task_ : ghost_owner_[v - num_owned_]; }

  /// Number of owned-side adjacency entries (sum of owned degrees).
  std::uint64_t num_arcs() const { return adjacency_.size(); }

 private:
  friend std::vector<LocalGraph> distribute(const GlobalGraph&, const Distribution&);

  explicit LocalGraph(const Distribution& dist) : dist_(dist) {}

  int task_ = 0;
  Distribution dist_;
  lid_t num_owned_ = 0;
  std::vector<vid_t> local_to_global_;
  std::unordered_map<vid_t, lid_t> global_to_local_;
  std::vector<std::uint64_t> offsets_;
  std::vector<lid_t> adjacency_;
  std::vector<std::uint64_t> ghost_degree_;
  std::vector<int> ghost_owner_;
};

/// Splits g into one LocalGraph per task. Throws ConfigError if T > n.
std::vector<LocalGraph> distribute(const GlobalGraph& g, const Distribution& dist);

}  // namespace xtrapulp
