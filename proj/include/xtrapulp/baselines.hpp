#pragma once

#include <cstdint>
#include <vector>

#include "xtrapulp/graph.hpp"

namespace xtrapulp {

/// Uniform i.i.d. parts from (seed, Baseline stream). If some part comes
/// out empty, vertices 0..p-1 are relabelled 0..p-1 and the rest kept.
/// Throws ConfigError when p == 0 or p > n.
std::vector<part_t> random_partition(vid_t n, part_t p, std::uint64_t seed);

/// Contiguous ranges; the first n % p parts get one extra vertex.
std::vector<part_t> vertex_block_partition(vid_t n, part_t p);

/// Contiguous ranges split where cumulative degree first reaches
/// (k+1) * 2m / p. A split is forced when the remaining vertices are just
/// enough to give every remaining part one. Falls back to vertex blocks
/// when the graph has no edges.
std::vector<part_t> edge_block_partition(const GlobalGraph& g, part_t p);

}  // namespace xtrapulp
