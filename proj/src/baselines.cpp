#include "xtrapulp/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xtrapulp/random.hpp"

namespace xtrapulp {

namespace {

void check_parts(vid_t n, part_t p) {
  if (p < 1) throw ConfigError("part count must be at least 1");
  if (static_cast<vid_t>(p) > n) {
    throw ConfigError("part count " + std::to_string(p) + " exceeds vertex count " +
                      std::to_string(n));
  }
}

}  // namespace

std::vector<part_t> random_partition(vid_t n, part_t p, std::uint64_t seed) {
  check_parts(n, p);
  Rng rng = make_rng(seed, Stream::Baseline);
  std::vector<part_t> parts(n);
  std::vector<std::uint64_t> sizes(p, 0);
  for (auto& x : parts) {
    x = static_cast<part_t>(uniform_below(rng, static_cast<std::uint64_t>(p)));
    ++sizes[x];
  }
  if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
    std::iota(parts.begin(), parts.begin() + p, 0);
  }
  return parts;
}

std::vector<part_t> vertex_block_partition(vid_t n, part_t p) {
  check_parts(n, p);
  std::vector<part_t> parts(n);
  const vid_t base = n / p;
  const vid_t extra = n % p;
  vid_t v = 0;
  for (part_t i = 0; i < p; ++i) {
    const vid_t size = base + (static_cast<vid_t>(i) < extra ? 1 : 0);
    for (vid_t j = 0; j < size; ++j) parts[v++] = i;
  }
  return parts;
}

std::vector<part_t> edge_block_partition(const GlobalGraph& g, part_t p) {
  const vid_t n = g.num_vertices();
  check_parts(n, p);
  const std::uint64_t mass = 2 * g.num_edges();
  if (mass == 0) return vertex_block_partition(n, p);

  std::vector<part_t> parts(n);
  part_t part = 0;
  std::uint64_t cum = 0;
  for (vid_t v = 0; v < n; ++v) {
    parts[v] = part;
    cum += g.degree(v);
    if (part == p - 1) continue;
    const bool reached = cum * static_cast<std::uint64_t>(p) >=
                         static_cast<std::uint64_t>(part + 1) * mass;
    const bool forced = n - 1 - v == static_cast<vid_t>(p - 1 - part);
    if (reached || forced) ++part;
  }
  return parts;
}

}  // namespace xtrapulp
