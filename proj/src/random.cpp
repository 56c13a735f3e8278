#include "xtrapulp/random.hpp"

#include <cassert>

namespace xtrapulp {

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (static_cast<std::uint64_t>(stream) * 0xd6e8feb86659fd93ULL));
  return mix64(h ^ mix64(index));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  assert(bound > 0);
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace xtrapulp
