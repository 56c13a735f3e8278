#include "xtrapulp/gen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "xtrapulp/random.hpp"

namespace xtrapulp {

namespace {

constexpr std::uint64_t kBlockPairs = 1u << 14;

// Fills out[begin, end) block by block. fill(block, rng, first, last) writes
// out[first, last) for one block.
void run_blocks(std::uint64_t total, std::uint64_t block_size, unsigned workers,
                const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fill) {
  const std::uint64_t blocks = (total + block_size - 1) / block_size;
  const auto one = [&](std::uint64_t b) {
    fill(b, b * block_size, std::min(total, (b + 1) * block_size));
  };
  if (workers <= 1 || blocks <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) one(b);
    return;
  }
  std::vector<std::jthread> pool;
  const unsigned w = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
  for (unsigned i = 0; i < w; ++i) {
    pool.emplace_back([&, i] {
      for (std::uint64_t b = i; b < blocks; b += w) one(b);
    });
  }
}

}  // namespace

std::string_view gen_kind_name(GenKind kind) {
  switch (kind) {
    case GenKind::Rmat: return "rmat";
    case GenKind::Er: return "er";
    case GenKind::RandHd: return "randhd";
  }
  return "unknown";
}

GenKind parse_gen_kind(std::string_view name) {
  if (name == "rmat") return GenKind::Rmat;
  if (name == "er") return GenKind::Er;
  if (name == "randhd") return GenKind::RandHd;
  throw ConfigError("unknown generator '" + std::string(name) + "'");
}

void GenSpec::validate() const {
  if (n < 2) throw ConfigError("generator needs n >= 2");
  if (d_avg < 1) throw ConfigError("generator needs d_avg >= 1");
  if (std::min({a, b, c, d}) < 0.0 || std::abs(a + b + c + d - 1.0) > 1e-9) {
    throw ConfigError("R-MAT probabilities must be non-negative and sum to 1");
  }
  if (kind == GenKind::Rmat && !std::has_single_bit(n)) {
    throw ConfigError("rmat needs n to be a power of two, got " + std::to_string(n));
  }
  if (kind == GenKind::RandHd && (n <= 2 * d_avg || d_avg < 2)) {
    // With d_avg == 1 the open interval around k holds only k itself.
    throw ConfigError("randhd needs 2 <= d_avg and n > 2 * d_avg");
  }
}

EdgeList gen_rmat(const GenSpec& spec, unsigned workers) {
  spec.validate();
  const int scale = std::countr_zero(spec.n);
  const double ab = spec.a + spec.b;
  const double a_in_ab = ab > 0.0 ? spec.a / ab : 0.0;
  const double c_in_cd = (spec.c + spec.d) > 0.0 ? spec.c / (spec.c + spec.d) : 0.0;
  EdgeList out(spec.n * spec.d_avg / 2);
  run_blocks(out.size(), kBlockPairs, workers,
             [&](std::uint64_t block, std::uint64_t first, std::uint64_t last) {
               Rng rng = make_rng(spec.seed, Stream::Generator, block);
               for (std::uint64_t e = first; e < last; ++e) {
                 vid_t u = 0, v = 0;
                 for (int level = 0; level < scale; ++level) {
                   const bool down = uniform_unit(rng) >= ab;
                   const bool right = uniform_unit(rng) >= (down ? c_in_cd : a_in_ab);
                   u = (u << 1) | static_cast<vid_t>(down);
                   v = (v << 1) | static_cast<vid_t>(right);
                 }
                 out[e] = {u, v};
               }
             });
  return out;
}

EdgeList gen_er(const GenSpec& spec, unsigned workers) {
  spec.validate();
  EdgeList out(spec.n * spec.d_avg / 2);
  run_blocks(out.size(), kBlockPairs, workers,
             [&](std::uint64_t block, std::uint64_t first, std::uint64_t last) {
               Rng rng = make_rng(spec.seed, Stream::Generator, block);
               for (std::uint64_t e = first; e < last; ++e) {
                 const vid_t u = uniform_below(rng, spec.n);
                 vid_t v = uniform_below(rng, spec.n - 1);
                 if (v >= u) ++v;
                 out[e] = {std::min(u, v), std::max(u, v)};
               }
             });
  return out;
}

EdgeList gen_randhd(const GenSpec& spec, unsigned workers) {
  spec.validate();
  const std::uint64_t d = spec.d_avg;
  const std::uint64_t block_vertices = std::max<std::uint64_t>(1, kBlockPairs / d);
  EdgeList out(spec.n * d);
  run_blocks(spec.n, block_vertices, workers,
             [&](std::uint64_t block, std::uint64_t first, std::uint64_t last) {
               Rng rng = make_rng(spec.seed, Stream::Generator, block);
               for (vid_t k = first; k < last; ++k) {
                 const vid_t lo = k + 1 > d ? k + 1 - d : 0;
                 const vid_t hi = std::min<vid_t>(spec.n - 1, k + d - 1);
                 for (std::uint64_t j = 0; j < d; ++j) {
                   vid_t v = lo + uniform_below(rng, hi - lo);
                   if (v >= k) ++v;
                   out[k * d + j] = {k, v};
                 }
               }
             });
  return out;
}

EdgeList generate(const GenSpec& spec, unsigned workers) {
  switch (spec.kind) {
    case GenKind::Rmat: return gen_rmat(spec, workers);
    case GenKind::Er: return gen_er(spec, workers);
    case GenKind::RandHd: return gen_randhd(spec, workers);
  }
  throw ConfigError("unknown generator");
}

}  // namespace xtrapulp
