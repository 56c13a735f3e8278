#pragma once

#include <cstdint>
#include <string_view>

#include "xtrapulp/graph.hpp"

namespace xtrapulp {

enum class GenKind { Rmat, Er, RandHd };

std::string_view gen_kind_name(GenKind kind);
/// Throws ConfigError on an unknown name.
GenKind parse_gen_kind(std::string_view name);

struct GenSpec {
  GenKind kind = GenKind::Rmat;
  vid_t n = 1024;
  std::uint64_t d_avg = 16;
  // R-MAT quadrant probabilities.
  double a = 0.57, b = 0.19, c = 0.19, d = 0.05;
  std::uint64_t seed = 0;

  /// n >= 2, d_avg >= 1, a+b+c+d == 1 (1e-9), n a power of two for rmat,
  /// n > 2 * d_avg >= 4 for randhd. Throws ConfigError.
  void validate() const;
};

/// Pairs are produced in fixed-size blocks, each seeded from (seed, block),
/// so the output does not depend on `workers`.

/// n * d_avg / 2 pairs by recursive quadrant descent.
EdgeList gen_rmat(const GenSpec& spec, unsigned workers = 1);
/// n * d_avg / 2 uniform pairs with u != v, emitted as (min, max).
EdgeList gen_er(const GenSpec& spec, unsigned workers = 1);
/// For every k, d_avg pairs (k, v) with v uniform in (k - d_avg, k + d_avg)
/// clipped to [0, n), v != k. n * d_avg pairs in total.
EdgeList gen_randhd(const GenSpec& spec, unsigned workers = 1);

/// Dispatches on spec.kind after validate().
EdgeList generate(const GenSpec& spec, unsigned workers = 1);

}  // namespace xtrapulp
