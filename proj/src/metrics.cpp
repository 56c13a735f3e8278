#include "xtrapulp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "xtrapulp/random.hpp"

namespace xtrapulp {

void check_partition(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts) {
  if (parts.size() != g.num_vertices()) {
    throw InputError("partition has " + std::to_string(parts.size()) + " entries but graph has " +
                     std::to_string(g.num_vertices()) + " vertices");
  }
  if (num_parts < 1) throw InputError("part count must be at least 1");
  for (std::size_t v = 0; v < parts.size(); ++v) {
    if (parts[v] < 0 || parts[v] >= num_parts) {
      throw InputError("vertex " + std::to_string(v) + " has part " + std::to_string(parts[v]) +
                       " outside [0, " + std::to_string(num_parts) + ")");
    }
  }
}

PartCounts part_counts(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts) {
  check_partition(g, parts, num_parts);
  PartCounts c(num_parts);
  for (vid_t u = 0; u < g.num_vertices(); ++u) {
    const part_t pu = parts[u];
    ++c.vertices[pu];
    for (vid_t v : g.neighbors(u)) {
      if (v < u) continue;
      const part_t pv = parts[v];
      if (pu == pv) {
        ++c.internal_edges[pu];
      } else {
        ++c.cut_edges[pu];
        ++c.cut_edges[pv];
      }
    }
  }
  return c;
}

PartCounts local_part_counts(const LocalGraph& lg, std::span<const part_t> local_parts,
                             part_t num_parts) {
  PartCounts c(num_parts);
  for (lid_t v = 0; v < lg.num_owned(); ++v) {
    const part_t pv = local_parts[v];
    ++c.vertices[pv];
    const vid_t gv = lg.global_id(v);
    for (lid_t u : lg.neighbors(v)) {
      if (lg.global_id(u) < gv) continue;
      const part_t pu = local_parts[u];
      if (pu == pv) {
        ++c.internal_edges[pv];
      } else {
        ++c.cut_edges[pv];
        ++c.cut_edges[pu];
      }
    }
  }
  return c;
}

std::uint64_t edge_cut(const GlobalGraph& g, std::span<const part_t> parts) {
  if (parts.size() != g.num_vertices()) {
    throw InputError("partition has " + std::to_string(parts.size()) + " entries but graph has " +
                     std::to_string(g.num_vertices()) + " vertices");
  }
  std::uint64_t cut = 0;
  for (vid_t u = 0; u < g.num_vertices(); ++u) {
    for (vid_t v : g.neighbors(u)) {
      if (u < v && parts[u] != parts[v]) ++cut;
    }
  }
  return cut;
}

MaxPartCut max_part_cut(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts) {
  const auto c = part_counts(g, parts, num_parts);
  MaxPartCut best;
  for (part_t i = 0; i < num_parts; ++i) {
    const auto count = static_cast<std::uint64_t>(c.cut_edges[i]);
    if (count > best.count) best = {count, i};
  }
  return best;
}

Imbalance imbalance(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts) {
  const auto c = part_counts(g, parts, num_parts);
  const auto r = evaluate_counts(g.num_vertices(), g.num_edges(), c);
  return {r.vertex_imbalance, r.edge_imbalance};
}

QualityReport evaluate_counts(std::uint64_t n, std::uint64_t m, const PartCounts& counts) {
  QualityReport r;
  r.num_vertices = n;
  r.num_edges = m;
  r.num_parts = static_cast<part_t>(counts.vertices.size());
  r.parts = counts;

  const double p = r.num_parts;
  std::int64_t cut_incidences = 0;
  std::int64_t max_v = 0;
  std::int64_t max_e = 0;
  for (part_t i = 0; i < r.num_parts; ++i) {
    cut_incidences += counts.cut_edges[i];
    max_v = std::max(max_v, counts.vertices[i]);
    max_e = std::max(max_e, counts.internal_edges[i]);
    if (static_cast<std::uint64_t>(counts.cut_edges[i]) > r.max_part_cut) {
      r.max_part_cut = static_cast<std::uint64_t>(counts.cut_edges[i]);
      r.max_cut_part = i;
    }
  }
  r.edge_cut = static_cast<std::uint64_t>(cut_incidences / 2);
  r.cut_ratio = m > 0 ? static_cast<double>(r.edge_cut) / static_cast<double>(m) : 0.0;
  r.scaled_max_cut = r.edge_cut > 0 ? static_cast<double>(r.max_part_cut) * p /
                                          static_cast<double>(r.edge_cut)
                                    : 0.0;
  r.scaled_max_cut_alt =
      m > 0 ? static_cast<double>(r.max_part_cut) * p / static_cast<double>(m) : 0.0;
  r.vertex_imbalance = n > 0 ? static_cast<double>(max_v) * p / static_cast<double>(n) : 0.0;
  r.edge_imbalance = m > 0 ? static_cast<double>(max_e) * p / static_cast<double>(m) : 0.0;
  return r;
}

QualityReport evaluate(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts) {
  return evaluate_counts(g.num_vertices(), g.num_edges(), part_counts(g, parts, num_parts));
}

nlohmann::json to_json(const QualityReport& r) {
  nlohmann::json table = nlohmann::json::array();
  for (part_t i = 0; i < r.num_parts; ++i) {
    table.push_back({{"part", i},
                     {"vertices", r.parts.vertices[i]},
                     {"internal_edges", r.parts.internal_edges[i]},
                     {"cut_edges", r.parts.cut_edges[i]}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"num_vertices", r.num_vertices},
          {"num_edges", r.num_edges},
          {"num_parts", r.num_parts},
          {"edge_cut", r.edge_cut},
          {"cut_ratio", r.cut_ratio},
          {"max_part_cut", r.max_part_cut},
          {"max_cut_part", r.max_cut_part},
          {"scaled_max_cut", r.scaled_max_cut},
          {"scaled_max_cut_alt", r.scaled_max_cut_alt},
          {"vertex_imbalance", r.vertex_imbalance},
          {"edge_imbalance", r.edge_imbalance},
          {"cut_edges_counting", "per-part table counts each cut edge toward both endpoint parts"},
          {"parts", table},
          {"metadata", r.metadata}};
}

namespace {

struct Sweep {
  std::uint64_t eccentricity = 0;
  std::vector<vid_t> farthest;
};

Sweep bfs_sweep(const GlobalGraph& g, vid_t root, std::vector<std::int64_t>& dist) {
  std::fill(dist.begin(), dist.end(), -1);
  std::vector<vid_t> frontier{root};
  std::vector<vid_t> next;
  dist[root] = 0;
  Sweep s;
  std::int64_t level = 0;
  while (!frontier.empty()) {
    s.farthest = frontier;
    s.eccentricity = static_cast<std::uint64_t>(level);
    next.clear();
    for (vid_t u : frontier) {
      for (vid_t v : g.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = level + 1;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
    ++level;
  }
  return s;
}

}  // namespace

std::uint64_t approx_diameter(const GlobalGraph& g, int iterations, std::uint64_t seed) {
  const vid_t n = g.num_vertices();
  if (n == 0) throw InputError("diameter of an empty graph is undefined");

  // Largest connected component, found with plain BFS labelling.
  std::vector<std::int64_t> dist(n, -1);
  std::vector<std::uint64_t> component(n, 0);
  std::vector<char> seen(n, 0);
  vid_t best_root = 0;
  std::uint64_t best_size = 0;
  std::vector<vid_t> stack;
  for (vid_t r = 0; r < n; ++r) {
    if (seen[r]) continue;
    std::uint64_t size = 0;
    stack.assign(1, r);
    seen[r] = 1;
    while (!stack.empty()) {
      const vid_t u = stack.back();
      stack.pop_back();
      ++size;
      for (vid_t v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_root = r;
    }
  }

  Rng rng = make_rng(seed, Stream::Diameter);
  // Random start inside the largest component: walk its BFS order.
  std::vector<vid_t> members;
  members.reserve(best_size);
  bfs_sweep(g, best_root, dist);
  for (vid_t v = 0; v < n; ++v) {
    if (dist[v] >= 0) members.push_back(v);
  }
  vid_t start = members[uniform_below(rng, members.size())];

  std::uint64_t best = 0;
  for (int i = 0; i < iterations; ++i) {
    const auto sweep = bfs_sweep(g, start, dist);
    best = std::max(best, sweep.eccentricity);
    start = sweep.farthest[uniform_below(rng, sweep.farthest.size())];
  }
  return best;
}

PerformanceRatios performance_ratio(const ComparisonTable& table) {
  const std::size_t num_methods = table.methods.size();
  PerformanceRatios out;
  std::vector<double> log_sum(num_methods, 0.0);
  out.cells_used.assign(num_methods, 0);

  for (std::size_t gi = 0; gi < table.values.size(); ++gi) {
    const auto& row = table.values[gi];
    if (row.size() != num_methods) {
      throw InputError("comparison row " + std::to_string(gi) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(num_methods));
    }
    std::optional<double> best;
    for (const auto& cell : row) {
      if (cell && (!best || *cell < *best)) best = *cell;
    }
    const std::string graph = gi < table.graphs.size() ? table.graphs[gi] : std::to_string(gi);
    for (std::size_t mi = 0; mi < num_methods; ++mi) {
      if (!row[mi]) {
        out.warnings.push_back("missing result for method '" + table.methods[mi] +
                               "' on graph '" + graph + "'; excluded");
        continue;
      }
      double ratio = 1.0;
      if (*best > 0.0) {
        ratio = *row[mi] / *best;
      } else if (*row[mi] > 0.0) {
        ratio = std::numeric_limits<double>::infinity();
      }
      log_sum[mi] += std::log(ratio);
      ++out.cells_used[mi];
    }
  }

  out.ratio.resize(num_methods);
  for (std::size_t mi = 0; mi < num_methods; ++mi) {
    out.ratio[mi] = out.cells_used[mi] > 0
                        ? std::exp(log_sum[mi] / static_cast<double>(out.cells_used[mi]))
                        : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table,
                          const PerformanceRatios& ratios) {
  out << "graph";
  for (const auto& m : table.methods) out << ',' << m;
  out << '\n';
  for (std::size_t gi = 0; gi < table.values.size(); ++gi) {
    out << (gi < table.graphs.size() ? table.graphs[gi] : std::to_string(gi));
    for (const auto& cell : table.values[gi]) {
      out << ',';
      if (cell) out << *cell;
    }
    out << '\n';
  }
  out << "performance_ratio";
  for (double r : ratios.ratio) out << ',' << r;
  out << '\n';
}

}  // namespace xtrapulp
