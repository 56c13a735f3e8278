#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xtrapulp/graph.hpp"

namespace xtrapulp {

/// Per-part sizes. A cut edge counts once toward each endpoint's part in
/// cut_edges, so sum(cut_edges) == 2 * edge cut.
struct PartCounts {
  std::vector<std::int64_t> vertices;
  std::vector<std::int64_t> internal_edges;
  std::vector<std::int64_t> cut_edges;

  explicit PartCounts(part_t num_parts = 0)
      : vertices(num_parts, 0), internal_edges(num_parts, 0), cut_edges(num_parts, 0) {}

  friend bool operator==(const PartCounts&, const PartCounts&) = default;
};

/// Throws InputError unless parts has n entries, all in [0, num_parts).
void check_partition(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts);

PartCounts part_counts(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts);

/// Counts from one task's view: owned vertices only, and each edge counted
/// by whichever endpoint has the lower global ID. Summing over tasks gives
/// part_counts() of the global partition.
PartCounts local_part_counts(const LocalGraph& lg, std::span<const part_t> local_parts,
                             part_t num_parts);

std::uint64_t edge_cut(const GlobalGraph& g, std::span<const part_t> parts);

struct MaxPartCut {
  std::uint64_t count = 0;
  part_t part = 0;  // lowest index among ties
};
MaxPartCut max_part_cut(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts);

struct Imbalance {
  double vertex = 0.0;  // max_i |V(pi_i)| * p / n
  double edge = 0.0;    // max_i |E(pi_i)| * p / m, 0 when m == 0
};
Imbalance imbalance(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts);

struct QualityReport {
  std::uint64_t num_vertices = 0;
  std::uint64_t num_edges = 0;
  part_t num_parts = 0;
  std::uint64_t edge_cut = 0;
  double cut_ratio = 0.0;
  std::uint64_t max_part_cut = 0;
  part_t max_cut_part = 0;
  /// max_part_cut / (edge_cut / p); 0 when nothing is cut.
  double scaled_max_cut = 0.0;
  /// max_part_cut / (m / p); 0 when m == 0.
  double scaled_max_cut_alt = 0.0;
  double vertex_imbalance = 0.0;
  double edge_imbalance = 0.0;
  PartCounts parts;
  nlohmann::json metadata = nlohmann::json::object();
};

inline constexpr int kReportSchemaVersion = 1;

QualityReport evaluate(const GlobalGraph& g, std::span<const part_t> parts, part_t num_parts);
/// Same report assembled from per-task counts (see local_part_counts).
QualityReport evaluate_counts(std::uint64_t n, std::uint64_t m, const PartCounts& counts);

nlohmann::json to_json(const QualityReport& r);

/// Lower bound on the diameter of the largest connected component: repeated
/// BFS sweeps, each restarting from a random vertex of the previous sweep's
/// farthest level. Throws InputError on an empty graph.
std::uint64_t approx_diameter(const GlobalGraph& g, int iterations = 10, std::uint64_t seed = 0);

/// Result table for cross-method comparison: values[graph][method].
struct ComparisonTable {
  std::vector<std::string> graphs;
  std::vector<std::string> methods;
  std::vector<std::vector<std::optional<double>>> values;
};

struct PerformanceRatios {
  std::vector<double> ratio;              // per method
  std::vector<std::size_t> cells_used;    // per method
  std::vector<std::string> warnings;
};

/// Geometric mean over graphs of value / best-in-row. Missing cells are
/// skipped for that method with a warning. A zero best with a zero value
/// counts as ratio 1; a zero best with a positive value is +inf.
PerformanceRatios performance_ratio(const ComparisonTable& table);

void write_comparison_csv(std::ostream& out, const ComparisonTable& table,
                          const PerformanceRatios& ratios);

}  // namespace xtrapulp
