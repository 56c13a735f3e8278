#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "xtrapulp/graph.hpp"

namespace xtrapulp {

/// Edge list read from SNAP-style text, relabeled to dense IDs.
struct LoadedEdgeList {
  EdgeList edges;
  vid_t num_vertices = 0;
  /// original_ids[dense id] = ID as written in the input. Dense IDs follow
  /// ascending order of original IDs, so a file already using 0..n-1
  /// keeps its numbering.
  std::vector<std::uint64_t> original_ids;
};

/// Parses "u v" pairs, one per line. Blank lines and '#' comments are
/// skipped; extra columns are ignored. Throws InputError with the line number.
LoadedEdgeList read_edge_list(std::istream& in);
LoadedEdgeList read_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, std::span<const Edge> edges);

/// Partition file: exactly one ASCII decimal part per line, line i = vertex i.
std::vector<part_t> read_partition(std::istream& in);
std::vector<part_t> read_partition_file(const std::string& path);
void write_partition(std::ostream& out, std::span<const part_t> parts);

}  // namespace xtrapulp
