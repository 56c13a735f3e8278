#include "xtrapulp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace xtrapulp {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Returns the next whitespace-delimited token, advancing `pos`.
std::string_view next_token(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  const std::size_t start = pos;
  while (pos < line.size() && !is_space(line[pos])) ++pos;
  return line.substr(start, pos - start);
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

LoadedEdgeList read_edge_list(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string_view body = std::string_view(line).substr(0, hash);
    std::size_t pos = 0;
    const auto first = next_token(body, pos);
    if (first.empty()) continue;
    const auto second = next_token(body, pos);
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!parse_number(first, u) || !parse_number(second, v)) {
      throw InputError("line " + std::to_string(line_no) + ": expected two non-negative " +
                       "integer vertex IDs, got '" + line + "'");
    }
    raw.emplace_back(u, v);
  }

  LoadedEdgeList out;
  out.original_ids.reserve(raw.size() * 2);
  for (const auto& [u, v] : raw) {
    out.original_ids.push_back(u);
    out.original_ids.push_back(v);
  }
  std::sort(out.original_ids.begin(), out.original_ids.end());
  out.original_ids.erase(std::unique(out.original_ids.begin(), out.original_ids.end()),
                         out.original_ids.end());
  out.num_vertices = out.original_ids.size();

  const auto dense = [&](std::uint64_t id) {
    return static_cast<vid_t>(
        std::lower_bound(out.original_ids.begin(), out.original_ids.end(), id) -
        out.original_ids.begin());
  };
  out.edges.reserve(raw.size());
  for (const auto& [u, v] : raw) out.edges.push_back({dense(u), dense(v)});
  return out;
}

LoadedEdgeList read_edge_list_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, std::span<const Edge> edges) {
  std::string buf;
  buf.reserve(edges.size() * 16);
  for (const auto& e : edges) {
    buf += std::to_string(e.u);
    buf += ' ';
    buf += std::to_string(e.v);
    buf += '\n';
  }
  out << buf;
}

std::vector<part_t> read_partition(std::istream& in) {
  std::vector<part_t> parts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    const auto token = next_token(line, pos);
    part_t p = 0;
    if (!parse_number(token, p) || p < 0 || !next_token(line, pos).empty()) {
      throw InputError("partition line " + std::to_string(line_no) +
                       ": expected one non-negative part ID, got '" + line + "'");
    }
    parts.push_back(p);
  }
  return parts;
}

std::vector<part_t> read_partition_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_partition(in);
}

void write_partition(std::ostream& out, std::span<const part_t> parts) {
  std::string buf;
  buf.reserve(parts.size() * 4);
  for (part_t p : parts) {
    buf += std::to_string(p);
    buf += '\n';
  }
  out << buf;
}

}  // namespace xtrapulp
