#pragma once

// Instance file formats.
//
// Partite instances:
//   JSON       {"t": 3, "k": 2, "classSizes": [n, n, n], "edges": [["c0.v1", "c2.v0"], ...]}
//   edge list  header "t k n1 ... nt", then one edge per line as space-separated vertex ids
// General (non-partite) instances:
//   JSON       {"n": 9, "k": 3, "edges": [[0, 1, 2], ...]}
//   edge list  header "n k", then one edge per line as space-separated integers
// Vertex ids are "c<class>.v<index>", both 0-based. Blank lines and lines
// starting with '#' are ignored in edge lists.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cliquefactor/hypergraph.hpp"
#include "cliquefactor/partition.hpp"

namespace cliquefactor::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line (0 when not applicable, e.g. JSON structure errors).
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string format_vertex(VertexId id);
VertexId parse_vertex(std::string_view text);

/// Parses either format (JSON if the first non-blank character is '{') and
/// rejects instances that fail validate(), citing the offending line.
PartiteHypergraph parse_instance(std::string_view text);
PartiteHypergraph load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const PartiteHypergraph& h);
std::string instance_to_edge_list(const PartiteHypergraph& h);

GeneralHypergraph parse_general(std::string_view text);
GeneralHypergraph load_general(const std::filesystem::path& path);
nlohmann::json general_to_json(const GeneralHypergraph& h);

std::string read_file(const std::filesystem::path& path);

}  // namespace cliquefactor::io
