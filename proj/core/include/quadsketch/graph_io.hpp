#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "quadsketch/graph.hpp"

namespace quadsketch {

/// Raised for malformed graph or matrix text; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Edge-list text format: first line "n m", then m lines "u v w" (0-indexed).
// Blank lines and lines starting with '#' are ignored.
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list_file(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_edge_list_file(const std::filesystem::path& path, const WeightedGraph& g);

}  // namespace quadsketch
