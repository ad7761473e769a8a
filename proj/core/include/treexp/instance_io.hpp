#pragma once

#include <string>
#include <string_view>

#include "treexp/tree.hpp"

namespace treexp {

// TREE v1 text format:
//
//   TREE v1
//   n <n>
//   root <id>
//   edge <u> <v> <port_u> <port_v>     (n-1 lines)
//   k <agents>                          (optional)
//   B <budget>                          (optional)
//
// Blank lines and lines starting with '#' are ignored. Parsing validates the
// tree and normalizes its ports; a missing `k` means 1, a missing `B` means 0.

class ParseError : public TreeError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : TreeError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Instance parse_instance(std::string_view text);

/// Canonical text: header, edges sorted by (min id, max id), then k and B.
std::string serialize_instance(const Instance& instance);

/// Header and edge lines only.
std::string serialize_tree(const Tree& tree);

Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace treexp
