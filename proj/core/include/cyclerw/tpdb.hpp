#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cyclerw/rewriting.hpp"

namespace cyclerw {

// SRS subset of the TPDB format:
//
//   file    ::= section*
//   section ::= "(" "RULES" rule ("," rule)* ","? ")"
//             | "(" "VAR" ")"
//             | "(" "COMMENT" balanced-text ")"
//             | "(" other-name balanced-text ")"      skipped with a warning
//   rule    ::= symbol+ ("->" | "->=") symbol*
//
// Symbols are maximal runs of characters other than whitespace, parentheses,
// commas and double quotes.
struct ProblemFile {
  std::string path;
  Srs srs;
  bool relative = false;
  std::vector<std::string> comments;
  std::vector<std::string> warnings;
};

class TpdbError : public std::runtime_error {
 public:
  TpdbError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct TpdbOptions {
  // Symbols containing '#' are reserved for transformation output.
  bool allow_reserved = false;
};

ProblemFile parse_tpdb(std::string_view text, const TpdbOptions& opts = {});
ProblemFile read_tpdb_file(const std::string& path, const TpdbOptions& opts = {});

// Comment lines are emitted as COMMENT sections before the rules.
std::string print_tpdb(const Srs& problem, const std::vector<std::string>& comments = {});

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
// Digest of the comment-free TPDB rendering.
std::string problem_digest(const Srs& problem);

}  // namespace cyclerw
