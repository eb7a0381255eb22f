#pragma once

// Line-oriented tokenizing shared by the .rel, .alg and .pd readers.

#include <string>
#include <string_view>
#include <vector>

#include "relknot/relation.hpp"

namespace relknot::detail {

struct Line {
  int number = 0;
  std::string text;
  std::vector<std::string> tokens;
};

std::vector<std::string> split_ws(std::string_view s);

/// Non-blank, non-comment lines with their 1-based line numbers.
std::vector<Line> content_lines(std::string_view text);

/// Parses a relation from `lines[begin, end)`: names line followed by rows.
/// Throws ParseError with the offending line number.
BinaryRelation parse_relation_lines(const std::vector<Line>& lines, std::size_t begin,
                                    std::size_t end);

}  // namespace relknot::detail
