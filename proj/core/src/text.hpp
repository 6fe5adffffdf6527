#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gbdef/scalar.hpp"

namespace gbdef {

/// Whitespace-split lines with `#` comments removed; blank lines skipped.
/// Line numbers are 1-based.
std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenize_lines(const std::string& text);

/// `field rational` or `field prime <p>`; throws ParseError (unknown-field, non-prime-modulus).
Field parse_field_tokens(const std::vector<std::string>& tokens, std::size_t line);

bool parse_int(const std::string& text, int& out);

}  // namespace gbdef
