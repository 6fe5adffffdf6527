#include "text.hpp"

#include <charconv>
#include <sstream>

#include "gbdef/error.hpp"

namespace gbdef {

std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenize_lines(const std::string& text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(std::move(w));
    if (!tokens.empty()) out.emplace_back(line_no, std::move(tokens));
  }
  return out;
}

Field parse_field_tokens(const std::vector<std::string>& tokens, std::size_t line) {
  if (tokens.size() == 2 && tokens[1] == "rational") return Field::rational();
  if (tokens.size() == 3 && tokens[1] == "prime") {
    std::uint64_t p = 0;
    const std::string& t = tokens[2];
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), p);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ParseError(ParseErrorKind::non_prime_modulus, line, "modulus '" + t + "' is not a machine-word integer");
    }
    try {
      return Field::prime(p);
    } catch (const InvalidArgument& e) {
      throw ParseError(ParseErrorKind::non_prime_modulus, line, e.what());
    }
  }
  std::string rest;
  for (std::size_t k = 1; k < tokens.size(); ++k) rest += (k > 1 ? " " : "") + tokens[k];
  throw ParseError(ParseErrorKind::unknown_field, line, "unknown field '" + rest + "'");
}

bool parse_int(const std::string& text, int& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace gbdef
