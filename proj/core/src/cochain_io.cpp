#include <sstream>

#include "gbdef/complex.hpp"
#include "gbdef/error.hpp"
#include "text.hpp"

namespace gbdef {

CochainEntry parse_cochain_entry(const std::vector<std::string>& tokens, std::size_t line,
                                 const TensorPower& source, const TensorPower& target, const Field& field) {
  if (tokens.size() != 5 || tokens[1] != "<-" || tokens[3] != ":") {
    throw ParseError(ParseErrorKind::syntax, line, "expected 'target <- source : scalar'");
  }
  auto tgt = target.find(tokens[0]);
  if (!tgt) throw ParseError(ParseErrorKind::unknown_label, line, "unknown target tuple '" + tokens[0] + "'");
  auto src = source.find(tokens[2]);
  if (!src) throw ParseError(ParseErrorKind::unknown_label, line, "unknown source tuple '" + tokens[2] + "'");
  try {
    return {*tgt, *src, parse_scalar(tokens[4], field)};
  } catch (const ParseError& e) {
    throw ParseError(ParseErrorKind::bad_scalar, line, e.what());
  }
}

std::string format_cochain_entry(const TensorPower& source, const TensorPower& target, std::size_t src,
                                 std::size_t tgt, const Scalar& value) {
  return target.label(tgt) + " <- " + source.label(src) + " : " + value.to_string();
}

Cochain parse_cochain(const std::string& text, const HatComplex& cx) {
  auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError(ParseErrorKind::missing, 0, "missing 'cochain p q l' header");
  const auto& [hline, head] = lines.front();
  int p = 0, q = 0, l = 0;
  if (head.size() != 4 || head[0] != "cochain" || !parse_int(head[1], p) || !parse_int(head[2], q) ||
      !parse_int(head[3], l) || p < 1 || q < 1) {
    throw ParseError(ParseErrorKind::syntax, hline, "expected 'cochain p q l' with p, q >= 1");
  }
  if (p + q > cx.options().max_total) {
    throw ParseError(ParseErrorKind::syntax, hline, "p + q above the configured bound");
  }
  TensorPower src(cx.m_space(), q), tgt(cx.m_space(), p);
  std::vector<GradedMap::Entry> entries;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [line, tokens] = lines[k];
    auto e = parse_cochain_entry(tokens, line, src, tgt, cx.field());
    if (tgt.degree(e.target) != src.degree(e.source) + l && !e.value.is_zero()) {
      throw ParseError(ParseErrorKind::grading, line, "entry is not of degree " + std::to_string(l));
    }
    entries.push_back({e.target, e.source, std::move(e.value)});
  }
  return {p, q, l, GradedMap::from_entries(src, tgt, l, cx.field(), entries)};
}

std::string emit_cochain(const Cochain& c) {
  std::ostringstream out;
  out << "cochain " << c.p << " " << c.q << " " << c.l << "\n";
  for (const auto& col : c.map.columns()) {
    for (const auto& e : col.image) {
      out << format_cochain_entry(c.map.source(), c.map.target(), col.source, e.index, e.value) << "\n";
    }
  }
  return out.str();
}

std::string emit_total_cochain(const TotalCochain& t) {
  std::string out;
  for (std::size_t k = 0; k < t.parts.size(); ++k) {
    if (k) out += "\n";
    out += emit_cochain(t.parts[k]);
  }
  return out;
}

}  // namespace gbdef
