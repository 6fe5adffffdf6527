#include <sstream>

#include "gbdef/deformation.hpp"
#include "gbdef/error.hpp"
#include "text.hpp"

namespace gbdef {

namespace {

ParsedDeformation parse_impl(const std::string& text, const GradedBialgebra& base, bool check_degrees) {
  auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError(ParseErrorKind::missing, 0, "missing 'deformation level L over <name>' header");
  const auto& [hline, head] = lines.front();
  int level = 0;
  if (head.size() != 5 || head[0] != "deformation" || head[1] != "level" || !parse_int(head[2], level) ||
      level < 0 || head[3] != "over") {
    throw ParseError(ParseErrorKind::syntax, hline, "expected 'deformation level L over <name>'");
  }
  ParsedDeformation out{head[4], {level, std::vector<std::vector<StructureConstant>>(std::size_t(level)),
                                  std::vector<std::vector<StructureConstant>>(std::size_t(level))}};
  const GradedSpace& sp = base.space();
  TensorPower one(base.space_ptr(), 1), two(base.space_ptr(), 2);
  const std::size_t dim = base.dim();
  int order = 0;
  bool is_mul = true;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [line, tokens] = lines[k];
    if (tokens[0] == "mul-correction" || tokens[0] == "comul-correction") {
      if (tokens.size() != 3 || tokens[1] != "order" || !parse_int(tokens[2], order) || order < 1 || order > level) {
        throw ParseError(ParseErrorKind::syntax, line,
                         "expected '" + tokens[0] + " order s' with 1 <= s <= " + std::to_string(level));
      }
      is_mul = tokens[0] == "mul-correction";
      continue;
    }
    if (order == 0) throw ParseError(ParseErrorKind::syntax, line, "entry outside a correction block");
    CochainEntry e = is_mul ? parse_cochain_entry(tokens, line, two, one, base.field())
                            : parse_cochain_entry(tokens, line, one, two, base.field());
    StructureConstant c = is_mul ? StructureConstant{e.source / dim, e.source % dim, e.target, e.value}
                                 : StructureConstant{e.source, e.target / dim, e.target % dim, e.value};
    if (check_degrees && !c.c.is_zero()) {
      bool ok = is_mul ? sp.degree(c.k) == sp.degree(c.i) + sp.degree(c.j) - order
                       : sp.degree(c.j) + sp.degree(c.k) == sp.degree(c.i) - order;
      if (!ok) {
        throw ParseError(ParseErrorKind::grading, line,
                         "entry is not of degree " + std::to_string(-order) + " for order " + std::to_string(order));
      }
    }
    (is_mul ? out.tables.mul : out.tables.comul)[std::size_t(order - 1)].push_back(std::move(c));
  }
  return out;
}

}  // namespace

ParsedDeformation parse_deformation_tables(const std::string& text, const GradedBialgebra& base) {
  return parse_impl(text, base, false);
}

Deformation parse_deformation(const std::string& text, const GradedBialgebra& base) {
  ParsedDeformation p = parse_impl(text, base, true);
  return deformation_from_tables(base, p.tables);
}

std::string emit_deformation(const Deformation& d, const std::string& over) {
  std::ostringstream out;
  out << "deformation level " << d.level() << " over " << over << "\n";
  for (int s = 1; s <= d.level(); ++s) {
    for (const GradedMap* g : {&d.m(s), &d.delta(s)}) {
      if (g->is_zero()) continue;
      out << (g == &d.m(s) ? "mul-correction" : "comul-correction") << " order " << s << "\n";
      for (const auto& col : g->columns()) {
        for (const auto& e : col.image) {
          out << format_cochain_entry(g->source(), g->target(), col.source, e.index, e.value) << "\n";
        }
      }
    }
  }
  return out.str();
}

}  // namespace gbdef
