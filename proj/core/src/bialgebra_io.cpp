#include <algorithm>
#include <optional>
#include <sstream>

#include "gbdef/bialgebra.hpp"
#include "gbdef/error.hpp"
#include "text.hpp"

namespace gbdef {

namespace {

struct BasisLine {
  std::string label;
  int degree;
  std::size_t line;
};

struct EntryLine {
  std::vector<std::string> labels;
  std::string scalar;
  std::size_t line;
};

}  // namespace

GradedBialgebra parse_bialgebra(const std::string& text, const BialgebraParseOptions& options) {
  std::optional<Field> field;
  std::vector<BasisLine> basis;
  std::optional<std::pair<std::string, std::size_t>> unit_line;
  std::vector<EntryLine> counit_lines, mul_lines, comul_lines;

  for (const auto& [line_no, tokens] : tokenize_lines(text)) {
    const std::string& key = tokens[0];
    auto arity = [&](std::size_t want) {
      if (tokens.size() != want) {
        throw ParseError(ParseErrorKind::syntax, line_no,
                         "'" + key + "' expects " + std::to_string(want - 1) + " arguments");
      }
    };
    if (key == "field") {
      if (field) throw ParseError(ParseErrorKind::syntax, line_no, "field given twice");
      field = parse_field_tokens(tokens, line_no);
    } else if (key == "basis") {
      arity(3);
      int degree = 0;
      if (!parse_int(tokens[2], degree) || degree < 0) {
        throw ParseError(ParseErrorKind::grading, line_no, "degree must be a non-negative integer");
      }
      basis.push_back({tokens[1], degree, line_no});
    } else if (key == "unit") {
      arity(2);
      if (unit_line) throw ParseError(ParseErrorKind::syntax, line_no, "unit given twice");
      unit_line = {tokens[1], line_no};
    } else if (key == "counit") {
      arity(3);
      counit_lines.push_back({{tokens[1]}, tokens[2], line_no});
    } else if (key == "mul" || key == "comul") {
      arity(5);
      (key == "mul" ? mul_lines : comul_lines)
          .push_back({{tokens[1], tokens[2], tokens[3]}, tokens[4], line_no});
    } else {
      throw ParseError(ParseErrorKind::syntax, line_no, "unknown directive '" + key + "'");
    }
  }
  if (!field) throw ParseError(ParseErrorKind::missing, 0, "missing 'field' line");
  if (basis.empty()) throw ParseError(ParseErrorKind::missing, 0, "missing 'basis' lines");

  // Stable grouping by degree; the global order is (degree, file position).
  std::map<std::string, std::size_t> seen;
  for (const auto& b : basis) {
    if (!seen.emplace(b.label, b.line).second) {
      throw ParseError(ParseErrorKind::duplicate_label, b.line, "duplicate basis label '" + b.label + "'");
    }
  }
  std::map<int, std::vector<std::string>> by_degree;
  for (const auto& b : basis) by_degree[b.degree].push_back(b.label);
  std::vector<GradedComponent> components;
  for (auto& [d, labels] : by_degree) components.push_back({d, std::move(labels)});
  GradedSpace space(std::move(components));

  auto index = [&](const std::string& label, std::size_t line_no) {
    auto i = space.find(label);
    if (!i) throw ParseError(ParseErrorKind::unknown_label, line_no, "unknown basis label '" + label + "'");
    return *i;
  };
  auto scalar = [&](const std::string& t, std::size_t line_no) {
    try {
      return parse_scalar(t, *field);
    } catch (const ParseError& e) {
      throw ParseError(ParseErrorKind::bad_scalar, line_no, e.what());
    }
  };

  std::size_t unit = unit_line ? index(unit_line->first, unit_line->second) : index(basis.front().label, basis.front().line);
  if (space.degree(unit) != 0) {
    throw ParseError(ParseErrorKind::grading, unit_line ? unit_line->second : basis.front().line,
                     "unit '" + space.label(unit) + "' must have degree 0");
  }

  std::vector<Scalar> counit(space.dim(), field->zero());
  for (const auto& c : counit_lines) {
    std::size_t i = index(c.labels[0], c.line);
    Scalar v = scalar(c.scalar, c.line);
    if (space.degree(i) > 0 && !v.is_zero()) {
      throw ParseError(ParseErrorKind::grading, c.line,
                       "counit of '" + c.labels[0] + "' must vanish in positive degree");
    }
    counit[i] = v;
  }
  counit[unit] = field->one();

  auto entries = [&](const std::vector<EntryLine>& lines, bool is_mul) {
    std::vector<StructureConstant> out;
    for (const auto& e : lines) {
      std::size_t i = index(e.labels[0], e.line), j = index(e.labels[1], e.line),
                  k = index(e.labels[2], e.line);
      Scalar c = scalar(e.scalar, e.line);
      bool graded = is_mul ? space.degree(k) == space.degree(i) + space.degree(j)
                           : space.degree(j) + space.degree(k) == space.degree(i);
      if (options.require_grading && !graded && !c.is_zero()) {
        throw ParseError(ParseErrorKind::grading, e.line,
                         std::string(is_mul ? "mul" : "comul") + " entry " + e.labels[0] + " " +
                             e.labels[1] + " " + e.labels[2] + " breaks degree additivity");
      }
      out.push_back({i, j, k, std::move(c)});
    }
    return out;
  };
  auto mul = entries(mul_lines, true);
  auto comul = entries(comul_lines, false);
  return GradedBialgebra(*field, std::move(space), unit, std::move(mul), std::move(comul), std::move(counit));
}

std::string emit_bialgebra(const GradedBialgebra& b) {
  std::ostringstream out;
  const auto& s = b.space();
  out << "field " << b.field().to_string() << "\n";
  for (std::size_t i = 0; i < s.dim(); ++i) out << "basis " << s.label(i) << " " << s.degree(i) << "\n";
  out << "unit " << s.label(b.unit()) << "\n";
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (!b.counit(i).is_zero()) out << "counit " << s.label(i) << " " << b.counit(i) << "\n";
  }
  for (const auto& e : b.mul()) {
    out << "mul " << s.label(e.i) << " " << s.label(e.j) << " " << s.label(e.k) << " " << e.c << "\n";
  }
  for (const auto& e : b.comul()) {
    out << "comul " << s.label(e.i) << " " << s.label(e.j) << " " << s.label(e.k) << " " << e.c << "\n";
  }
  return out.str();
}

}  // namespace gbdef
