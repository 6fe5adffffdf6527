#include "commands.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gbdef/bialgebra.hpp"
#include "gbdef/complex.hpp"
#include "gbdef/deformation.hpp"
#include "gbdef/error.hpp"

namespace gbdef::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

namespace {

std::string read_input(const std::string& path, Report& report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  report.inputs.push_back({path, sha256_hex(text)});
  return text;
}

void write_output(const std::string& path, const std::string& text, Report& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
  report.written.push_back(path);
}

GradedBialgebra load_bialgebra(const std::string& path, Report& report,
                               const BialgebraParseOptions& options = {}) {
  return parse_bialgebra(read_input(path, report), options);
}

/// Name recorded in emitted deformation files.
std::string over_name(const std::string& path) { return fs::path(path).stem().string(); }

std::string emit_map(const std::string& header, const GradedMap& f) {
  std::ostringstream out;
  out << header << "\n";
  for (const auto& col : f.columns()) {
    for (const auto& e : col.image) {
      out << format_cochain_entry(f.source(), f.target(), col.source, e.index, e.value) << "\n";
    }
  }
  return out.str();
}

/// Degree window outside which every total cochain space at n vanishes.
bool degree_in_window(const HatComplex& cx, int n, int degree) {
  if (cx.m_dim() == 0) return true;  // every space is empty; nothing is hidden by refusing
  return std::abs(degree) <= (n + 1) * cx.top_degree();
}

void verify_deformation_file(const DeformArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  Deformation d = parse_deformation(read_input(args.deformation, report), b);
  report.results["level"] = d.level();
  report.add_checks(verify_deformation(d));
  report.settle_by_checks();
}

void oracle_deformation_file(const DeformArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  // Raw tables: the oracle judges homogeneity itself.
  ParsedDeformation parsed = parse_deformation_tables(read_input(args.deformation, report), b);
  report.results["level"] = parsed.tables.level;
  report.add_checks(truncated_ring_oracle(b, parsed.tables));
  report.settle_by_checks();
}

void record_obstruction(const HatComplex& cx, const ObstructionClass& ob, Report& report) {
  report.results["obstruction_degree"] = -(ob.level + 1);
  report.results["obstruction_vanishes"] = ob.vanishes();
  report.artifacts.push_back({"obstruction triple", emit_total_cochain(ob.triple)});
  if (ob.vanishes()) {
    report.artifacts.push_back({"primitive", emit_total_cochain(*ob.solution)});
  } else {
    report.artifacts.push_back({"obstruction class", emit_total_cochain(cx.canonical_representative(ob.triple))});
    report.verdict = Verdict::fail;
  }
}

void obstruct_deformation_file(const DeformArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  Deformation d = parse_deformation(read_input(args.deformation, report), b);
  HatComplex cx(b);
  report.results["level"] = d.level();
  record_obstruction(cx, obstruction(cx, d), report);
}

void extend_deformation_file(const DeformArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  Deformation d = parse_deformation(read_input(args.deformation, report), b);
  HatComplex cx(b);
  ExtensionResult ext = extend(cx, d, args.all);
  report.results["level"] = d.level();
  if (d.level() > 0) record_obstruction(cx, ext.obstruction, report);
  if (ext.extended) {
    std::string text = emit_deformation(*ext.extended, over_name(args.bialgebra));
    report.results["extended_level"] = ext.extended->level();
    if (args.out.empty()) {
      report.artifacts.push_back({"extended deformation", text});
    } else {
      write_output(args.out, text, report);
    }
  }
  if (args.all) {
    report.results["family_dimension"] = ext.family.size();
    for (std::size_t k = 0; k < ext.family.size(); ++k) {
      report.artifacts.push_back({"family " + std::to_string(k + 1), emit_total_cochain(ext.family[k])});
    }
  }
}

void trivialize_deformation_file(const DeformArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  Deformation d = parse_deformation(read_input(args.deformation, report), b);
  HatComplex cx(b);
  TrivializationResult t = trivialize(cx, d);
  report.results["level"] = d.level();
  report.results["trivial"] = t.morphism.has_value();
  if (t.morphism) {
    for (int s = 1; s <= t.morphism->level; ++s) {
      report.artifacts.push_back({"morphism order " + std::to_string(s),
                                  emit_map("morphism order " + std::to_string(s), t.morphism->parts[std::size_t(s - 1)])});
    }
    report.add_checks(verify_isomorphism(d, Deformation::trivial(b, d.level()), *t.morphism));
    report.settle_by_checks();
  } else {
    report.results["order"] = t.order;
    report.artifacts.push_back({"class at order " + std::to_string(t.order), emit_total_cochain(*t.obstruction_class)});
    report.verdict = Verdict::fail;
  }
}

}  // namespace

void run_verify(const std::string& path, Report& report) {
  GradedBialgebra b = load_bialgebra(path, report);
  report.results["dimension"] = b.dim();
  report.results["top_degree"] = b.top_degree();
  report.add_checks(verify_bialgebra(b));
  report.settle_by_checks();
}

void run_cohomology(const CohomologyArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  if (args.n < 1) throw InvalidArgument("--n must be at least 1");
  HatComplex cx(b, {std::max(ComplexOptions{}.max_total, args.n + 2)});
  if (!degree_in_window(cx, args.n, args.degree)) {
    throw InvalidArgument("degree " + std::to_string(args.degree) + " is outside |L| <= (n+1)*top_degree = " +
                          std::to_string((args.n + 1) * cx.top_degree()) +
                          "; every cochain space there is zero by degrees");
  }
  CohomologyResult r = cx.cohomology(args.n, args.degree);
  report.results["n"] = r.n;
  report.results["degree"] = r.l;
  report.results["dim_cochains"] = r.dim_cochains;
  report.results["dim_cocycles"] = r.dim_cocycles;
  report.results["dim_coboundaries"] = r.dim_coboundaries;
  report.results["dimension"] = r.dimension;
  report.results["reason"] = r.reason;
  if (args.representatives) {
    for (std::size_t k = 0; k < r.representatives.size(); ++k) {
      report.artifacts.push_back({"representative " + std::to_string(k + 1), emit_total_cochain(r.representatives[k])});
    }
  }
}

void run_rigid(const std::string& path, Report& report) {
  GradedBialgebra b = load_bialgebra(path, report);
  HatComplex cx(b);
  RigidityReport r = rigidity_check(cx);
  auto dims = nlohmann::ordered_json::array();
  for (const auto& [l, dim] : r.dimensions) dims.push_back({{"degree", -l}, {"dimension", dim}});
  report.results["dimensions"] = dims;
  report.results["rigid"] = r.rigid;
  report.results["note"] = r.note;
  if (!r.rigid) report.verdict = Verdict::fail;
}

void run_classify(const ClassifyArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  HatComplex cx(b);
  CohomologyResult r = cx.cohomology(2, -1);
  report.results["dimension"] = r.dimension;
  report.results["reason"] = r.reason;
  std::string stem = over_name(args.bialgebra);
  for (std::size_t k = 0; k < r.representatives.size(); ++k) {
    Deformation d = deformation_from_cocycle(cx, r.representatives[k]);
    std::string file = (fs::path(args.out_dir) / (stem + "_class" + std::to_string(k + 1) + ".def")).lexically_normal().string();
    write_output(file, emit_deformation(d, stem), report);
    VerificationReport v = verify_deformation(d);
    report.checks.push_back({"class " + std::to_string(k + 1) + " deformation", std::nullopt, v.passed(),
                             v.passed() ? "" : v.first_failure()->name});
  }
  report.settle_by_checks();
}

void run_deform(const DeformArgs& args, Report& report) {
  if (args.action == "verify") return verify_deformation_file(args, report);
  if (args.action == "oracle") return oracle_deformation_file(args, report);
  if (args.action == "obstruct") return obstruct_deformation_file(args, report);
  if (args.action == "extend") return extend_deformation_file(args, report);
  if (args.action == "trivialize") return trivialize_deformation_file(args, report);
  throw InvalidArgument("unknown deform action '" + args.action + "'");
}

void run_lift_decompose(const LiftArgs& args, Report& report) {
  GradedBialgebra b = load_bialgebra(args.bialgebra, report);
  GradedBialgebra tables = load_bialgebra(args.tables, report, {.require_grading = false});
  Deformation d = lifting_decompose(b, tables);
  std::string text = emit_deformation(d, over_name(args.bialgebra));
  report.results["level"] = d.level();
  report.results["closure_level"] = closure_level(b);
  if (args.out.empty()) {
    report.artifacts.push_back({"deformation", text});
  } else {
    write_output(args.out, text, report);
  }
  // The tables are a bialgebra exactly when the padded deformation verifies.
  report.add_checks(verify_deformation(pad(d, closure_level(b))));
  report.settle_by_checks();
}

void run_example(const ExampleArgs& args, Report& report) {
  std::map<std::string, std::string> params;
  for (const auto& kv : args.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("--param expects k=v, got '" + kv + "'");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  GradedBialgebra b = builtin_example(args.name, params);
  std::string text = emit_bialgebra(b);
  report.results["name"] = args.name;
  report.results["dimension"] = b.dim();
  report.results["top_degree"] = b.top_degree();
  if (args.out.empty()) {
    report.artifacts.push_back({"bialgebra", text});
  } else {
    write_output(args.out, text, report);
  }
}

}  // namespace gbdef::cli
