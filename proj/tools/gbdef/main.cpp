#include <CLI11.hpp>

#include <functional>
#include <iostream>

#include "commands.hpp"
#include "gbdef/error.hpp"

using namespace gbdef;
using namespace gbdef::cli;

namespace {

std::string describe(const ParseError& e) {
  // what() already carries the line number.
  return "parse error (" + std::string(to_string(e.kind())) + "): " + e.what();
}

/// Runs one command and maps exceptions onto verdicts: malformed input is an
/// error (2), tables that are not a lifting are a failed check (1).
int dispatch(Report& report, bool machine, const std::function<void(Report&)>& command) {
  try {
    command(report);
  } catch (const ParseError& e) {
    report.error = describe(e);
    report.verdict = Verdict::error;
  } catch (const NotALifting& e) {
    report.error = std::string("not a lifting: ") + e.what();
    report.verdict = Verdict::fail;
  } catch (const LiftingMismatch& e) {
    report.error = std::string("lifting mismatch: ") + e.what();
    report.verdict = Verdict::fail;
  } catch (const InternalInvariant& e) {
    report.error = std::string("internal invariant violated: ") + e.what();
    report.verdict = Verdict::error;
  } catch (const Error& e) {
    report.error = e.what();
    report.verdict = Verdict::error;
  } catch (const IoError& e) {
    report.error = e.what();
    report.verdict = Verdict::error;
  }
  std::cout << (machine ? render_machine(report) : render_text(report));
  if (report.error && !machine) std::cerr << "gbdef: " << *report.error << "\n";
  return exit_code(report.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded bialgebra deformations: verification, cohomology, obstructions."};
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--machine", machine, "JSON output")->configurable(false);

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "Check the bialgebra axioms of a .bia file");
  verify->add_option("bialgebra", verify_path)->required();
  verify->add_flag("--machine", machine, "JSON output");

  CohomologyArgs coh;
  auto* cohomology = app.add_subcommand("cohomology", "Total cohomology in one (n, degree)");
  cohomology->add_option("bialgebra", coh.bialgebra)->required();
  cohomology->add_option("--n", coh.n, "Cohomological degree n >= 1")->required();
  cohomology->add_option("--degree", coh.degree, "Internal degree L (usually negative)")->required();
  cohomology->add_flag("--representatives", coh.representatives, "Print a basis of representatives");
  cohomology->add_flag("--machine", machine, "JSON output");

  std::string rigid_path;
  auto* rigid = app.add_subcommand("rigid", "Graded rigidity check");
  rigid->add_option("bialgebra", rigid_path)->required();
  rigid->add_flag("--machine", machine, "JSON output");

  ClassifyArgs cls;
  auto* classify = app.add_subcommand("classify", "First-order classes and one deformation file per class");
  classify->add_option("bialgebra", cls.bialgebra)->required();
  classify->add_option("--out-dir", cls.out_dir, "Directory for the emitted .def files");
  classify->add_flag("--machine", machine, "JSON output");

  DeformArgs def;
  auto* deform = app.add_subcommand("deform", "Operations on a deformation file");
  deform->add_option("action", def.action, "verify | oracle | obstruct | extend | trivialize")
      ->required()
      ->check(CLI::IsMember({"verify", "oracle", "obstruct", "extend", "trivialize"}));
  deform->add_option("bialgebra", def.bialgebra)->required();
  deform->add_option("deformation", def.deformation)->required();
  deform->add_flag("--all", def.all, "extend: also list the cocycles parametrizing all extensions");
  deform->add_option("--out", def.out, "extend: write the extended deformation here");
  deform->add_flag("--machine", machine, "JSON output");

  LiftArgs lift_args;
  std::string lift_action;
  auto* lift = app.add_subcommand("lift", "Liftings given as full structure tables");
  lift->add_option("action", lift_action, "decompose")->required()->check(CLI::IsMember({"decompose"}));
  lift->add_option("bialgebra", lift_args.bialgebra)->required();
  lift->add_option("tables", lift_args.tables)->required();
  lift->add_option("--out", lift_args.out, "Write the deformation file here");
  lift->add_flag("--machine", machine, "JSON output");

  ExampleArgs ex;
  auto* example = app.add_subcommand("example", "Emit a built-in example as a .bia file");
  example->add_option("name", ex.name)->required();
  example->add_option("--param", ex.params, "k=v, repeatable");
  example->add_option("--out", ex.out, "Output file (stdout when omitted)");
  example->add_flag("--machine", machine, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report report;
  report.command.assign(argv + 1, argv + argc);
  if (*verify) return dispatch(report, machine, [&](Report& r) { run_verify(verify_path, r); });
  if (*cohomology) return dispatch(report, machine, [&](Report& r) { run_cohomology(coh, r); });
  if (*rigid) return dispatch(report, machine, [&](Report& r) { run_rigid(rigid_path, r); });
  if (*classify) return dispatch(report, machine, [&](Report& r) { run_classify(cls, r); });
  if (*deform) return dispatch(report, machine, [&](Report& r) { run_deform(def, r); });
  if (*lift) return dispatch(report, machine, [&](Report& r) { run_lift_decompose(lift_args, r); });
  return dispatch(report, machine, [&](Report& r) { run_example(ex, r); });
}
