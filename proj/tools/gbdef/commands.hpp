#pragma once

#include <map>
#include <string>
#include <vector>

#include "report.hpp"

namespace gbdef::cli {

/// Unreadable or unwritable files; reported like malformed input.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CohomologyArgs {
  std::string bialgebra;
  int n = 2;
  int degree = -1;
  bool representatives = false;
};

struct ClassifyArgs {
  std::string bialgebra;
  /// Directory for the emitted deformation files; "." by default.
  std::string out_dir = ".";
};

struct DeformArgs {
  std::string action;  // verify, oracle, obstruct, extend, trivialize
  std::string bialgebra;
  std::string deformation;
  bool all = false;
  /// extend only: where to write the extended deformation.
  std::string out;
};

struct LiftArgs {
  std::string bialgebra;
  std::string tables;
  std::string out;
};

struct ExampleArgs {
  std::string name;
  std::vector<std::string> params;  // k=v
  std::string out;
};

// Each command fills `report`; exceptions are left to the caller.
void run_verify(const std::string& path, Report& report);
void run_cohomology(const CohomologyArgs& args, Report& report);
void run_rigid(const std::string& path, Report& report);
void run_classify(const ClassifyArgs& args, Report& report);
void run_deform(const DeformArgs& args, Report& report);
void run_lift_decompose(const LiftArgs& args, Report& report);
void run_example(const ExampleArgs& args, Report& report);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

}  // namespace gbdef::cli
