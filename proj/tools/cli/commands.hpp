#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace tvs::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidInput = 2,
  kBudgetExhausted = 3,
  kCertificationFailed = 4,
};

struct RunConfig {
  std::string command;
  int p = 2;
  int nG = 2;
  int nH = 2;
  double eps = 0.05;
  std::uint64_t seed = 0;
  std::string mode = "sampled";  // regularization search: sampled | exhaustive
  std::string certify = "auto";  // auto | exhaustive | sampled
  std::uint64_t budget = 4096;   // anchor scan budget
  std::string in;
  std::string out;
  std::string format = "json";  // gen: json | grid; bench: json | csv
  std::string kind;             // gen: full | bilinear | lss | enumerate; bench: enumerate | bilinear | lss
  int r = 1;
  int dimU = -1;
  int dimV = -1;
  int components = 2;
  int count = 10;  // bench runs per parameter point
};

/// Throws InvalidArgument for anything out of range.
void validate(const RunConfig& cfg);

int cmd_gen(const RunConfig& cfg, std::ostream& out);
int cmd_check(const RunConfig& cfg, std::ostream& out);
int cmd_extract(const RunConfig& cfg, std::ostream& out);
int cmd_oracle(const RunConfig& cfg, std::ostream& out);
int cmd_bench(const RunConfig& cfg, std::ostream& out);

/// Validates, dispatches on cfg.command and maps library errors to exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tvs::cli
