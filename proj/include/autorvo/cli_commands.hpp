#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "autorvo/eval.hpp"

namespace autorvo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;  // parse, validation, id mismatch, missing file
inline constexpr int kExitAudit = 3;  // the run finished with overlapping shapes

struct RunArgs {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  std::vector<std::string> overrides;
};
/// Writes trajectory.csv, trajectory.json and summary.json into out_dir.
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

struct EvalArgs {
  std::filesystem::path reference_csv;
  std::filesystem::path reference_json;
  std::filesystem::path scenario;
  std::filesystem::path configs;
  std::filesystem::path out_dir;  // empty: print only
  std::vector<std::string> overrides;
};
/// Prints the entropy table; with out_dir also writes report.txt and report.json.
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
  std::filesystem::path scenario;
  std::vector<int> neighbors{1, 2, 4, 5, 8};
  std::vector<int> samples{25, 100, 400};
  int reps = 20;
  std::filesystem::path csv;  // empty: CSV to stdout
};
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

struct SynthArgs {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  eval::SyntheticOptions options;
  std::vector<std::string> overrides;
};
/// Writes reference.csv, reference.json and the window's scenario.json into out_dir.
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);

/// Prints a one-line summary and the effective configuration.
int cmd_validate(const std::filesystem::path& scenario, const std::vector<std::string>& overrides,
                 std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and dispatches.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace autorvo::cli
