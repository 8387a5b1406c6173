#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mgplan/resources.hpp"

namespace mgplan::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputError = 2,
  kInfeasible = 3,
  kResourceLimit = 4,
};

enum class Mode { plan, autonomy, evaluate, export_milp, synth_load, synth_weather, compare, validate };

std::optional<Mode> parse_mode(std::string_view text);
std::string_view to_string(Mode mode);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Mode mode = Mode::plan;
  std::filesystem::path weather;
  std::filesystem::path load;   // empty: load column of the weather file
  std::filesystem::path curve;  // empty: built-in GV-2kW table
  std::filesystem::path catalog;
  std::filesystem::path params;  // optional project parameter overrides
  std::filesystem::path out = ".";

  std::optional<double> unmet_cap;
  std::optional<double> reserve_cap;
  std::optional<int> fix_pv;
  std::optional<int> fix_wt;
  std::optional<int> fix_bess;
  bool no_wt = false;
  bool brute_force = false;
  int jobs = 1;
  std::uint64_t seed = 2018;

  // synth-load / synth-weather
  LoadProfile load_profile;
  int days = 365;
  int gap_start_day = -1;
  int gap_days = 0;

  // compare: solution JSON files; validate: one assignment file
  std::vector<std::filesystem::path> solutions;
  std::vector<std::string> labels;
  std::filesystem::path model;  // validate: LP file; empty builds from inputs
  double tolerance = 1e-6;
  std::size_t max_rows = 2'000'000;

  // Throws UsageError when a mode-specific field is missing or a value is out of range.
  void validate() const;
};

/// Parses argv (CLI11; --config FILE supplies defaults, flags override it).
/// Returns nullopt after printing help. Throws UsageError on bad arguments.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes one run and writes its artifacts under config.out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error-to-exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mgplan::cli
