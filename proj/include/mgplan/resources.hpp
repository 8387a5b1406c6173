#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mgplan/errors.hpp"

namespace mgplan {

enum class TimestampFormat { hour_index, iso8601 };

// Instants as seconds (ISO input, UTC, offsets folded in) or hour numbers
// (integer index input, stored as index * 3600).
struct TimeAxis {
  TimestampFormat format = TimestampFormat::hour_index;
  std::vector<std::int64_t> seconds;

  std::size_t size() const { return seconds.size(); }
  // Uniform spacing in hours (1.0 for a single instant).
  double step_hours() const;

  static TimeAxis hourly_index(std::size_t n, double step_hours = 1.0);
};

struct ScenarioSeries {
  TimeAxis time;
  std::vector<double> ghi_wm2;
  std::vector<double> wind_ms;
  std::vector<double> load_kw;

  std::size_t size() const { return load_kw.size(); }
  // Throws ScenarioError on any invariant violation.
  void validate() const;
};

enum class ScenarioErrorKind {
  missing_file,
  missing_column,
  parse_error,
  ragged_length,
  non_monotonic_timestamps,
  non_uniform_spacing,
  misaligned_timestamps,
  invalid_value,
  empty,
};

class ScenarioError : public InputError {
 public:
  ScenarioError(ScenarioErrorKind kind, const std::string& message,
                std::optional<std::size_t> row = std::nullopt);
  ScenarioErrorKind kind() const { return kind_; }
  // Zero-based data row (header excluded) when the error is tied to one.
  std::optional<std::size_t> row() const { return row_; }

 private:
  ScenarioErrorKind kind_;
  std::optional<std::size_t> row_;
};

struct ColumnMapping {
  std::string timestamp = "timestamp";
  std::string ghi = "ghi_wm2";
  std::string wind = "wind_ms";
  std::string load = "load_kw";
};

/// Reads weather (and, when load_path is empty, load from the same file).
ScenarioSeries read_scenario(const std::filesystem::path& weather_path,
                             const std::filesystem::path& load_path = {},
                             const ColumnMapping& columns = {});

void write_weather_csv(const ScenarioSeries& series, const std::filesystem::path& path);
void write_load_csv(const TimeAxis& time, const std::vector<double>& load_kw,
                    const std::filesystem::path& path);
// Weather file plus a load file; an empty load_path appends load_kw to the weather file.
void write_scenario(const ScenarioSeries& series,
                    const std::filesystem::path& weather_path,
                    const std::filesystem::path& load_path = {});

std::string format_timestamp(const TimeAxis& time, std::size_t i);

/// Tabulated turbine output; zero at and below the first (cut-in) speed
/// and above the last (survival) speed, linear in between.
class PowerCurve {
 public:
  using Point = std::pair<double, double>;  // speed m/s, power kW

  explicit PowerCurve(std::vector<Point> points);

  double power_at(double speed_ms) const;
  double max_power() const;
  const std::vector<Point>& points() const { return points_; }

  // GV-2kW VAWT default table (see data/gv2kw_power_curve.csv).
  static PowerCurve gv2kw();

 private:
  std::vector<Point> points_;
};

PowerCurve read_power_curve(const std::filesystem::path& path);
void write_power_curve(const PowerCurve& curve, const std::filesystem::path& path);

struct AvailabilitySeries {
  std::vector<double> pv_per_kw;    // kW output per kW installed
  std::vector<double> wt_per_unit;  // kW output per turbine

  std::size_t size() const { return pv_per_kw.size(); }
};

std::vector<double> pv_availability(const ScenarioSeries& series, double derate);
std::vector<double> wt_availability(const ScenarioSeries& series, const PowerCurve& curve);
AvailabilitySeries availability(const ScenarioSeries& series, double derate,
                                const PowerCurve& curve);

/// Rectangular daily profile: base_kw all day, peak_kw inside
/// [window_start_hour, window_start_hour + window_hours). Each hourly value is
/// the hour's average power, so a fractional window edge gives one
/// partial-power hour and the daily sum matches the continuous profile.
struct LoadProfile {
  double base_kw = 0.43;
  double peak_kw = 1.33;
  double window_start_hour = 8.0;
  double window_hours = 9.66;
};

std::vector<double> synthesize_load(const LoadProfile& profile, int days);
double daily_energy_kwh(const LoadProfile& profile);

/// Synthetic hot-desert year: strong summer irradiance, weak wind, a few
/// overcast/dust days, and an optional block of days with no renewable
/// resource at all. Deterministic in the seed.
struct WeatherSynthesis {
  int days = 365;
  double latitude_deg = 26.5;
  std::uint64_t seed = 2018;
  double low_day_probability = 0.04;
  int gap_start_day = -1;  // first zero-resource day (0-based); < 0 disables
  int gap_days = 0;
};

ScenarioSeries synthesize_weather(const WeatherSynthesis& options);

}  // namespace mgplan
