#include "mgplan/resources.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>

namespace mgplan {

namespace {

constexpr std::int64_t kSecondsPerHour = 3600;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return value;
}

// "YYYY-MM-DD[T| ]HH:MM[:SS][Z|(+|-)HH[:MM]]" -> seconds since epoch, UTC.
std::optional<std::int64_t> parse_iso8601(std::string_view s) {
  using namespace std::chrono;
  if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':') {
    return std::nullopt;
  }
  const auto year = parse_number<int>(s.substr(0, 4));
  const auto month = parse_number<unsigned>(s.substr(5, 2));
  const auto day = parse_number<unsigned>(s.substr(8, 2));
  const auto hour = parse_number<int>(s.substr(11, 2));
  const auto minute = parse_number<int>(s.substr(14, 2));
  if (!year || !month || !day || !hour || !minute) return std::nullopt;
  std::size_t pos = 16;
  int second = 0;
  if (pos < s.size() && s[pos] == ':') {
    const auto sec = parse_number<int>(s.substr(pos + 1, 2));
    if (!sec || s.size() < pos + 3) return std::nullopt;
    second = *sec;
    pos += 3;
  }
  int offset_minutes = 0;
  if (pos < s.size()) {
    const char c = s[pos];
    if (c == 'Z' && pos + 1 == s.size()) {
      // UTC
    } else if ((c == '+' || c == '-') && s.size() >= pos + 3) {
      const auto oh = parse_number<int>(s.substr(pos + 1, 2));
      int om = 0;
      if (!oh) return std::nullopt;
      std::size_t rest = pos + 3;
      if (rest < s.size()) {
        if (s[rest] == ':') ++rest;
        const auto m = parse_number<int>(s.substr(rest));
        if (!m) return std::nullopt;
        om = *m;
      }
      offset_minutes = (c == '+' ? 1 : -1) * (*oh * 60 + om);
    } else {
      return std::nullopt;
    }
  }
  const year_month_day ymd{std::chrono::year{*year}, std::chrono::month{*month},
                           std::chrono::day{*day}};
  if (!ymd.ok() || *hour > 23 || *minute > 59 || second > 60) return std::nullopt;
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days_since_epoch) * 86400 + *hour * 3600 +
         *minute * 60 + second - offset_minutes * 60;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const std::filesystem::path& path) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ScenarioError(ScenarioErrorKind::missing_column,
                          path.string() + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(ScenarioErrorKind::missing_file, "cannot open " + path.string());
  }
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (!have_header) {
      for (auto f : fields) table.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ScenarioError(ScenarioErrorKind::parse_error,
                          path.string() + ": line " + std::to_string(line_no) +
                              " has " + std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(table.header.size()),
                          table.rows.size());
    }
    table.rows.emplace_back(fields.begin(), fields.end());
  }
  if (!have_header) {
    throw ScenarioError(ScenarioErrorKind::empty, path.string() + ": no header row");
  }
  return table;
}

std::vector<double> numeric_column(const CsvTable& table, std::size_t col,
                                   const std::string& name,
                                   const std::filesystem::path& path) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto v = parse_number<double>(table.rows[r][col]);
    if (!v) {
      throw ScenarioError(ScenarioErrorKind::parse_error,
                          path.string() + ": row " + std::to_string(r) + " column '" +
                              name + "' is not a number",
                          r);
    }
    out.push_back(*v);
  }
  return out;
}

TimeAxis time_column(const CsvTable& table, std::size_t col,
                     const std::filesystem::path& path) {
  TimeAxis axis;
  axis.seconds.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& cell = table.rows[r][col];
    if (r == 0) {
      axis.format = parse_number<std::int64_t>(cell) ? TimestampFormat::hour_index
                                                     : TimestampFormat::iso8601;
    }
    std::optional<std::int64_t> secs;
    if (axis.format == TimestampFormat::hour_index) {
      if (const auto idx = parse_number<std::int64_t>(cell)) secs = *idx * kSecondsPerHour;
    } else {
      secs = parse_iso8601(cell);
    }
    if (!secs) {
      throw ScenarioError(ScenarioErrorKind::parse_error,
                          path.string() + ": row " + std::to_string(r) +
                              " has unparseable timestamp '" + cell + "'",
                          r);
    }
    axis.seconds.push_back(*secs);
  }
  return axis;
}

void check_values(const std::vector<double>& values, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ScenarioError(ScenarioErrorKind::invalid_value,
                          std::string(name) + " is not finite at row " + std::to_string(i),
                          i);
    }
    if (values[i] < 0.0) {
      throw ScenarioError(ScenarioErrorKind::invalid_value,
                          std::string(name) + " is negative at row " + std::to_string(i),
                          i);
    }
  }
}

void check_axis(const TimeAxis& axis) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (axis.seconds[i] <= axis.seconds[i - 1]) {
      throw ScenarioError(ScenarioErrorKind::non_monotonic_timestamps,
                          "timestamps not strictly increasing at row " + std::to_string(i),
                          i);
    }
    if (axis.seconds[i] - axis.seconds[i - 1] != axis.seconds[1] - axis.seconds[0]) {
      throw ScenarioError(ScenarioErrorKind::non_uniform_spacing,
                          "timestamp spacing changes at row " + std::to_string(i), i);
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Portable uniform in [0, 1): std distributions are implementation-defined,
// the raw mt19937_64 sequence is not.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double weibull_unit_mean(std::mt19937_64& rng, double shape) {
  const double scale = 1.0 / std::tgamma(1.0 + 1.0 / shape);
  return scale * std::pow(-std::log1p(-uniform01(rng)), 1.0 / shape);
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30,
                                            31, 31, 30, 31, 30, 31};
// Monthly mean daily insolation, kWh/m2/day: June peak 6.99, November low
// 3.296, annual mean about 5.22.
constexpr std::array<double, 12> kInsolation = {3.5, 4.4, 5.2, 5.9, 6.6,  6.99,
                                                6.8, 6.4, 5.8, 4.4, 3.296, 3.4};
// Monthly mean wind speed, m/s: January high 3.98, September low 2.06,
// annual mean about 3.29.
constexpr std::array<double, 12> kWindMean = {3.98, 3.9, 3.8, 3.6, 3.5, 3.6,
                                              3.2,  2.6, 2.06, 2.7, 3.3, 3.25};

int month_of(int day_index) {
  int d = day_index % 365;
  for (int m = 0; m < 12; ++m) {
    if (d < kMonthDays[m]) return m;
    d -= kMonthDays[m];
  }
  return 11;
}

// Haurwitz clear-sky GHI at solar hour `hour` (0..24, noon = 12).
double clear_sky_ghi(int day_of_year, double hour, double latitude_rad) {
  const double decl = 23.45 * std::numbers::pi / 180.0 *
                      std::sin(2.0 * std::numbers::pi * (284.0 + day_of_year) / 365.0);
  const double hour_angle = (hour - 12.0) * 15.0 * std::numbers::pi / 180.0;
  const double cos_zenith = std::sin(latitude_rad) * std::sin(decl) +
                            std::cos(latitude_rad) * std::cos(decl) * std::cos(hour_angle);
  if (cos_zenith <= 0.0) return 0.0;
  return 1098.0 * cos_zenith * std::exp(-0.057 / cos_zenith);
}

}  // namespace

ScenarioError::ScenarioError(ScenarioErrorKind kind, const std::string& message,
                             std::optional<std::size_t> row)
    : InputError(message), kind_(kind), row_(row) {}

double TimeAxis::step_hours() const {
  if (seconds.size() < 2) return 1.0;
  return static_cast<double>(seconds[1] - seconds[0]) / kSecondsPerHour;
}

TimeAxis TimeAxis::hourly_index(std::size_t n, double step_hours) {
  TimeAxis axis;
  axis.format = TimestampFormat::hour_index;
  axis.seconds.resize(n);
  const auto step = static_cast<std::int64_t>(std::llround(step_hours * kSecondsPerHour));
  for (std::size_t i = 0; i < n; ++i) axis.seconds[i] = static_cast<std::int64_t>(i) * step;
  return axis;
}

void ScenarioSeries::validate() const {
  const std::size_t n = time.size();
  if (n == 0) throw ScenarioError(ScenarioErrorKind::empty, "scenario has no steps");
  if (ghi_wm2.size() != n || wind_ms.size() != n || load_kw.size() != n) {
    throw ScenarioError(ScenarioErrorKind::ragged_length,
                        "scenario columns have different lengths (time " +
                            std::to_string(n) + ", ghi " + std::to_string(ghi_wm2.size()) +
                            ", wind " + std::to_string(wind_ms.size()) + ", load " +
                            std::to_string(load_kw.size()) + ")");
  }
  check_axis(time);
  check_values(ghi_wm2, "ghi_wm2");
  check_values(wind_ms, "wind_ms");
  check_values(load_kw, "load_kw");
}

ScenarioSeries read_scenario(const std::filesystem::path& weather_path,
                             const std::filesystem::path& load_path,
                             const ColumnMapping& columns) {
  const CsvTable weather = read_csv(weather_path);
  ScenarioSeries series;
  series.time = time_column(weather, weather.column(columns.timestamp, weather_path),
                            weather_path);
  series.ghi_wm2 =
      numeric_column(weather, weather.column(columns.ghi, weather_path), columns.ghi,
                     weather_path);
  series.wind_ms =
      numeric_column(weather, weather.column(columns.wind, weather_path), columns.wind,
                     weather_path);

  if (load_path.empty()) {
    series.load_kw = numeric_column(weather, weather.column(columns.load, weather_path),
                                    columns.load, weather_path);
  } else {
    const CsvTable load = read_csv(load_path);
    const TimeAxis load_time =
        time_column(load, load.column(columns.timestamp, load_path), load_path);
    series.load_kw =
        numeric_column(load, load.column(columns.load, load_path), columns.load, load_path);
    if (load_time.size() != series.time.size()) {
      throw ScenarioError(ScenarioErrorKind::ragged_length,
                          "weather has " + std::to_string(series.time.size()) +
                              " rows but load has " + std::to_string(load_time.size()));
    }
    if (load_time.format == series.time.format) {
      for (std::size_t i = 0; i < load_time.size(); ++i) {
        if (load_time.seconds[i] != series.time.seconds[i]) {
          throw ScenarioError(ScenarioErrorKind::misaligned_timestamps,
                              "weather and load timestamps differ at row " +
                                  std::to_string(i),
                              i);
        }
      }
    }
  }
  series.validate();
  return series;
}

std::string format_timestamp(const TimeAxis& time, std::size_t i) {
  using namespace std::chrono;
  const std::int64_t s = time.seconds[i];
  if (time.format == TimestampFormat::hour_index) {
    if (s % kSecondsPerHour == 0) return std::to_string(s / kSecondsPerHour);
    return format_double(static_cast<double>(s) / kSecondsPerHour);
  }
  const sys_seconds tp{seconds{s}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

void write_weather_csv(const ScenarioSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "timestamp,ghi_wm2,wind_ms\n";
  for (std::size_t i = 0; i < series.time.size(); ++i) {
    out << format_timestamp(series.time, i) << ',' << format_double(series.ghi_wm2[i])
        << ',' << format_double(series.wind_ms[i]) << '\n';
  }
}

void write_load_csv(const TimeAxis& time, const std::vector<double>& load_kw,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "timestamp,load_kw\n";
  for (std::size_t i = 0; i < load_kw.size(); ++i) {
    out << format_timestamp(time, i) << ',' << format_double(load_kw[i]) << '\n';
  }
}

void write_scenario(const ScenarioSeries& series, const std::filesystem::path& weather_path,
                    const std::filesystem::path& load_path) {
  if (!load_path.empty()) {
    write_weather_csv(series, weather_path);
    write_load_csv(series.time, series.load_kw, load_path);
    return;
  }
  std::ofstream out(weather_path);
  if (!out) throw InputError("cannot write " + weather_path.string());
  out << "timestamp,ghi_wm2,wind_ms,load_kw\n";
  for (std::size_t i = 0; i < series.time.size(); ++i) {
    out << format_timestamp(series.time, i) << ',' << format_double(series.ghi_wm2[i])
        << ',' << format_double(series.wind_ms[i]) << ','
        << format_double(series.load_kw[i]) << '\n';
  }
}

PowerCurve::PowerCurve(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InputError("power curve needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto [speed, power] = points_[i];
    if (!std::isfinite(speed) || !std::isfinite(power) || speed < 0.0 || power < 0.0) {
      throw InputError("power curve point " + std::to_string(i) + " is invalid");
    }
    if (i > 0 && speed <= points_[i - 1].first) {
      throw InputError("power curve speeds must be strictly increasing");
    }
  }
  if (points_.front().second != 0.0) {
    throw InputError("power curve must start at the cut-in speed with zero power");
  }
}

double PowerCurve::power_at(double speed_ms) const {
  if (speed_ms <= points_.front().first || speed_ms > points_.back().first) return 0.0;
  const auto upper = std::lower_bound(
      points_.begin(), points_.end(), speed_ms,
      [](const Point& p, double v) { return p.first < v; });
  if (upper->first == speed_ms) return upper->second;
  const auto lower = std::prev(upper);
  const double w = (speed_ms - lower->first) / (upper->first - lower->first);
  return lower->second + w * (upper->second - lower->second);
}

double PowerCurve::max_power() const {
  double best = 0.0;
  for (const auto& p : points_) best = std::max(best, p.second);
  return best;
}

PowerCurve PowerCurve::gv2kw() {
  // Cubic rise from cut-in (2.8 m/s) to 2 kW at 11 m/s, plateau at 2.5 kW
  // from 13 m/s to the 25 m/s survival speed.
  constexpr double cut_in = 2.8;
  constexpr double rated_speed = 11.0;
  constexpr double rated_kw = 2.0;
  std::vector<Point> pts = {{cut_in, 0.0}};
  for (int v = 3; v <= 10; ++v) {
    const double frac = (v * v * v - cut_in * cut_in * cut_in) /
                        (rated_speed * rated_speed * rated_speed - cut_in * cut_in * cut_in);
    pts.emplace_back(v, std::round(rated_kw * frac * 1e4) / 1e4);
  }
  pts.emplace_back(rated_speed, rated_kw);
  pts.emplace_back(12.0, 2.3);
  pts.emplace_back(13.0, 2.5);
  pts.emplace_back(25.0, 2.5);
  return PowerCurve(std::move(pts));
}

PowerCurve read_power_curve(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const auto speeds = numeric_column(table, table.column("speed_ms", path), "speed_ms", path);
  const auto powers = numeric_column(table, table.column("power_kw", path), "power_kw", path);
  std::vector<PowerCurve::Point> pts;
  for (std::size_t i = 0; i < speeds.size(); ++i) pts.emplace_back(speeds[i], powers[i]);
  return PowerCurve(std::move(pts));
}

void write_power_curve(const PowerCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "speed_ms,power_kw\n";
  for (const auto& [speed, power] : curve.points()) {
    out << format_double(speed) << ',' << format_double(power) << '\n';
  }
}

std::vector<double> pv_availability(const ScenarioSeries& series, double derate) {
  std::vector<double> out(series.ghi_wm2.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = std::max(0.0, derate * series.ghi_wm2[t] / 1000.0);
  }
  return out;
}

std::vector<double> wt_availability(const ScenarioSeries& series, const PowerCurve& curve) {
  std::vector<double> out(series.wind_ms.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = curve.power_at(series.wind_ms[t]);
  return out;
}

AvailabilitySeries availability(const ScenarioSeries& series, double derate,
                                const PowerCurve& curve) {
  return {pv_availability(series, derate), wt_availability(series, curve)};
}

std::vector<double> synthesize_load(const LoadProfile& profile, int days) {
  if (profile.base_kw < 0.0 || profile.peak_kw < profile.base_kw) {
    throw InputError("load profile needs 0 <= base_kw <= peak_kw");
  }
  if (profile.window_hours < 0.0 || profile.window_start_hour < 0.0 ||
      profile.window_start_hour + profile.window_hours > 24.0) {
    throw InputError("load window must lie within the day");
  }
  if (days < 0) throw InputError("days must be >= 0");
  const double start = profile.window_start_hour;
  const double end = start + profile.window_hours;
  std::array<double, 24> day{};
  for (int h = 0; h < 24; ++h) {
    const double overlap = std::max(0.0, std::min<double>(h + 1, end) - std::max<double>(h, start));
    day[h] = profile.base_kw + overlap * (profile.peak_kw - profile.base_kw);
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(days) * 24);
  for (int d = 0; d < days; ++d) out.insert(out.end(), day.begin(), day.end());
  return out;
}

double daily_energy_kwh(const LoadProfile& profile) {
  return 24.0 * profile.base_kw + profile.window_hours * (profile.peak_kw - profile.base_kw);
}

ScenarioSeries synthesize_weather(const WeatherSynthesis& options) {
  if (options.days <= 0) throw InputError("weather synthesis needs days > 0");
  std::mt19937_64 rng(options.seed);
  const double lat = options.latitude_deg * std::numbers::pi / 180.0;
  const auto n_days = static_cast<std::size_t>(options.days);

  std::vector<double> day_factor(n_days);
  std::vector<bool> low_day(n_days, false);
  for (std::size_t d = 0; d < n_days; ++d) {
    if (low_day[d]) continue;
    if (uniform01(rng) < options.low_day_probability) {
      low_day[d] = true;
      // Dust or overcast spells sometimes last two days.
      if (d + 1 < n_days && uniform01(rng) < 0.4) low_day[d + 1] = true;
    }
  }
  for (std::size_t d = 0; d < n_days; ++d) {
    day_factor[d] = low_day[d] ? 0.30 + 0.25 * uniform01(rng)
                               : std::clamp(1.0 + 0.08 * standard_normal(rng), 0.75, 1.1);
  }

  ScenarioSeries series;
  series.time = TimeAxis::hourly_index(n_days * 24);
  series.ghi_wm2.resize(n_days * 24);
  series.wind_ms.resize(n_days * 24);
  series.load_kw.assign(n_days * 24, 0.0);

  double gust = 1.0;
  for (std::size_t d = 0; d < n_days; ++d) {
    const int month = month_of(static_cast<int>(d));
    const int doy = static_cast<int>(d % 365) + 1;

    std::array<double, 24> clear{};
    double clear_sum = 0.0;
    for (int h = 0; h < 24; ++h) {
      clear[h] = clear_sky_ghi(doy, h + 0.5, lat);
      clear_sum += clear[h];
    }
    const double ghi_scale =
        clear_sum > 0.0 ? kInsolation[month] * 1000.0 / clear_sum * day_factor[d] : 0.0;
    const double wind_day =
        weibull_unit_mean(rng, 2.5) * (low_day[d] ? 0.35 : 1.0);
    for (int h = 0; h < 24; ++h) {
      const std::size_t t = d * 24 + h;
      series.ghi_wm2[t] = clear[h] * ghi_scale;
      gust = 0.6 * gust + 0.4 * weibull_unit_mean(rng, 2.0);
      const double diurnal =
          1.0 + 0.25 * std::sin(2.0 * std::numbers::pi * (h - 9.0) / 24.0);
      series.wind_ms[t] = kWindMean[month] * wind_day * diurnal * gust;
    }
  }

  // Rescale each month to its target means (partial months included).
  for (std::size_t first = 0; first < n_days;) {
    const int month = month_of(static_cast<int>(first));
    std::size_t last = first;
    while (last < n_days && month_of(static_cast<int>(last)) == month) ++last;
    double ghi_sum = 0.0;
    double wind_sum = 0.0;
    for (std::size_t t = first * 24; t < last * 24; ++t) {
      ghi_sum += series.ghi_wm2[t];
      wind_sum += series.wind_ms[t];
    }
    const double n_month = static_cast<double>(last - first);
    const double ghi_fix = ghi_sum > 0 ? kInsolation[month] * 1000.0 * n_month / ghi_sum : 0;
    const double wind_fix = wind_sum > 0 ? kWindMean[month] * 24.0 * n_month / wind_sum : 0;
    for (std::size_t t = first * 24; t < last * 24; ++t) {
      series.ghi_wm2[t] *= ghi_fix;
      series.wind_ms[t] *= wind_fix;
    }
    first = last;
  }

  for (std::size_t t = 0; t < series.ghi_wm2.size(); ++t) {
    series.ghi_wm2[t] = std::round(series.ghi_wm2[t] * 10.0) / 10.0;
    series.wind_ms[t] = std::round(series.wind_ms[t] * 100.0) / 100.0;
  }

  if (options.gap_start_day >= 0 && options.gap_days > 0) {
    const auto begin = std::min(n_days, static_cast<std::size_t>(options.gap_start_day));
    const auto end = std::min(n_days, begin + static_cast<std::size_t>(options.gap_days));
    for (std::size_t t = begin * 24; t < end * 24; ++t) {
      series.ghi_wm2[t] = 0.0;
      series.wind_ms[t] = 0.0;
    }
  }
  return series;
}

}  // namespace mgplan
