#include "mgplan/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace mgplan {

namespace {

std::string raw(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct Row {
  std::string metric;
  std::vector<std::string> shown;
  std::vector<std::string> values;
};

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  // avoid "-0.00"
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_dollars(double value) {
  const long long whole = std::llround(value);
  std::string digits = std::to_string(whole < 0 ? -whole : whole);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return whole < 0 ? "-" + out : out;
}

std::string format_percent_change(double from, double to) {
  if (from == 0.0) return "n/a";
  return format_fixed(100.0 * (to - from) / from, 2) + "%";
}

ComparisonReport compare_report(const std::vector<PlanSolution>& solutions,
                                const std::vector<std::string>& labels) {
  std::vector<std::string> header{"Metric"};
  std::vector<std::string> csv_header{"metric"};
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    header.push_back(i < labels.size() ? labels[i] : "solution " + std::to_string(i + 1));
    csv_header.push_back(header.back());
  }
  for (std::size_t i = 1; i < solutions.size(); ++i) {
    header.push_back("NPC vs " + header[1] + " (" + header[i + 1] + ")");
    csv_header.push_back("npc_change_" + header[i + 1]);
  }

  std::vector<Row> rows;
  auto add = [&](std::string metric, auto shown_fn, auto value_fn) {
    Row r{std::move(metric), {}, {}};
    for (const auto& s : solutions) {
      r.shown.push_back(shown_fn(s));
      r.values.push_back(value_fn(s));
    }
    rows.push_back(std::move(r));
  };
  add("NPC ($)", [](const PlanSolution& s) { return format_dollars(s.npc); },
      [](const PlanSolution& s) { return raw(s.npc); });
  add("LCOE ($/kWh)",
      [](const PlanSolution& s) { return s.lcoe ? format_fixed(*s.lcoe, 3) : std::string("n/a"); },
      [](const PlanSolution& s) { return s.lcoe ? raw(*s.lcoe) : std::string(); });
  add("BESS (kWh)", [](const PlanSolution& s) { return format_fixed(s.rating.bess_kwh, 2); },
      [](const PlanSolution& s) { return raw(s.rating.bess_kwh); });
  add("PV (kW)", [](const PlanSolution& s) { return format_fixed(s.rating.pv_kw, 2); },
      [](const PlanSolution& s) { return raw(s.rating.pv_kw); });
  add("WT (kW)", [](const PlanSolution& s) { return format_fixed(s.rating.wt_kw, 2); },
      [](const PlanSolution& s) { return raw(s.rating.wt_kw); });
  add("% Real Unmet",
      [](const PlanSolution& s) { return format_fixed(100.0 * s.real_unserved_fraction, 2) + "%"; },
      [](const PlanSolution& s) { return raw(s.real_unserved_fraction); });
  const bool any_autonomy = std::any_of(solutions.begin(), solutions.end(),
                                        [](const PlanSolution& s) { return s.autonomy_hours.has_value(); });
  if (any_autonomy) {
    add("Autonomy (h)",
        [](const PlanSolution& s) {
          return s.autonomy_hours ? format_fixed(*s.autonomy_hours, 2) : std::string("n/a");
        },
        [](const PlanSolution& s) { return s.autonomy_hours ? raw(*s.autonomy_hours) : std::string(); });
  }
  add("Status", [](const PlanSolution& s) { return std::string(to_string(s.status)); },
      [](const PlanSolution& s) { return std::string(to_string(s.status)); });

  // NPC change column entries live on the NPC row only.
  for (std::size_t i = 1; i < solutions.size(); ++i) {
    for (auto& r : rows) {
      if (&r == &rows.front()) {
        r.shown.push_back(format_percent_change(solutions[0].npc, solutions[i].npc));
        r.values.push_back(solutions[0].npc == 0.0
                               ? std::string()
                               : raw((solutions[i].npc - solutions[0].npc) / solutions[0].npc));
      } else {
        r.shown.emplace_back();
        r.values.emplace_back();
      }
    }
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    width[0] = std::max(width[0], r.metric.size());
    for (std::size_t c = 0; c < r.shown.size(); ++c) {
      width[c + 1] = std::max(width[c + 1], r.shown[c].size());
    }
  }

  ComparisonReport report;
  auto emit_line = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == 0) {
        line += cells[c] + std::string(width[c] - cells[c].size(), ' ');
      } else {
        line += "  " + std::string(width[c] - cells[c].size(), ' ') + cells[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    report.text += line + '\n';
  };
  emit_line(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  report.text += std::string(total - 2, '-') + '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.metric};
    cells.insert(cells.end(), r.shown.begin(), r.shown.end());
    emit_line(cells);
  }

  auto csv_line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) report.csv += ',';
      report.csv += csv_cell(cells[c]);
    }
    report.csv += '\n';
  };
  csv_line(csv_header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.metric};
    cells.insert(cells.end(), r.values.begin(), r.values.end());
    csv_line(cells);
  }
  return report;
}

}  // namespace mgplan
