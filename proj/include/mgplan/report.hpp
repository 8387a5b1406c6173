#pragma once

#include <string>
#include <vector>

#include "mgplan/planner.hpp"

namespace mgplan {

struct ComparisonReport {
  std::string text;  // aligned table for humans
  std::string csv;   // same cells, unformatted values
};

/// Side-by-side NPC, LCOE, BESS kWh, PV kW, WT kW and real unmet %. Every
/// solution after the first gets a column with its NPC relative to the first.
/// Labels default to "solution N" when fewer labels than solutions are given.
ComparisonReport compare_report(const std::vector<PlanSolution>& solutions,
                                const std::vector<std::string>& labels = {});

// Formatting helpers used by the table.
std::string format_dollars(double value);        // "101,530"
std::string format_fixed(double value, int decimals);
std::string format_percent_change(double from, double to);  // "-7.48%"

}  // namespace mgplan
