#pragma once

#include <string>
#include <vector>

#include "rocq/core_types.hpp"
#include "rocq/risk.hpp"

namespace rocq {

enum class TableFormat { Table, Csv, Json };
enum class AxisScale { Log, Linear };

struct RenderOptions {
    TableFormat format = TableFormat::Table;
    AxisScale scale = AxisScale::Log;
};

// Display rules, applied at render time only (underlying values keep full
// precision; the JSON renderings are lossless):
//   probabilities  truncated to 3 decimals   0.98077 -> "0.980"
//   USD            rounded half-up to $1     181442.3 -> "181442"
//   RoC            rounded half-up to 2 dp   -0.04133 -> "-0.04"
std::string format_probability(double p);
std::string format_usd(double usd);
std::string format_usd_grouped(double usd);  // "181,442" for text tables
std::string format_roc(double roc);

// One row per vulnerability with per-scenario failure counts and Laplace
// success estimates. All scenarios must share one vulnerability set. The
// trials column comes from the first scenario.
std::string render_vulnerability_table(const std::vector<ScenarioConfig>& scenarios,
                                       TableFormat format);

// Table of expected losses and RoC: per-vulnerability rows plus a total row.
// Columns: baseline EL, then EL and RoC per control.
std::string render_risk_table(const RiskComparison& comparison,
                              TableFormat format);

// CSV with header "threshold_usd,exceedance_probability", full precision.
std::string lec_to_csv(const LecCurve& curve);

struct LabeledCurve {
    std::string label;  // scenario name for the legend
    LecCurve curve;
};

// Self-contained SVG 1.1, fixed 800x500 viewport: loss on the x axis (log
// scale by default), P(Loss > L) on the y axis, one polyline per scenario
// with a legend. Hand-assembled so identical input yields identical bytes.
// All curves must describe the same vulnerability.
std::string emit_lec_svg(const std::vector<LabeledCurve>& curves,
                         const RenderOptions& options = {});

}  // namespace rocq
