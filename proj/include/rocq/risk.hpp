#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rocq/montecarlo.hpp"

namespace rocq {

enum class LecGrid {
    Log,     // 200 log-spaced thresholds from 0 (first point) to max(samples)
    Linear,  // 200 evenly spaced thresholds from 0 to max(samples)
    Exact,   // 0 plus every distinct sample value
};

struct LecPolicy {
    LecGrid grid = LecGrid::Log;
    std::size_t points = 200;
};

struct LecPoint {
    double threshold_usd = 0.0;
    double exceedance_probability = 0.0;

    bool operator==(const LecPoint&) const = default;
};

// Loss exceedance curve: P(Loss > L) over increasing thresholds L.
// Thresholds are strictly increasing, probabilities non-increasing, and the
// first point is at L = 0.
struct LecCurve {
    std::string vulnerability;  // a vulnerability id or "total"
    std::vector<LecPoint> points;

    bool operator==(const LecCurve&) const = default;
};

// Fraction of samples strictly greater than the threshold; ties do not
// exceed.
double exceedance_probability(std::span<const double> samples,
                              double threshold);

LecCurve build_lec(std::span<const double> samples,
                   const LecPolicy& policy = {},
                   std::string label = std::string());
LecCurve build_lec(const LossSamples& samples, const LecPolicy& policy = {});

// Return on Control: (baseline EL - control EL) / cost. Negative when the
// control worsens expected loss; reported as-is, never clamped.
double compute_roc(double baseline_el, double control_el, double cost);

struct ControlCell {
    double el = 0.0;
    double roc = 0.0;

    bool operator==(const ControlCell&) const = default;
};

struct RiskRow {
    double baseline_el = 0.0;
    std::map<std::string, ControlCell> controls;  // keyed by control name

    bool operator==(const RiskRow&) const = default;
};

// Baseline-vs-controls expected losses and RoC, one row per vulnerability
// plus a totals row.
struct RiskComparison {
    std::string baseline_name;
    std::vector<std::string> control_names;  // column order
    std::map<std::string, double> control_costs;
    std::map<std::string, RiskRow> rows;  // keyed by vulnerability id
    RiskRow totals;

    bool operator==(const RiskComparison&) const = default;
};

// All results must share one vulnerability set and num_trials; every control
// needs a positive cost entry. Row RoCs all use the control's full cost, so
// the per-vulnerability RoCs sum to the total RoC.
RiskComparison compare_scenarios(const SimulationResult& baseline,
                                 std::span<const SimulationResult> controls,
                                 const std::map<std::string, double>& costs);

}  // namespace rocq
