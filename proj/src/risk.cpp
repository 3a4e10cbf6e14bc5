#include "rocq/risk.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rocq/errors.hpp"

namespace rocq {

namespace {

// Thresholds for a curve over samples with the given maximum. Always starts
// at 0; strictly increasing; ends at max(samples) when any sample is
// positive.
std::vector<double> make_thresholds(std::span<const double> sorted,
                                    const LecPolicy& policy) {
    const double max = sorted.back();
    std::vector<double> thresholds;
    thresholds.push_back(0.0);
    if (max <= 0.0) {
        return thresholds;  // no losses ever exceed a non-negative threshold
    }
    const std::size_t points = std::max<std::size_t>(policy.points, 2);
    switch (policy.grid) {
        case LecGrid::Log: {
            // Log-spaced from the smallest positive sample up to the max;
            // the triangle parameters span orders of magnitude, so linear
            // spacing would waste most points on the tail.
            const auto first_pos =
                std::upper_bound(sorted.begin(), sorted.end(), 0.0);
            const double lo = *first_pos;
            if (lo >= max) {
                thresholds.push_back(max);
                break;
            }
            const double ratio = max / lo;
            const std::size_t n = points - 1;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                thresholds.push_back(
                    lo * std::pow(ratio, static_cast<double>(i) /
                                             static_cast<double>(n - 1)));
            }
            thresholds.push_back(max);
            break;
        }
        case LecGrid::Linear: {
            for (std::size_t i = 1; i + 1 < points; ++i) {
                thresholds.push_back(max * static_cast<double>(i) /
                                     static_cast<double>(points - 1));
            }
            thresholds.push_back(max);
            break;
        }
        case LecGrid::Exact: {
            for (double v : sorted) {
                if (v > 0.0) {
                    thresholds.push_back(v);
                }
            }
            break;
        }
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    return thresholds;
}

}  // namespace

double exceedance_probability(std::span<const double> samples,
                               double threshold) {
    if (samples.empty()) {
        throw std::invalid_argument("exceedance_probability: empty samples");
    }
    std::size_t count = 0;
    for (double s : samples) {
        if (s > threshold) {
            ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(samples.size());
}

LecCurve build_lec(std::span<const double> samples, const LecPolicy& policy,
                   std::string label) {
    if (samples.empty()) {
        throw std::invalid_argument("build_lec: empty sample vector");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    LecCurve curve;
    curve.vulnerability = std::move(label);
    const double n = static_cast<double>(sorted.size());
    for (double threshold : make_thresholds(sorted, policy)) {
        // strictly greater: ties at the threshold do not exceed
        const auto above =
            sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold);
        curve.points.push_back(
            {threshold, static_cast<double>(above) / n});
    }
    return curve;
}

LecCurve build_lec(const LossSamples& samples, const LecPolicy& policy) {
    return build_lec(std::span<const double>(samples.samples), policy,
                     samples.vulnerability);
}

double compute_roc(double baseline_el, double control_el, double cost) {
    if (!(cost > 0.0)) {
        throw std::invalid_argument("compute_roc: cost must be positive");
    }
    return (baseline_el - control_el) / cost;
}

namespace {

void check_total_consistency(const SimulationResult& result) {
    double sum = 0.0;
    for (const auto& [id, el] : result.expected_losses) {
        (void)id;
        sum += el;
    }
    const double scale = std::max(1.0, std::abs(sum));
    if (std::abs(sum - result.total_expected_loss) > 1e-6 * scale) {
        throw ValidationError("total_expected_loss of scenario \"" +
                              result.scenario_name +
                              "\" does not match the sum of expected_losses");
    }
}

}  // namespace

RiskComparison compare_scenarios(const SimulationResult& baseline,
                                 std::span<const SimulationResult> controls,
                                 const std::map<std::string, double>& costs) {
    check_total_consistency(baseline);
    for (const auto& control : controls) {
        check_total_consistency(control);
    }
    std::set<std::string> names{baseline.scenario_name};
    const auto baseline_vulns = [&] {
        std::set<std::string> v;
        for (const auto& [id, el] : baseline.expected_losses) {
            (void)el;
            v.insert(id);
        }
        return v;
    }();

    RiskComparison cmp;
    cmp.baseline_name = baseline.scenario_name;

    for (const auto& control : controls) {
        if (!names.insert(control.scenario_name).second) {
            throw ValidationError("scenario name \"" + control.scenario_name +
                                  "\" is not unique within the comparison set");
        }
        if (control.num_trials != baseline.num_trials) {
            throw ValidationError("scenario \"" + control.scenario_name +
                                  "\" uses a different num_trials than the baseline");
        }
        std::set<std::string> vulns;
        for (const auto& [id, el] : control.expected_losses) {
            (void)el;
            vulns.insert(id);
        }
        if (vulns != baseline_vulns) {
            throw ValidationError("scenario \"" + control.scenario_name +
                                  "\" has a mismatched vulnerability set");
        }
        const auto it = costs.find(control.scenario_name);
        if (it == costs.end()) {
            throw ValidationError("missing cost entry for control \"" +
                                  control.scenario_name + "\"");
        }
        if (!(it->second > 0.0)) {
            throw ValidationError("control \"" + control.scenario_name +
                                  "\" requires a positive cost");
        }
        cmp.control_names.push_back(control.scenario_name);
        cmp.control_costs[control.scenario_name] = it->second;
    }

    for (const auto& [id, el] : baseline.expected_losses) {
        cmp.rows[id].baseline_el = el;
        cmp.totals.baseline_el += el;
    }
    for (const auto& control : controls) {
        const double cost = cmp.control_costs.at(control.scenario_name);
        double el_total = 0.0;
        for (const auto& [id, el] : control.expected_losses) {
            ControlCell cell;
            cell.el = el;
            cell.roc = compute_roc(cmp.rows.at(id).baseline_el, el, cost);
            cmp.rows.at(id).controls[control.scenario_name] = cell;
            el_total += el;
        }
        ControlCell total_cell;
        total_cell.el = el_total;
        total_cell.roc = compute_roc(cmp.totals.baseline_el, el_total, cost);
        cmp.totals.controls[control.scenario_name] = total_cell;

        // With one cost across rows, per-vulnerability RoCs must sum to the
        // total RoC (algebraic identity); anything else is a logic bug.
        double roc_sum = 0.0;
        for (const auto& [id, row] : cmp.rows) {
            (void)id;
            roc_sum += row.controls.at(control.scenario_name).roc;
        }
        const double scale = std::max(1.0, std::abs(total_cell.roc));
        if (std::abs(roc_sum - total_cell.roc) > 1e-9 * scale) {
            throw std::logic_error("RoC additivity invariant violated");
        }
    }
    return cmp;
}

}  // namespace rocq
