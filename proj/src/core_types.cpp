#include "rocq/core_types.hpp"

#include <sstream>

#include "rocq/errors.hpp"

namespace rocq {

bool is_valid_vulnerability_id(std::string_view id) {
    if (id.empty()) {
        return false;
    }
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) {
            return false;
        }
    }
    return true;
}

namespace {

void check_outcome(const std::string& id, const ProbeOutcome& outcome,
                   std::vector<Violation>& out) {
    const std::string base = "outcomes." + id;
    if (!is_valid_vulnerability_id(id)) {
        out.push_back({base, "vulnerability id must match [a-z0-9_]+"});
    }
    if (!outcome.vulnerability.empty() && outcome.vulnerability != id) {
        out.push_back({base + ".vulnerability", "does not match its map key"});
    }
    if (outcome.failures > outcome.trials) {
        out.push_back({base + ".failures", "failures exceeds trials"});
    }
}

}  // namespace

std::vector<Violation> validate_triangle(const TriangleDist& dist,
                                         const std::string& path) {
    std::vector<Violation> out;
    if (!(dist.min_usd >= 0.0)) {
        out.push_back({path + ".min", "min must be >= 0"});
    }
    if (!(dist.mode_usd >= dist.min_usd)) {
        out.push_back({path + ".mode", "mode below min"});
    }
    if (!(dist.max_usd >= dist.mode_usd)) {
        out.push_back({path + ".max", "max below mode"});
    }
    return out;
}

std::vector<Violation> validate_scenario_config(const ScenarioConfig& scenario) {
    std::vector<Violation> out;
    if (scenario.name.empty()) {
        out.push_back({"name", "scenario name must be non-empty"});
    }
    if (!(scenario.control_cost_usd >= 0.0)) {
        out.push_back({"control_cost_usd", "control cost must be >= 0"});
    }
    if (scenario.outcomes.empty()) {
        out.push_back({"outcomes", "at least one outcome required"});
    }
    for (const auto& [id, outcome] : scenario.outcomes) {
        check_outcome(id, outcome, out);
    }
    return out;
}

std::vector<Violation> validate_simulation_config(const SimulationConfig& sim) {
    std::vector<Violation> out;
    if (sim.num_trials < 1) {
        out.push_back({"num_trials", "num_trials must be >= 1"});
    }
    for (const auto& [id, dist] : sim.losses) {
        const std::string base = "losses." + id;
        if (!is_valid_vulnerability_id(id)) {
            out.push_back({base, "vulnerability id must match [a-z0-9_]+"});
        }
        for (auto& v : validate_triangle(dist, base)) {
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<Violation> validate_scenario(const ScenarioConfig& scenario,
                                         const SimulationConfig& sim) {
    std::vector<Violation> out = validate_scenario_config(scenario);
    for (auto& v : validate_simulation_config(sim)) {
        out.push_back(std::move(v));
    }
    for (const auto& [id, outcome] : scenario.outcomes) {
        (void)outcome;
        if (!sim.losses.contains(id)) {
            out.push_back({"losses." + id,
                           "missing loss distribution for vulnerability \"" + id +
                               "\" referenced by scenario \"" + scenario.name + "\""});
        }
    }
    return out;
}

std::string format_violations(std::span<const Violation> violations) {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) {
            os << "; ";
        }
        os << violations[i].path << ": " << violations[i].message;
    }
    return os.str();
}

void require_valid(const ScenarioConfig& scenario, const SimulationConfig& sim) {
    const auto violations = validate_scenario(scenario, sim);
    if (!violations.empty()) {
        throw ValidationError(format_violations(violations));
    }
}

}  // namespace rocq
