#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rocq {

// Built-in probe family ids. Ids are open-world: any token matching
// [a-z0-9_]+ is accepted, so new probe families need no code change.
namespace vuln {
inline constexpr const char* kAtkgen = "atkgen";
inline constexpr const char* kDivergence = "divergence";
inline constexpr const char* kLatentInjection = "latentinjection";
inline constexpr const char* kPii = "pii";
inline constexpr const char* kPromptInject = "promptinject";
}  // namespace vuln

bool is_valid_vulnerability_id(std::string_view id);

// Trial and failure counts for one vulnerability. A "failure" is an attack
// success: the probe elicited the prohibited behavior.
struct ProbeOutcome {
    std::string vulnerability;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;

    bool operator==(const ProbeOutcome&) const = default;
};

// Triangular loss model in USD. Requires min <= mode <= max; the degenerate
// min == mode == max case models a constant loss.
struct TriangleDist {
    double min_usd = 0.0;
    double mode_usd = 0.0;
    double max_usd = 0.0;

    bool operator==(const TriangleDist&) const = default;
};

// One system configuration under test: an unprotected baseline or the system
// with a control applied. "Baseline" is a role picked at comparison time,
// not a reserved name. control_cost_usd is zero for a baseline.
struct ScenarioConfig {
    std::string name;
    double control_cost_usd = 0.0;
    std::map<std::string, ProbeOutcome> outcomes;  // keyed by vulnerability id

    bool operator==(const ScenarioConfig&) const = default;
};

// Monte Carlo run parameters plus the loss model per vulnerability. Every
// vulnerability that gets simulated must have an entry in `losses`.
struct SimulationConfig {
    std::uint64_t num_trials = 10000;
    std::uint64_t seed = 42;
    std::map<std::string, TriangleDist> losses;  // keyed by vulnerability id

    bool operator==(const SimulationConfig&) const = default;
};

// A violated invariant, reported as data rather than thrown. `path`
// addresses the offending field, e.g. "outcomes.pii.failures".
struct Violation {
    std::string path;
    std::string message;

    bool operator==(const Violation&) const = default;
};

// Type-local checks for each config in isolation.
std::vector<Violation> validate_scenario_config(const ScenarioConfig& scenario);
std::vector<Violation> validate_simulation_config(const SimulationConfig& sim);
std::vector<Violation> validate_triangle(const TriangleDist& dist,
                                         const std::string& path);

// Full pre-simulation validation: both configs plus cross references
// (every scenario outcome needs a loss distribution). Pure; returns every
// violation found, empty when the pair is valid.
std::vector<Violation> validate_scenario(const ScenarioConfig& scenario,
                                         const SimulationConfig& sim);

std::string format_violations(std::span<const Violation> violations);

// Throws ValidationError listing all violations when the pair is invalid.
void require_valid(const ScenarioConfig& scenario, const SimulationConfig& sim);

}  // namespace rocq
