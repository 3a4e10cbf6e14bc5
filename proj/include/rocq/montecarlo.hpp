#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rocq/core_types.hpp"

namespace rocq {

// Trials are drawn in fixed blocks, each block on its own RNG substream, so
// distributing blocks across workers reproduces the single-threaded result
// bit for bit.
inline constexpr std::uint64_t kTrialsPerBlock = 1024;

// Loss drawn per Monte Carlo trial for one vulnerability. A sample is 0 when
// the attack failed, otherwise a triangle draw in [min, max].
struct LossSamples {
    std::string vulnerability;
    std::vector<double> samples;      // length == num_trials
    std::uint64_t success_count = 0;  // trials where the attack succeeded

    bool operator==(const LossSamples&) const = default;
};

struct SimulationResult {
    std::string scenario_name;
    double control_cost_usd = 0.0;  // carried through from the scenario
    std::uint64_t seed = 0;
    std::uint64_t num_trials = 0;
    std::map<std::string, LossSamples> per_vulnerability;
    std::map<std::string, double> expected_losses;  // mean of each sample set
    double total_expected_loss = 0.0;

    bool operator==(const SimulationResult&) const = default;
};

// Closed-form counterpart of the sampler: E[loss] = p * (min + mode + max)/3.
// Used as an independent oracle for Monte Carlo means.
double analytic_expected_loss(double p, const TriangleDist& dist);

// Stream key for a (scenario, vulnerability) pair. Keying substreams this
// way isolates vulnerabilities from each other's draw counts.
std::uint64_t scenario_stream(std::string_view scenario_name,
                              std::string_view vulnerability);

// Substream for block `b` of a stream: trials [b*kTrialsPerBlock,
// (b+1)*kTrialsPerBlock) draw from rng_for_stream(seed, block_substream(s, b)).
// Part of the output contract, not an implementation detail.
std::uint64_t block_substream(std::uint64_t stream, std::uint64_t block);

// Per trial: draw u1; if u1 < p the attack succeeds and the loss is
// triangle_inverse_cdf(dist, u2) with u2 the next draw; otherwise the loss
// is 0 and u2 is not consumed. The result is a pure function of
// (p, dist, num_trials, seed, stream).
LossSamples simulate_vulnerability(double p, const TriangleDist& dist,
                                   std::uint64_t num_trials,
                                   std::uint64_t seed, std::uint64_t stream);

// Simulates every vulnerability in the scenario (sorted id order), with
// p = laplace_success(outcome) and the substream keyed by
// (scenario name, vulnerability id). Output is identical for any
// num_threads, including 1.
SimulationResult simulate_scenario(const ScenarioConfig& scenario,
                                   const SimulationConfig& sim,
                                   unsigned num_threads = 1);

// Per-trial sums across all vulnerabilities (the "total" loss vector).
std::vector<double> pooled_total_samples(const SimulationResult& result);

}  // namespace rocq
