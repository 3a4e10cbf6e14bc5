#include "rocq/montecarlo.hpp"

#include <atomic>
#include <span>
#include <stdexcept>
#include <thread>

#include "rocq/errors.hpp"
#include "rocq/hash.hpp"
#include "rocq/stats.hpp"

namespace rocq {

namespace {

// Fills out[0..n) with the trials of one block and returns its success
// count. Every worker layout runs blocks through this same kernel, which is
// what makes thread count irrelevant to the output.
std::uint64_t run_block(double p, const TriangleDist& dist,
                        std::span<double> out, std::uint64_t seed,
                        std::uint64_t stream, std::uint64_t block) {
    RngState rng = rng_for_stream(seed, block_substream(stream, block));
    std::uint64_t successes = 0;
    for (double& sample : out) {
        const double u1 = rng.next_uniform();
        if (u1 < p) {
            sample = triangle_inverse_cdf(dist, rng.next_uniform());
            ++successes;
        } else {
            sample = 0.0;  // the loss uniform is not consumed
        }
    }
    return successes;
}

double mean_of(std::span<const double> samples) {
    double sum = 0.0;
    for (double s : samples) {
        sum += s;
    }
    return samples.empty() ? 0.0 : sum / static_cast<double>(samples.size());
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("success probability outside [0, 1]");
    }
}

struct BlockTask {
    LossSamples* target = nullptr;
    double p = 0.0;
    const TriangleDist* dist = nullptr;
    std::uint64_t stream = 0;
    std::uint64_t block = 0;
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
    std::uint64_t successes = 0;  // filled by the worker
};

}  // namespace

double analytic_expected_loss(double p, const TriangleDist& dist) {
    require_probability(p);
    return p * triangle_mean(dist);
}

std::uint64_t scenario_stream(std::string_view scenario_name,
                              std::string_view vulnerability) {
    return stream_key(scenario_name, vulnerability);
}

std::uint64_t block_substream(std::uint64_t stream, std::uint64_t block) {
    // mix64 is bijective, so blocks of one stream never collide.
    return mix64(mix64(stream) ^ block);
}

LossSamples simulate_vulnerability(double p, const TriangleDist& dist,
                                   std::uint64_t num_trials,
                                   std::uint64_t seed, std::uint64_t stream) {
    require_probability(p);
    if (num_trials < 1) {
        throw std::invalid_argument("num_trials must be >= 1");
    }
    LossSamples result;
    result.samples.resize(num_trials);
    const std::uint64_t num_blocks =
        (num_trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        const std::uint64_t begin = b * kTrialsPerBlock;
        const std::uint64_t end = std::min(begin + kTrialsPerBlock, num_trials);
        result.success_count += run_block(
            p, dist,
            std::span<double>(result.samples.data() + begin, end - begin),
            seed, stream, b);
    }
    return result;
}

SimulationResult simulate_scenario(const ScenarioConfig& scenario,
                                   const SimulationConfig& sim,
                                   unsigned num_threads) {
    require_valid(scenario, sim);
    if (num_threads < 1) {
        num_threads = 1;
    }

    SimulationResult result;
    result.scenario_name = scenario.name;
    result.control_cost_usd = scenario.control_cost_usd;
    result.seed = sim.seed;
    result.num_trials = sim.num_trials;

    // Allocate sample buffers and enumerate (vulnerability, block) tasks.
    std::vector<BlockTask> tasks;
    for (const auto& [id, outcome] : scenario.outcomes) {
        LossSamples& target = result.per_vulnerability[id];
        target.vulnerability = id;
        target.samples.resize(sim.num_trials);
    }
    for (const auto& [id, outcome] : scenario.outcomes) {
        const double p = laplace_success(outcome.failures, outcome.trials);
        const std::uint64_t stream = scenario_stream(scenario.name, id);
        const TriangleDist& dist = sim.losses.at(id);
        LossSamples& target = result.per_vulnerability.at(id);
        const std::uint64_t num_blocks =
            (sim.num_trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
        for (std::uint64_t b = 0; b < num_blocks; ++b) {
            BlockTask task;
            task.target = &target;
            task.p = p;
            task.dist = &dist;
            task.stream = stream;
            task.block = b;
            task.begin = b * kTrialsPerBlock;
            task.end = std::min(task.begin + kTrialsPerBlock, sim.num_trials);
            tasks.push_back(task);
        }
    }

    const auto run_task = [&](BlockTask& task) {
        task.successes = run_block(
            task.p, *task.dist,
            std::span<double>(task.target->samples.data() + task.begin,
                              task.end - task.begin),
            sim.seed, task.stream, task.block);
    };

    if (num_threads == 1 || tasks.size() <= 1) {
        for (auto& task : tasks) {
            run_task(task);
        }
    } else {
        std::atomic<std::size_t> next{0};
        const unsigned workers =
            static_cast<unsigned>(std::min<std::size_t>(num_threads, tasks.size()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) {
                        return;
                    }
                    run_task(tasks[i]);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    // Success counts summed in block order, means in index order, total in
    // sorted vulnerability order: all independent of worker scheduling.
    for (const auto& task : tasks) {
        task.target->success_count += task.successes;
    }
    for (const auto& [id, samples] : result.per_vulnerability) {
        const double el = mean_of(samples.samples);
        result.expected_losses[id] = el;
        result.total_expected_loss += el;
    }
    return result;
}

std::vector<double> pooled_total_samples(const SimulationResult& result) {
    if (result.per_vulnerability.empty()) {
        throw ValidationError("result \"" + result.scenario_name +
                              "\" carries no sample vectors");
    }
    std::vector<double> totals(result.num_trials, 0.0);
    for (const auto& [id, samples] : result.per_vulnerability) {
        if (samples.samples.size() != result.num_trials) {
            throw ValidationError("sample vector for \"" + id +
                                  "\" does not match num_trials");
        }
        for (std::size_t i = 0; i < totals.size(); ++i) {
            totals[i] += samples.samples[i];
        }
    }
    return totals;
}

}  // namespace rocq
