// rocq: risk quantification for adversarial probe outcomes.
//
// Pipeline stages communicate only through files:
//   synth    campaign spec -> JSONL attempt log (known ground truth)
//   ingest   attempt log   -> scenario file (trial/failure counts)
//   simulate scenario + simulation config -> result file (losses, samples)
//   lec      result file(s) -> loss exceedance CSV / SVG
//   compare  baseline + control results -> expected-loss / RoC table

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rocq/errors.hpp"
#include "rocq/ingest.hpp"
#include "rocq/montecarlo.hpp"
#include "rocq/report.hpp"
#include "rocq/risk.hpp"
#include "rocq/serialize.hpp"
#include "rocq/stats.hpp"
#include "rocq/synthcampaign.hpp"
#include "rocq/version.hpp"

namespace {

using nlohmann::json;

constexpr double kDefaultControlCost = 30000.0;

// Seed precedence: --seed flag > file value > ROCQ_SEED > 42.
std::uint64_t fallback_seed() {
    const char* env = std::getenv("ROCQ_SEED");
    if (env == nullptr || *env == '\0') {
        return 42;
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' ||
        std::string_view(env).find('-') != std::string_view::npos) {
        throw rocq::ValidationError(
            "ROCQ_SEED: expected a non-negative integer, got \"" +
            std::string(env) + "\"");
    }
    return v;
}

void emit_diagnostics(const rocq::ParsedLog& parsed) {
    for (const rocq::ParseDiagnostic& d : parsed.diagnostics) {
        std::cerr << "rocq: line " << d.line << ": " << d.reason << '\n';
    }
}

std::map<std::string, double> parse_cost_flags(
    const std::vector<std::string>& flags) {
    std::map<std::string, double> costs;
    for (const std::string& flag : flags) {
        const auto eq = flag.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == flag.size()) {
            throw rocq::ValidationError("--cost: expected <name>=<usd>, got \"" +
                                        flag + "\"");
        }
        const std::string name = flag.substr(0, eq);
        char* end = nullptr;
        const double value = std::strtod(flag.c_str() + eq + 1, &end);
        if (end == nullptr || *end != '\0') {
            throw rocq::ValidationError("--cost " + name +
                                        ": expected a number after '='");
        }
        costs[name] = value;
    }
    return costs;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        rocq::write_text_file(path, text);
    }
}

struct SynthArgs {
    std::string spec_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
};

int cmd_synth(const SynthArgs& args) {
    rocq::CampaignSpec spec =
        rocq::load_campaign_file(args.spec_path, fallback_seed());
    if (args.seed) {
        spec.seed = *args.seed;
    }
    rocq::write_text_file(args.out_path, rocq::generate_campaign(spec));
    return 0;
}

struct IngestArgs {
    std::string log_path;
    std::string mapping_path;
    std::string name;
    double cost = 0.0;
    std::string out_path;
};

int cmd_ingest(const IngestArgs& args) {
    const std::string log_bytes = rocq::read_text_file(args.log_path);
    const rocq::ParsedLog parsed = rocq::parse_attempt_log(log_bytes);
    emit_diagnostics(parsed);

    const rocq::ProbeMapping mapping = args.mapping_path.empty()
                                           ? rocq::default_probe_mapping()
                                           : rocq::load_mapping_file(args.mapping_path);
    const rocq::AggregationResult agg =
        rocq::aggregate_outcomes(parsed.records, mapping);
    for (const auto& [probe, count] : agg.unmatched) {
        std::cerr << "rocq: unmatched probe: " << probe << " (" << count
                  << " records)\n";
    }
    if (agg.non_complete > 0) {
        std::cerr << "rocq: " << agg.non_complete
                  << " non-complete records excluded\n";
    }

    rocq::ScenarioConfig scenario;
    scenario.name = args.name;
    scenario.control_cost_usd = args.cost;
    scenario.outcomes = agg.outcomes;
    const auto violations = rocq::validate_scenario_config(scenario);
    if (!violations.empty()) {
        throw rocq::ValidationError(rocq::format_violations(violations));
    }
    rocq::write_text_file(args.out_path,
                          rocq::scenario_to_json(scenario).dump(2) + "\n");
    return 0;
}

struct SimulateArgs {
    std::string scenario_path;
    std::string sim_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    unsigned threads = 1;
    std::string samples_dir;
    bool no_samples = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const std::string scenario_bytes = rocq::read_text_file(args.scenario_path);
    const std::string sim_bytes = rocq::read_text_file(args.sim_path);

    rocq::ScenarioConfig scenario;
    rocq::SimulationConfig sim;
    try {
        scenario = rocq::scenario_from_json_text(scenario_bytes);
    } catch (const rocq::ValidationError& e) {
        throw rocq::ValidationError(args.scenario_path + ": " + e.what());
    }
    try {
        sim = rocq::simulation_from_json_text(sim_bytes, fallback_seed());
    } catch (const rocq::ValidationError& e) {
        throw rocq::ValidationError(args.sim_path + ": " + e.what());
    }
    if (args.seed) {
        sim.seed = *args.seed;
    }
    if (args.trials) {
        sim.num_trials = *args.trials;
    }

    const rocq::SimulationResult result =
        rocq::simulate_scenario(scenario, sim, args.threads);

    json j = rocq::result_to_json(result, !args.no_samples);
    j["engine_version"] = rocq::kEngineVersion;
    j["input_digests"] = {
        {"scenario", rocq::provenance_digest(scenario_bytes)},
        {"simulation", rocq::provenance_digest(sim_bytes)},
    };
    rocq::write_text_file(args.out_path, j.dump(2) + "\n");

    if (!args.samples_dir.empty()) {
        std::filesystem::create_directories(args.samples_dir);
        for (const auto& [id, samples] : result.per_vulnerability) {
            std::string csv = "loss_usd\n";
            for (double v : samples.samples) {
                char buf[64];
                const auto res = std::to_chars(buf, buf + sizeof(buf), v);
                csv.append(buf, res.ptr);
                csv += '\n';
            }
            rocq::write_text_file(
                std::filesystem::path(args.samples_dir) / (id + ".csv"), csv);
        }
    }
    return 0;
}

struct LecArgs {
    std::vector<std::string> result_paths;
    std::string vulnerability;
    std::string csv_path;
    std::string svg_path;
    std::string scale = "log";
    std::size_t points = 200;
    bool exact = false;
};

int cmd_lec(const LecArgs& args) {
    if (args.csv_path.empty() && args.svg_path.empty()) {
        throw rocq::ValidationError("nothing to do: pass --csv and/or --svg");
    }
    if (!args.csv_path.empty() && args.result_paths.size() != 1) {
        throw rocq::ValidationError(
            "--csv exports a single curve; pass exactly one --result "
            "(overlays are an --svg feature)");
    }

    rocq::LecPolicy policy;
    policy.points = args.points;
    policy.grid = args.exact ? rocq::LecGrid::Exact
                  : args.scale == "linear" ? rocq::LecGrid::Linear
                                           : rocq::LecGrid::Log;

    std::vector<rocq::LabeledCurve> curves;
    for (const std::string& path : args.result_paths) {
        const rocq::SimulationResult result = rocq::load_result_file(path);
        if (result.per_vulnerability.empty()) {
            throw rocq::ValidationError(
                path + ": result has no samples; re-run simulate without "
                       "--no-samples");
        }
        std::vector<double> pooled;
        std::span<const double> samples;
        if (args.vulnerability == "total") {
            pooled = rocq::pooled_total_samples(result);
            samples = pooled;
        } else {
            const auto it = result.per_vulnerability.find(args.vulnerability);
            if (it == result.per_vulnerability.end()) {
                std::string available;
                for (const auto& [id, ls] : result.per_vulnerability) {
                    (void)ls;
                    available += id + ", ";
                }
                available += "total";
                throw rocq::ValidationError(
                    path + ": unknown vulnerability \"" + args.vulnerability +
                    "\"; available: " + available);
            }
            samples = it->second.samples;
        }
        curves.push_back({result.scenario_name,
                          rocq::build_lec(samples, policy, args.vulnerability)});
    }

    if (!args.csv_path.empty()) {
        write_output(args.csv_path, rocq::lec_to_csv(curves.front().curve));
    }
    if (!args.svg_path.empty()) {
        rocq::RenderOptions options;
        options.scale = args.scale == "linear" ? rocq::AxisScale::Linear
                                               : rocq::AxisScale::Log;
        rocq::write_text_file(args.svg_path, rocq::emit_lec_svg(curves, options));
    }
    return 0;
}

struct CompareArgs {
    std::string baseline_path;
    std::vector<std::string> control_paths;
    std::vector<std::string> cost_flags;
    std::vector<std::string> scenario_paths;
    std::string format = "table";
    std::string out_path;
};

int cmd_compare(const CompareArgs& args) {
    const std::string baseline_bytes = rocq::read_text_file(args.baseline_path);
    rocq::SimulationResult baseline;
    try {
        baseline = rocq::result_from_json_text(baseline_bytes);
    } catch (const rocq::ValidationError& e) {
        throw rocq::ValidationError(args.baseline_path + ": " + e.what());
    }

    std::vector<rocq::SimulationResult> controls;
    std::map<std::string, double> costs;
    json digests;
    digests[baseline.scenario_name] = rocq::provenance_digest(baseline_bytes);
    for (const std::string& path : args.control_paths) {
        const std::string bytes = rocq::read_text_file(path);
        rocq::SimulationResult control;
        try {
            control = rocq::result_from_json_text(bytes);
        } catch (const rocq::ValidationError& e) {
            throw rocq::ValidationError(path + ": " + e.what());
        }
        digests[control.scenario_name] = rocq::provenance_digest(bytes);
        costs[control.scenario_name] = control.control_cost_usd > 0.0
                                           ? control.control_cost_usd
                                           : kDefaultControlCost;
        controls.push_back(std::move(control));
    }
    for (const auto& [name, cost] : parse_cost_flags(args.cost_flags)) {
        if (!costs.contains(name)) {
            throw rocq::ValidationError("--cost " + name +
                                        ": no control result with that name");
        }
        costs[name] = cost;
    }

    const rocq::RiskComparison cmp =
        rocq::compare_scenarios(baseline, controls, costs);

    const rocq::TableFormat format = args.format == "csv"  ? rocq::TableFormat::Csv
                                     : args.format == "json"
                                         ? rocq::TableFormat::Json
                                         : rocq::TableFormat::Table;

    std::vector<rocq::ScenarioConfig> scenarios;
    for (const std::string& path : args.scenario_paths) {
        scenarios.push_back(rocq::load_scenario_file(path));
    }

    std::string output;
    if (format == rocq::TableFormat::Json) {
        json j;
        j["engine_version"] = rocq::kEngineVersion;
        j["input_digests"] = digests;
        if (!scenarios.empty()) {
            j["vulnerability_table"] = json::parse(
                rocq::render_vulnerability_table(scenarios, format));
        }
        j["risk_comparison"] =
            json::parse(rocq::render_risk_table(cmp, format));
        output = j.dump(2) + "\n";
    } else {
        if (!scenarios.empty()) {
            output += rocq::render_vulnerability_table(scenarios, format);
            output += '\n';
        }
        output += rocq::render_risk_table(cmp, format);
    }
    write_output(args.out_path, output);
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Monetary risk comparison of LLM security controls"};
    app.set_version_flag("--version", rocq::kEngineVersion);
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "Generate a synthetic attempt log from a campaign spec");
    synth_cmd->add_option("--spec", synth.spec_path, "Campaign spec JSON")
        ->required();
    synth_cmd->add_option("--out", synth.out_path, "Output JSONL path")
        ->required();
    synth_cmd->add_option("--seed", synth.seed, "Override the campaign seed");

    IngestArgs ingest;
    CLI::App* ingest_cmd = app.add_subcommand(
        "ingest", "Aggregate a JSONL attempt log into a scenario file");
    ingest_cmd->add_option("--log", ingest.log_path, "Attempt log (JSONL)")
        ->required();
    ingest_cmd->add_option("--mapping", ingest.mapping_path,
                           "Probe mapping JSON (default: built-in families)");
    ingest_cmd->add_option("--name", ingest.name, "Scenario name")->required();
    ingest_cmd->add_option("--cost", ingest.cost,
                           "Control cost in USD (0 for a baseline)");
    ingest_cmd->add_option("--out", ingest.out_path, "Output scenario JSON")
        ->required();

    SimulateArgs simulate;
    CLI::App* simulate_cmd = app.add_subcommand(
        "simulate", "Run the Monte Carlo loss simulation for one scenario");
    simulate_cmd
        ->add_option("--scenario", simulate.scenario_path, "Scenario JSON")
        ->required();
    simulate_cmd->add_option("--sim", simulate.sim_path, "Simulation config JSON")
        ->required();
    simulate_cmd->add_option("--out", simulate.out_path, "Output result JSON")
        ->required();
    simulate_cmd->add_option("--seed", simulate.seed, "Override the seed");
    simulate_cmd->add_option("--trials", simulate.trials,
                             "Override the trial count");
    simulate_cmd->add_option("--threads", simulate.threads,
                             "Worker threads (output is identical for any count)");
    simulate_cmd->add_option("--samples-dir", simulate.samples_dir,
                             "Also write one loss_usd CSV per vulnerability");
    simulate_cmd->add_flag("--no-samples", simulate.no_samples,
                           "Omit raw samples from the result JSON");

    LecArgs lec;
    CLI::App* lec_cmd = app.add_subcommand(
        "lec", "Export loss exceedance curves from result files");
    lec_cmd->add_option("--result", lec.result_paths,
                        "Result JSON (repeat to overlay scenarios)")
        ->required();
    lec_cmd->add_option("--vuln", lec.vulnerability,
                        "Vulnerability id, or \"total\"")
        ->required();
    lec_cmd->add_option("--csv", lec.csv_path, "Write curve CSV here");
    lec_cmd->add_option("--svg", lec.svg_path, "Write chart SVG here");
    lec_cmd->add_option("--scale", lec.scale, "Axis/grid scale")
        ->check(CLI::IsMember({"log", "linear"}));
    lec_cmd->add_option("--points", lec.points, "Threshold count (default 200)");
    lec_cmd->add_flag("--exact", lec.exact,
                      "Threshold at every distinct sample value");

    CompareArgs compare;
    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Expected losses and return on control vs a baseline");
    compare_cmd
        ->add_option("--baseline", compare.baseline_path, "Baseline result JSON")
        ->required();
    compare_cmd->add_option("--control", compare.control_paths,
                            "Control result JSON (repeatable)");
    compare_cmd->add_option(
        "--cost", compare.cost_flags,
        "Override a control's cost as <name>=<usd> (default 30000)");
    compare_cmd->add_option(
        "--scenario", compare.scenario_paths,
        "Scenario JSON (repeatable): also print the failure/LRS table");
    compare_cmd->add_option("--format", compare.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    compare_cmd->add_option("--out", compare.out_path,
                            "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (synth_cmd->parsed()) {
        return cmd_synth(synth);
    }
    if (ingest_cmd->parsed()) {
        return cmd_ingest(ingest);
    }
    if (simulate_cmd->parsed()) {
        return cmd_simulate(simulate);
    }
    if (lec_cmd->parsed()) {
        return cmd_lec(lec);
    }
    return cmd_compare(compare);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const rocq::IoError& e) {
        std::cerr << "rocq: error: " << e.what() << '\n';
        return 1;
    } catch (const rocq::ValidationError& e) {
        std::cerr << "rocq: error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rocq: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rocq: error: " << e.what() << '\n';
        return 1;
    }
}
