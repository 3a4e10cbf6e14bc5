#include "rocq/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "rocq/errors.hpp"
#include "rocq/hash.hpp"

namespace rocq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path.empty() ? message : path + ": " + message);
}

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

json parse_or_fail(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

void check_object(const json& j, const std::string& path, const char* what) {
    if (!j.is_object()) {
        fail(path, std::string("expected a JSON object for ") + what);
    }
}

void check_known_fields(const json& obj,
                        std::initializer_list<std::string_view> known,
                        const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (std::string_view k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            fail(join_path(path, key), "unknown field");
        }
    }
}

const json* find_required(const json& obj, const char* key,
                          const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(join_path(path, key), "missing required field");
    }
    return &*it;
}

std::string get_string(const json& obj, const char* key,
                       const std::string& path) {
    const json* v = find_required(obj, key, path);
    if (!v->is_string()) {
        fail(join_path(path, key), "expected string");
    }
    return v->get<std::string>();
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected number");
    }
    return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) {
        fail(path, "expected non-negative integer");
    }
    return v.get<std::uint64_t>();
}

void throw_if_violations(const std::vector<Violation>& violations) {
    if (!violations.empty()) {
        throw ValidationError(format_violations(violations));
    }
}

// Adds file context to validation errors raised while parsing `path`.
template <typename Fn>
auto with_file_context(const std::filesystem::path& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace

json scenario_to_json(const ScenarioConfig& scenario) {
    json outcomes = json::object();
    for (const auto& [id, outcome] : scenario.outcomes) {
        outcomes[id] = {{"trials", outcome.trials},
                        {"failures", outcome.failures}};
    }
    return {{"name", scenario.name},
            {"control_cost_usd", scenario.control_cost_usd},
            {"outcomes", outcomes}};
}

json simulation_to_json(const SimulationConfig& sim) {
    json losses = json::object();
    for (const auto& [id, dist] : sim.losses) {
        losses[id] = {{"min", dist.min_usd},
                      {"mode", dist.mode_usd},
                      {"max", dist.max_usd}};
    }
    return {{"num_trials", sim.num_trials},
            {"seed", sim.seed},
            {"losses", losses}};
}

json result_to_json(const SimulationResult& result, bool include_samples) {
    json j;
    j["scenario"] = result.scenario_name;
    j["control_cost_usd"] = result.control_cost_usd;
    j["seed"] = result.seed;
    j["num_trials"] = result.num_trials;
    j["expected_losses"] = json::object();
    for (const auto& [id, el] : result.expected_losses) {
        j["expected_losses"][id] = el;
    }
    j["total_expected_loss"] = result.total_expected_loss;
    if (include_samples && !result.per_vulnerability.empty()) {
        json samples = json::object();
        for (const auto& [id, ls] : result.per_vulnerability) {
            samples[id] = {{"success_count", ls.success_count},
                           {"loss_usd", ls.samples}};
        }
        j["samples"] = std::move(samples);
    }
    return j;
}

json mapping_to_json(const ProbeMapping& mapping) {
    json rules = json::array();
    for (const MappingRule& rule : mapping.rules) {
        rules.push_back({{"prefix", rule.prefix},
                         {"vulnerability", rule.vulnerability}});
    }
    return {{"rules", rules},
            {"failure_threshold", mapping.failure_threshold}};
}

json campaign_to_json(const CampaignSpec& spec) {
    json vulns = json::object();
    for (const auto& [id, v] : spec.vulnerabilities) {
        vulns[id] = {{"true_p", v.true_p},
                     {"trials", v.trials},
                     {"probe", v.probe}};
    }
    return {{"seed", spec.seed}, {"vulnerabilities", vulns}};
}

ScenarioConfig scenario_from_json_text(std::string_view text) {
    const json j = parse_or_fail(text, "scenario");
    check_object(j, "", "a scenario");
    check_known_fields(j, {"name", "control_cost_usd", "outcomes"}, "");

    ScenarioConfig scenario;
    scenario.name = get_string(j, "name", "");
    if (const auto it = j.find("control_cost_usd"); it != j.end()) {
        scenario.control_cost_usd = get_number(*it, "control_cost_usd");
    }
    const json* outcomes = find_required(j, "outcomes", "");
    check_object(*outcomes, "outcomes", "outcomes");
    for (const auto& [id, entry] : outcomes->items()) {
        const std::string base = "outcomes." + id;
        check_object(entry, base, "an outcome");
        check_known_fields(entry, {"trials", "failures"}, base);
        ProbeOutcome outcome;
        outcome.vulnerability = id;
        outcome.trials =
            get_count(*find_required(entry, "trials", base), base + ".trials");
        outcome.failures = get_count(*find_required(entry, "failures", base),
                                     base + ".failures");
        scenario.outcomes[id] = std::move(outcome);
    }
    throw_if_violations(validate_scenario_config(scenario));
    return scenario;
}

SimulationConfig simulation_from_json_text(std::string_view text,
                                           std::uint64_t default_seed) {
    const json j = parse_or_fail(text, "simulation");
    check_object(j, "", "a simulation config");
    check_known_fields(j, {"num_trials", "seed", "losses"}, "");

    SimulationConfig sim;
    sim.seed = default_seed;
    if (const auto it = j.find("num_trials"); it != j.end()) {
        sim.num_trials = get_count(*it, "num_trials");
    }
    if (const auto it = j.find("seed"); it != j.end()) {
        sim.seed = get_count(*it, "seed");
    }
    const json* losses = find_required(j, "losses", "");
    check_object(*losses, "losses", "losses");
    for (const auto& [id, entry] : losses->items()) {
        const std::string base = "losses." + id;
        check_object(entry, base, "a triangle distribution");
        check_known_fields(entry, {"min", "mode", "max"}, base);
        TriangleDist dist;
        dist.min_usd = get_number(*find_required(entry, "min", base), base + ".min");
        dist.mode_usd =
            get_number(*find_required(entry, "mode", base), base + ".mode");
        dist.max_usd = get_number(*find_required(entry, "max", base), base + ".max");
        sim.losses[id] = dist;
    }
    throw_if_violations(validate_simulation_config(sim));
    return sim;
}

SimulationResult result_from_json_text(std::string_view text) {
    const json j = parse_or_fail(text, "result");
    check_object(j, "", "a simulation result");
    check_known_fields(j,
                       {"scenario", "control_cost_usd", "seed", "num_trials",
                        "expected_losses", "total_expected_loss", "samples",
                        "engine_version", "input_digests"},
                       "");

    SimulationResult result;
    result.scenario_name = get_string(j, "scenario", "");
    if (const auto it = j.find("control_cost_usd"); it != j.end()) {
        result.control_cost_usd = get_number(*it, "control_cost_usd");
    }
    result.seed = get_count(*find_required(j, "seed", ""), "seed");
    result.num_trials =
        get_count(*find_required(j, "num_trials", ""), "num_trials");

    const json* els = find_required(j, "expected_losses", "");
    check_object(*els, "expected_losses", "expected losses");
    for (const auto& [id, value] : els->items()) {
        result.expected_losses[id] =
            get_number(value, "expected_losses." + id);
    }
    result.total_expected_loss = get_number(
        *find_required(j, "total_expected_loss", ""), "total_expected_loss");

    if (const auto it = j.find("samples"); it != j.end()) {
        check_object(*it, "samples", "samples");
        for (const auto& [id, entry] : it->items()) {
            const std::string base = "samples." + id;
            if (!result.expected_losses.contains(id)) {
                fail(base, "sample set has no matching expected_losses entry");
            }
            check_object(entry, base, "a sample set");
            check_known_fields(entry, {"success_count", "loss_usd"}, base);
            LossSamples ls;
            ls.vulnerability = id;
            ls.success_count = get_count(
                *find_required(entry, "success_count", base),
                base + ".success_count");
            const json* values = find_required(entry, "loss_usd", base);
            if (!values->is_array()) {
                fail(base + ".loss_usd", "expected array");
            }
            ls.samples.reserve(values->size());
            for (std::size_t i = 0; i < values->size(); ++i) {
                ls.samples.push_back(get_number(
                    (*values)[i], base + ".loss_usd[" + std::to_string(i) + "]"));
            }
            if (ls.samples.size() != result.num_trials) {
                fail(base + ".loss_usd", "length does not match num_trials");
            }
            result.per_vulnerability[id] = std::move(ls);
        }
        if (result.per_vulnerability.size() != result.expected_losses.size()) {
            fail("samples", "missing sample sets for some vulnerabilities");
        }
    }
    return result;
}

ProbeMapping mapping_from_json_text(std::string_view text) {
    const json j = parse_or_fail(text, "mapping");
    check_object(j, "", "a probe mapping");
    check_known_fields(j, {"rules", "failure_threshold"}, "");

    ProbeMapping mapping;
    const json* rules = find_required(j, "rules", "");
    if (!rules->is_array()) {
        fail("rules", "expected array");
    }
    for (std::size_t i = 0; i < rules->size(); ++i) {
        const std::string base = "rules[" + std::to_string(i) + "]";
        const json& entry = (*rules)[i];
        check_object(entry, base, "a mapping rule");
        check_known_fields(entry, {"prefix", "vulnerability"}, base);
        MappingRule rule;
        rule.prefix = get_string(entry, "prefix", base);
        rule.vulnerability = get_string(entry, "vulnerability", base);
        mapping.rules.push_back(std::move(rule));
    }
    if (const auto it = j.find("failure_threshold"); it != j.end()) {
        mapping.failure_threshold = get_number(*it, "failure_threshold");
    }
    throw_if_violations(validate_mapping(mapping));
    return mapping;
}

CampaignSpec campaign_from_json_text(std::string_view text,
                                     std::uint64_t default_seed) {
    const json j = parse_or_fail(text, "campaign");
    check_object(j, "", "a campaign spec");
    check_known_fields(j, {"seed", "vulnerabilities"}, "");

    CampaignSpec spec;
    spec.seed = default_seed;
    if (const auto it = j.find("seed"); it != j.end()) {
        spec.seed = get_count(*it, "seed");
    }
    const json* vulns = find_required(j, "vulnerabilities", "");
    check_object(*vulns, "vulnerabilities", "vulnerabilities");
    for (const auto& [id, entry] : vulns->items()) {
        const std::string base = "vulnerabilities." + id;
        check_object(entry, base, "a campaign vulnerability");
        check_known_fields(entry, {"true_p", "trials", "probe"}, base);
        CampaignVulnerability v;
        v.true_p =
            get_number(*find_required(entry, "true_p", base), base + ".true_p");
        v.trials =
            get_count(*find_required(entry, "trials", base), base + ".trials");
        if (const auto it = entry.find("probe"); it != entry.end()) {
            if (!it->is_string()) {
                fail(base + ".probe", "expected string");
            }
            v.probe = it->get<std::string>();
        } else {
            v.probe = id + ".synthetic";
        }
        spec.vulnerabilities[id] = std::move(v);
    }
    throw_if_violations(validate_campaign(spec));
    return spec;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
    return with_file_context(
        path, [&] { return scenario_from_json_text(read_text_file(path)); });
}

SimulationConfig load_simulation_file(const std::filesystem::path& path,
                                      std::uint64_t default_seed) {
    return with_file_context(path, [&] {
        return simulation_from_json_text(read_text_file(path), default_seed);
    });
}

SimulationResult load_result_file(const std::filesystem::path& path) {
    return with_file_context(
        path, [&] { return result_from_json_text(read_text_file(path)); });
}

ProbeMapping load_mapping_file(const std::filesystem::path& path) {
    return with_file_context(
        path, [&] { return mapping_from_json_text(read_text_file(path)); });
}

CampaignSpec load_campaign_file(const std::filesystem::path& path,
                                std::uint64_t default_seed) {
    return with_file_context(path, [&] {
        return campaign_from_json_text(read_text_file(path), default_seed);
    });
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return std::move(buffer).str();
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open file for writing: " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::string provenance_digest(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, fnv1a64(bytes));
    return buf;
}

}  // namespace rocq
