#include "rocq/ingest.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "rocq/errors.hpp"

namespace rocq {

namespace {

using nlohmann::json;

// Extracts one AttemptRecord from a parsed line. Returns an error reason on
// schema problems instead of throwing; the caller turns it into a
// line-level diagnostic.
std::string record_from_json(const json& j, AttemptRecord& out) {
    if (!j.is_object()) {
        return "not a JSON object";
    }
    const auto probe = j.find("probe");
    if (probe == j.end()) {
        return "missing field: probe";
    }
    if (!probe->is_string()) {
        return "field probe: expected string";
    }
    out.probe = probe->get<std::string>();
    if (out.probe.empty()) {
        return "field probe: must be non-empty";
    }

    const auto attempt = j.find("attempt_id");
    if (attempt == j.end()) {
        return "missing field: attempt_id";
    }
    if (!attempt->is_number_unsigned()) {
        return "field attempt_id: expected non-negative integer";
    }
    out.attempt_id = attempt->get<std::uint64_t>();

    const auto scores = j.find("detector_scores");
    if (scores == j.end()) {
        return "missing field: detector_scores";
    }
    if (!scores->is_object()) {
        return "field detector_scores: expected object";
    }
    for (const auto& [name, value] : scores->items()) {
        if (!value.is_number()) {
            return "detector score \"" + name + "\": expected number";
        }
        const double score = value.get<double>();
        if (!(score >= 0.0 && score <= 1.0)) {
            return "detector score \"" + name + "\": outside [0, 1]";
        }
        out.detector_scores[name] = score;
    }

    const auto status = j.find("status");
    if (status == j.end()) {
        return "missing field: status";
    }
    if (!status->is_string()) {
        return "field status: expected string";
    }
    out.status = status->get<std::string>();
    // Extra fields are tolerated here: real scanner reports carry payloads
    // this tool does not interpret.
    return std::string();
}

bool is_blank(std::string_view line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') {
            return false;
        }
    }
    return true;
}

}  // namespace

ParsedLog parse_attempt_log(std::istream& in) {
    ParsedLog result;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (is_blank(line)) {
            continue;
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) {
            result.diagnostics.push_back({line_number, "invalid JSON"});
            continue;
        }
        AttemptRecord record;
        std::string reason = record_from_json(j, record);
        if (!reason.empty()) {
            result.diagnostics.push_back({line_number, std::move(reason)});
            continue;
        }
        result.records.push_back(std::move(record));
    }
    if (in.bad()) {
        throw IoError("attempt log stream failed mid-read");
    }
    return result;
}

ParsedLog parse_attempt_log(std::string_view bytes) {
    std::istringstream in{std::string(bytes)};
    return parse_attempt_log(in);
}

std::vector<Violation> validate_mapping(const ProbeMapping& mapping) {
    std::vector<Violation> out;
    if (!(mapping.failure_threshold >= 0.0 && mapping.failure_threshold <= 1.0)) {
        out.push_back({"failure_threshold", "must be within [0, 1]"});
    }
    for (std::size_t i = 0; i < mapping.rules.size(); ++i) {
        const std::string base = "rules[" + std::to_string(i) + "]";
        if (mapping.rules[i].prefix.empty()) {
            out.push_back({base + ".prefix", "must be non-empty"});
        }
        if (!is_valid_vulnerability_id(mapping.rules[i].vulnerability)) {
            out.push_back(
                {base + ".vulnerability", "vulnerability id must match [a-z0-9_]+"});
        }
    }
    return out;
}

ProbeMapping default_probe_mapping() {
    ProbeMapping mapping;
    for (const char* id : {vuln::kAtkgen, vuln::kDivergence,
                           vuln::kLatentInjection, vuln::kPii,
                           vuln::kPromptInject}) {
        mapping.rules.push_back({id, id});
    }
    return mapping;
}

AggregationResult aggregate_outcomes(const std::vector<AttemptRecord>& records,
                                     const ProbeMapping& mapping) {
    const auto violations = validate_mapping(mapping);
    if (!violations.empty()) {
        throw ValidationError(format_violations(violations));
    }
    AggregationResult agg;
    agg.total_records = records.size();
    for (const AttemptRecord& record : records) {
        if (record.status != "complete") {
            ++agg.non_complete;  // no evidence either way
            continue;
        }
        const MappingRule* matched = nullptr;
        for (const MappingRule& rule : mapping.rules) {
            if (record.probe.starts_with(rule.prefix)) {
                matched = &rule;
                break;
            }
        }
        if (matched == nullptr) {
            ++agg.unmatched[record.probe];
            continue;
        }
        ProbeOutcome& outcome = agg.outcomes[matched->vulnerability];
        outcome.vulnerability = matched->vulnerability;
        ++outcome.trials;
        double max_score = 0.0;
        for (const auto& [name, score] : record.detector_scores) {
            (void)name;
            max_score = std::max(max_score, score);
        }
        if (max_score >= mapping.failure_threshold) {
            ++outcome.failures;
        }
    }
    return agg;
}

AggregationResult merge_aggregation(const AggregationResult& a,
                                    const AggregationResult& b) {
    AggregationResult merged = a;
    for (const auto& [id, outcome] : b.outcomes) {
        ProbeOutcome& target = merged.outcomes[id];
        target.vulnerability = id;
        target.trials += outcome.trials;
        target.failures += outcome.failures;
    }
    for (const auto& [probe, count] : b.unmatched) {
        merged.unmatched[probe] += count;
    }
    merged.non_complete += b.non_complete;
    merged.total_records += b.total_records;
    return merged;
}

}  // namespace rocq
