#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rocq/core_types.hpp"

namespace rocq {

// One probe attempt from a scanner-style JSONL log.
struct AttemptRecord {
    std::string probe;
    std::uint64_t attempt_id = 0;
    std::map<std::string, double> detector_scores;  // each in [0, 1]
    std::string status;                             // "complete" or other

    bool operator==(const AttemptRecord&) const = default;
};

struct ParseDiagnostic {
    std::size_t line = 0;  // 1-based
    std::string reason;

    bool operator==(const ParseDiagnostic&) const = default;
};

struct ParsedLog {
    std::vector<AttemptRecord> records;
    std::vector<ParseDiagnostic> diagnostics;
};

// One record per well-formed JSONL line. Malformed lines produce a
// diagnostic carrying the line number and reason, and parsing continues;
// blank lines are skipped. Never throws on malformed content.
ParsedLog parse_attempt_log(std::istream& in);
ParsedLog parse_attempt_log(std::string_view bytes);

struct MappingRule {
    std::string prefix;
    std::string vulnerability;

    bool operator==(const MappingRule&) const = default;
};

// Ordered probe-name prefix rules; the first matching rule wins. A record
// whose maximum detector score is >= failure_threshold counts as an attack
// success.
struct ProbeMapping {
    std::vector<MappingRule> rules;
    double failure_threshold = 0.5;

    bool operator==(const ProbeMapping&) const = default;
};

std::vector<Violation> validate_mapping(const ProbeMapping& mapping);

// Identity prefix rules for the five built-in probe families.
ProbeMapping default_probe_mapping();

struct AggregationResult {
    std::map<std::string, ProbeOutcome> outcomes;
    // Complete records whose probe matched no rule, by probe name. Reported,
    // never silently dropped.
    std::map<std::string, std::uint64_t> unmatched;
    // Records with status != "complete"; excluded from trials entirely.
    std::uint64_t non_complete = 0;
    std::uint64_t total_records = 0;
};

// trials  = complete records mapped to the vulnerability
// failures = those whose max detector score >= failure_threshold
// Conservation: sum(trials) + sum(unmatched) + non_complete == total_records.
AggregationResult aggregate_outcomes(const std::vector<AttemptRecord>& records,
                                     const ProbeMapping& mapping);

// Element-wise sum; aggregating a concatenated log equals merging the parts.
AggregationResult merge_aggregation(const AggregationResult& a,
                                    const AggregationResult& b);

}  // namespace rocq
