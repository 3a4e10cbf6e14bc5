#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rocq/core_types.hpp"

namespace rocq {

struct CampaignVulnerability {
    double true_p = 0.0;        // ground-truth attack success probability
    std::uint64_t trials = 0;
    std::string probe;          // probe name to emit; default "<id>.synthetic"

    bool operator==(const CampaignVulnerability&) const = default;
};

// Synthetic campaign with known ground truth, standing in for live probe
// execution so the ingest -> estimate -> simulate pipeline can be exercised
// end to end.
struct CampaignSpec {
    std::uint64_t seed = 42;
    std::map<std::string, CampaignVulnerability> vulnerabilities;

    bool operator==(const CampaignSpec&) const = default;
};

std::vector<Violation> validate_campaign(const CampaignSpec& spec);

// Emits exactly `trials` complete JSONL records per vulnerability. Each
// record's detector score is 1.0 with probability true_p, else 0.0, drawn
// from the substream keyed by the vulnerability id. Byte-identical output
// for identical specs.
std::string generate_campaign(const CampaignSpec& spec);

}  // namespace rocq
