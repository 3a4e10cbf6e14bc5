#include "rocq/synthcampaign.hpp"

#include <json.hpp>

#include "rocq/errors.hpp"
#include "rocq/hash.hpp"
#include "rocq/stats.hpp"

namespace rocq {

std::vector<Violation> validate_campaign(const CampaignSpec& spec) {
    std::vector<Violation> out;
    for (const auto& [id, v] : spec.vulnerabilities) {
        const std::string base = "vulnerabilities." + id;
        if (!is_valid_vulnerability_id(id)) {
            out.push_back({base, "vulnerability id must match [a-z0-9_]+"});
        }
        if (!(v.true_p >= 0.0 && v.true_p <= 1.0)) {
            out.push_back({base + ".true_p", "must be within [0, 1]"});
        }
        if (v.probe.empty()) {
            out.push_back({base + ".probe", "must be non-empty"});
        }
    }
    return out;
}

std::string generate_campaign(const CampaignSpec& spec) {
    const auto violations = validate_campaign(spec);
    if (!violations.empty()) {
        throw ValidationError(format_violations(violations));
    }
    std::string log;
    for (const auto& [id, v] : spec.vulnerabilities) {
        RngState rng = rng_for_stream(spec.seed, fnv1a64(id));
        for (std::uint64_t attempt = 1; attempt <= v.trials; ++attempt) {
            const double score = rng.next_uniform() < v.true_p ? 1.0 : 0.0;
            const nlohmann::json record = {
                {"probe", v.probe},
                {"attempt_id", attempt},
                {"detector_scores", {{"synthetic", score}}},
                {"status", "complete"},
            };
            log += record.dump();
            log += '\n';
        }
    }
    return log;
}

}  // namespace rocq
