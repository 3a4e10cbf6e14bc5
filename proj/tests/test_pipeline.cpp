#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "rocq/serialize.hpp"

// CLI-level coverage: every stage talks to the next only through files, so
// these tests shell out to the real binary and inspect the artifacts.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = ROCQ_BIN;

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) {
        return -1;
    }
    if (WIFEXITED(status)) {
        return WEXITSTATUS(status);
    }
    return -2;
}

fs::path make_temp_dir() {
    std::string tmpl =
        (fs::temp_directory_path() / "rocq_pipeline_XXXXXX").string();
    char* dir = mkdtemp(tmpl.data());
    REQUIRE(dir != nullptr);
    return fs::path(dir);
}

const char* kCampaignSpec = R"({
  "seed": 42,
  "vulnerabilities": {
    "atkgen": {"true_p": 0.05, "trials": 25},
    "divergence": {"true_p": 0.77, "trials": 180},
    "latentinjection": {"true_p": 1.0, "trials": 160},
    "pii": {"true_p": 1.0, "trials": 50},
    "promptinject": {"true_p": 1.0, "trials": 500}
  }
})";

const char* kControlCampaignSpec = R"({
  "seed": 42,
  "vulnerabilities": {
    "atkgen": {"true_p": 0.05, "trials": 25},
    "divergence": {"true_p": 0.77, "trials": 180},
    "latentinjection": {"true_p": 0.1, "trials": 160},
    "pii": {"true_p": 0.0, "trials": 50},
    "promptinject": {"true_p": 0.0, "trials": 500}
  }
})";

const char* kSimConfig = R"({
  "num_trials": 10000,
  "seed": 42,
  "losses": {
    "atkgen": {"min": 500, "mode": 5000, "max": 100000},
    "divergence": {"min": 100, "mode": 1000, "max": 10000},
    "latentinjection": {"min": 1000, "mode": 20000, "max": 200000},
    "pii": {"min": 5000, "mode": 50000, "max": 500000},
    "promptinject": {"min": 1000, "mode": 10000, "max": 150000}
  }
})";

// Runs synth -> ingest -> simulate -> lec -> compare inside `dir` and
// returns the paths of every produced artifact.
std::vector<fs::path> run_full_pipeline(const fs::path& dir, unsigned threads) {
    rocq::write_text_file(dir / "campaign.json", kCampaignSpec);
    rocq::write_text_file(dir / "campaign_ctl.json", kControlCampaignSpec);
    rocq::write_text_file(dir / "sim.json", kSimConfig);

    const std::string t = " --threads " + std::to_string(threads);
    REQUIRE(run(kBin + " synth --spec " + quoted(dir / "campaign.json") +
                " --out " + quoted(dir / "log.jsonl")) == 0);
    REQUIRE(run(kBin + " synth --spec " + quoted(dir / "campaign_ctl.json") +
                " --out " + quoted(dir / "log_ctl.jsonl")) == 0);
    REQUIRE(run(kBin + " ingest --log " + quoted(dir / "log.jsonl") +
                " --name baseline --out " + quoted(dir / "baseline.json")) == 0);
    REQUIRE(run(kBin + " ingest --log " + quoted(dir / "log_ctl.jsonl") +
                " --name control --cost 30000 --out " +
                quoted(dir / "control.json")) == 0);
    REQUIRE(run(kBin + " simulate --scenario " + quoted(dir / "baseline.json") +
                " --sim " + quoted(dir / "sim.json") + " --out " +
                quoted(dir / "baseline_result.json") + t) == 0);
    REQUIRE(run(kBin + " simulate --scenario " + quoted(dir / "control.json") +
                " --sim " + quoted(dir / "sim.json") + " --out " +
                quoted(dir / "control_result.json") + t) == 0);
    REQUIRE(run(kBin + " lec --result " + quoted(dir / "baseline_result.json") +
                " --result " + quoted(dir / "control_result.json") +
                " --vuln pii --svg " + quoted(dir / "pii.svg")) == 0);
    REQUIRE(run(kBin + " lec --result " + quoted(dir / "baseline_result.json") +
                " --vuln total --csv " + quoted(dir / "total.csv")) == 0);
    REQUIRE(run(kBin + " compare --baseline " +
                quoted(dir / "baseline_result.json") + " --control " +
                quoted(dir / "control_result.json") + " --format json --out " +
                quoted(dir / "comparison.json")) == 0);

    return {dir / "log.jsonl",         dir / "log_ctl.jsonl",
            dir / "baseline.json",     dir / "control.json",
            dir / "baseline_result.json", dir / "control_result.json",
            dir / "pii.svg",           dir / "total.csv",
            dir / "comparison.json"};
}

}  // namespace

TEST_CASE("the full pipeline is byte-identical across runs and thread counts") {
    const fs::path dir_a = make_temp_dir();
    const fs::path dir_b = make_temp_dir();
    const auto artifacts_a = run_full_pipeline(dir_a, 1);
    const auto artifacts_b = run_full_pipeline(dir_b, 8);
    REQUIRE(artifacts_a.size() == artifacts_b.size());
    for (std::size_t i = 0; i < artifacts_a.size(); ++i) {
        CAPTURE(artifacts_a[i].filename().string());
        CHECK(rocq::read_text_file(artifacts_a[i]) ==
              rocq::read_text_file(artifacts_b[i]));
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("simulate rerun with identical flags rewrites identical bytes") {
    const fs::path dir = make_temp_dir();
    rocq::write_text_file(dir / "campaign.json", kCampaignSpec);
    rocq::write_text_file(dir / "sim.json", kSimConfig);
    REQUIRE(run(kBin + " synth --spec " + quoted(dir / "campaign.json") +
                " --out " + quoted(dir / "log.jsonl")) == 0);
    REQUIRE(run(kBin + " ingest --log " + quoted(dir / "log.jsonl") +
                " --name baseline --out " + quoted(dir / "scenario.json")) == 0);
    const std::string simulate = kBin + " simulate --scenario " +
                                 quoted(dir / "scenario.json") + " --sim " +
                                 quoted(dir / "sim.json") + " --out ";
    REQUIRE(run(simulate + quoted(dir / "r1.json")) == 0);
    REQUIRE(run(simulate + quoted(dir / "r2.json")) == 0);
    CHECK(rocq::read_text_file(dir / "r1.json") ==
          rocq::read_text_file(dir / "r2.json"));
    fs::remove_all(dir);
}

TEST_CASE("the reference dataset simulates to the published total") {
    const fs::path dir = make_temp_dir();
    const fs::path data = ROCQ_DATA;
    REQUIRE(run(kBin + " simulate --scenario " +
                quoted(data / "scenarios" / "baseline.json") + " --sim " +
                quoted(data / "simulation.json") + " --out " +
                quoted(dir / "result.json")) == 0);
    const json result = json::parse(rocq::read_text_file(dir / "result.json"));
    const double total = result["total_expected_loss"].get<double>();
    CHECK(std::abs(total - 313712.0) <= 0.05 * 313712.0);
    CHECK(result["seed"].get<std::uint64_t>() == 42);
    CHECK(result["engine_version"].is_string());
    CHECK(result["input_digests"]["scenario"].is_string());
    fs::remove_all(dir);
}

TEST_CASE("exit codes distinguish I/O failures from validation failures") {
    const fs::path dir = make_temp_dir();
    const std::string devnull = " 2> " + quoted(dir / "stderr.txt");

    // missing input file -> 1
    CHECK(run(kBin + " synth --spec " + quoted(dir / "missing.json") +
              " --out " + quoted(dir / "x.jsonl") + devnull) == 1);
    std::string err = rocq::read_text_file(dir / "stderr.txt");
    CHECK(err.find("missing.json") != std::string::npos);

    // invalid spec value -> 2, message names the field
    rocq::write_text_file(
        dir / "bad.json",
        R"({"vulnerabilities":{"pii":{"true_p":1.2,"trials":10}}})");
    CHECK(run(kBin + " synth --spec " + quoted(dir / "bad.json") + " --out " +
              quoted(dir / "x.jsonl") + devnull) == 2);
    err = rocq::read_text_file(dir / "stderr.txt");
    CHECK(err.find("vulnerabilities.pii.true_p") != std::string::npos);

    // empty log -> scenario with no outcomes -> 2
    rocq::write_text_file(dir / "empty.jsonl", "");
    CHECK(run(kBin + " ingest --log " + quoted(dir / "empty.jsonl") +
              " --name x --out " + quoted(dir / "x.json") + devnull) == 2);
    err = rocq::read_text_file(dir / "stderr.txt");
    CHECK(err.find("at least one outcome required") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("ingest reports unmatched probes on stderr but still succeeds") {
    const fs::path dir = make_temp_dir();
    std::string log;
    log += R"({"probe":"pii.x","attempt_id":1,"detector_scores":{"d":1.0},"status":"complete"})";
    log += '\n';
    log += R"({"probe":"mystery.probe","attempt_id":2,"detector_scores":{"d":1.0},"status":"complete"})";
    log += '\n';
    rocq::write_text_file(dir / "log.jsonl", log);
    CHECK(run(kBin + " ingest --log " + quoted(dir / "log.jsonl") +
              " --name x --out " + quoted(dir / "scenario.json") + " 2> " +
              quoted(dir / "stderr.txt")) == 0);
    const std::string err = rocq::read_text_file(dir / "stderr.txt");
    CHECK(err.find("mystery.probe") != std::string::npos);
    const json scenario = json::parse(rocq::read_text_file(dir / "scenario.json"));
    CHECK(scenario["outcomes"].contains("pii"));
    CHECK_FALSE(scenario["outcomes"].contains("mystery"));
    fs::remove_all(dir);
}

TEST_CASE("lec rejects an unknown vulnerability and lists the known ones") {
    const fs::path dir = make_temp_dir();
    rocq::write_text_file(dir / "campaign.json", kCampaignSpec);
    rocq::write_text_file(dir / "sim.json", kSimConfig);
    REQUIRE(run(kBin + " synth --spec " + quoted(dir / "campaign.json") +
                " --out " + quoted(dir / "log.jsonl")) == 0);
    REQUIRE(run(kBin + " ingest --log " + quoted(dir / "log.jsonl") +
                " --name baseline --out " + quoted(dir / "scenario.json")) == 0);
    REQUIRE(run(kBin + " simulate --scenario " + quoted(dir / "scenario.json") +
                " --sim " + quoted(dir / "sim.json") + " --out " +
                quoted(dir / "result.json")) == 0);
    CHECK(run(kBin + " lec --result " + quoted(dir / "result.json") +
              " --vuln nonsense --csv " + quoted(dir / "out.csv") + " 2> " +
              quoted(dir / "stderr.txt")) == 2);
    const std::string err = rocq::read_text_file(dir / "stderr.txt");
    CHECK(err.find("pii") != std::string::npos);
    CHECK(err.find("total") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("lec renders a flat-zero vulnerability") {
    const fs::path dir = make_temp_dir();
    const char* result = R"({
      "scenario": "noop",
      "seed": 1,
      "num_trials": 4,
      "expected_losses": {"pii": 0.0},
      "total_expected_loss": 0.0,
      "samples": {"pii": {"success_count": 0, "loss_usd": [0, 0, 0, 0]}}
    })";
    rocq::write_text_file(dir / "result.json", result);
    CHECK(run(kBin + " lec --result " + quoted(dir / "result.json") +
              " --vuln pii --csv " + quoted(dir / "flat.csv") + " --svg " +
              quoted(dir / "flat.svg")) == 0);
    CHECK(rocq::read_text_file(dir / "flat.csv") ==
          "threshold_usd,exceedance_probability\n0,0\n");
    const std::string svg = rocq::read_text_file(dir / "flat.svg");
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("80.00,440.00") != std::string::npos);  // pinned to P = 0
    fs::remove_all(dir);
}

TEST_CASE("a one-trial simulation is valid") {
    const fs::path dir = make_temp_dir();
    rocq::write_text_file(
        dir / "scenario.json",
        R"({"name":"tiny","outcomes":{"pii":{"trials":50,"failures":50}}})");
    rocq::write_text_file(
        dir / "sim.json",
        R"({"losses":{"pii":{"min":5000,"mode":50000,"max":500000}}})");
    REQUIRE(run(kBin + " simulate --scenario " + quoted(dir / "scenario.json") +
                " --sim " + quoted(dir / "sim.json") + " --trials 1 --out " +
                quoted(dir / "result.json") + " --samples-dir " +
                quoted(dir / "samples")) == 0);
    const json result = json::parse(rocq::read_text_file(dir / "result.json"));
    CHECK(result["num_trials"].get<std::uint64_t>() == 1);
    CHECK(result["samples"]["pii"]["loss_usd"].size() == 1);
    const std::string csv = rocq::read_text_file(dir / "samples" / "pii.csv");
    CHECK(csv.rfind("loss_usd\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + 1 draw
    fs::remove_all(dir);
}

TEST_CASE("seed precedence is flag over file over environment") {
    const fs::path dir = make_temp_dir();
    rocq::write_text_file(
        dir / "scenario.json",
        R"({"name":"s","outcomes":{"pii":{"trials":5,"failures":1}}})");
    rocq::write_text_file(
        dir / "sim_noseed.json",
        R"({"num_trials":10,"losses":{"pii":{"min":1,"mode":2,"max":3}}})");
    rocq::write_text_file(
        dir / "sim_seed11.json",
        R"({"num_trials":10,"seed":11,"losses":{"pii":{"min":1,"mode":2,"max":3}}})");

    const auto seed_of = [&](const std::string& env, const std::string& sim,
                             const std::string& extra) {
        REQUIRE(run(env + kBin + " simulate --scenario " +
                    quoted(dir / "scenario.json") + " --sim " +
                    quoted(dir / sim) + extra + " --out " +
                    quoted(dir / "result.json")) == 0);
        return json::parse(rocq::read_text_file(dir / "result.json"))["seed"]
            .get<std::uint64_t>();
    };
    CHECK(seed_of("", "sim_noseed.json", "") == 42);
    CHECK(seed_of("ROCQ_SEED=7 ", "sim_noseed.json", "") == 7);
    CHECK(seed_of("ROCQ_SEED=7 ", "sim_seed11.json", "") == 11);
    CHECK(seed_of("ROCQ_SEED=7 ", "sim_seed11.json", " --seed 99") == 99);
    CHECK(run("ROCQ_SEED=abc " + kBin + " simulate --scenario " +
              quoted(dir / "scenario.json") + " --sim " +
              quoted(dir / "sim_noseed.json") + " --out " +
              quoted(dir / "result.json") + " 2> /dev/null") == 2);
    fs::remove_all(dir);
}

TEST_CASE("compare prints the reference table shape to stdout") {
    const fs::path dir = make_temp_dir();
    const char* base = R"({
      "scenario": "baseline", "seed": 42, "num_trials": 10000,
      "expected_losses": {"atkgen": 2598, "divergence": 2863,
                          "latentinjection": 73310, "pii": 181223,
                          "promptinject": 53718},
      "total_expected_loss": 313712
    })";
    const char* abac = R"({
      "scenario": "abac", "seed": 42, "num_trials": 10000,
      "control_cost_usd": 30000,
      "expected_losses": {"atkgen": 3838, "divergence": 3021,
                          "latentinjection": 8856, "pii": 3157,
                          "promptinject": 94},
      "total_expected_loss": 18966
    })";
    rocq::write_text_file(dir / "baseline.json", base);
    rocq::write_text_file(dir / "abac.json", abac);
    CHECK(run(kBin + " compare --baseline " + quoted(dir / "baseline.json") +
              " --control " + quoted(dir / "abac.json") + " --format csv > " +
              quoted(dir / "out.csv")) == 0);
    const std::string csv = rocq::read_text_file(dir / "out.csv");
    CHECK(csv.find("vulnerability,baseline_el_usd,abac_el_usd,abac_roc") !=
          std::string::npos);
    CHECK(csv.find("total,313712,18966,9.82") != std::string::npos);

    // cost override via the flag
    CHECK(run(kBin + " compare --baseline " + quoted(dir / "baseline.json") +
              " --control " + quoted(dir / "abac.json") +
              " --cost abac=60000 --format csv > " + quoted(dir / "out2.csv")) ==
          0);
    const std::string csv2 = rocq::read_text_file(dir / "out2.csv");
    CHECK(csv2.find("total,313712,18966,4.91") != std::string::npos);

    // a control result without a cost falls back to the 30,000 default
    json no_cost = json::parse(abac);
    no_cost.erase("control_cost_usd");
    rocq::write_text_file(dir / "abac_nocost.json", no_cost.dump());
    CHECK(run(kBin + " compare --baseline " + quoted(dir / "baseline.json") +
              " --control " + quoted(dir / "abac_nocost.json") +
              " --format csv > " + quoted(dir / "out3.csv")) == 0);
    CHECK(rocq::read_text_file(dir / "out3.csv")
              .find("total,313712,18966,9.82") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("compare with scenario files prepends the vulnerability table") {
    const fs::path dir = make_temp_dir();
    const fs::path data = ROCQ_DATA;
    REQUIRE(run(kBin + " simulate --scenario " +
                quoted(data / "scenarios" / "baseline.json") + " --sim " +
                quoted(data / "simulation.json") + " --no-samples --out " +
                quoted(dir / "base.json")) == 0);
    REQUIRE(run(kBin + " simulate --scenario " +
                quoted(data / "scenarios" / "abac.json") + " --sim " +
                quoted(data / "simulation.json") + " --no-samples --out " +
                quoted(dir / "abac.json")) == 0);
    CHECK(run(kBin + " compare --baseline " + quoted(dir / "base.json") +
              " --control " + quoted(dir / "abac.json") + " --scenario " +
              quoted(data / "scenarios" / "baseline.json") + " --scenario " +
              quoted(data / "scenarios" / "abac.json") + " --format csv > " +
              quoted(dir / "out.csv")) == 0);
    const std::string csv = rocq::read_text_file(dir / "out.csv");
    CHECK(csv.find("vulnerability,trials,baseline_failures,baseline_lrs,"
                   "abac_failures,abac_lrs") != std::string::npos);
    CHECK(csv.find("pii,50,50,0.980,0,0.019") != std::string::npos);
    CHECK(csv.find("vulnerability,baseline_el_usd,abac_el_usd,abac_roc") !=
          std::string::npos);

    // json format nests both tables under one provenance-stamped object
    CHECK(run(kBin + " compare --baseline " + quoted(dir / "base.json") +
              " --control " + quoted(dir / "abac.json") + " --scenario " +
              quoted(data / "scenarios" / "baseline.json") + " --scenario " +
              quoted(data / "scenarios" / "abac.json") + " --format json > " +
              quoted(dir / "out.json")) == 0);
    const json combined = json::parse(rocq::read_text_file(dir / "out.json"));
    CHECK(combined["engine_version"].is_string());
    CHECK(combined["vulnerability_table"]["rows"]["pii"]["outcomes"]["abac"]
                  ["failures"].get<int>() == 0);
    CHECK(combined["risk_comparison"]["total"]["controls"]["abac"]["roc"]
              .is_number());
    fs::remove_all(dir);
}
