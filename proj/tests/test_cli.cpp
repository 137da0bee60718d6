// End-to-end checks of the command-line front-end: exit-code discipline
// (0/1/2 verdicts vs 3 for errors), artifact layout, and byte-identical
// reruns.  STLF_CLI_PATH and STLF_SOURCE_DIR come from the build.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

std::string cli() { return STLF_CLI_PATH; }
std::string source_dir() { return STLF_SOURCE_DIR; }

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("stlf_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kTinyCampaign = R"json({
  "scenario": {
    "kind": "two_car",
    "x0": {"z_ego": 0, "v_ego": 20, "z_agent": 40, "v_agent": 20},
    "duration": 10.0, "dt": 0.05
  },
  "requirement": {"formula": "[](z_agent - z_ego > 0)"},
  "search": {
    "signals": [{"channel": "xi", "control_points": 2, "range": [-1, 1],
                 "interpolation": "linear"}],
    "discrete": [{"name": "mu", "levels": ["1", "2"]}]
  },
  "method": {"name": "sa", "budget": 30}
})json";

}  // namespace

TEST_CASE("simulate writes a trace pair") {
    auto dir = fresh_dir("simulate");
    std::string out = (dir / "tr.csv").string();
    int code = run("simulate --config " + source_dir() + "/configs/two_car_scenario.json" +
                   " --out " + out);
    CHECK(code == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(dir / "tr.meta.json"));
}

TEST_CASE("monitor exit codes separate verdicts from errors") {
    auto dir = fresh_dir("monitor");
    std::string nominal = (dir / "nominal.csv").string();
    std::string collision = source_dir() + "/tests/golden/two_car_brake.csv";

    // a retreating agent: requirement satisfied
    write_file(dir / "retreat.json", R"json({
      "scenario": {
        "kind": "two_car",
        "x0": {"z_ego": 0, "v_ego": 20, "z_agent": 40, "v_agent": 20},
        "duration": 10.0, "dt": 0.05,
        "inputs": {
          "xi": {"times": [0.0], "values": [1.0], "interpolation": "hold"},
          "mu": {"times": [0.0], "values": [2], "interpolation": "hold"}
        }
      }
    })json");
    REQUIRE(run("simulate --config " + (dir / "retreat.json").string() + " --out " +
                nominal) == 0);

    CHECK(run("monitor --formula \"[](z_agent - z_ego > 0)\" --trace " + nominal) == 0);
    CHECK(run("monitor --formula \"[](z_agent - z_ego > 0)\" --trace " + collision) == 1);

    SUBCASE("inconclusive verdict exits 2") {
        // robustness is exactly zero when the margin predicate sits on the
        // initial gap
        CHECK(run("monitor --formula \"[](z_agent - z_ego >= 40)\" --trace " + nominal) ==
              2);
    }
    SUBCASE("malformed trace CSV exits 3") {
        write_file(dir / "bad.csv", "time,z\n0,oops\n");
        write_file(dir / "bad.meta.json",
                   R"json({"space": {"output_channels": ["z"], "input_channels": [],
                        "parameter_names": [], "channel_kinds": {}},
                       "params": {}, "duration": 0.0})json");
        CHECK(run("monitor --formula \"[](z > 0)\" --trace " + (dir / "bad.csv").string()) ==
              3);
    }
    SUBCASE("parse errors exit 3") {
        CHECK(run("monitor --formula \"(z_agent > 0\" --trace " + nominal) == 3);
        CHECK(run("monitor --formula \"[](nope > 0)\" --trace " + nominal) == 3);
    }
}

TEST_CASE("generate-ca covers and reports") {
    auto dir = fresh_dir("ca");
    std::string prefix = (dir / "small").string();
    CHECK(run("generate-ca --config " + source_dir() + "/configs/ca_small.json --seed 5" +
              " --out " + prefix) == 0);
    CHECK(fs::exists(prefix + ".csv"));
    std::string sidecar = slurp(prefix + ".json");
    CHECK(sidecar.find("\"total_required\": 12") != std::string::npos);
    CHECK(sidecar.find("\"total_covered\": 12") != std::string::npos);
    CHECK(sidecar.find("\"complete\": true") != std::string::npos);

    // row count within the acceptance bound
    std::string csv = slurp(prefix + ".csv");
    int rows = -1;  // header
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows >= 4);
    CHECK(rows <= 6);

    SUBCASE("invalid spec exits 3") {
        write_file(dir / "bad.json", R"json({"default_strength": 5, "domains": [
            {"name": "p", "levels": ["a", "b"]}]})json");
        CHECK(run("generate-ca --config " + (dir / "bad.json").string() + " --out " +
                  prefix) == 3);
    }
}

TEST_CASE("falsify campaign artifacts and exit codes") {
    auto dir = fresh_dir("falsify");
    write_file(dir / "campaign.json", kTinyCampaign);
    std::string out1 = (dir / "run1").string();
    int code = run("falsify --config " + (dir / "campaign.json").string() +
                   " --seed 3 --out " + out1);
    CHECK((code == 0 || code == 1));
    CHECK(fs::exists(out1 + "/evaluations.jsonl"));
    CHECK(fs::exists(out1 + "/summary.json"));
    CHECK(fs::exists(out1 + "/best_trace.csv"));

    // exit code mirrors the summary verdict
    std::string summary = slurp(out1 + "/summary.json");
    bool falsified = summary.find("\"falsified\": true") != std::string::npos;
    CHECK(code == (falsified ? 1 : 0));

    SUBCASE("reruns are byte-identical") {
        std::string out2 = (dir / "run2").string();
        REQUIRE(run("falsify --config " + (dir / "campaign.json").string() +
                    " --seed 3 --out " + out2) == code);
        CHECK(slurp(out1 + "/evaluations.jsonl") == slurp(out2 + "/evaluations.jsonl"));
        CHECK(slurp(out1 + "/summary.json") == slurp(out2 + "/summary.json"));
        CHECK(slurp(out1 + "/best_trace.csv") == slurp(out2 + "/best_trace.csv"));
    }
    SUBCASE("empty budget exits 3") {
        std::string broken(kTinyCampaign);
        auto pos = broken.find("\"budget\": 30");
        broken.replace(pos, 12, "\"budget\": 0");
        write_file(dir / "broken.json", broken);
        CHECK(run("falsify --config " + (dir / "broken.json").string() + " --out " +
                  (dir / "x").string()) == 3);
    }
    SUBCASE("ca+sa without a covering array exits 3") {
        std::string broken(kTinyCampaign);
        auto pos = broken.find("\"name\": \"sa\"");
        broken.replace(pos, 12, "\"name\": \"ca+sa\"");
        write_file(dir / "noca.json", broken);
        CHECK(run("falsify --config " + (dir / "noca.json").string() + " --out " +
                  (dir / "y").string()) == 3);
    }
}

TEST_CASE("falsify with ca+sa consumes a generated covering array") {
    auto dir = fresh_dir("casa");
    write_file(dir / "ca_spec.json", R"json({
      "default_strength": 2,
      "domains": [
        {"name": "dropout_start_ccd", "range": [0.0, 2.0], "level_count": 3},
        {"name": "dropout_duration_ccd", "range": [0.0, 3.0], "level_count": 3}
      ]
    })json");
    REQUIRE(run("generate-ca --config " + (dir / "ca_spec.json").string() +
                " --seed 1 --out " + (dir / "ca").string()) == 0);

    write_file(dir / "campaign.json", R"json({
      "scenario": {
        "kind": "perception", "duration": 6.0, "dt": 0.05, "sensors": ["ccd"],
        "params": {"ego_speed": 15, "ego_gap": 30, "ped_speed": 1.5, "ped_offset": 3}
      },
      "requirement": {"name": "R1"},
      "search": {
        "continuous": [
          {"name": "dropout_start_ccd", "range": [0.0, 2.0]},
          {"name": "dropout_duration_ccd", "range": [0.0, 3.0]}
        ]
      },
      "method": {"name": "ca+sa", "ca_file": ")json" +
                                     (dir / "ca.csv").string() + R"json(",
                 "per_seed_budget": 15, "max_extra_budget": 30}
    })json");
    int code = run("falsify --config " + (dir / "campaign.json").string() +
                   " --seed 2 --out " + (dir / "out").string() + " --jobs 2");
    // a long dropout starves the brake and the pedestrian is hit: expect a
    // counterexample
    CHECK(code == 1);
    CHECK(fs::exists(dir / "out" / "best_trace.csv"));
}

TEST_CASE("heatmap emits the matrix and axis sidecar") {
    auto dir = fresh_dir("heatmap");
    write_file(dir / "hm.json", R"json({
      "scenario": {
        "kind": "two_car",
        "x0": {"z_ego": 0, "v_ego": 20, "z_agent": 40, "v_agent": 20},
        "duration": 10.0, "dt": 0.05,
        "inputs": {"mu": {"times": [0.0], "values": [1], "interpolation": "hold"}}
      },
      "requirement": {"formula": "[](z_agent - z_ego > 0)"},
      "search": {"signals": [{"channel": "xi", "control_points": 2, "range": [-1, 1],
                              "interpolation": "linear"}]},
      "grid": [2, 2]
    })json");
    std::string prefix = (dir / "hm").string();
    CHECK(run("heatmap --config " + (dir / "hm.json").string() + " --out " + prefix) == 0);
    std::string csv = slurp(prefix + ".csv");
    int rows = 0, commas = 0;
    for (char c : csv) {
        if (c == '\n') ++rows;
        if (c == ',') ++commas;
    }
    CHECK(rows == 2);
    CHECK(commas == 2);  // 2x2 matrix: one comma per row
    CHECK(fs::exists(prefix + ".axes.json"));
}

TEST_CASE("golden trace regression: the braking scenario reproduces bit-for-bit") {
    auto dir = fresh_dir("golden");
    std::string out = (dir / "g.csv").string();
    REQUIRE(run("simulate --config " + source_dir() + "/configs/two_car_scenario.json" +
                " --out " + out) == 0);
    CHECK(slurp(out) == slurp(source_dir() + "/tests/golden/two_car_brake.csv"));
}

TEST_CASE("shipped configs stay runnable") {
    auto dir = fresh_dir("shipped");
    SUBCASE("two-car SA campaign finds its counterexample") {
        int code = run("falsify --config " + source_dir() + "/configs/two_car_sa.json" +
                       " --seed 11 --out " + (dir / "sa").string());
        CHECK(code == 1);
        CHECK(fs::exists(dir / "sa" / "summary.json"));
    }
    SUBCASE("perception SA campaign finds its counterexample") {
        int code = run("falsify --config " + source_dir() + "/configs/perception_sa.json" +
                       " --seed 11 --out " + (dir / "perc").string());
        CHECK(code == 1);
        CHECK(fs::exists(dir / "perc" / "best_trace.csv"));
    }
    SUBCASE("sixteen-parameter covering array") {
        CHECK(run("generate-ca --config " + source_dir() + "/configs/ca_vru16.json" +
                  " --seed 1 --out " + (dir / "vru16").string()) == 0);
        std::string sidecar = slurp(dir / "vru16.json");
        CHECK(sidecar.find("\"total_required\": 2562") != std::string::npos);
        CHECK(sidecar.find("\"complete\": true") != std::string::npos);
    }
}

TEST_CASE("golden trace regression: the perception dropout scenario reproduces") {
    auto dir = fresh_dir("golden_perc");
    std::string out = (dir / "p.csv").string();
    REQUIRE(run("simulate --config " + source_dir() +
                "/configs/perception_scenario.json --out " + out) == 0);
    CHECK(slurp(out) == slurp(source_dir() + "/tests/golden/perception_dropout.csv"));
    // the unmitigated dropout ends in a collision
    CHECK(run("monitor --formula \"[](dist_1 >= 0)\" --trace " + out) == 1);
}
