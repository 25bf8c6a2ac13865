#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "dmc/dmf.hpp"
#include "dmc/harness.hpp"
#include "support/fixtures.hpp"

using namespace dmc;
using namespace dmc::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("dmc_harness_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string save(const std::string& name, const Model& m) const {
        const std::string file = (path / name).string();
        save_model_file(m, file);
        return file;
    }
};

Scenario make_scenario(const std::string& id, const std::string& base,
                       const std::string& delta, const std::string& intended) {
    Scenario s;
    s.id = id;
    s.base_path = base;
    s.delta_path = delta;
    s.intended_path = intended;
    return s;
}

}  // namespace

TEST_CASE("scenario ids render in the release/algorithm/direction form") {
    CHECK(render_scenario_id("3", Algorithm::Merge, Direction::Right) ==
          "R_{3,merge,right}");
    CHECK(render_scenario_id("1", Algorithm::Override, Direction::Left) ==
          "R_{1,override,left}");
}

TEST_CASE("a no-change scenario is clean under every algorithm") {
    TempDir dir("nochange");
    const Model m = figure1_intended();
    const std::string file = dir.save("m.dmf", m);

    BatchConfig cfg;
    cfg.algorithms = {Algorithm::Override, Algorithm::Merge, Algorithm::Union,
                      Algorithm::ThreeWay};
    cfg.directions = {Direction::Right, Direction::Left};
    Scenario s = make_scenario("1", file, file, file);
    s.parent_path = file;
    cfg.scenarios.push_back(s);

    const ScenarioResult result = run_scenario(cfg.scenarios[0], cfg);
    REQUIRE(result.rows.size() == 8);
    for (const auto& row : result.rows) {
        CAPTURE(row.rendered_id);
        REQUIRE_FALSE(row.error);
        if (row.algorithm == Algorithm::Union) continue;  // duplicates both copies
        CHECK(row.rate == 0.0);
        CHECK(row.g == 0);
        CHECK(row.stability.stable);
    }
}

TEST_CASE("override measures worse than merge on the figure-1 scenario") {
    TempDir dir("fig1");
    const std::string base = dir.save("base.dmf", figure1_base());
    const std::string delta = dir.save("delta.dmf", figure1_delta());
    const std::string intended = dir.save("intended.dmf", figure1_intended());

    BatchConfig cfg;
    cfg.algorithms = {Algorithm::Override, Algorithm::Merge};
    cfg.directions = {Direction::Right};
    cfg.scenarios.push_back(make_scenario("1", base, delta, intended));

    const ScenarioResult result = run_scenario(cfg.scenarios[0], cfg);
    REQUIRE(result.rows.size() == 2);
    const ScenarioRow& override_row = result.rows[0];
    const ScenarioRow& merge_row = result.rows[1];
    REQUIRE(override_row.algorithm == Algorithm::Override);
    CHECK(override_row.rate >= merge_row.rate);
    CHECK(override_row.g >= merge_row.g);
    CHECK(override_row.rate > merge_row.rate);
}

TEST_CASE("a batch emits one CSV row per scenario-algorithm-direction combination") {
    TempDir dir("rows");
    const std::string file = dir.save("m.dmf", figure1_base());
    BatchConfig cfg;
    cfg.algorithms = {Algorithm::Override, Algorithm::Merge, Algorithm::Union};
    cfg.directions = {Direction::Right, Direction::Left};
    cfg.scenarios.push_back(make_scenario("1", file, file, file));
    cfg.scenarios.push_back(make_scenario("2", file, file, file));

    const BatchReport report = run_batch(cfg);
    CHECK(report.rows.size() == 12);
    std::size_t lines = 0;
    for (char c : report.csv) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 13);  // header + rows
    CHECK(report.csv.rfind(kCsvHeader, 0) == 0);
}

TEST_CASE("a batch equals the concatenation of its single-scenario runs") {
    TempDir dir("concat");
    const std::string base = dir.save("base.dmf", figure1_base());
    const std::string delta = dir.save("delta.dmf", figure1_delta());
    const std::string intended = dir.save("intended.dmf", figure1_intended());

    BatchConfig both;
    both.algorithms = {Algorithm::Override, Algorithm::Merge};
    both.directions = {Direction::Right};
    both.scenarios.push_back(make_scenario("1", base, delta, intended));
    both.scenarios.push_back(make_scenario("2", base, base, base));

    BatchConfig first = both;
    first.scenarios = {both.scenarios[0]};
    BatchConfig second = both;
    second.scenarios = {both.scenarios[1]};

    const std::string merged = run_batch(both).csv;
    const std::string one = run_batch(first).csv;
    const std::string two = run_batch(second).csv;
    std::string concatenated = one;
    concatenated += two.substr(two.find('\n') + 1);  // drop the second header
    CHECK(merged == concatenated);
}

TEST_CASE("a missing input yields an error row and the batch continues") {
    TempDir dir("errors");
    const std::string file = dir.save("m.dmf", figure1_base());
    BatchConfig cfg;
    cfg.algorithms = {Algorithm::Merge};
    cfg.directions = {Direction::Right};
    cfg.scenarios.push_back(make_scenario("1", (dir.path / "missing.dmf").string(), file,
                                          file));
    cfg.scenarios.push_back(make_scenario("2", file, file, file));

    const BatchReport report = run_batch(cfg);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].error);
    CHECK(report.rows[0].error_code == "parse");
    CHECK_FALSE(report.rows[1].error);
    CHECK(report.csv.find("error:parse") != std::string::npos);
}

TEST_CASE("three-way scenarios without a parent produce error rows") {
    TempDir dir("noparent");
    const std::string file = dir.save("m.dmf", figure1_base());
    BatchConfig cfg;
    cfg.algorithms = {Algorithm::ThreeWay, Algorithm::Merge};
    cfg.directions = {Direction::Right};
    cfg.scenarios.push_back(make_scenario("1", file, file, file));

    const BatchReport report = run_batch(cfg);
    REQUIRE(report.rows.size() == 2);
    bool saw_error = false, saw_ok = false;
    for (const auto& row : report.rows) {
        if (row.algorithm == Algorithm::ThreeWay) {
            CHECK(row.error);
            CHECK(row.error_code == "missing-parent");
            saw_error = true;
        } else {
            CHECK_FALSE(row.error);
            saw_ok = true;
        }
    }
    CHECK(saw_error);
    CHECK(saw_ok);
}

TEST_CASE("batch output is identical under concurrency") {
    TempDir dir("jobs");
    const std::string base = dir.save("base.dmf", figure1_base());
    const std::string delta = dir.save("delta.dmf", figure1_delta());
    const std::string intended = dir.save("intended.dmf", figure1_intended());

    BatchConfig cfg;
    cfg.algorithms = {Algorithm::Override, Algorithm::Merge, Algorithm::Union};
    cfg.directions = {Direction::Right, Direction::Left};
    for (int i = 0; i < 6; ++i) {
        cfg.scenarios.push_back(
            make_scenario("s" + std::to_string(i), base, delta, intended));
    }
    const BatchReport serial = run_batch(cfg);
    cfg.jobs = 4;
    const BatchReport parallel = run_batch(cfg);
    CHECK(serial.csv == parallel.csv);
    CHECK(serial.stats_json == parallel.stats_json);
}

TEST_CASE("separated stable and unstable groups test as significantly different") {
    TempDir dir("groups");
    // four clean scenarios and four with increasingly many missing intended
    // operations
    const Model base = figure1_intended();
    const std::string base_path = dir.save("base.dmf", base);

    BatchConfig cfg;
    cfg.algorithms = {Algorithm::Merge};
    cfg.directions = {Direction::Right};
    for (int k = 0; k < 4; ++k) {
        cfg.scenarios.push_back(make_scenario("a" + std::to_string(k), base_path, base_path,
                                              base_path));
    }
    for (int k = 0; k < 4; ++k) {
        Model intended = base;
        for (int e = 0; e < 4 + k; ++e) {
            Element extra = classifier(ElementKind::Class, "Extra" + std::to_string(e));
            extra.attributes.push_back(attr("state" + std::to_string(e), "int"));
            extra.operations.push_back(op("work" + std::to_string(e), "void"));
            intended.elements.push_back(std::move(extra));
        }
        intended.elements.push_back(classifier(ElementKind::Interface, "IExtra"));
        const std::string path =
            dir.save("intended" + std::to_string(k) + ".dmf", normalize(intended));
        cfg.scenarios.push_back(
            make_scenario("b" + std::to_string(k), base_path, base_path, path));
    }

    const BatchReport report = run_batch(cfg);
    REQUIRE(report.rows.size() == 8);

    const auto stats = nlohmann::json::parse(report.stats_json);
    REQUIRE(stats.contains("mannwhitney_rate_stable_lt_unstable"));
    CHECK(stats["groups"]["stable"] == 4);
    CHECK(stats["groups"]["unstable"] == 4);
    CHECK(stats["mannwhitney_rate_stable_lt_unstable"]["pValue"].get<double>() < 0.05);
    CHECK(stats["mannwhitney_rate_stable_lt_unstable"]["method"] == "exact");
}

TEST_CASE("batch files load with resolved relative paths and metadata") {
    TempDir dir("loadfile");
    dir.save("base.dmf", figure1_base());
    dir.save("delta.dmf", figure1_delta());
    dir.save("intended.dmf", figure1_intended());
    const std::string batch = (dir.path / "batch.json").string();
    {
        std::ofstream out(batch);
        out << R"({
  "schema": 1,
  "algorithms": ["override", "merge"],
  "directions": ["right"],
  "threshold": 0.25,
  "scenarios": [
    {"id": "3", "base": "base.dmf", "delta": "delta.dmf", "intended": "intended.dmf",
     "metadata": {"f_min": 12.5, "resolve_min": 3, "description": "photo label feature"}}
  ]
})";
    }
    const BatchConfig cfg = load_batch_file(batch);
    REQUIRE(cfg.scenarios.size() == 1);
    CHECK(cfg.threshold == 0.25);
    CHECK(cfg.algorithms.size() == 2);
    CHECK(cfg.directions.size() == 1);
    REQUIRE(cfg.scenarios[0].metadata.f_min.has_value());
    CHECK(*cfg.scenarios[0].metadata.f_min == 12.5);
    CHECK_FALSE(cfg.scenarios[0].metadata.detect_min.has_value());

    const BatchReport report = run_batch(cfg);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.csv.find(",12.5,,3\n") != std::string::npos);
}
