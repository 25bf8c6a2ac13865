#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmc/composition.hpp"
#include "dmc/consistency.hpp"
#include "dmc/diffing.hpp"
#include "dmc/matching.hpp"
#include "dmc/stability.hpp"

namespace dmc {

enum class Direction { Left, Right };

std::string to_string(Direction d);

// Human-effort minutes are recorded inputs, never computed.
struct ScenarioMetadata {
    std::optional<double> f_min;
    std::optional<double> detect_min;
    std::optional<double> resolve_min;
    std::string description;
};

struct Scenario {
    std::string id;
    std::string base_path;
    std::string delta_path;
    std::string intended_path;
    std::optional<std::string> parent_path;
    ScenarioMetadata metadata;
};

struct BatchConfig {
    std::vector<Scenario> scenarios;
    std::vector<Algorithm> algorithms = {Algorithm::Override, Algorithm::Merge};
    std::vector<Direction> directions = {Direction::Right, Direction::Left};
    std::vector<std::string> metric_selection;  // empty: model-level default
    double threshold = 0.2;
    MatchPolicy match_policy;
    ThreeWayPolicy three_way_policy = ThreeWayPolicy::PreferMine;
    int jobs = 1;
};

struct ScenarioRow {
    std::string scenario_id;
    std::string rendered_id;  // R_{i,x,y}
    Algorithm algorithm = Algorithm::Override;
    Direction direction = Direction::Right;

    bool error = false;
    std::string error_code;

    std::int64_t conflicts = 0;
    std::map<InconsistencyCategory, std::int64_t> counts;
    std::int64_t mv_count = 0;
    double rate = 0.0;
    std::int64_t g = 0;
    ChangeTally tally;
    StabilityReport stability;
    ScenarioMetadata metadata;
};

struct ScenarioResult {
    std::string scenario_id;
    std::vector<ScenarioRow> rows;
};

struct BatchReport {
    std::vector<ScenarioRow> rows;  // ordered by (scenario id, algorithm, direction)
    std::string csv;
    std::string stats_json;
};

// "R_{<id>,<algorithm>,<direction>}"
std::string render_scenario_id(const std::string& id, Algorithm algorithm, Direction direction);

// Composes per (algorithm, direction), checks well-formedness, intended
// compliance and the multi-view rules, and measures rate, g, change tally and
// stability. Per-combination failures become error rows.
ScenarioResult run_scenario(const Scenario& scenario, const BatchConfig& cfg);

// Deterministic: byte-identical CSV regardless of jobs. A failing scenario
// contributes an error row and the batch continues.
BatchReport run_batch(const BatchConfig& cfg);

// Batch file schema 1; relative scenario paths resolve against the batch
// file's directory.
BatchConfig load_batch_file(const std::string& path);

extern const char* const kCsvHeader;

}  // namespace dmc
