#include "dmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dmc/dmf.hpp"
#include "dmc/stats.hpp"

namespace dmc {

namespace {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    if (v == static_cast<std::int64_t>(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<std::int64_t>(v));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
    if (s == "override") return Algorithm::Override;
    if (s == "merge") return Algorithm::Merge;
    if (s == "union") return Algorithm::Union;
    if (s == "3way" || s == "three-way") return Algorithm::ThreeWay;
    return std::nullopt;
}

std::optional<Direction> direction_from_string(const std::string& s) {
    if (s == "left") return Direction::Left;
    if (s == "right") return Direction::Right;
    return std::nullopt;
}

ScenarioRow error_row(const Scenario& s, Algorithm algo, Direction dir,
                      const std::string& code) {
    ScenarioRow row;
    row.scenario_id = s.id;
    row.rendered_id = render_scenario_id(s.id, algo, dir);
    row.algorithm = algo;
    row.direction = dir;
    row.error = true;
    row.error_code = code;
    row.metadata = s.metadata;
    return row;
}

std::int64_t count_of(const ScenarioRow& row, InconsistencyCategory cat) {
    auto it = row.counts.find(cat);
    return it == row.counts.end() ? 0 : it->second;
}

json test_result_json(const TestResult& r) {
    json out;
    out["statistic"] = r.statistic;
    out["z"] = r.z;
    out["pValue"] = r.p_value;
    out["method"] = to_string(r.method);
    out["alternative"] = to_string(r.alternative);
    return out;
}

json summary_json(const SummaryStats& s) {
    json out;
    out["n"] = s.n;
    out["min"] = s.min;
    out["q1"] = s.q1;
    out["median"] = s.median;
    out["q3"] = s.q3;
    out["max"] = s.max;
    out["mean"] = s.mean;
    out["sd"] = s.sd;
    return out;
}

}  // namespace

const char* const kCsvHeader =
    "scenario,algorithm,direction,conflicts,NFCon,NCCon,NDRCon,NASCon,NUMECon,NBFCon,"
    "mv_count,rate,g,additions,removals,modifications,derivations,overall_instability,"
    "classification,f_min,detect_min,resolve_min";

std::string to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }

std::string render_scenario_id(const std::string& id, Algorithm algorithm,
                               Direction direction) {
    return "R_{" + id + "," + to_string(algorithm) + "," + to_string(direction) + "}";
}

ScenarioResult run_scenario(const Scenario& scenario, const BatchConfig& cfg) {
    ScenarioResult result;
    result.scenario_id = scenario.id;

    Model base, delta, intended;
    std::optional<Model> parent;
    try {
        base = load_model_file(scenario.base_path);
        delta = load_model_file(scenario.delta_path);
        intended = load_model_file(scenario.intended_path);
        if (scenario.parent_path) parent = load_model_file(*scenario.parent_path);
    } catch (const ParseError&) {
        for (Algorithm algo : cfg.algorithms) {
            for (Direction dir : cfg.directions) {
                result.rows.push_back(error_row(scenario, algo, dir, "parse"));
            }
        }
        return result;
    }

    for (Algorithm algo : cfg.algorithms) {
        for (Direction dir : cfg.directions) {
            if (algo == Algorithm::ThreeWay && !parent) {
                result.rows.push_back(error_row(scenario, algo, dir, "missing-parent"));
                continue;
            }
            ScenarioRow row;
            row.scenario_id = scenario.id;
            row.rendered_id = render_scenario_id(scenario.id, algo, dir);
            row.algorithm = algo;
            row.direction = dir;
            row.metadata = scenario.metadata;
            try {
                // right: base +x delta (base wins); left: the inverse order
                const Model& first = dir == Direction::Right ? base : delta;
                const Model& second = dir == Direction::Right ? delta : base;
                CompositionResult composed;
                switch (algo) {
                    case Algorithm::Override:
                        composed = compose_override(first, second,
                                                    match_models(first, second,
                                                                 cfg.match_policy));
                        break;
                    case Algorithm::Merge:
                        composed = compose_merge(first, second,
                                                 match_models(first, second, cfg.match_policy));
                        break;
                    case Algorithm::Union:
                        composed = compose_union(first, second,
                                                 match_models(first, second, cfg.match_policy));
                        break;
                    case Algorithm::ThreeWay:
                        composed = three_way_merge(*parent, first, second,
                                                   cfg.three_way_policy, cfg.match_policy);
                        break;
                }
                row.conflicts = static_cast<std::int64_t>(composed.conflicts.size());

                std::vector<Inconsistency> findings = check_wellformed(composed.output);
                auto semantic = check_against_intended(composed.output, intended,
                                                       cfg.match_policy);
                findings.insert(findings.end(), semantic.begin(), semantic.end());
                if (!composed.output.interactions.empty()) {
                    auto mv = check_multiview(composed.output);
                    row.mv_count = static_cast<std::int64_t>(mv.size());
                    findings.insert(findings.end(), mv.begin(), mv.end());
                }
                const InconsistencyReport report = make_report(std::move(findings),
                                                               composed.output);
                row.counts = report.counts_by_category;
                row.rate = report.rate;

                const EditScript script =
                    diff_models(composed.output, intended, cfg.match_policy);
                row.g = static_cast<std::int64_t>(script.ops.size());
                row.tally = script.tally;
                row.stability = assess_stability(composed.output, intended,
                                                 cfg.metric_selection, cfg.threshold);
            } catch (const ThreeWayConflictError&) {
                row = error_row(scenario, algo, dir, "three-way-conflicts");
            } catch (const std::exception&) {
                row = error_row(scenario, algo, dir, "compose");
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

BatchReport run_batch(const BatchConfig& cfg) {
    BatchReport report;

    std::vector<ScenarioResult> results(cfg.scenarios.size());
    if (cfg.jobs > 1) {
        std::vector<std::future<ScenarioResult>> futures;
        futures.reserve(cfg.scenarios.size());
        for (const auto& s : cfg.scenarios) {
            futures.push_back(std::async(std::launch::async,
                                         [&s, &cfg] { return run_scenario(s, cfg); }));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
            results[i] = run_scenario(cfg.scenarios[i], cfg);
        }
    }

    for (auto& r : results) {
        for (auto& row : r.rows) report.rows.push_back(std::move(row));
    }
    auto combo_rank = [&cfg](const ScenarioRow& row) {
        std::size_t a = 0, d = 0;
        for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
            if (cfg.algorithms[i] == row.algorithm) a = i;
        }
        for (std::size_t i = 0; i < cfg.directions.size(); ++i) {
            if (cfg.directions[i] == row.direction) d = i;
        }
        return a * cfg.directions.size() + d;
    };
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [&](const ScenarioRow& x, const ScenarioRow& y) {
                         if (x.scenario_id != y.scenario_id) {
                             return x.scenario_id < y.scenario_id;
                         }
                         return combo_rank(x) < combo_rank(y);
                     });

    std::ostringstream csv;
    csv << kCsvHeader << "\n";
    for (const auto& row : report.rows) {
        csv << row.scenario_id << "," << to_string(row.algorithm) << ","
            << to_string(row.direction) << ",";
        if (row.error) {
            // numeric fields stay empty; classification carries the reason code
            csv << ",,,,,,,,,,,,,,error:" << row.error_code << ",";
        } else {
            csv << row.conflicts << "," << count_of(row, InconsistencyCategory::NFCon) << ","
                << count_of(row, InconsistencyCategory::NCCon) << ","
                << count_of(row, InconsistencyCategory::NDRCon) << ","
                << count_of(row, InconsistencyCategory::NASCon) << ","
                << count_of(row, InconsistencyCategory::NUMECon) << ","
                << count_of(row, InconsistencyCategory::NBFCon) << "," << row.mv_count << ","
                << format_double(row.rate) << "," << row.g << "," << row.tally.additions << ","
                << row.tally.removals << "," << row.tally.modifications << ","
                << row.tally.derivations << ","
                << format_double(row.stability.overall_instability) << ","
                << (row.stability.stable ? "stable" : "unstable") << ",";
        }
        csv << (row.metadata.f_min ? format_double(*row.metadata.f_min) : "") << ","
            << (row.metadata.detect_min ? format_double(*row.metadata.detect_min) : "") << ","
            << (row.metadata.resolve_min ? format_double(*row.metadata.resolve_min) : "")
            << "\n";
    }
    report.csv = csv.str();

    json stats;
    stats["schema"] = 1;
    std::vector<double> rates, gs, instabilities, stable_flags;
    std::vector<double> stable_rates, unstable_rates, stable_g, unstable_g;
    for (const auto& row : report.rows) {
        if (row.error) continue;
        rates.push_back(row.rate);
        gs.push_back(static_cast<double>(row.g));
        instabilities.push_back(row.stability.overall_instability);
        stable_flags.push_back(row.stability.stable ? 1.0 : 0.0);
        if (row.stability.stable) {
            stable_rates.push_back(row.rate);
            stable_g.push_back(static_cast<double>(row.g));
        } else {
            unstable_rates.push_back(row.rate);
            unstable_g.push_back(static_cast<double>(row.g));
        }
    }
    stats["rows"] = rates.size();
    stats["groups"] = json{{"stable", stable_rates.size()}, {"unstable", unstable_rates.size()}};
    if (!rates.empty()) {
        stats["rate"] = summary_json(describe({rates, "rate"}));
        stats["g"] = summary_json(describe({gs, "g"}));
    }
    if (!stable_rates.empty() && !unstable_rates.empty()) {
        stats["mannwhitney_rate_stable_lt_unstable"] = test_result_json(
            mann_whitney({stable_rates, "stable"}, {unstable_rates, "unstable"},
                         Alternative::Less));
        stats["mannwhitney_g_stable_lt_unstable"] = test_result_json(mann_whitney(
            {stable_g, "stable"}, {unstable_g, "unstable"}, Alternative::Less));
    }
    auto correlation_entry = [&stats](const char* key, const std::vector<double>& x,
                                      const std::vector<double>& y, Alternative alt) {
        if (x.size() < 3) return;
        try {
            const CorrelationResult sc = spearman({x, key}, {y, "rate"}, alt);
            json jc;
            jc["rho"] = sc.rho;
            jc["t"] = sc.t;
            jc["pValue"] = sc.p_value;
            jc["method"] = to_string(sc.method);
            jc["alternative"] = to_string(sc.alternative);
            stats[key] = std::move(jc);
        } catch (const std::invalid_argument&) {
            // constant column; correlation undefined
        }
    };
    correlation_entry("spearman_instability_rate", instabilities, rates,
                      Alternative::Greater);
    correlation_entry("spearman_stable_flag_rate", stable_flags, rates, Alternative::Less);
    report.stats_json = stats.dump(2) + "\n";
    return report;
}

BatchConfig load_batch_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open batch file \"" + path + "\"");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("batch file \"" + path + "\": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != 1) {
        throw std::runtime_error("batch file \"" + path + "\": missing or unsupported schema");
    }

    const std::filesystem::path base_dir = std::filesystem::path(path).parent_path();
    auto resolve_path = [&base_dir](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base_dir / fp).string();
    };

    BatchConfig cfg;
    if (!doc.contains("scenarios") || !doc["scenarios"].is_array() ||
        doc["scenarios"].empty()) {
        throw std::runtime_error("batch file requires a non-empty \"scenarios\" array");
    }
    std::set<std::string> seen_ids;
    for (const auto& js : doc["scenarios"]) {
        Scenario s;
        s.id = js.value("id", "");
        if (s.id.empty()) throw std::runtime_error("scenario without id");
        if (!seen_ids.insert(s.id).second) {
            throw std::runtime_error("duplicate scenario id \"" + s.id + "\"");
        }
        if (!js.contains("base") || !js.contains("delta") || !js.contains("intended")) {
            throw std::runtime_error("scenario \"" + s.id +
                                     "\" requires base, delta and intended paths");
        }
        s.base_path = resolve_path(js["base"].get<std::string>());
        s.delta_path = resolve_path(js["delta"].get<std::string>());
        s.intended_path = resolve_path(js["intended"].get<std::string>());
        if (js.contains("parent")) {
            s.parent_path = resolve_path(js["parent"].get<std::string>());
        }
        if (js.contains("metadata")) {
            const auto& md = js["metadata"];
            if (md.contains("f_min")) s.metadata.f_min = md["f_min"].get<double>();
            if (md.contains("detect_min")) {
                s.metadata.detect_min = md["detect_min"].get<double>();
            }
            if (md.contains("resolve_min")) {
                s.metadata.resolve_min = md["resolve_min"].get<double>();
            }
            s.metadata.description = md.value("description", "");
        }
        cfg.scenarios.push_back(std::move(s));
    }
    if (doc.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const auto& ja : doc["algorithms"]) {
            auto a = algorithm_from_string(ja.get<std::string>());
            if (!a) throw std::runtime_error("unknown algorithm in batch file");
            cfg.algorithms.push_back(*a);
        }
        if (cfg.algorithms.empty()) throw std::runtime_error("empty algorithms list");
    }
    if (doc.contains("directions")) {
        cfg.directions.clear();
        for (const auto& jd : doc["directions"]) {
            auto d = direction_from_string(jd.get<std::string>());
            if (!d) throw std::runtime_error("unknown direction in batch file");
            cfg.directions.push_back(*d);
        }
        if (cfg.directions.empty()) throw std::runtime_error("empty directions list");
    }
    if (doc.contains("threshold")) cfg.threshold = doc["threshold"].get<double>();
    if (doc.contains("metrics")) {
        for (const auto& jm : doc["metrics"]) {
            cfg.metric_selection.push_back(jm.get<std::string>());
        }
    }
    if (doc.contains("onConflict")) {
        const std::string oc = doc["onConflict"].get<std::string>();
        if (oc == "mine") {
            cfg.three_way_policy = ThreeWayPolicy::PreferMine;
        } else if (oc == "theirs") {
            cfg.three_way_policy = ThreeWayPolicy::PreferTheirs;
        } else if (oc == "fail") {
            cfg.three_way_policy = ThreeWayPolicy::Fail;
        } else {
            throw std::runtime_error("unknown onConflict policy \"" + oc + "\"");
        }
    }
    if (doc.contains("caseInsensitive") && doc["caseInsensitive"].get<bool>()) {
        cfg.match_policy.case_sensitive = false;
    }
    return cfg;
}

}  // namespace dmc
