#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmc/composition.hpp"
#include "dmc/consistency.hpp"
#include "dmc/diffing.hpp"
#include "dmc/dmf.hpp"
#include "dmc/harness.hpp"
#include "dmc/matching.hpp"
#include "dmc/metrics.hpp"
#include "dmc/model.hpp"
#include "dmc/stability.hpp"
#include "dmc/stats.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitThreeWayConflicts = 3;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << content;
}

json conflicts_json(const std::vector<dmc::Conflict>& conflicts) {
    json arr = json::array();
    for (const auto& c : conflicts) {
        json jc;
        jc["left"] = c.left_element;
        jc["right"] = c.right_element;
        jc["property"] = c.property;
        jc["leftValue"] = c.left_value;
        jc["rightValue"] = c.right_value;
        jc["resolution"] = dmc::to_string(c.resolution);
        arr.push_back(std::move(jc));
    }
    return arr;
}

json findings_json(const dmc::InconsistencyReport& report) {
    json out;
    json arr = json::array();
    for (const auto& f : report.findings) {
        json jf;
        jf["category"] = dmc::to_string(f.category);
        jf["severity"] = f.severity == dmc::FindingSeverity::Error ? "error" : "warning";
        jf["locations"] = f.locations;
        jf["detail"] = f.detail;
        arr.push_back(std::move(jf));
    }
    out["findings"] = std::move(arr);
    json counts;
    for (const auto& [cat, n] : report.counts_by_category) counts[dmc::to_string(cat)] = n;
    out["counts"] = std::move(counts);
    out["rate"] = report.rate;
    return out;
}

json stability_json(const dmc::StabilityReport& report) {
    json out;
    json per = json::array();
    for (const auto& m : report.per_metric) {
        json jm;
        jm["metric"] = m.metric;
        jm["observed"] = m.observed;
        jm["intended"] = m.intended;
        if (std::isinf(m.distance)) {
            jm["distance"] = "infinite";
        } else {
            jm["distance"] = m.distance;
        }
        jm["stable"] = m.stable ? 1 : 0;
        per.push_back(std::move(jm));
    }
    out["perMetric"] = std::move(per);
    // the overall value under both of its common names
    out["stability_overall"] = report.overall_instability;
    out["overall_instability"] = report.overall_instability;
    out["classification"] = report.stable ? "stable" : "unstable";
    out["threshold"] = report.threshold;
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

// A column is addressed by header name or zero-based index; header rows are
// skipped automatically when the cell is not numeric.
std::vector<double> csv_column(const std::vector<std::vector<std::string>>& rows,
                               const std::string& column) {
    std::size_t index = 0;
    bool have_index = false;
    if (!column.empty() && column.find_first_not_of("0123456789") == std::string::npos) {
        index = static_cast<std::size_t>(std::stoul(column));
        have_index = true;
    } else if (!rows.empty()) {
        for (std::size_t i = 0; i < rows[0].size(); ++i) {
            if (rows[0][i] == column) {
                index = i;
                have_index = true;
                break;
            }
        }
    }
    if (!have_index) throw std::runtime_error("no such column \"" + column + "\"");
    std::vector<double> out;
    for (const auto& row : rows) {
        if (index >= row.size()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(row[index], &pos);
            if (pos == row[index].size()) out.push_back(v);
        } catch (const std::exception&) {
            // header or non-numeric cell
        }
    }
    if (out.empty()) throw std::runtime_error("column \"" + column + "\" has no numeric data");
    return out;
}

dmc::Alternative parse_alternative(const std::string& s) {
    if (s == "less") return dmc::Alternative::Less;
    if (s == "greater") return dmc::Alternative::Greater;
    if (s == "two-sided" || s == "twosided") return dmc::Alternative::TwoSided;
    throw CLI::ValidationError("--alternative", "expected less|greater|two-sided");
}

std::string metrics_csv(const dmc::Model& model, const std::optional<std::string>& subject) {
    static const std::vector<std::string> columns = {
        "NClass", "NInter", "NOI",    "NAttr",       "NOps",        "IFImpl",  "NOC",
        "NDesc",  "NAnc",   "DIT",    "OpsInh",      "AttrInh",     "InhOps",  "InhAttr",
        "DepOut", "DepIn",  "ECAAttr", "ICAAttr",    "Assoc",       "ECPar",
        "NDirClients",      "NIndClients", "ProvIF", "ReqIF",       "AssocOut", "AssocIn",
        "Connectors"};

    std::vector<std::pair<std::string, dmc::MetricRecord>> rows;
    auto record_for = [&model](const dmc::Element& e) -> std::optional<dmc::MetricRecord> {
        switch (e.kind) {
            case dmc::ElementKind::Class: return dmc::class_metrics(model, e.name);
            case dmc::ElementKind::Interface: return dmc::interface_metrics(model, e.name);
            case dmc::ElementKind::Component: return dmc::component_metrics(model, e.name);
            case dmc::ElementKind::Aspect: return std::nullopt;  // no aspect suite
        }
        return std::nullopt;
    };

    if (subject) {
        const dmc::Element* e = dmc::resolve(model, *subject);
        if (e) {
            auto rec = record_for(*e);
            if (!rec) throw std::runtime_error("no metric suite for aspects");
            rows.emplace_back(dmc::to_string(e->kind), *rec);
        } else if (*subject == model.name) {
            rows.emplace_back("model", dmc::model_metrics(model));
        } else {
            throw std::runtime_error("no such subject \"" + *subject + "\"");
        }
    } else {
        rows.emplace_back("model", dmc::model_metrics(model));
        for (const auto& e : model.elements) {
            if (auto rec = record_for(e)) rows.emplace_back(dmc::to_string(e.kind), *rec);
        }
    }

    std::ostringstream csv;
    csv << "subject,kind";
    for (const auto& c : columns) csv << "," << c;
    csv << "\n";
    for (const auto& [kind, rec] : rows) {
        csv << rec.subject << "," << kind;
        for (const auto& c : columns) {
            csv << ",";
            if (rec.has(c)) {
                const double v = rec.at(c);
                if (v == static_cast<std::int64_t>(v)) {
                    csv << static_cast<std::int64_t>(v);
                } else {
                    csv << v;
                }
            }
        }
        csv << "\n";
    }
    return csv.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dmc - design model composition, consistency and measurement toolkit"};
    app.require_subcommand(1);

    // ---- compose ----
    auto* compose = app.add_subcommand("compose", "compose two models");
    std::string algo_name = "merge", winner = "left";
    std::string compose_a, compose_b, compose_out, conflicts_path, parent_path;
    bool fail_on_conflict = false;
    compose->add_option("--algo", algo_name, "override|merge|union|3way")->required();
    compose->add_option("--winner", winner, "left|right (3way: preferred side)");
    compose->add_option("--parent", parent_path, "parent model for 3way");
    compose->add_flag("--fail-on-conflict", fail_on_conflict,
                      "3way: abort instead of resolving");
    compose->add_option("A", compose_a, "left input model")->required();
    compose->add_option("B", compose_b, "right input model")->required();
    compose->add_option("-o,--output", compose_out, "composed model path")->required();
    compose->add_option("--conflicts", conflicts_path, "conflict report path (JSON)");

    // ---- check ----
    auto* check = app.add_subcommand("check", "consistency checks");
    std::string check_model, check_intended, check_report;
    bool check_multiview_flag = false;
    check->add_option("MODEL", check_model, "model to check")->required();
    check->add_option("--intended", check_intended, "intended model for semantic checks");
    check->add_flag("--multiview", check_multiview_flag, "run the multi-view rules");
    check->add_option("--report", check_report, "report path (JSON)");

    // ---- metrics ----
    auto* metrics_cmd = app.add_subcommand("metrics", "design metric suites");
    std::string metrics_model, metrics_subject, metrics_out;
    metrics_cmd->add_option("MODEL", metrics_model, "model to measure")->required();
    metrics_cmd->add_option("--subject", metrics_subject, "qualified name of one subject");
    metrics_cmd->add_option("-o,--output", metrics_out, "CSV output path");

    // ---- diff ----
    auto* diff_cmd = app.add_subcommand("diff", "edit script between two models");
    std::string diff_from, diff_to, diff_out;
    diff_cmd->add_option("FROM", diff_from)->required();
    diff_cmd->add_option("TO", diff_to)->required();
    diff_cmd->add_option("-o,--output", diff_out, "edit script path (JSON)");

    // ---- stability ----
    auto* stability_cmd = app.add_subcommand("stability", "stability versus intended model");
    std::string stab_composed, stab_intended, stab_metrics;
    double stab_threshold = 0.2;
    stability_cmd->add_option("COMPOSED", stab_composed)->required();
    stability_cmd->add_option("INTENDED", stab_intended)->required();
    stability_cmd->add_option("--metrics", stab_metrics, "comma-separated metric ids");
    stability_cmd->add_option("--threshold", stab_threshold, "stability threshold");

    // ---- replay ----
    auto* replay = app.add_subcommand("replay", "batch scenario replay");
    std::string replay_batch, replay_out, replay_stats;
    int replay_jobs = 1;
    replay->add_option("BATCH", replay_batch, "batch config (JSON)")->required();
    replay->add_option("-o,--output", replay_out, "results CSV path")->required();
    replay->add_option("--stats", replay_stats, "aggregate statistics path (JSON)");
    replay->add_option("--jobs", replay_jobs, "concurrent scenarios");

    // ---- stats ----
    auto* stats_cmd = app.add_subcommand("stats", "nonparametric statistics kit");
    stats_cmd->require_subcommand(1);
    std::string stats_file, col_a, col_b, alternative = "two-sided";
    std::vector<std::int64_t> misr_counts;

    auto* describe_cmd = stats_cmd->add_subcommand("describe", "descriptive summary");
    describe_cmd->add_option("CSV", stats_file)->required();
    describe_cmd->add_option("--col", col_a, "column name or index")->required();

    auto* mw_cmd = stats_cmd->add_subcommand("mannwhitney", "Mann-Whitney U test");
    mw_cmd->add_option("CSV", stats_file)->required();
    mw_cmd->add_option("--a", col_a, "first column")->required();
    mw_cmd->add_option("--b", col_b, "second column")->required();
    mw_cmd->add_option("--alternative", alternative, "less|greater|two-sided");

    auto* wx_cmd = stats_cmd->add_subcommand("wilcoxon", "Wilcoxon signed-rank test");
    wx_cmd->add_option("CSV", stats_file)->required();
    wx_cmd->add_option("--x", col_a, "first column")->required();
    wx_cmd->add_option("--y", col_b, "second column")->required();
    wx_cmd->add_option("--alternative", alternative, "less|greater|two-sided");

    auto* sp_cmd = stats_cmd->add_subcommand("spearman", "Spearman rank correlation");
    sp_cmd->add_option("CSV", stats_file)->required();
    sp_cmd->add_option("--x", col_a, "first column")->required();
    sp_cmd->add_option("--y", col_b, "second column")->required();
    sp_cmd->add_option("--alternative", alternative, "less|greater|two-sided");

    auto* misr_cmd = stats_cmd->add_subcommand("misr", "misinterpretation rate");
    misr_cmd->add_option("COUNTS", misr_counts, "per-option answer counts")
        ->required()
        ->expected(-2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*compose) {
            dmc::Model a = dmc::load_model_file(compose_a);
            dmc::Model b = dmc::load_model_file(compose_b);
            dmc::CompositionResult result;
            if (algo_name == "3way" || algo_name == "three-way") {
                if (parent_path.empty()) {
                    std::cerr << "error: 3way requires --parent\n";
                    return kExitUsage;
                }
                dmc::Model parent = dmc::load_model_file(parent_path);
                const dmc::ThreeWayPolicy policy =
                    fail_on_conflict ? dmc::ThreeWayPolicy::Fail
                    : winner == "right" ? dmc::ThreeWayPolicy::PreferTheirs
                                        : dmc::ThreeWayPolicy::PreferMine;
                try {
                    result = dmc::three_way_merge(parent, a, b, policy);
                } catch (const dmc::ThreeWayConflictError& e) {
                    std::cerr << e.what() << "\n";
                    if (!conflicts_path.empty()) {
                        write_text(conflicts_path, conflicts_json(e.conflicts()).dump(2) + "\n");
                    }
                    return kExitThreeWayConflicts;
                }
            } else {
                const dmc::Model& first = winner == "right" ? b : a;
                const dmc::Model& second = winner == "right" ? a : b;
                const dmc::CorrespondenceMap corr = dmc::match_models(first, second);
                if (algo_name == "override") {
                    result = dmc::compose_override(first, second, corr);
                } else if (algo_name == "merge") {
                    result = dmc::compose_merge(first, second, corr);
                } else if (algo_name == "union") {
                    result = dmc::compose_union(a, b, dmc::match_models(a, b));
                } else {
                    std::cerr << "error: unknown algorithm \"" << algo_name << "\"\n";
                    return kExitUsage;
                }
            }
            dmc::save_model_file(result.output, compose_out);
            if (!conflicts_path.empty()) {
                write_text(conflicts_path, conflicts_json(result.conflicts).dump(2) + "\n");
            }
            std::cout << dmc::to_string(result.algorithm) << ": "
                      << result.conflicts.size() << " conflict(s), output \"" << compose_out
                      << "\"\n";
            return kExitOk;
        }

        if (*check) {
            dmc::Model model = dmc::load_model_file(check_model);
            std::vector<dmc::Inconsistency> findings = dmc::check_wellformed(model);
            if (!check_intended.empty()) {
                dmc::Model intended = dmc::load_model_file(check_intended);
                auto semantic = dmc::check_against_intended(model, intended);
                findings.insert(findings.end(), semantic.begin(), semantic.end());
            }
            if (check_multiview_flag) {
                auto mv = dmc::check_multiview(model);
                findings.insert(findings.end(), mv.begin(), mv.end());
            }
            const dmc::InconsistencyReport report = dmc::make_report(std::move(findings), model);
            for (const auto& f : report.findings) {
                std::cout << dmc::to_string(f.category) << " "
                          << (f.severity == dmc::FindingSeverity::Error ? "error" : "warning")
                          << " at " << (f.locations.empty() ? "?" : f.locations.front()) << ": "
                          << f.detail << "\n";
            }
            std::cout << report.findings.size() << " finding(s), rate " << report.rate << "\n";
            if (!check_report.empty()) {
                write_text(check_report, findings_json(report).dump(2) + "\n");
            }
            return kExitOk;
        }

        if (*metrics_cmd) {
            dmc::Model model = dmc::load_model_file(metrics_model);
            const std::optional<std::string> subject =
                metrics_subject.empty() ? std::nullopt
                                        : std::make_optional(metrics_subject);
            const std::string csv = metrics_csv(model, subject);
            if (metrics_out.empty()) {
                std::cout << csv;
            } else {
                write_text(metrics_out, csv);
            }
            return kExitOk;
        }

        if (*diff_cmd) {
            dmc::Model from = dmc::load_model_file(diff_from);
            dmc::Model to = dmc::load_model_file(diff_to);
            const dmc::EditScript script = dmc::diff_models(from, to);
            json out;
            json ops = json::array();
            for (const auto& op : script.ops) {
                json jo;
                jo["action"] = dmc::to_string(op.action);
                jo["path"] = op.path;
                if (!op.property.empty()) jo["property"] = op.property;
                if (!op.old_value.empty()) jo["old"] = op.old_value;
                if (!op.new_value.empty()) jo["new"] = op.new_value;
                ops.push_back(std::move(jo));
            }
            out["ops"] = std::move(ops);
            out["tally"] = json{{"additions", script.tally.additions},
                                {"removals", script.tally.removals},
                                {"modifications", script.tally.modifications},
                                {"derivations", script.tally.derivations}};
            if (diff_out.empty()) {
                std::cout << out.dump(2) << "\n";
            } else {
                write_text(diff_out, out.dump(2) + "\n");
            }
            std::cout << "g=" << script.ops.size() << " additions="
                      << script.tally.additions << " removals=" << script.tally.removals
                      << " modifications=" << script.tally.modifications
                      << " derivations=" << script.tally.derivations << "\n";
            return kExitOk;
        }

        if (*stability_cmd) {
            dmc::Model composed = dmc::load_model_file(stab_composed);
            dmc::Model intended = dmc::load_model_file(stab_intended);
            std::vector<std::string> selection;
            if (!stab_metrics.empty()) {
                std::stringstream ss(stab_metrics);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    if (!item.empty()) selection.push_back(item);
                }
            }
            const dmc::StabilityReport report =
                dmc::assess_stability(composed, intended, selection, stab_threshold);
            std::cout << stability_json(report).dump(2) << "\n";
            std::cout << (report.stable ? "stable" : "unstable") << " (overall instability "
                      << report.overall_instability << ", threshold " << report.threshold
                      << ")\n";
            return kExitOk;
        }

        if (*replay) {
            dmc::BatchConfig cfg = dmc::load_batch_file(replay_batch);
            cfg.jobs = replay_jobs;
            const dmc::BatchReport report = dmc::run_batch(cfg);
            write_text(replay_out, report.csv);
            if (!replay_stats.empty()) write_text(replay_stats, report.stats_json);
            std::size_t errors = 0;
            for (const auto& row : report.rows) {
                if (row.error) ++errors;
            }
            std::cout << report.rows.size() << " row(s), " << errors << " error row(s), CSV \""
                      << replay_out << "\"\n";
            return kExitOk;
        }

        if (*stats_cmd) {
            json out;
            if (*describe_cmd) {
                const auto rows = read_csv(stats_file);
                const dmc::SummaryStats s = dmc::describe({csv_column(rows, col_a), col_a});
                out = json{{"n", s.n},       {"min", s.min}, {"q1", s.q1},
                           {"median", s.median}, {"q3", s.q3},   {"max", s.max},
                           {"mean", s.mean},    {"sd", s.sd}};
            } else if (*mw_cmd) {
                const auto rows = read_csv(stats_file);
                const dmc::TestResult r =
                    dmc::mann_whitney({csv_column(rows, col_a), col_a},
                                      {csv_column(rows, col_b), col_b},
                                      parse_alternative(alternative));
                out = json{{"statistic", r.statistic},
                           {"z", r.z},
                           {"pValue", r.p_value},
                           {"method", dmc::to_string(r.method)},
                           {"alternative", dmc::to_string(r.alternative)}};
            } else if (*wx_cmd) {
                const auto rows = read_csv(stats_file);
                const auto xs = csv_column(rows, col_a);
                const auto ys = csv_column(rows, col_b);
                if (xs.size() != ys.size()) {
                    throw std::runtime_error("columns must have equal length");
                }
                std::vector<std::pair<double, double>> pairs;
                for (std::size_t i = 0; i < xs.size(); ++i) pairs.emplace_back(xs[i], ys[i]);
                const dmc::TestResult r =
                    dmc::wilcoxon_signed_rank(pairs, parse_alternative(alternative));
                out = json{{"statistic", r.statistic},
                           {"z", r.z},
                           {"pValue", r.p_value},
                           {"method", dmc::to_string(r.method)},
                           {"alternative", dmc::to_string(r.alternative)}};
            } else if (*sp_cmd) {
                const auto rows = read_csv(stats_file);
                const dmc::CorrelationResult r =
                    dmc::spearman({csv_column(rows, col_a), col_a},
                                  {csv_column(rows, col_b), col_b},
                                  parse_alternative(alternative));
                out = json{{"rho", r.rho},
                           {"t", std::isfinite(r.t) ? json(r.t) : json(r.t > 0 ? "inf" : "-inf")},
                           {"pValue", r.p_value},
                           {"method", dmc::to_string(r.method)},
                           {"alternative", dmc::to_string(r.alternative)}};
            } else if (*misr_cmd) {
                const double misr = dmc::misinterpretation_rate({misr_counts});
                out = json{{"K", misr_counts.size()}, {"MisR", misr}};
            }
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const dmc::ParseError& e) {
        for (const auto& d : e.diagnostics()) {
            std::cerr << dmc::format_diagnostic(d) << "\n";
        }
        return kExitParse;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
