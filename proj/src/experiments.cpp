#include "decoy/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "decoy/session.hpp"
#include "decoy/text.hpp"

#ifndef DECOY_DEFAULT_FIXTURES
#define DECOY_DEFAULT_FIXTURES "fixtures"
#endif

namespace decoy {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kDelaySwitchDay = 6;
constexpr int kPhaseSplitDay = kDelaySwitchDay - 1;

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[static_cast<std::size_t>(draw_below(rng, i))]);
    }
}

std::vector<ProfilingQuery> load_profiling_queries(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FixtureError("cannot read profiling queries: " + path.string());
    }
    std::vector<ProfilingQuery> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        const auto tab = trimmed.find('\t');
        if (tab == std::string_view::npos || tab == 0 || tab + 1 == trimmed.size()) {
            throw FixtureError(path.string() + ":" + std::to_string(line_no) + ": expected category<TAB>query");
        }
        out.push_back({std::string(trimmed.substr(0, tab)), std::string(text::trim(trimmed.substr(tab + 1)))});
    }
    return out;
}

ObfuscationConfig profiling_only() {
    ObfuscationConfig c;
    c.mode = Mode::queries;
    c.decoy_ratio = 0;
    return c;
}

ObfuscationConfig obfuscating(std::vector<std::string> languages, int ratio) {
    ObfuscationConfig c;
    c.mode = Mode::the_tool;
    c.languages = std::move(languages);
    c.decoy_ratio = ratio;
    // One genuine slot holds `ratio` decoys: 960 s / 3 = 320 s.
    c.decoy_interval_s = c.genuine_interval_s / ratio;
    return c;
}

const std::vector<std::string> kFourLanguages = {"cs", "en", "fr", "es"};
const std::vector<std::string> kEightLanguages = {"cs", "en", "fr", "it", "sk", "es", "tr", "uk"};

std::uint64_t agent_offset(std::string_view name) {
    static const std::map<std::string_view, std::uint64_t> offsets = {
        {"normal", 1}, {"control", 2}, {"tool", 3}, {"lang_low", 4},
        {"lang_high", 5}, {"ratio_low", 6}, {"ratio_high", 7}, {"delay", 8},
    };
    return offsets.at(name);
}

AgentSpec make_agent(std::string name, ObfuscationConfig config, std::uint64_t experiment_seed, int start_day = 1) {
    const std::uint64_t seed = experiment_seed + agent_offset(name);
    return {std::move(name), std::move(config), start_day, seed};
}

std::vector<double> column(const std::vector<ComparisonPoint>& points, bool jaccard, int min_day = 0,
                           int max_day = 1 << 30) {
    std::vector<double> out;
    for (const auto& p : points) {
        if (p.day >= min_day && p.day <= max_day) {
            out.push_back(jaccard ? p.jaccard : p.edit_distance);
        }
    }
    return out;
}

ordered_json report_json(const stats::StatReport& r) {
    ordered_json j;
    j["test"] = stats::to_string(r.test);
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["alpha"] = r.alpha;
    j["reject_null"] = r.reject_null;
    j["method"] = stats::to_string(r.method);
    return j;
}

ordered_json series_json(const std::string& pair, const char* metric, const std::vector<ComparisonPoint>& points) {
    ordered_json j;
    j["kind"] = "series";
    j["pair"] = pair;
    j["metric"] = metric;
    j["days"] = ordered_json::array();
    j["jaccard"] = ordered_json::array();
    j["edit_distance"] = ordered_json::array();
    for (const auto& p : points) {
        j["days"].push_back(p.day);
        j["jaccard"].push_back(p.jaccard);
        j["edit_distance"].push_back(p.edit_distance);
    }
    return j;
}

}  // namespace

std::filesystem::path default_fixture_dir() {
    if (const char* env = std::getenv("DECOY_FIXTURES"); env && *env) {
        return env;
    }
    return DECOY_DEFAULT_FIXTURES;
}

Fixtures load_fixtures(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw FixtureError("fixture directory not found: " + dir.string());
    }
    Fixtures f;
    f.taxonomy = std::make_shared<const TopicTaxonomy>(load_taxonomy(dir / "taxonomy.json"));
    f.corpus = std::make_shared<const UrlCorpus>(load_url_corpus(dir / "urls.tsv"));
    try {
        f.wordlists = load_wordlist_dir(dir / "wordlists", f.taxonomy->languages());
    } catch (const LexiconError& e) {
        throw FixtureError(e.what());
    }
    f.profiling_queries = load_profiling_queries(dir / "profiling_queries.tsv");
    return f;
}

std::vector<DailyPlan> build_profiling_plan(std::span<const ProfilingQuery> queries, std::uint64_t seed) {
    constexpr std::size_t per_category = static_cast<std::size_t>(kExperimentDays * kQueriesPerCategoryPerDay);
    std::vector<std::vector<std::string>> by_category(kProfilingCategories.size());
    for (const auto& q : queries) {
        for (std::size_t c = 0; c < kProfilingCategories.size(); ++c) {
            if (q.category == kProfilingCategories[c]) {
                by_category[c].push_back(q.text);
            }
        }
    }
    for (std::size_t c = 0; c < kProfilingCategories.size(); ++c) {
        if (by_category[c].size() != per_category) {
            throw CorpusIncomplete("profiling corpus has " + std::to_string(by_category[c].size()) + " '" +
                                   std::string(kProfilingCategories[c]) + "' queries, need " +
                                   std::to_string(per_category));
        }
        Rng rng(mix_seed(seed, 100 + c));
        shuffle(by_category[c], rng);
    }
    std::vector<DailyPlan> plan(kExperimentDays);
    for (int day = 0; day < kExperimentDays; ++day) {
        auto& batch = plan[static_cast<std::size_t>(day)];
        for (const auto& category : by_category) {
            for (int i = 0; i < kQueriesPerCategoryPerDay; ++i) {
                batch.push_back({category[static_cast<std::size_t>(day * kQueriesPerCategoryPerDay + i)],
                                 std::string(kProfilingLanguage)});
            }
        }
        Rng rng(mix_seed(seed, 200 + static_cast<std::uint64_t>(day)));
        shuffle(batch, rng);
    }
    return plan;
}

std::vector<AgentSpec> experiment_agents(int experiment, std::uint64_t seed) {
    std::vector<AgentSpec> agents;
    agents.push_back(make_agent("normal", profiling_only(), seed));
    agents.push_back(make_agent("control", profiling_only(), seed));
    switch (experiment) {
    case 1:
        agents.push_back(make_agent("tool", obfuscating(kFourLanguages, 3), seed));
        break;
    case 2:
        agents.push_back(make_agent("lang_low", obfuscating({"cs"}, 3), seed));
        agents.push_back(make_agent("lang_high", obfuscating(kEightLanguages, 3), seed));
        break;
    case 3:
        agents.push_back(make_agent("ratio_low", obfuscating(kFourLanguages, 1), seed));
        agents.push_back(make_agent("ratio_high", obfuscating(kFourLanguages, 7), seed));
        break;
    case 4:
        agents.push_back(make_agent("delay", obfuscating(kFourLanguages, 3), seed, kDelaySwitchDay));
        break;
    default:
        throw ConfigError("unknown experiment " + std::to_string(experiment) + " (expected 1-4)");
    }
    return agents;
}

AgentRun run_agent(const AgentSpec& spec, std::span<const DailyPlan> plan, const Fixtures& fixtures,
                   const SimulatorParams& simulator) {
    AgentRun run{spec, {}};
    SimulatedEngine engine(fixtures.taxonomy, fixtures.corpus, simulator);
    for (std::size_t index = 0; index < plan.size(); ++index) {
        const int day = static_cast<int>(index) + 1;
        ObfuscationConfig config = day >= spec.obfuscation_start_day ? spec.config : profiling_only();
        config.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(day));
        LanguagePool pool;
        if (config.mode == Mode::the_tool) {
            pool = validate_language_pool(fixtures.wordlists, config.languages);
        }
        const auto schedule = build_schedule(config, plan[index], pool);
        SimulatedClock clock;
        const SessionContext context{spec.name, day, day_base_timestamp(day)};
        run_session(schedule, engine, clock, run.log, context);
        run.log.append(InterestSnapshot{spec.name, day, engine.fetch_interests(day).labels()});
    }
    return run;
}

PairSeries compare_agents(const std::string& name_a, const LogContents& a, const std::string& name_b,
                          const LogContents& b, const CompareOptions& options) {
    PairSeries series{name_a, name_b, {}, {}};
    std::map<int, std::pair<std::vector<QueryRecord>, std::vector<QueryRecord>>> by_day;
    for (const auto& r : a.records) {
        by_day[day_of_timestamp(r.timestamp)].first.push_back(r);
    }
    for (const auto& r : b.records) {
        by_day[day_of_timestamp(r.timestamp)].second.push_back(r);
    }
    for (const auto& [day, logs] : by_day) {
        series.results.push_back(compare_day(day, logs.first, logs.second, options));
    }
    std::map<int, const InterestSnapshot*> snaps_b;
    for (const auto& s : b.snapshots) {
        snaps_b[s.day] = &s;
    }
    std::map<int, const InterestSnapshot*> snaps_a;
    for (const auto& s : a.snapshots) {
        snaps_a[s.day] = &s;
    }
    for (const auto& [day, snap] : snaps_a) {
        if (auto it = snaps_b.find(day); it != snaps_b.end()) {
            series.interests.push_back(compare_interests(*snap, *it->second));
        }
    }
    return series;
}

SeriesTests test_against(const PairSeries& tested, const PairSeries& baseline, double alpha) {
    return {
        stats::mann_whitney_u(column(tested.results, true), column(baseline.results, true), alpha),
        stats::mann_whitney_u(column(tested.results, false), column(baseline.results, false), alpha),
        stats::mann_whitney_u(column(tested.interests, true), column(baseline.interests, true), alpha),
        stats::mann_whitney_u(column(tested.interests, false), column(baseline.interests, false), alpha),
    };
}

SeriesTests test_phases(const PairSeries& series, int split_day, double alpha) {
    const auto before = [&](const std::vector<ComparisonPoint>& p, bool j) { return column(p, j, 0, split_day); };
    const auto after = [&](const std::vector<ComparisonPoint>& p, bool j) { return column(p, j, split_day + 1); };
    return {
        stats::mann_whitney_u(before(series.results, true), after(series.results, true), alpha),
        stats::mann_whitney_u(before(series.results, false), after(series.results, false), alpha),
        stats::mann_whitney_u(before(series.interests, true), after(series.interests, true), alpha),
        stats::mann_whitney_u(before(series.interests, false), after(series.interests, false), alpha),
    };
}

const PairSeries& ExperimentReport::pair(std::string_view a, std::string_view b) const {
    for (const auto& p : pairs) {
        if (p.a == a && p.b == b) {
            return p;
        }
    }
    throw Error("no comparison series for " + std::string(a) + ":" + std::string(b));
}

const AgentRun& ExperimentReport::agent(std::string_view name) const {
    for (const auto& a : agents) {
        if (a.spec.name == name) {
            return a;
        }
    }
    throw Error("no agent named " + std::string(name));
}

ExperimentReport run_experiment(int experiment, std::uint64_t seed, const Fixtures& fixtures,
                                const ExperimentParams& params) {
    ExperimentReport report;
    report.experiment = experiment;
    report.seed = seed;
    const auto specs = experiment_agents(experiment, seed);
    const auto plan = build_profiling_plan(fixtures.profiling_queries, seed);

    SimulatorParams simulator = params.simulator;
    simulator.seed = seed;

    auto& config = report.config;
    config["kind"] = "config";
    config["experiment"] = experiment;
    config["seed"] = seed;
    config["days"] = kExperimentDays;
    config["half_life_days"] = simulator.half_life_days;
    config["top_k"] = simulator.top_k;
    config["beta"] = simulator.results.beta;
    config["off_topic_rate"] = simulator.results.off_topic_rate;
    config["external_only"] = params.compare.external_only;
    config["aggregation"] = params.compare.aggregation == Aggregation::mean ? "mean" : "median";
    config["alpha"] = params.alpha;
    config["agents"] = ordered_json::array();
    for (const auto& spec : specs) {
        ordered_json a;
        a["name"] = spec.name;
        a["seed"] = spec.seed;
        a["mode"] = to_string(spec.config.mode);
        a["ratio"] = spec.config.decoy_ratio;
        a["languages"] = spec.config.languages;
        a["decoy_interval_s"] = spec.config.decoy_interval_s;
        a["obfuscation_start_day"] = spec.obfuscation_start_day;
        config["agents"].push_back(std::move(a));
    }

    for (const auto& spec : specs) {
        report.agents.push_back(run_agent(spec, plan, fixtures, simulator));
    }

    const LogContents normal = report.agent("normal").log.contents();
    for (const auto& run : report.agents) {
        if (run.spec.name != "normal") {
            report.pairs.push_back(compare_agents("normal", normal, run.spec.name, run.log.contents(), params.compare));
        }
    }

    const PairSeries& baseline = report.pair("normal", "control");
    const auto row = [&](const char* label, const char* agent) {
        const PairSeries& tested = report.pair("normal", agent);
        report.rows.push_back({label, tested.label(), baseline.label(), test_against(tested, baseline, params.alpha)});
    };
    switch (experiment) {
    case 1:
        row("One", "tool");
        break;
    case 2:
        row("Two (Low)", "lang_low");
        row("Two (High)", "lang_high");
        break;
    case 3:
        row("Three (Low)", "ratio_low");
        row("Three (High)", "ratio_high");
        break;
    case 4: {
        const PairSeries& delay = report.pair("normal", "delay");
        report.rows.push_back({"Four", delay.label(), "days<=" + std::to_string(kPhaseSplitDay),
                               test_phases(delay, kPhaseSplitDay, params.alpha)});
        const LogContents own = report.agent("delay").log.contents();
        const InterestSnapshot* reference = nullptr;
        for (const auto& s : own.snapshots) {
            if (s.day == kPhaseSplitDay) {
                reference = &s;
            }
        }
        if (reference) {
            for (const auto& s : own.snapshots) {
                report.delay_self_drift.push_back(compare_interests(s, *reference));
            }
        }
        break;
    }
    }
    return report;
}

std::string format_p_value(double p) {
    if (p < 1e-4) {
        return "< 0.0001";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", p);
    return buffer;
}

AnalysisSummary summarize(const ordered_json& config, std::span<const PairSeries> pairs, std::span<const TableRow> rows,
                          std::span<const ComparisonPoint> self_drift) {
    if (pairs.empty() || rows.empty()) {
        throw Error("nothing to analyze: the report has no comparison series or tests");
    }
    AnalysisSummary out;
    out.json_lines.push_back(config.dump());
    for (const auto& p : pairs) {
        out.json_lines.push_back(series_json(p.label(), "results", p.results).dump());
        out.json_lines.push_back(series_json(p.label(), "interests", p.interests).dump());
    }
    if (!self_drift.empty()) {
        out.json_lines.push_back(
            series_json("delay:delay@day5", "interests", {self_drift.begin(), self_drift.end()}).dump());
    }
    for (const auto& p : pairs) {
        for (const bool results : {true, false}) {
            for (const bool use_jaccard : {true, false}) {
                ordered_json j;
                j["kind"] = "normality";
                j["pair"] = p.label();
                j["measure"] = std::string(results ? "results_" : "interests_") + (use_jaccard ? "jaccard" : "edit");
                try {
                    const auto values = column(results ? p.results : p.interests, use_jaccard);
                    const auto r = stats::shapiro_wilk(values);
                    j.update(report_json(r));
                } catch (const Error& e) {
                    j["skipped"] = e.what();
                }
                out.json_lines.push_back(j.dump());
            }
        }
    }

    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof line, "%-14s | %-14s %-14s | %-14s %-14s\n", "Experiment", "Results Jacc.", "Results Edit",
                  "Interests Jacc.", "Interests Edit");
    table << line << std::string(80, '-') << '\n';
    for (const auto& row : rows) {
        const std::pair<const char*, const stats::StatReport*> measures[] = {
            {"results_jaccard", &row.tests.results_jaccard},
            {"results_edit", &row.tests.results_edit},
            {"interests_jaccard", &row.tests.interests_jaccard},
            {"interests_edit", &row.tests.interests_edit},
        };
        for (const auto& [name, report] : measures) {
            ordered_json j;
            j["kind"] = "test";
            j["row"] = row.label;
            j["tested"] = row.tested;
            j["baseline"] = row.baseline;
            j["measure"] = name;
            j.update(report_json(*report));
            out.json_lines.push_back(j.dump());
        }
        std::snprintf(line, sizeof line, "%-14s | %-14s %-14s | %-14s %-14s\n", row.label.c_str(),
                      format_p_value(row.tests.results_jaccard.p_value).c_str(),
                      format_p_value(row.tests.results_edit.p_value).c_str(),
                      format_p_value(row.tests.interests_jaccard.p_value).c_str(),
                      format_p_value(row.tests.interests_edit.p_value).c_str());
        table << line;
    }
    out.table = table.str();
    return out;
}

AnalysisSummary analyze(const ExperimentReport& report) {
    return summarize(report.config, report.pairs, report.rows, report.delay_self_drift);
}

}  // namespace decoy
