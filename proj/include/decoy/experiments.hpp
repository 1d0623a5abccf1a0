#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decoy/lexicon.hpp"
#include "decoy/metrics.hpp"
#include "decoy/obfuscator.hpp"
#include "decoy/session_log.hpp"
#include "decoy/simulated_engine.hpp"
#include "decoy/stats.hpp"
#include "decoy/taxonomy.hpp"
#include "json.hpp"

namespace decoy {

struct ProfilingQuery {
    std::string category;
    std::string text;
};

/// Everything the harness reads from disk.
struct Fixtures {
    std::vector<Wordlist> wordlists;
    std::shared_ptr<const TopicTaxonomy> taxonomy;
    std::shared_ptr<const UrlCorpus> corpus;
    std::vector<ProfilingQuery> profiling_queries;

    const std::vector<std::string>& languages() const { return taxonomy->languages(); }
};

/// $DECOY_FIXTURES if set, otherwise the fixtures/ directory of the source tree.
std::filesystem::path default_fixture_dir();

/// Reads wordlists/<code>.txt, taxonomy.json, urls.tsv and profiling_queries.tsv.
/// Every failure surfaces as FixtureError.
Fixtures load_fixtures(const std::filesystem::path& dir);

class CorpusIncomplete : public Error {
public:
    using Error::Error;
};

inline constexpr std::array<std::string_view, 3> kProfilingCategories = {"sports", "technology", "travel"};
inline constexpr int kExperimentDays = 10;
inline constexpr int kQueriesPerCategoryPerDay = 10;
inline constexpr std::string_view kProfilingLanguage = "cs";

using DailyPlan = std::vector<PlannedQuery>;

/// Ten daily batches of 30 Czech queries, 10 per profiling category, each
/// batch shuffled by `seed`. Needs exactly 100 queries per category.
std::vector<DailyPlan> build_profiling_plan(std::span<const ProfilingQuery> queries, std::uint64_t seed);

struct AgentSpec {
    std::string name;
    ObfuscationConfig config;       ///< used from obfuscation_start_day on
    int obfuscation_start_day = 1;  ///< earlier days issue the genuine plan only
    std::uint64_t seed = 0;
};

/// Agents of experiment 1..4; per-agent seeds are the experiment seed plus a
/// fixed per-name offset.
std::vector<AgentSpec> experiment_agents(int experiment, std::uint64_t seed);

struct AgentRun {
    AgentSpec spec;
    MemoryLog log;
};

/// Runs one agent's days against its own simulated engine.
AgentRun run_agent(const AgentSpec& spec, std::span<const DailyPlan> plan, const Fixtures& fixtures,
                   const SimulatorParams& simulator);

struct PairSeries {
    std::string a;
    std::string b;
    std::vector<ComparisonPoint> results;
    std::vector<ComparisonPoint> interests;

    std::string label() const { return a + ":" + b; }
};

/// Daily comparison series between two agents' logs. Results are grouped by
/// day = timestamp / 86400 + 1; interests by snapshot day.
PairSeries compare_agents(const std::string& name_a, const LogContents& a, const std::string& name_b,
                          const LogContents& b, const CompareOptions& options = {});

struct SeriesTests {
    stats::StatReport results_jaccard;
    stats::StatReport results_edit;
    stats::StatReport interests_jaccard;
    stats::StatReport interests_edit;
};

/// Mann-Whitney of each metric series of `tested` against `baseline`.
SeriesTests test_against(const PairSeries& tested, const PairSeries& baseline, double alpha);

/// Mann-Whitney of days <= split_day against days > split_day within one pair.
SeriesTests test_phases(const PairSeries& series, int split_day, double alpha);

struct TableRow {
    std::string label;     ///< "One", "Two (Low)", ...
    std::string tested;    ///< pair label
    std::string baseline;  ///< pair label, or "days<=N" for a phase split
    SeriesTests tests;
};

struct ExperimentParams {
    SimulatorParams simulator;  ///< seed is overwritten with the experiment seed
    CompareOptions compare;
    double alpha = stats::kDefaultAlpha;
};

struct ExperimentReport {
    int experiment = 0;
    std::uint64_t seed = 0;
    std::vector<AgentRun> agents;
    std::vector<PairSeries> pairs;
    std::vector<TableRow> rows;
    /// Experiment 4 only: delay agent's interests against its own day-5 snapshot.
    std::vector<ComparisonPoint> delay_self_drift;
    nlohmann::ordered_json config;

    const PairSeries& pair(std::string_view a, std::string_view b) const;
    const AgentRun& agent(std::string_view name) const;
};

ExperimentReport run_experiment(int experiment, std::uint64_t seed, const Fixtures& fixtures,
                                const ExperimentParams& params = {});

struct AnalysisSummary {
    std::vector<std::string> json_lines;  ///< config, series, normality and test lines
    std::string table;                    ///< p-value table, one row per TableRow
};

/// Renders series and tests. Throws Error when there is nothing to report.
AnalysisSummary summarize(const nlohmann::ordered_json& config, std::span<const PairSeries> pairs,
                          std::span<const TableRow> rows, std::span<const ComparisonPoint> self_drift = {});

AnalysisSummary analyze(const ExperimentReport& report);

/// "< 0.0001" below 1e-4, otherwise four decimals.
std::string format_p_value(double p);

}  // namespace decoy
