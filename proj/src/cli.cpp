#include "decoy/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decoy/experiments.hpp"
#include "decoy/extern_driver.hpp"
#include "decoy/replay_driver.hpp"
#include "decoy/session.hpp"
#include "decoy/text.hpp"
#include "json.hpp"

namespace decoy::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto trimmed = text::trim(item);
        if (!trimmed.empty()) {
            out.emplace_back(trimmed);
        }
    }
    return out;
}

/// Each config line is an object of flag name -> value.
std::vector<std::string> read_config_args(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file: " + path.string());
    }
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!object.is_object()) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected a JSON object");
        }
        for (const auto& [key, value] : object.items()) {
            const std::string flag = "--" + key;
            if (value.is_boolean()) {
                args.push_back(flag + (value.get<bool>() ? "=true" : "=false"));
            } else if (value.is_string()) {
                args.push_back(flag);
                args.push_back(value.get<std::string>());
            } else if (value.is_number()) {
                args.push_back(flag);
                args.push_back(value.dump());
            } else if (value.is_array()) {
                std::string joined;
                for (const auto& v : value) {
                    if (!joined.empty()) {
                        joined += ',';
                    }
                    joined += v.is_string() ? v.get<std::string>() : v.dump();
                }
                args.push_back(flag);
                args.push_back(joined);
            } else {
                throw UsageError(path.string() + ":" + std::to_string(line_no) + ": unsupported value for " + key);
            }
        }
    }
    return args;
}

/// argv[1] is the subcommand; config flags go right after it.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
    std::vector<std::string> user(argv + 1, argv + argc);
    std::vector<std::string> config_files;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < user.size(); ++i) {
        if (user[i] == "--config") {
            if (i + 1 >= user.size()) {
                throw UsageError("--config needs a file");
            }
            config_files.push_back(user[++i]);
        } else if (user[i].rfind("--config=", 0) == 0) {
            config_files.push_back(user[i].substr(9));
        } else {
            rest.push_back(user[i]);
        }
    }
    std::vector<std::string> args;
    if (!rest.empty()) {
        args.push_back(rest.front());
    }
    for (const auto& file : config_files) {
        auto extra = read_config_args(file);
        args.insert(args.end(), extra.begin(), extra.end());
    }
    if (rest.size() > 1) {
        args.insert(args.end(), rest.begin() + 1, rest.end());
    }
    return args;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
    if (seed) {
        return *seed;
    }
    std::random_device device;
    const std::uint64_t generated = (static_cast<std::uint64_t>(device()) << 32) | device();
    err << "seed: " << generated << '\n';
    return generated;
}

fs::path resolve_fixtures(const std::string& flag) {
    return flag.empty() ? default_fixture_dir() : fs::path(flag);
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << contents) || !out.flush()) {
        throw IoError("cannot write " + path.string());
    }
}

std::string joined_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    int experiment = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string fixtures;
    ExperimentParams params;
    std::string aggregation = "mean";
};

int simulate(SimulateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.experiment < 1 || a.experiment > 4) {
        throw UsageError("unknown experiment " + std::to_string(a.experiment) + " (expected 1-4)");
    }
    a.params.compare.aggregation = parse_aggregation(a.aggregation);
    const std::uint64_t seed = resolve_seed(a.seed, err);
    const Fixtures fixtures = load_fixtures(resolve_fixtures(a.fixtures));
    const ExperimentReport report = run_experiment(a.experiment, seed, fixtures, a.params);
    const AnalysisSummary summary = analyze(report);

    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    for (const auto& agent : report.agents) {
        std::ostringstream log;
        agent.log.write_to(log);
        write_file(dir / (agent.spec.name + ".jsonl"), log.str());
    }
    write_file(dir / "report.jsonl", joined_lines(summary.json_lines));
    write_file(dir / "report.txt", summary.table);
    out << summary.table;
    return kOk;
}

// ---- obfuscate --------------------------------------------------------------

struct ObfuscateArgs {
    std::string mode = "the_tool";
    std::string languages = "cs,en,fr,es";
    ObfuscationConfig config;
    std::string wordlist_dir;
    std::string queries_file;
    std::string driver = "sim";
    std::string clock = "sim";
    std::string out;
    std::string user = "local";
    int day = 1;
    std::optional<std::uint64_t> seed;
    std::string fixtures;
    SimulatorParams simulator;
    double timeout_s = 120.0;
};

std::vector<PlannedQuery> read_queries_file(const fs::path& path, const std::string& default_language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FixtureError("cannot read queries file: " + path.string());
    }
    std::vector<PlannedQuery> plan;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        if (!text::is_valid_utf8(trimmed)) {
            throw FixtureError(path.string() + ":" + std::to_string(line_no) + ": invalid UTF-8");
        }
        const auto tab = trimmed.find('\t');
        if (tab == std::string_view::npos) {
            plan.push_back({std::string(trimmed), default_language});
        } else {
            plan.push_back({std::string(text::trim(trimmed.substr(tab + 1))), std::string(trimmed.substr(0, tab))});
        }
    }
    return plan;
}

std::unique_ptr<EngineDriver> make_driver(const ObfuscateArgs& a, std::uint64_t seed) {
    if (a.driver == "sim") {
        const fs::path dir = resolve_fixtures(a.fixtures);
        auto taxonomy = std::make_shared<const TopicTaxonomy>(load_taxonomy(dir / "taxonomy.json"));
        auto corpus = std::make_shared<const UrlCorpus>(load_url_corpus(dir / "urls.tsv"));
        SimulatorParams params = a.simulator;
        params.seed = seed;
        return std::make_unique<SimulatedEngine>(taxonomy, corpus, params);
    }
    if (a.driver.rfind("replay:", 0) == 0 && a.driver.size() > 7) {
        return std::make_unique<ReplayDriver>(ReplayDriver::from_file(a.driver.substr(7)));
    }
    if (a.driver.rfind("extern:", 0) == 0 && a.driver.size() > 7) {
        const auto timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000.0));
        return std::make_unique<ExternDriver>(a.driver.substr(7), timeout);
    }
    throw UsageError("--driver must be sim, replay:PATH or extern:CMD, got '" + a.driver + "'");
}

int obfuscate(ObfuscateArgs& a, std::ostream& out, std::ostream& err) {
    ObfuscationConfig& config = a.config;
    config.mode = parse_mode(a.mode);
    config.languages = split_list(a.languages);
    if (config.mode == Mode::queries) {
        if (a.queries_file.empty()) {
            throw UsageError("--mode queries requires --queries-file");
        }
        config.decoy_ratio = 0;
    }
    if (a.clock != "sim" && a.clock != "wall") {
        throw UsageError("--clock must be sim or wall");
    }
    if (a.day < 1) {
        throw UsageError("--day must be >= 1");
    }
    config.seed = resolve_seed(a.seed, err);
    config.validate();

    std::vector<PlannedQuery> plan;
    if (!a.queries_file.empty()) {
        plan = read_queries_file(a.queries_file, config.languages.empty() ? "cs" : config.languages.front());
    }
    LanguagePool pool;
    if (config.mode == Mode::the_tool) {
        const fs::path dir = a.wordlist_dir.empty() ? resolve_fixtures(a.fixtures) / "wordlists" : fs::path(a.wordlist_dir);
        const auto wordlists = load_wordlist_dir(dir, config.languages);
        pool = validate_language_pool(wordlists, config.languages);
    }
    const auto schedule = build_schedule(config, plan, pool);

    auto driver = make_driver(a, config.seed);
    std::unique_ptr<Clock> clock;
    if (a.clock == "wall") {
        clock = std::make_unique<WallClock>();
    } else {
        clock = std::make_unique<SimulatedClock>();
    }
    JsonlFileLog log(a.out, true);
    const SessionContext context{a.user, a.day, day_base_timestamp(a.day)};
    const SessionSummary summary = run_session(schedule, *driver, *clock, log, context);
    if (!schedule.empty()) {
        try {
            log.append(InterestSnapshot{a.user, a.day, driver->fetch_interests(a.day).labels()});
        } catch (const DriverError& e) {
            log.append(ErrorRecord{a.user, day_base_timestamp(a.day) + std::llround(clock->now()),
                                   std::string("interests: ") + e.what()});
        }
    }
    if (auto* ext = dynamic_cast<ExternDriver*>(driver.get())) {
        const int status = ext->shutdown();
        if (ext->protocol_errors() > 0 || status != 0) {
            err << "driver: " << ext->protocol_errors() << " protocol error(s), exit status " << status << '\n';
        }
    }
    out << "submitted " << summary.submitted << ", succeeded " << summary.succeeded << ", failed " << summary.failed
        << '\n';
    return kOk;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
    std::string logs;
    std::string pairs = "normal:tool,normal:control";
    double alpha = stats::kDefaultAlpha;
    std::string out;
    bool external_only = false;
    std::string aggregation = "mean";
    int phase_split = 0;
};

int analyze_logs(const AnalyzeArgs& a, std::ostream& out) {
    CompareOptions options{a.external_only, parse_aggregation(a.aggregation)};
    const auto pair_specs = split_list(a.pairs);
    if (pair_specs.empty()) {
        throw UsageError("--pairs is empty");
    }
    if (a.phase_split <= 0 && pair_specs.size() < 2) {
        throw UsageError("need at least two pairs (tested..., baseline) or --phase-split");
    }
    std::map<std::string, LogContents> logs;
    const auto log_of = [&](const std::string& name) -> const LogContents& {
        auto it = logs.find(name);
        if (it == logs.end()) {
            const fs::path path = fs::path(a.logs) / (name + ".jsonl");
            if (!fs::exists(path)) {
                throw FixtureError("no log for agent '" + name + "': " + path.string());
            }
            it = logs.emplace(name, read_log(path)).first;
        }
        return it->second;
    };
    std::vector<PairSeries> series;
    for (const auto& spec : pair_specs) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
            throw UsageError("pair must look like a:b, got '" + spec + "'");
        }
        const std::string name_a = spec.substr(0, colon);
        const std::string name_b = spec.substr(colon + 1);
        series.push_back(compare_agents(name_a, log_of(name_a), name_b, log_of(name_b), options));
    }

    std::vector<TableRow> rows;
    if (a.phase_split > 0) {
        for (const auto& s : series) {
            rows.push_back({s.label(), s.label(), "days<=" + std::to_string(a.phase_split),
                            test_phases(s, a.phase_split, a.alpha)});
        }
    } else {
        const PairSeries& baseline = series.back();
        for (std::size_t i = 0; i + 1 < series.size(); ++i) {
            rows.push_back({series[i].label(), series[i].label(), baseline.label(),
                            test_against(series[i], baseline, a.alpha)});
        }
    }

    nlohmann::ordered_json config;
    config["kind"] = "config";
    config["command"] = "analyze";
    config["pairs"] = pair_specs;
    config["alpha"] = a.alpha;
    config["external_only"] = a.external_only;
    config["aggregation"] = a.aggregation;
    if (a.phase_split > 0) {
        config["phase_split"] = a.phase_split;
    }
    const AnalysisSummary summary = summarize(config, series, rows);
    if (a.out.empty()) {
        out << joined_lines(summary.json_lines);
    } else {
        write_file(a.out, joined_lines(summary.json_lines));
    }
    out << summary.table;
    return kOk;
}

int classify(const std::exception& e) {
    if (dynamic_cast<const MismatchedQueryPlans*>(&e)) {
        return kMismatchedPlans;
    }
    if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
        dynamic_cast<const ScheduleOverflow*>(&e) || dynamic_cast<const MissingLanguage*>(&e) ||
        dynamic_cast<const DuplicateLanguage*>(&e) || dynamic_cast<const stats::SampleTooSmall*>(&e)) {
        return kUsageError;
    }
    if (dynamic_cast<const FixtureError*>(&e) || dynamic_cast<const LexiconError*>(&e) ||
        dynamic_cast<const ParseError*>(&e) || dynamic_cast<const FixtureParseError*>(&e) ||
        dynamic_cast<const CorpusIncomplete*>(&e) || dynamic_cast<const WordlistTooSmall*>(&e)) {
        return kInputError;
    }
    return kRuntimeError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Query obfuscation toolkit: decoy sessions, simulated profiling, analysis", "decoy"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", "decoy 0.1.0");
    app.footer("Exit codes: 0 ok, 1 runtime error, 2 usage/config error, 3 fixture or input error, "
               "4 mismatched query plans. --config FILE prepends flags from a line-JSON file.");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run one of the four experiments against the simulated engine");
    simulate_cmd->add_option("--experiment", sim.experiment, "Experiment id 1-4")->required();
    simulate_cmd->add_option("--seed", sim.seed, "Seed (generated and printed when omitted)");
    simulate_cmd->add_option("--out", sim.out, "Output directory")->required();
    simulate_cmd->add_option("--fixtures", sim.fixtures, "Fixture directory (default $DECOY_FIXTURES)");
    simulate_cmd->add_option("--half-life", sim.params.simulator.half_life_days, "Profile half-life in days");
    simulate_cmd->add_option("--beta", sim.params.simulator.results.beta, "Ranking boost for profiled categories");
    simulate_cmd->add_option("--top-k", sim.params.simulator.top_k, "Interest categories per snapshot");
    simulate_cmd->add_option("--alpha", sim.params.alpha, "Significance level");
    simulate_cmd->add_flag("--external-only", sim.params.compare.external_only, "Ignore platform result items");
    simulate_cmd->add_option("--aggregation", sim.aggregation, "Daily aggregation: mean or median");

    ObfuscateArgs obf;
    auto* obfuscate_cmd = app.add_subcommand("obfuscate", "Build a decoy schedule and run one session");
    obfuscate_cmd->add_option("--mode", obf.mode, "the_tool or queries");
    obfuscate_cmd->add_option("--languages", obf.languages, "Comma-separated decoy languages");
    obfuscate_cmd->add_option("--ratio", obf.config.decoy_ratio, "Decoys per genuine query");
    obfuscate_cmd->add_option("--genuine-interval", obf.config.genuine_interval_s, "Seconds between genuine queries");
    obfuscate_cmd->add_option("--decoy-interval", obf.config.decoy_interval_s, "Seconds between decoys");
    obfuscate_cmd->add_option("--jitter", obf.config.jitter_fraction, "Jitter as a fraction of the interval");
    obfuscate_cmd->add_option("--window", obf.config.session_window_s, "Session window in seconds");
    obfuscate_cmd->add_option("--min-words", obf.config.length_min, "Fewest words per decoy");
    obfuscate_cmd->add_option("--max-words", obf.config.length_max, "Most words per decoy");
    obfuscate_cmd->add_option("--wordlist-dir", obf.wordlist_dir, "Directory of <code>.txt wordlists");
    obfuscate_cmd->add_option("--queries-file", obf.queries_file, "Genuine queries: 'text' or 'lang<TAB>text' per line");
    obfuscate_cmd->add_option("--driver", obf.driver, "sim, replay:PATH or extern:CMD");
    obfuscate_cmd->add_option("--driver-timeout", obf.timeout_s, "Seconds to wait for an extern driver reply");
    obfuscate_cmd->add_option("--clock", obf.clock, "sim (no waiting) or wall");
    obfuscate_cmd->add_option("--out", obf.out, "Session log (JSONL)")->required();
    obfuscate_cmd->add_option("--user", obf.user, "User name recorded in the log");
    obfuscate_cmd->add_option("--day", obf.day, "Day number (1-based)");
    obfuscate_cmd->add_option("--seed", obf.seed, "Seed (generated and printed when omitted)");
    obfuscate_cmd->add_option("--fixtures", obf.fixtures, "Fixture directory for the sim driver");
    obfuscate_cmd->add_option("--half-life", obf.simulator.half_life_days, "sim driver: profile half-life in days");
    obfuscate_cmd->add_option("--beta", obf.simulator.results.beta, "sim driver: ranking boost");
    obfuscate_cmd->add_option("--top-k", obf.simulator.top_k, "sim driver: interest categories per snapshot");

    AnalyzeArgs ana;
    auto* analyze_cmd = app.add_subcommand("analyze", "Compare agent logs and test the series");
    analyze_cmd->add_option("--logs", ana.logs, "Directory holding <agent>.jsonl logs")->required();
    analyze_cmd->add_option("--pairs", ana.pairs, "Comma-separated a:b pairs; the last one is the baseline");
    analyze_cmd->add_option("--alpha", ana.alpha, "Significance level");
    analyze_cmd->add_option("--out", ana.out, "Report file (JSONL); stdout when omitted");
    analyze_cmd->add_flag("--external-only", ana.external_only, "Ignore platform result items");
    analyze_cmd->add_option("--aggregation", ana.aggregation, "Daily aggregation: mean or median");
    analyze_cmd->add_option("--phase-split", ana.phase_split, "Test each pair's days <= N against days > N");

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return classify(e);
    }

    try {
        if (simulate_cmd->parsed()) {
            return simulate(sim, out, err);
        }
        if (obfuscate_cmd->parsed()) {
            return obfuscate(obf, out, err);
        }
        return analyze_logs(ana, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        const int code = classify(e);
        if (code == kUsageError) {
            err << "run 'decoy --help' for usage\n";
        }
        return code;
    }
}

}  // namespace decoy::cli
