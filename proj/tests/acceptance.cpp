// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "decoy/cli.hpp"
#include "decoy/extern_driver.hpp"
#include "decoy/metrics.hpp"
#include "decoy/session.hpp"
#include "oracle_samples.hpp"
#include "support.hpp"

using namespace decoy;

namespace {

using Stopwatch = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " -- " << detail << std::endl;
    failures += ok ? 0 : 1;
}

void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(name, ok, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("threw: ") + e.what());
    }
}

double seconds_since(Stopwatch::time_point start) {
    return std::chrono::duration<double>(Stopwatch::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::vector<double> jaccards(const std::vector<ComparisonPoint>& points, int from = 1, int to = 1 << 30) {
    std::vector<double> out;
    for (const auto& p : points) {
        if (p.day >= from && p.day <= to) {
            out.push_back(p.jaccard);
        }
    }
    return out;
}

using Seq = std::vector<std::string>;

std::size_t naive_edit(const Seq& a, std::size_t i, const Seq& b, std::size_t j) {
    if (i == a.size()) {
        return b.size() - j;
    }
    if (j == b.size()) {
        return a.size() - i;
    }
    return std::min({naive_edit(a, i + 1, b, j) + 1, naive_edit(a, i, b, j + 1) + 1,
                     naive_edit(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1)});
}

std::vector<double> distinct_sample(Rng& rng, std::size_t n, std::set<double>& used) {
    std::vector<double> out;
    while (out.size() < n) {
        const double v = std::round(draw_unit(rng) * 1e6) / 1e3;
        if (used.insert(v).second) {
            out.push_back(v);
        }
    }
    return out;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "decoy");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) {
        throw Error("cli exit " + std::to_string(code) + ": " + err.str());
    }
    return code;
}

class HalfFailingDriver : public EngineDriver {
public:
    SearchResponse submit(const std::string& query, const std::string&, int) override {
        if (++calls_ % 2 == 0) {
            throw DriverError("simulated outage");
        }
        return {query, {{1, "https://example.org/" + std::to_string(calls_), true, std::nullopt}}};
    }
    InterestProfile fetch_interests(int) override { return {}; }
    void reset() override { calls_ = 0; }

private:
    int calls_ = 0;
};

struct SeedOutcome {
    bool a = false, b = false, c = false, d = false;
    bool c_strict = false;
    bool c_edit = false;
};

SeedOutcome qualitative(std::uint64_t seed, double half_life) {
    const auto& f = testkit::fixtures();
    ExperimentParams params;
    params.simulator.half_life_days = half_life;
    SeedOutcome o;

    const auto e1 = run_experiment(1, seed, f, params);
    const auto& tool = e1.pair("normal", "tool");
    const auto& control = e1.pair("normal", "control");
    const auto tested = jaccards(tool.interests);
    const auto baseline = jaccards(control.interests);
    o.a = median(tested) < median(baseline) && stats::mann_whitney_u(tested, baseline).p_value < 0.05;
    o.b = median(jaccards(tool.results)) >= 0.8;

    const auto e3 = run_experiment(3, seed, f, params);
    const double high = median(jaccards(e3.pair("normal", "ratio_high").interests));
    const double low = median(jaccards(e3.pair("normal", "ratio_low").interests));
    o.c = high <= low;
    o.c_strict = high < low;
    const auto edits = [](const std::vector<ComparisonPoint>& points) {
        std::vector<double> out;
        for (const auto& p : points) {
            out.push_back(p.edit_distance);
        }
        return median(out);
    };
    o.c_edit = edits(e3.pair("normal", "ratio_high").interests) > edits(e3.pair("normal", "ratio_low").interests);

    const auto e4 = run_experiment(4, seed, f, params);
    const auto before = jaccards(e4.delay_self_drift, 1, 5);
    const auto after = jaccards(e4.delay_self_drift, 6, 10);
    o.d = after.size() == 5 && median(after) < median(before) &&
          *std::max_element(after.begin(), after.end()) < 1.0;
    return o;
}

}  // namespace

int main() {
    check("metrics exact values", [] {
        const bool jac = jaccard(std::set<std::string>{"a", "b", "c"}, {"b", "c", "d"}) == 0.5;
        const auto start = Stopwatch::now();
        std::vector<Seq> seqs = {{}};
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            if (seqs[i].size() < 4) {
                for (const char* t : {"p", "q", "r"}) {
                    auto s = seqs[i];
                    s.push_back(t);
                    seqs.push_back(s);
                }
            }
        }
        std::size_t mismatches = 0;
        for (const auto& a : seqs) {
            for (const auto& b : seqs) {
                mismatches += edit_distance(a, b) != naive_edit(a, 0, b, 0);
            }
        }
        const double took = seconds_since(start);
        return std::pair{jac && mismatches == 0 && took < 5.0,
                         "jaccard({a,b,c},{b,c,d})=0.5: " + std::string(jac ? "yes" : "no") + "; " +
                             std::to_string(seqs.size() * seqs.size()) + " sequence pairs, " +
                             std::to_string(mismatches) + " disagreements with brute force, " + fmt(took) + " s"};
    });

    check("mann-whitney exact path", [] {
        const auto r = stats::mann_whitney_u(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
        const bool exact = r.statistic == 0.0 && std::abs(r.p_value - 0.1) <= 1e-12;
        Rng rng(20240901);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            std::set<double> used;
            const auto a = distinct_sample(rng, 9, used);
            const auto b = distinct_sample(rng, 9, used);
            worst = std::max(worst, std::abs(stats::mann_whitney_u(a, b, 0.05, stats::MethodChoice::exact).p_value -
                                             stats::mann_whitney_u(a, b, 0.05,
                                                                   stats::MethodChoice::normal_approximation)
                                                 .p_value));
        }
        return std::pair{exact && worst <= 0.02, "U=" + fmt(r.statistic) + " p=" + fmt(r.p_value) +
                                                     "; max |exact - approx| over 100 size-9 pairs = " + fmt(worst)};
    });

    check("shapiro-wilk reference values", [] {
        bool ok = true;
        std::string detail;
        for (const auto& c : testkit::shapiro_cases()) {
            const auto r = stats::shapiro_wilk(c.sample);
            const double dw = std::abs(r.statistic - c.w);
            const double dp = std::abs(r.p_value - c.p);
            ok = ok && dw <= 1e-4 && dp <= 1e-3;
            detail += "n=" + std::to_string(c.sample.size()) + " |dW|=" + fmt(dw) + " |dp|=" + fmt(dp) + "; ";
        }
        return std::pair{ok, detail};
    });

    check("schedule counts", [] {
        const auto& f = testkit::fixtures();
        const auto plan = build_profiling_plan(f.profiling_queries, 1);
        const auto count = [&](const AgentSpec& spec) {
            auto config = spec.config;
            const auto pool = validate_language_pool(f.wordlists, config.languages);
            const auto events = build_schedule(config, plan[0], pool);
            std::size_t g = 0, d = 0;
            for (const auto& e : events) {
                (e.origin == Origin::genuine ? g : d)++;
                if (e.offset_s >= config.session_window_s) {
                    throw Error("event outside the window");
                }
            }
            return std::pair{g, d};
        };
        const auto [g1, d1] = count(experiment_agents(1, 1)[2]);
        const auto [g7, d7] = count(experiment_agents(3, 1)[3]);
        return std::pair{g1 == 30 && d1 == 90 && g7 == 30 && d7 == 210,
                         "tool: " + std::to_string(g1) + " genuine + " + std::to_string(d1) +
                             " decoys in 28800 s; ratio 1:7: " + std::to_string(d7) + " decoys"};
    });

    check("round-robin languages", [] {
        ObfuscationConfig c;
        c.languages = {"cs", "en", "fr", "es"};
        c.decoy_interval_s = 10.0;
        c.session_window_s = 10000.0;
        c.seed = 3;
        const auto& f = testkit::fixtures();
        const auto events = build_schedule(c, {}, validate_language_pool(f.wordlists, c.languages));
        std::size_t bad = 0;
        for (std::size_t i = 0; i < events.size(); ++i) {
            bad += events[i].language != c.languages[i % 4];
        }
        return std::pair{events.size() == 1000 && bad == 0,
                         std::to_string(events.size()) + " decoys, " + std::to_string(bad) + " out of rotation"};
    });

    check("determinism and runtime", [] {
        testkit::TempDir dir;
        const std::string fx = testkit::fixture_dir().string();
        for (const char* sub : {"a", "b"}) {
            run_cli({"simulate", "--experiment", "1", "--seed", "7", "--out", (dir / sub).string(), "--fixtures", fx});
        }
        bool identical = true;
        for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
            const auto name = entry.path().filename();
            identical = identical && testkit::slurp(entry.path()) == testkit::slurp(dir / "b" / name.string());
        }
        const auto start = Stopwatch::now();
        for (int e = 1; e <= 4; ++e) {
            run_cli({"simulate", "--experiment", std::to_string(e), "--seed", "7", "--out",
                     (dir / ("e" + std::to_string(e))).string(), "--fixtures", fx});
        }
        const double took = seconds_since(start);
        return std::pair{identical && took < 60.0, std::string("simulate -e 1 -s 7 twice: ") +
                                                       (identical ? "byte-identical" : "DIFFERENT") +
                                                       "; experiments 1-4 in " + fmt(took) + " s"};
    });

    {
        const std::vector<double> half_lives = {3.0, 7.0, 14.0};
        std::map<double, std::array<int, 6>> held;
        for (double hl : half_lives) {
            held[hl] = {0, 0, 0, 0, 0, 0};
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto o = qualitative(seed, hl);
                held[hl][0] += o.a;
                held[hl][1] += o.b;
                held[hl][2] += o.c;
                held[hl][3] += o.d;
                held[hl][4] += o.c_strict;
                held[hl][5] += o.c_edit;
            }
        }
        const char* names[] = {"qualitative (a) interests divergence", "qualitative (b) results stability",
                               "qualitative (c) ratio monotonicity", "qualitative (d) delayed obfuscation drift"};
        for (int k = 0; k < 4; ++k) {
            bool ok = true;
            std::string detail;
            for (double hl : half_lives) {
                ok = ok && held[hl][k] >= 8;
                detail += "half-life " + fmt(hl) + ": " + std::to_string(held[hl][k]) + "/10 seeds";
                if (k == 2) {
                    detail += " (strictly lower in " + std::to_string(held[hl][4]) + ", larger edit distance in " +
                              std::to_string(held[hl][5]) + ")";
                }
                detail += "; ";
            }
            report(names[k], ok, detail);
        }
    }

    check("robustness to a failing driver", [] {
        std::vector<QueryEvent> schedule;
        for (int i = 0; i < 120; ++i) {
            schedule.push_back({i * 200.0, "q" + std::to_string(i), "cs", Origin::decoy});
        }
        HalfFailingDriver driver;
        SimulatedClock clock;
        MemoryLog log;
        const auto s = run_session(schedule, driver, clock, log);
        const auto c = log.contents();
        return std::pair{s.submitted == 120 && s.failed == 60 && c.errors.size() == 60 && c.records.size() == 60,
                         std::to_string(s.submitted) + " submitted, " + std::to_string(s.failed) + " failed, " +
                             std::to_string(c.errors.size()) + " error records, " +
                             std::to_string(c.records.size()) + " query records"};
    });

    check("log round-trip", [] {
        Rng rng(77);
        MemoryLog log;
        for (int i = 0; i < 1000; ++i) {
            log.append(testkit::random_entry(rng));
        }
        std::ostringstream out;
        log.write_to(out);
        std::istringstream in(out.str());
        std::size_t line_no = 0, equal = 0;
        std::string line;
        while (std::getline(in, line)) {
            const auto back = parse_log_line(line, line_no + 1);
            equal += back && *back == log.entries()[line_no];
            ++line_no;
        }
        return std::pair{line_no == 1000 && equal == 1000,
                         std::to_string(equal) + "/1000 records identical after serialize/parse"};
    });

    check("[secondary] extern driver protocol conformance", [] {
        ExternDriver driver(DECOY_MOCK_DRIVER, std::chrono::seconds(10));
        std::vector<QueryEvent> schedule;
        for (int i = 0; i < 10; ++i) {
            schedule.push_back({i * 1.0, "mock query " + std::to_string(i), "cs", Origin::genuine});
        }
        SimulatedClock clock;
        MemoryLog log;
        const auto s = run_session(schedule, driver, clock, log);
        const int status = driver.shutdown();
        return std::pair{s.succeeded == 10 && driver.protocol_errors() == 0 && status == 0,
                         std::to_string(s.succeeded) + "/10 queries answered, " +
                             std::to_string(driver.protocol_errors()) + " protocol errors, driver exit " +
                             std::to_string(status)};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
