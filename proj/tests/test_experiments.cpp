#include <gtest/gtest.h>

#include <map>

#include "decoy/session.hpp"
#include "support.hpp"

using namespace decoy;

namespace {

std::size_t decoys_on(const AgentRun& run, int day) {
    std::size_t n = 0;
    for (const auto& r : run.log.contents().records) {
        if (r.origin == Origin::decoy && day_of_timestamp(r.timestamp) == day) {
            ++n;
        }
    }
    return n;
}

std::size_t queries_on(const AgentRun& run, int day) {
    std::size_t n = 0;
    for (const auto& r : run.log.contents().records) {
        n += day_of_timestamp(r.timestamp) == day;
    }
    return n;
}

}  // namespace

TEST(Fixtures, LoadAndFailCleanly) {
    const auto& f = testkit::fixtures();
    EXPECT_EQ(f.languages().size(), 8u);
    EXPECT_EQ(f.wordlists.size(), 8u);
    EXPECT_EQ(f.profiling_queries.size(), 300u);
    EXPECT_THROW(load_fixtures("/nonexistent/fixtures"), FixtureError);
}

TEST(Fixtures, BrokenWordlistIsAFixtureError) {
    testkit::TempDir dir;
    std::filesystem::copy(testkit::fixture_dir(), dir.path(), std::filesystem::copy_options::recursive);
    testkit::spit(dir / "wordlists/en.txt", "dup\ndup\n");
    EXPECT_THROW(load_fixtures(dir.path()), FixtureError);
}

TEST(ProfilingPlan, ShapeAndBalance) {
    const auto& f = testkit::fixtures();
    for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
        const auto plan = build_profiling_plan(f.profiling_queries, seed);
        ASSERT_EQ(plan.size(), 10u);
        std::map<std::string, std::string> category_of;
        for (const auto& q : f.profiling_queries) {
            category_of[q.text] = q.category;
        }
        std::set<std::string> seen;
        for (const auto& day : plan) {
            ASSERT_EQ(day.size(), 30u);
            std::map<std::string, int> per_category;
            for (const auto& q : day) {
                EXPECT_EQ(q.language, "cs");
                ++per_category[category_of.at(q.text)];
                seen.insert(q.text);
            }
            for (const auto& [category, n] : per_category) {
                EXPECT_EQ(n, 10) << category;
            }
        }
        EXPECT_EQ(seen.size(), 300u);
    }
}

TEST(ProfilingPlan, SeededAndIncompleteCorpus) {
    const auto& f = testkit::fixtures();
    EXPECT_EQ(build_profiling_plan(f.profiling_queries, 5), build_profiling_plan(f.profiling_queries, 5));
    EXPECT_NE(build_profiling_plan(f.profiling_queries, 5), build_profiling_plan(f.profiling_queries, 6));
    auto short_corpus = f.profiling_queries;
    short_corpus.pop_back();
    EXPECT_THROW(build_profiling_plan(short_corpus, 1), CorpusIncomplete);
}

TEST(Agents, Definitions) {
    const auto e1 = experiment_agents(1, 100);
    ASSERT_EQ(e1.size(), 3u);
    EXPECT_EQ(e1[0].name, "normal");
    EXPECT_EQ(e1[0].config.mode, Mode::queries);
    EXPECT_EQ(e1[2].config.decoy_ratio, 3);
    EXPECT_EQ(e1[2].config.languages, (std::vector<std::string>{"cs", "en", "fr", "es"}));
    EXPECT_NE(e1[0].seed, e1[1].seed);
    EXPECT_EQ(experiment_agents(2, 0)[2].config.languages.size(), 1u);
    EXPECT_EQ(experiment_agents(2, 0)[3].config.languages.size(), 8u);
    EXPECT_EQ(experiment_agents(3, 0)[3].config.decoy_ratio, 7);
    EXPECT_EQ(experiment_agents(4, 0)[2].obfuscation_start_day, 6);
    EXPECT_THROW(experiment_agents(5, 0), ConfigError);
}

TEST(Experiments, DailyQueryCounts) {
    const auto& f = testkit::fixtures();
    const auto r1 = run_experiment(1, 3, f);
    const auto r3 = run_experiment(3, 3, f);
    const auto r4 = run_experiment(4, 3, f);
    for (int day = 1; day <= 10; ++day) {
        EXPECT_EQ(queries_on(r1.agent("tool"), day), 120u);
        EXPECT_EQ(decoys_on(r1.agent("tool"), day), 90u);
        EXPECT_EQ(queries_on(r1.agent("normal"), day), 30u);
        EXPECT_EQ(queries_on(r3.agent("ratio_high"), day), 240u);
        EXPECT_EQ(queries_on(r3.agent("ratio_low"), day), 60u);
        EXPECT_EQ(decoys_on(r4.agent("delay"), day), day <= 5 ? 0u : 90u);
    }
    EXPECT_EQ(r1.agent("tool").log.contents().snapshots.size(), 10u);
}

TEST(Experiments, NormalAndControlShareThePlan) {
    const auto& f = testkit::fixtures();
    const auto r = run_experiment(1, 11, f);
    const auto& pair = r.pair("normal", "control");
    EXPECT_EQ(pair.results.size(), 10u);
    EXPECT_EQ(pair.interests.size(), 10u);
    EXPECT_THROW(r.pair("tool", "normal"), Error);
}

TEST(Experiments, ReportShape) {
    const auto& f = testkit::fixtures();
    const auto r = run_experiment(1, 2, f);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].label, "One");
    const auto s = analyze(r);
    std::size_t tests = 0;
    for (const auto& line : s.json_lines) {
        tests += line.find(R"("kind":"test")") != std::string::npos;
    }
    EXPECT_EQ(tests, 4u);
    EXPECT_NE(s.table.find("One"), std::string::npos);
    EXPECT_EQ(run_experiment(2, 2, f).rows.size(), 2u);
    EXPECT_EQ(run_experiment(4, 2, f).delay_self_drift.size(), 10u);
}

TEST(Experiments, EmptyReportIsRejected) {
    EXPECT_THROW(summarize({}, {}, {}), Error);
}

TEST(Experiments, MismatchedLogs) {
    const auto& f = testkit::fixtures();
    const auto a = run_experiment(1, 1, f);
    const auto b = run_experiment(1, 2, f);
    EXPECT_THROW(compare_agents("x", a.agent("normal").log.contents(), "y", b.agent("normal").log.contents()),
                 MismatchedQueryPlans);
}

TEST(Experiments, Deterministic) {
    const auto& f = testkit::fixtures();
    EXPECT_EQ(analyze(run_experiment(3, 9, f)).json_lines, analyze(run_experiment(3, 9, f)).json_lines);
}

TEST(Format, PValues) {
    EXPECT_EQ(format_p_value(0.00001), "< 0.0001");
    EXPECT_EQ(format_p_value(0.0402), "0.0402");
    EXPECT_EQ(format_p_value(1.0), "1.0000");
}
