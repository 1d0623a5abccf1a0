#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "decoy/engine.hpp"
#include "decoy/taxonomy.hpp"

namespace decoy {

/// Accumulated interest weights of the reference profiling adversary.
struct ProfilerState {
    std::map<std::string, double> weights;  ///< category -> weight >= 0
    double half_life_days = 7.0;
    int last_day = 0;
    int top_k = 8;

    friend bool operator==(const ProfilerState&, const ProfilerState&) = default;
};

class ClockWentBackwards : public Error {
public:
    ClockWentBackwards(int last_day, int day);
};

/// Decays every weight by 2^(-(day - last_day) / half_life), then adds `scores`.
ProfilerState update_profile(ProfilerState state, const CategoryScores& scores, int day);

/// Top-k categories by weight (zero weights and the uncategorized bucket
/// excluded), weight-descending with label order breaking ties.
InterestProfile daily_interests(const ProfilerState& state);

struct ResultParams {
    double beta = 0.05;             ///< additive boost for candidates in a top-k category
    double off_topic_rate = 0.03;   ///< share of other-category URLs admitted as candidates
};

/// Deterministic hash of (seed, query, url, salt) mapped into [0, 1).
double hashed_unit(std::uint64_t seed, std::string_view query, std::string_view url, std::uint64_t salt);

/// Ranks the corpus for one query. Candidates are every URL of a category the
/// query matches plus a hashed off-topic sample (the whole corpus if that
/// yields fewer than 10). score = hashed base relevance in [0, 1) + beta when
/// the URL's category is among the profile's current top-k. Top 10 by score,
/// ties by URL.
SearchResponse generate_results(const ProfilerState& state, const TopicTaxonomy& taxonomy, const UrlCorpus& corpus,
                                const std::string& query_text, const std::string& language, std::uint64_t seed,
                                const ResultParams& params = {});

}  // namespace decoy
