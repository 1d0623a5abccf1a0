#include "decoy/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "decoy/random.hpp"

namespace decoy {

namespace {

constexpr std::uint64_t kBaseSalt = 0;
constexpr std::uint64_t kCandidateSalt = 1;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

ClockWentBackwards::ClockWentBackwards(int last_day, int day)
    : Error("profile update for day " + std::to_string(day) + " after day " + std::to_string(last_day)) {}

ProfilerState update_profile(ProfilerState state, const CategoryScores& scores, int day) {
    if (day < state.last_day) {
        throw ClockWentBackwards(state.last_day, day);
    }
    if (!(state.half_life_days > 0.0)) {
        throw ConfigError("half-life must be > 0");
    }
    const int elapsed = day - state.last_day;
    if (elapsed > 0) {
        const double factor = std::exp2(-static_cast<double>(elapsed) / state.half_life_days);
        for (auto& [category, weight] : state.weights) {
            weight *= factor;
        }
    }
    for (const auto& [category, score] : scores) {
        if (score > 0.0) {
            state.weights[category] += score;
        }
    }
    state.last_day = day;
    return state;
}

InterestProfile daily_interests(const ProfilerState& state) {
    InterestProfile profile;
    profile.snapshot_day = state.last_day;
    for (const auto& [category, weight] : state.weights) {
        if (weight > 0.0 && category != kUncategorized) {
            profile.interests.push_back({category, weight});
        }
    }
    std::sort(profile.interests.begin(), profile.interests.end(), [](const InterestEntry& a, const InterestEntry& b) {
        if (a.weight != b.weight) {
            return a.weight > b.weight;
        }
        return a.category < b.category;
    });
    if (profile.interests.size() > static_cast<std::size_t>(std::max(state.top_k, 0))) {
        profile.interests.resize(static_cast<std::size_t>(state.top_k));
    }
    return profile;
}

double hashed_unit(std::uint64_t seed, std::string_view query, std::string_view url, std::uint64_t salt) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, query);
    h = fnv1a(h, std::string_view("\x1f", 1));
    h = fnv1a(h, url);
    h = mix_seed(mix_seed(h, seed), salt);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SearchResponse generate_results(const ProfilerState& state, const TopicTaxonomy& taxonomy, const UrlCorpus& corpus,
                                const std::string& query_text, const std::string& language, std::uint64_t seed,
                                const ResultParams& params) {
    const CategoryScores scores = classify_query(taxonomy, query_text, language);
    std::set<std::string> matched;
    for (const auto& [category, score] : scores) {
        if (score > 0.0 && category != kUncategorized) {
            matched.insert(category);
        }
    }
    std::set<std::string> boosted;
    for (const auto& entry : daily_interests(state).interests) {
        boosted.insert(entry.category);
    }

    std::vector<const CorpusEntry*> candidates;
    for (const auto& entry : corpus) {
        if (matched.contains(entry.category) ||
            hashed_unit(seed, query_text, entry.link, kCandidateSalt) < params.off_topic_rate) {
            candidates.push_back(&entry);
        }
    }
    if (candidates.size() < kCapturedResults) {
        candidates.clear();
        for (const auto& entry : corpus) {
            candidates.push_back(&entry);
        }
    }

    struct Scored {
        double score;
        const CorpusEntry* entry;
    };
    std::vector<Scored> ranked;
    ranked.reserve(candidates.size());
    for (const CorpusEntry* entry : candidates) {
        double score = hashed_unit(seed, query_text, entry->link, kBaseSalt);
        if (boosted.contains(entry->category)) {
            score += params.beta;
        }
        ranked.push_back({score, entry});
    }
    const std::size_t keep = std::min(kCapturedResults, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                      [](const Scored& a, const Scored& b) {
                          if (a.score != b.score) {
                              return a.score > b.score;
                          }
                          return a.entry->link < b.entry->link;
                      });

    SearchResponse response{query_text, {}};
    for (std::size_t i = 0; i < keep; ++i) {
        const CorpusEntry& e = *ranked[i].entry;
        response.items.push_back({static_cast<int>(i + 1), e.link, e.external, e.category});
    }
    return response;
}

}  // namespace decoy
