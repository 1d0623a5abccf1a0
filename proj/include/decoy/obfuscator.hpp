#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "decoy/common.hpp"
#include "decoy/lexicon.hpp"
#include "decoy/random.hpp"

namespace decoy {

enum class Mode {
    the_tool,  ///< random decoys, optionally interleaved with a genuine plan
    queries,   ///< genuine plan only
};

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct ObfuscationConfig {
    std::vector<std::string> languages;
    int length_min = 1;
    int length_max = 3;
    int decoy_ratio = 3;
    double genuine_interval_s = 960.0;
    double decoy_interval_s = 320.0;
    double jitter_fraction = 0.1;
    Mode mode = Mode::the_tool;
    std::uint64_t seed = 0;
    double session_window_s = 28800.0;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct PlannedQuery {
    std::string text;
    std::string language;

    friend bool operator==(const PlannedQuery&, const PlannedQuery&) = default;
};

struct QueryEvent {
    double offset_s = 0.0;
    std::string text;
    std::string language;
    Origin origin = Origin::genuine;

    friend bool operator==(const QueryEvent&, const QueryEvent&) = default;
};

struct RoundRobinState {
    std::vector<std::string> languages;
    std::size_t cursor = 0;
};

class WordlistTooSmall : public Error {
public:
    WordlistTooSmall(const std::string& language, std::size_t size, int needed);
};

class ScheduleOverflow : public Error {
public:
    using Error::Error;
};

/// Returns languages[cursor] and the state advanced modulo the list length.
std::pair<std::string, RoundRobinState> next_language(RoundRobinState state);

/// Smallest wordlist composition accepts, independent of the length range.
inline constexpr std::size_t kMinComposeWordlist = 3;

/// Picks k uniformly in [length_min, length_max], then k distinct words
/// uniformly without replacement, joined by single spaces.
/// Consumes exactly 1 + k draws from `gen`.
template <BitSource G>
std::string compose_decoy(const Wordlist& wordlist, G& gen, int length_min, int length_max) {
    const std::size_t n = wordlist.words.size();
    if (length_min < 1 || length_max < length_min) {
        throw ConfigError("invalid decoy length range");
    }
    if (n < std::max<std::size_t>(kMinComposeWordlist, static_cast<std::size_t>(length_max))) {
        throw WordlistTooSmall(wordlist.language, n, std::max(static_cast<int>(kMinComposeWordlist), length_max));
    }
    const auto span = static_cast<std::uint64_t>(length_max - length_min + 1);
    const auto k = static_cast<std::size_t>(length_min) + static_cast<std::size_t>(draw_below(gen, span));

    std::vector<std::size_t> sorted;  // chosen indices, ascending
    std::string out;
    for (std::size_t t = 0; t < k; ++t) {
        // r-th index among those not yet chosen
        std::size_t r = static_cast<std::size_t>(draw_below(gen, n - t));
        for (std::size_t c : sorted) {
            if (c <= r) {
                ++r;
            }
        }
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), r), r);
        if (!out.empty()) {
            out += ' ';
        }
        out += wordlist.words[r];
    }
    return out;
}

/// Builds the merged genuine/decoy timeline for one session.
///
/// Genuine query i sits at i * genuine_interval_s, decoy j at
/// (j + 1/2) * decoy_interval_s; each offset gets uniform jitter of at most
/// jitter_fraction of its own interval (clamped at 0). The decoy count is
/// decoy_ratio * |plan| when a plan is given, otherwise
/// floor(session_window_s / decoy_interval_s). Mode `queries` never emits
/// decoys. Decoy j uses pool[j mod |pool|]. Ties go genuine-first.
///
/// Jitter and decoy text come from independent streams derived from
/// config.seed, so the schedule is a pure function of its inputs.
std::vector<QueryEvent> build_schedule(const ObfuscationConfig& config, std::span<const PlannedQuery> genuine_plan,
                                       const LanguagePool& pool);

}  // namespace decoy
