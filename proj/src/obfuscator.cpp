#include "decoy/obfuscator.hpp"

#include <cmath>

namespace decoy {

namespace {

// Stream ids for mix_seed; fixed so adding a stream never moves the others.
constexpr std::uint64_t kGenuineJitterStream = 1;
constexpr std::uint64_t kDecoyJitterStream = 2;
constexpr std::uint64_t kComposeStream = 3;

double jittered(double nominal, double interval, double fraction, Rng& rng) {
    const double u = draw_unit(rng);
    const double offset = nominal + (2.0 * u - 1.0) * fraction * interval;
    return std::max(0.0, offset);
}

}  // namespace

std::string_view to_string(Mode mode) {
    return mode == Mode::the_tool ? "the_tool" : "queries";
}

Mode parse_mode(std::string_view text) {
    if (text == "the_tool") {
        return Mode::the_tool;
    }
    if (text == "queries") {
        return Mode::queries;
    }
    throw ConfigError("unknown mode '" + std::string(text) + "' (expected the_tool or queries)");
}

void ObfuscationConfig::validate() const {
    if (length_min < 1 || length_max < length_min) {
        throw ConfigError("length range must satisfy 1 <= min <= max");
    }
    if (decoy_ratio < 0) {
        throw ConfigError("decoy ratio must be >= 0");
    }
    if (!(genuine_interval_s > 0.0) || !(decoy_interval_s > 0.0) || !(session_window_s > 0.0)) {
        throw ConfigError("intervals and session window must be > 0");
    }
    if (!(jitter_fraction >= 0.0 && jitter_fraction < 1.0)) {
        throw ConfigError("jitter fraction must lie in [0, 1)");
    }
    if (mode == Mode::the_tool && languages.empty()) {
        throw ConfigError("mode the_tool needs at least one language");
    }
}

WordlistTooSmall::WordlistTooSmall(const std::string& language, std::size_t size, int needed)
    : Error("wordlist '" + language + "' has " + std::to_string(size) + " words, composition needs " +
            std::to_string(needed)) {}

std::pair<std::string, RoundRobinState> next_language(RoundRobinState state) {
    std::string language = state.languages.at(state.cursor);
    state.cursor = (state.cursor + 1) % state.languages.size();
    return {std::move(language), std::move(state)};
}

std::vector<QueryEvent> build_schedule(const ObfuscationConfig& config, std::span<const PlannedQuery> genuine_plan,
                                       const LanguagePool& pool) {
    config.validate();
    if (config.mode == Mode::queries && genuine_plan.empty()) {
        throw ConfigError("mode queries needs a non-empty genuine plan");
    }

    const std::size_t genuine_count = genuine_plan.size();
    std::size_t decoy_count = 0;
    if (config.mode == Mode::the_tool) {
        decoy_count = genuine_count > 0
                          ? static_cast<std::size_t>(config.decoy_ratio) * genuine_count
                          : static_cast<std::size_t>(std::floor(config.session_window_s / config.decoy_interval_s));
    }

    if (genuine_count > 0 &&
        static_cast<double>(genuine_count - 1) * config.genuine_interval_s >= config.session_window_s) {
        throw ScheduleOverflow(std::to_string(genuine_count) + " genuine queries at " +
                               std::to_string(config.genuine_interval_s) + " s exceed the session window");
    }
    if (decoy_count > 0 &&
        (static_cast<double>(decoy_count) - 0.5) * config.decoy_interval_s >= config.session_window_s) {
        throw ScheduleOverflow(std::to_string(decoy_count) + " decoys at " + std::to_string(config.decoy_interval_s) +
                               " s exceed the session window");
    }
    if (decoy_count > 0 && pool.empty()) {
        throw ConfigError("decoys requested but the language pool is empty");
    }

    Rng genuine_jitter(mix_seed(config.seed, kGenuineJitterStream));
    Rng decoy_jitter(mix_seed(config.seed, kDecoyJitterStream));
    Rng compose(mix_seed(config.seed, kComposeStream));

    std::vector<QueryEvent> events;
    events.reserve(genuine_count + decoy_count);
    for (std::size_t i = 0; i < genuine_count; ++i) {
        const double nominal = static_cast<double>(i) * config.genuine_interval_s;
        events.push_back({jittered(nominal, config.genuine_interval_s, config.jitter_fraction, genuine_jitter),
                          genuine_plan[i].text, genuine_plan[i].language, Origin::genuine});
    }

    RoundRobinState rotation;
    for (const auto& w : pool) {
        rotation.languages.push_back(w.language);
    }
    for (std::size_t j = 0; j < decoy_count; ++j) {
        const std::size_t slot = rotation.cursor;
        auto [language, next] = next_language(std::move(rotation));
        rotation = std::move(next);
        const double nominal = (static_cast<double>(j) + 0.5) * config.decoy_interval_s;
        const double offset = jittered(nominal, config.decoy_interval_s, config.jitter_fraction, decoy_jitter);
        std::string text = compose_decoy(pool[slot], compose, config.length_min, config.length_max);
        events.push_back({offset, std::move(text), std::move(language), Origin::decoy});
    }

    // Stable: equal offsets keep genuine (inserted first) ahead of decoys.
    std::stable_sort(events.begin(), events.end(), [](const QueryEvent& a, const QueryEvent& b) {
        return a.offset_s < b.offset_s;
    });
    return events;
}

}  // namespace decoy
