#include "decoy/simulated_engine.hpp"

namespace decoy {

SimulatedEngine::SimulatedEngine(std::shared_ptr<const TopicTaxonomy> taxonomy, std::shared_ptr<const UrlCorpus> corpus,
                                 SimulatorParams params)
    : taxonomy_(std::move(taxonomy)), corpus_(std::move(corpus)), params_(params) {
    if (!taxonomy_ || !corpus_) {
        throw ConfigError("simulated engine needs a taxonomy and a URL corpus");
    }
    if (!(params_.half_life_days > 0.0) || params_.top_k < 1 || params_.results.beta < 0.0) {
        throw ConfigError("simulator needs half-life > 0, top-k >= 1 and beta >= 0");
    }
    state_ = fresh_state();
}

ProfilerState SimulatedEngine::fresh_state() const {
    ProfilerState s;
    s.half_life_days = params_.half_life_days;
    s.top_k = params_.top_k;
    return s;
}

SearchResponse SimulatedEngine::submit(const std::string& query, const std::string& language, int day) {
    try {
        SearchResponse response =
            generate_results(state_, *taxonomy_, *corpus_, query, language, params_.seed, params_.results);
        state_ = update_profile(std::move(state_), classify_query(*taxonomy_, query, language), day);
        return response;
    } catch (const DriverError&) {
        throw;
    } catch (const Error& e) {
        throw DriverError(e.what());
    }
}

InterestProfile SimulatedEngine::fetch_interests(int day) {
    if (day > state_.last_day) {
        state_ = update_profile(std::move(state_), {}, day);
    }
    InterestProfile profile = daily_interests(state_);
    profile.snapshot_day = day;
    return profile;
}

void SimulatedEngine::reset() {
    state_ = fresh_state();
}

}  // namespace decoy
