#pragma once

#include <cstdint>
#include <memory>

#include "decoy/engine.hpp"
#include "decoy/profiler.hpp"
#include "decoy/taxonomy.hpp"

namespace decoy {

struct SimulatorParams {
    double half_life_days = 7.0;
    int top_k = 8;
    ResultParams results;
    std::uint64_t seed = 0;  ///< index seed; agents compared against each other share it
};

/// Reference passive profiling adversary: counts topical keywords per query,
/// decays them with a half-life and personalises rankings by a small boost.
class SimulatedEngine : public EngineDriver {
public:
    SimulatedEngine(std::shared_ptr<const TopicTaxonomy> taxonomy, std::shared_ptr<const UrlCorpus> corpus,
                    SimulatorParams params = {});

    /// Results reflect the profile before this query; the query is counted afterwards.
    SearchResponse submit(const std::string& query, const std::string& language, int day) override;
    InterestProfile fetch_interests(int day) override;
    void reset() override;

    const ProfilerState& state() const { return state_; }

private:
    ProfilerState fresh_state() const;

    std::shared_ptr<const TopicTaxonomy> taxonomy_;
    std::shared_ptr<const UrlCorpus> corpus_;
    SimulatorParams params_;
    ProfilerState state_;
};

}  // namespace decoy
