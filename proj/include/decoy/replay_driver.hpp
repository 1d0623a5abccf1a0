#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "decoy/engine.hpp"
#include "decoy/session_log.hpp"

namespace decoy {

class FixtureParseError : public Error {
public:
    using Error::Error;
};

/// Answers queries from a recorded session log. Each recorded response is
/// served once, in recording order per query text.
class ReplayDriver : public EngineDriver {
public:
    /// `user` restricts the recording to one agent when the log holds several.
    explicit ReplayDriver(const LogContents& recording, std::optional<std::string> user = std::nullopt);

    static ReplayDriver from_file(const std::filesystem::path& path, std::optional<std::string> user = std::nullopt);

    /// DriverError("no fixture for query") on a miss, DriverError("exhausted")
    /// once every recorded response has been served.
    SearchResponse submit(const std::string& query, const std::string& language, int day) override;

    /// Latest recorded snapshot at or before `day`; empty if none.
    InterestProfile fetch_interests(int day) override;

    /// Rewinds to the start of the recording.
    void reset() override;

private:
    std::map<std::string, std::deque<SearchResponse>> recorded_;
    std::map<std::string, std::deque<SearchResponse>> pending_;
    std::map<int, std::vector<std::string>> snapshots_;
    std::size_t remaining_ = 0;
    std::size_t total_ = 0;
};

}  // namespace decoy
