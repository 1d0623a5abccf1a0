#include "decoy/replay_driver.hpp"

namespace decoy {

ReplayDriver::ReplayDriver(const LogContents& recording, std::optional<std::string> user) {
    for (const auto& r : recording.records) {
        if (user && r.user != *user) {
            continue;
        }
        recorded_[r.query].push_back({r.query, r.results});
        ++total_;
    }
    for (const auto& s : recording.snapshots) {
        if (user && s.user != *user) {
            continue;
        }
        snapshots_[s.day] = s.interests;
    }
    reset();
}

ReplayDriver ReplayDriver::from_file(const std::filesystem::path& path, std::optional<std::string> user) {
    try {
        return ReplayDriver(read_log(path), std::move(user));
    } catch (const ParseError& e) {
        throw FixtureParseError(path.string() + ": " + e.what());
    } catch (const IoError& e) {
        throw FixtureParseError(e.what());
    }
}

SearchResponse ReplayDriver::submit(const std::string& query, const std::string&, int) {
    if (remaining_ == 0) {
        throw DriverError("exhausted");
    }
    auto it = pending_.find(query);
    if (it == pending_.end() || it->second.empty()) {
        throw DriverError("no fixture for query");
    }
    SearchResponse response = std::move(it->second.front());
    it->second.pop_front();
    --remaining_;
    return response;
}

InterestProfile ReplayDriver::fetch_interests(int day) {
    InterestProfile profile;
    profile.snapshot_day = day;
    auto it = snapshots_.upper_bound(day);
    if (it == snapshots_.begin()) {
        return profile;
    }
    --it;
    const auto& labels = it->second;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        // Recorded snapshots carry order only; weights encode that order.
        profile.interests.push_back({labels[i], static_cast<double>(labels.size() - i)});
    }
    return profile;
}

void ReplayDriver::reset() {
    pending_ = recorded_;
    remaining_ = total_;
}

}  // namespace decoy
