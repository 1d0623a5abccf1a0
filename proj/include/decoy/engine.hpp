#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decoy/common.hpp"

namespace decoy {

/// Maximum number of results captured per query.
inline constexpr std::size_t kCapturedResults = 10;

struct ResultItem {
    int rank = 0;  ///< 1-based
    std::string link;
    bool external = true;  ///< false for platform elements (video, images, maps, ...)
    std::optional<std::string> category;  ///< set by the simulator only

    friend bool operator==(const ResultItem&, const ResultItem&) = default;
};

struct SearchResponse {
    std::string query_text;
    std::vector<ResultItem> items;

    friend bool operator==(const SearchResponse&, const SearchResponse&) = default;
};

struct InterestEntry {
    std::string category;
    double weight = 0.0;

    friend bool operator==(const InterestEntry&, const InterestEntry&) = default;
};

/// Snapshot of the "areas of interest": weights non-increasing, labels unique.
struct InterestProfile {
    std::vector<InterestEntry> interests;
    int snapshot_day = 0;

    std::vector<std::string> labels() const;
    friend bool operator==(const InterestProfile&, const InterestProfile&) = default;
};

/// Transient per-query failure. Sessions log it and continue.
class DriverError : public Error {
public:
    using Error::Error;
};

/// The driver could not be brought up at all. Aborts a session.
class DriverUnavailable : public Error {
public:
    using Error::Error;
};

/// Search engine as seen by a session. One instance per agent, not shared.
class EngineDriver {
public:
    virtual ~EngineDriver() = default;

    /// Brings the driver up; idempotent. Throws DriverUnavailable.
    virtual void init() {}

    /// Returns at most kCapturedResults ranked items. Throws DriverError.
    virtual SearchResponse submit(const std::string& query, const std::string& language, int day) = 0;

    virtual InterestProfile fetch_interests(int day) = 0;

    /// Forgets all history.
    virtual void reset() = 0;
};

}  // namespace decoy
