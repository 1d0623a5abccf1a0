#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

#include "decoy/engine.hpp"
#include "decoy/obfuscator.hpp"
#include "decoy/session_log.hpp"

namespace decoy {

/// Seconds since session start.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() const = 0;
    virtual void sleep_until(double offset_s) = 0;
};

/// Jumps straight to the requested time.
class SimulatedClock : public Clock {
public:
    double now() const override { return now_; }
    void sleep_until(double offset_s) override {
        if (offset_s > now_) {
            now_ = offset_s;
        }
    }

private:
    double now_ = 0.0;
};

class WallClock : public Clock {
public:
    WallClock();
    double now() const override;
    void sleep_until(double offset_s) override;

private:
    std::chrono::steady_clock::time_point start_;
};

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kSessionStartSecond = 9 * 3600;

/// Timestamp at which day `day` (1-based) opens its session.
constexpr std::int64_t day_base_timestamp(int day) {
    return (day - 1) * kSecondsPerDay + kSessionStartSecond;
}

/// Inverse of day_base_timestamp for any timestamp within the day.
constexpr int day_of_timestamp(std::int64_t timestamp) {
    return static_cast<int>(timestamp / kSecondsPerDay) + 1;
}

struct SessionContext {
    std::string user = "local";
    int day = 1;
    std::int64_t base_timestamp = 0;  ///< record timestamp = base + round(clock offset)
};

struct SessionSummary {
    std::size_t submitted = 0;
    std::size_t succeeded = 0;
    std::size_t failed = 0;
};

/// Replays `schedule` in order against `driver`. A failed query becomes one
/// error record and the loop moves on; only a driver that cannot start
/// (DriverUnavailable) aborts the session.
SessionSummary run_session(std::span<const QueryEvent> schedule, EngineDriver& driver, Clock& clock, SessionLog& log,
                           const SessionContext& context = {});

}  // namespace decoy
