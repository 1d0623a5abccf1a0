#include "decoy/session.hpp"

#include <cmath>
#include <thread>

namespace decoy {

WallClock::WallClock() : start_(std::chrono::steady_clock::now()) {}

double WallClock::now() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void WallClock::sleep_until(double offset_s) {
    std::this_thread::sleep_until(start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                               std::chrono::duration<double>(offset_s)));
}

SessionSummary run_session(std::span<const QueryEvent> schedule, EngineDriver& driver, Clock& clock, SessionLog& log,
                           const SessionContext& context) {
    SessionSummary summary;
    if (schedule.empty()) {
        return summary;
    }
    driver.init();
    for (const QueryEvent& event : schedule) {
        clock.sleep_until(event.offset_s);
        const std::int64_t timestamp = context.base_timestamp + std::llround(clock.now());
        ++summary.submitted;
        try {
            SearchResponse response = driver.submit(event.text, event.language, context.day);
            if (response.items.size() > kCapturedResults) {
                response.items.resize(kCapturedResults);
            }
            log.append(QueryRecord{event.text, event.language, context.user, timestamp, event.origin,
                                   std::move(response.items)});
            ++summary.succeeded;
        } catch (const DriverError& e) {
            log.append(ErrorRecord{context.user, timestamp, "query '" + event.text + "': " + e.what()});
            ++summary.failed;
        }
    }
    return summary;
}

}  // namespace decoy
