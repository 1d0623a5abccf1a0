#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include <sys/types.h>

#include "decoy/engine.hpp"
#include "json.hpp"

namespace decoy {

/// Runs an external driver process (`/bin/sh -c command`) and talks to it
/// over stdio, one JSON object per line in each direction:
///
///   -> {"id":n,"cmd":"init"}
///   -> {"id":n,"cmd":"search","query":q,"language":l,"day":d}
///   -> {"id":n,"cmd":"interests","day":d}
///   -> {"id":n,"cmd":"shutdown"}
///   <- {"id":n,"ok":true,"results":[{"rank":..,"link":..,"external":..}]}
///   <- {"id":n,"ok":true,"interests":[label,...]}
///   <- {"id":n,"ok":false,"error":"..."}
///
/// Ids start at 1 and strictly increase; exactly one response per request.
class ExternDriver : public EngineDriver {
public:
    explicit ExternDriver(std::string command, std::chrono::milliseconds reply_timeout = std::chrono::seconds(120));
    ~ExternDriver() override;

    ExternDriver(const ExternDriver&) = delete;
    ExternDriver& operator=(const ExternDriver&) = delete;

    /// Spawns the process and sends `init`. Throws DriverUnavailable.
    void init() override;
    SearchResponse submit(const std::string& query, const std::string& language, int day) override;
    InterestProfile fetch_interests(int day) override;

    /// Not part of the protocol; always throws DriverError.
    void reset() override;

    /// Malformed replies, id mismatches and dead-process events seen so far.
    std::size_t protocol_errors() const { return protocol_errors_; }

    /// Sends `shutdown`, closes the pipes and reaps the process, killing it if it
    /// has not exited within min(reply timeout, 2 s). Returns its exit status, or
    /// -1 if it was killed or never started.
    int shutdown();

private:
    void spawn();
    nlohmann::json call(nlohmann::json request);
    void write_line(const std::string& line);
    std::string read_line();
    [[noreturn]] void protocol_failure(const std::string& what);

    std::string command_;
    std::chrono::milliseconds reply_timeout_;
    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    long next_id_ = 1;
    bool initialized_ = false;
    std::size_t protocol_errors_ = 0;
};

}  // namespace decoy
