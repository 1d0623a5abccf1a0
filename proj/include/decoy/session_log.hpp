#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decoy/common.hpp"
#include "decoy/engine.hpp"

namespace decoy {

struct QueryRecord {
    std::string query;
    std::string language;
    std::string user;
    std::int64_t timestamp = 0;
    Origin origin = Origin::genuine;
    std::vector<ResultItem> results;

    friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

struct InterestSnapshot {
    std::string user;
    int day = 0;
    std::vector<std::string> interests;

    friend bool operator==(const InterestSnapshot&, const InterestSnapshot&) = default;
};

struct ErrorRecord {
    std::string user;
    std::int64_t timestamp = 0;
    std::string message;

    friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

using LogEntry = std::variant<QueryRecord, InterestSnapshot, ErrorRecord>;

/// One JSON object, no trailing newline. Field order is part of the format:
///   {"kind":"query","query":..,"language":..,"user":..,"timestamp":..,"origin":..,
///    "results":[{"rank":..,"link":..,"external":..[,"category":..]}]}
///   {"kind":"interests","user":..,"day":..,"interests":[..]}
///   {"kind":"error","user":..,"timestamp":..,"message":..}
std::string to_json_line(const LogEntry& entry);

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Parses one line. Returns nullopt for an unknown "kind" and stores a message
/// in `warning`. Throws ParseError for anything malformed.
std::optional<LogEntry> parse_log_line(std::string_view line, std::size_t line_no, std::string* warning = nullptr);

struct LogContents {
    std::vector<QueryRecord> records;
    std::vector<InterestSnapshot> snapshots;
    std::vector<ErrorRecord> errors;
    std::vector<std::string> warnings;
};

LogContents parse_log(std::istream& in);
LogContents read_log(const std::filesystem::path& path);

/// Append-only sink for session entries. One writer per log.
class SessionLog {
public:
    virtual ~SessionLog() = default;
    virtual void append(const LogEntry& entry) = 0;
};

/// Line-delimited JSON file; every append is flushed.
class JsonlFileLog : public SessionLog {
public:
    explicit JsonlFileLog(const std::filesystem::path& path, bool truncate = false);
    void append(const LogEntry& entry) override;

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

class MemoryLog : public SessionLog {
public:
    void append(const LogEntry& entry) override { entries_.push_back(entry); }
    const std::vector<LogEntry>& entries() const { return entries_; }

    /// Same bytes a JsonlFileLog would have written.
    void write_to(std::ostream& out) const;
    LogContents contents() const;

private:
    std::vector<LogEntry> entries_;
};

}  // namespace decoy
