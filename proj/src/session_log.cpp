#include "decoy/session_log.hpp"

#include "json.hpp"

namespace decoy {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Origin origin) {
    return origin == Origin::genuine ? "genuine" : "decoy";
}

Origin parse_origin(std::string_view text) {
    if (text == "genuine") {
        return Origin::genuine;
    }
    if (text == "decoy") {
        return Origin::decoy;
    }
    throw Error("unknown origin '" + std::string(text) + "'");
}

std::vector<std::string> InterestProfile::labels() const {
    std::vector<std::string> out;
    out.reserve(interests.size());
    for (const auto& e : interests) {
        out.push_back(e.category);
    }
    return out;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("log line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

ordered_json to_json(const ResultItem& item) {
    ordered_json j;
    j["rank"] = item.rank;
    j["link"] = item.link;
    j["external"] = item.external;
    if (item.category) {
        j["category"] = *item.category;
    }
    return j;
}

ordered_json to_json(const QueryRecord& r) {
    ordered_json j;
    j["kind"] = "query";
    j["query"] = r.query;
    j["language"] = r.language;
    j["user"] = r.user;
    j["timestamp"] = r.timestamp;
    j["origin"] = to_string(r.origin);
    j["results"] = ordered_json::array();
    for (const auto& item : r.results) {
        j["results"].push_back(to_json(item));
    }
    return j;
}

ordered_json to_json(const InterestSnapshot& s) {
    ordered_json j;
    j["kind"] = "interests";
    j["user"] = s.user;
    j["day"] = s.day;
    j["interests"] = s.interests;
    return j;
}

ordered_json to_json(const ErrorRecord& e) {
    ordered_json j;
    j["kind"] = "error";
    j["user"] = e.user;
    j["timestamp"] = e.timestamp;
    j["message"] = e.message;
    return j;
}

template <class T>
T field(const ordered_json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) {
        throw std::invalid_argument(std::string("missing field '") + name + "'");
    }
    if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw std::invalid_argument(std::string("'") + name + "' must be a string");
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw std::invalid_argument(std::string("'") + name + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw std::invalid_argument(std::string("'") + name + "' must be an integer");
    }
    return it->get<T>();
}

QueryRecord query_from_json(const ordered_json& j) {
    QueryRecord r;
    r.query = field<std::string>(j, "query");
    r.language = field<std::string>(j, "language");
    r.user = field<std::string>(j, "user");
    r.timestamp = field<std::int64_t>(j, "timestamp");
    if (r.timestamp < 0) {
        throw std::invalid_argument("negative timestamp");
    }
    r.origin = parse_origin(field<std::string>(j, "origin"));
    const auto& results = j.at("results");
    if (!results.is_array()) {
        throw std::invalid_argument("'results' must be an array");
    }
    int expected_rank = 1;
    for (const auto& item : results) {
        ResultItem ri;
        ri.rank = field<int>(item, "rank");
        ri.link = field<std::string>(item, "link");
        ri.external = field<bool>(item, "external");
        if (item.contains("category")) {
            ri.category = field<std::string>(item, "category");
        }
        if (ri.rank != expected_rank++) {
            throw std::invalid_argument("result ranks must be contiguous from 1");
        }
        if (ri.link.empty()) {
            throw std::invalid_argument("empty result link");
        }
        r.results.push_back(std::move(ri));
    }
    return r;
}

}  // namespace

std::string to_json_line(const LogEntry& entry) {
    return std::visit([](const auto& e) { return to_json(e).dump(); }, entry);
}

std::optional<LogEntry> parse_log_line(std::string_view line, std::size_t line_no, std::string* warning) {
    try {
        const auto j = ordered_json::parse(line);
        if (!j.is_object()) {
            throw std::invalid_argument("not a JSON object");
        }
        const auto kind = field<std::string>(j, "kind");
        if (kind == "query") {
            return query_from_json(j);
        }
        if (kind == "interests") {
            InterestSnapshot s;
            s.user = field<std::string>(j, "user");
            s.day = field<int>(j, "day");
            for (const auto& label : j.at("interests")) {
                if (!label.is_string()) {
                    throw std::invalid_argument("interest labels must be strings");
                }
                s.interests.push_back(label.get<std::string>());
            }
            return s;
        }
        if (kind == "error") {
            ErrorRecord e;
            e.user = field<std::string>(j, "user");
            e.timestamp = field<std::int64_t>(j, "timestamp");
            e.message = field<std::string>(j, "message");
            return e;
        }
        if (warning) {
            *warning = "line " + std::to_string(line_no) + ": unknown kind '" + kind + "'";
        }
        return std::nullopt;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    } catch (const Error& e) {
        throw ParseError(line_no, e.what());
    }
}

LogContents parse_log(std::istream& in) {
    LogContents out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::string warning;
        auto entry = parse_log_line(line, line_no, &warning);
        if (!entry) {
            out.warnings.push_back(std::move(warning));
            continue;
        }
        std::visit(
            [&](auto&& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, QueryRecord>) {
                    out.records.push_back(std::move(e));
                } else if constexpr (std::is_same_v<T, InterestSnapshot>) {
                    out.snapshots.push_back(std::move(e));
                } else {
                    out.errors.push_back(std::move(e));
                }
            },
            std::move(*entry));
    }
    return out;
}

LogContents read_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open log: " + path.string());
    }
    return parse_log(in);
}

JsonlFileLog::JsonlFileLog(const std::filesystem::path& path, bool truncate)
    : path_(path), out_(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app)) {
    if (!out_) {
        throw IoError("cannot open log for writing: " + path.string());
    }
}

void JsonlFileLog::append(const LogEntry& entry) {
    out_ << to_json_line(entry) << '\n';
    out_.flush();
    if (!out_) {
        throw IoError("write failed: " + path_.string());
    }
}

void MemoryLog::write_to(std::ostream& out) const {
    for (const auto& e : entries_) {
        out << to_json_line(e) << '\n';
    }
}

LogContents MemoryLog::contents() const {
    LogContents out;
    for (const auto& e : entries_) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, QueryRecord>) {
                    out.records.push_back(v);
                } else if constexpr (std::is_same_v<T, InterestSnapshot>) {
                    out.snapshots.push_back(v);
                } else {
                    out.errors.push_back(v);
                }
            },
            e);
    }
    return out;
}

}  // namespace decoy
