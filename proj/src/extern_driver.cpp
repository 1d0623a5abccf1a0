#include "decoy/extern_driver.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace decoy {

using nlohmann::json;

namespace {
constexpr std::chrono::milliseconds kExitGrace{2000};
}  // namespace

ExternDriver::ExternDriver(std::string command, std::chrono::milliseconds reply_timeout)
    : command_(std::move(command)), reply_timeout_(reply_timeout) {}

ExternDriver::~ExternDriver() {
    if (pid_ > 0) {
        shutdown();
    }
}

void ExternDriver::spawn() {
    int in_pipe[2];   // parent -> child
    int out_pipe[2];  // child -> parent
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
        throw DriverUnavailable(std::string("pipe: ") + std::strerror(errno));
    }
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw DriverUnavailable(std::string("pipe: ") + std::strerror(errno));
    }
    std::signal(SIGPIPE, SIG_IGN);
    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
            ::close(fd);
        }
        throw DriverUnavailable(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

void ExternDriver::write_line(const std::string& line) {
    std::string data = line + '\n';
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
        const ssize_t n = ::write(to_child_, p, left);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            protocol_failure(std::string("write to driver failed: ") + std::strerror(errno));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
}

std::string ExternDriver::read_line() {
    const auto deadline = std::chrono::steady_clock::now() + reply_timeout_;
    for (;;) {
        const auto newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            std::string line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            protocol_failure("driver reply timed out");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready < 0 && errno == EINTR) {
            continue;
        }
        if (ready <= 0) {
            protocol_failure("driver reply timed out");
        }
        char chunk[4096];
        const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            protocol_failure("driver process closed its output");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void ExternDriver::protocol_failure(const std::string& what) {
    ++protocol_errors_;
    throw DriverError(what);
}

json ExternDriver::call(json request) {
    const long id = next_id_++;
    request["id"] = id;
    write_line(request.dump());
    const std::string line = read_line();
    json reply;
    try {
        reply = json::parse(line);
    } catch (const json::exception&) {
        protocol_failure("driver reply is not JSON: " + line);
    }
    if (!reply.is_object() || !reply.contains("id") || !reply["id"].is_number_integer() ||
        reply["id"].get<long>() != id || !reply.contains("ok") || !reply["ok"].is_boolean()) {
        protocol_failure("malformed driver reply: " + line);
    }
    if (!reply["ok"].get<bool>()) {
        const auto it = reply.find("error");
        throw DriverError(it != reply.end() && it->is_string() ? it->get<std::string>() : "driver reported failure");
    }
    return reply;
}

void ExternDriver::init() {
    if (initialized_) {
        return;
    }
    if (pid_ < 0) {
        spawn();
    }
    try {
        call(json{{"cmd", "init"}});
    } catch (const DriverError& e) {
        throw DriverUnavailable(std::string("driver init failed: ") + e.what());
    }
    initialized_ = true;
}

SearchResponse ExternDriver::submit(const std::string& query, const std::string& language, int day) {
    if (!initialized_) {
        throw DriverError("not initialized");
    }
    const json reply = call(json{{"cmd", "search"}, {"query", query}, {"language", language}, {"day", day}});
    SearchResponse response{query, {}};
    try {
        const auto& results = reply.at("results");
        if (!results.is_array() || results.size() > kCapturedResults) {
            protocol_failure("results must be an array of at most 10 items");
        }
        int expected = 1;
        for (const auto& item : results) {
            ResultItem r{item.at("rank").get<int>(), item.at("link").get<std::string>(), item.at("external").get<bool>(),
                         std::nullopt};
            if (r.rank != expected++ || r.link.empty()) {
                protocol_failure("result ranks must be contiguous from 1 with non-empty links");
            }
            response.items.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        protocol_failure(std::string("malformed results: ") + e.what());
    }
    return response;
}

InterestProfile ExternDriver::fetch_interests(int day) {
    if (!initialized_) {
        throw DriverError("not initialized");
    }
    const json reply = call(json{{"cmd", "interests"}, {"day", day}});
    InterestProfile profile;
    profile.snapshot_day = day;
    try {
        const auto labels = reply.at("interests").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            profile.interests.push_back({labels[i], static_cast<double>(labels.size() - i)});
        }
    } catch (const json::exception& e) {
        protocol_failure(std::string("malformed interests: ") + e.what());
    }
    return profile;
}

void ExternDriver::reset() {
    throw DriverError("reset is not supported by external drivers");
}

int ExternDriver::shutdown() {
    if (pid_ < 0) {
        return -1;
    }
    try {
        call(json{{"cmd", "shutdown"}});
    } catch (const DriverError&) {
        // The process may already be gone; reap it below either way.
    }
    ::close(to_child_);
    ::close(from_child_);
    to_child_ = from_child_ = -1;
    // Closed stdin is the cue to exit; a driver that ignores it is killed.
    const auto deadline = std::chrono::steady_clock::now() + std::min(reply_timeout_, kExitGrace);
    int status = 0;
    pid_t reaped = 0;
    while ((reaped = ::waitpid(pid_, &status, WNOHANG)) == 0 && std::chrono::steady_clock::now() < deadline) {
        ::usleep(10'000);
    }
    if (reaped == 0) {
        ::kill(-pid_, SIGKILL);
        while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
        }
        status = -1;
    }
    pid_ = -1;
    initialized_ = false;
    return status != -1 && WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace decoy
