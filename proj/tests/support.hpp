#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "decoy/experiments.hpp"
#include "decoy/random.hpp"
#include "decoy/session_log.hpp"

namespace decoy::testkit {

inline std::filesystem::path fixture_dir() { return DECOY_TEST_FIXTURES; }

inline const Fixtures& fixtures() {
    static const Fixtures f = load_fixtures(fixture_dir());
    return f;
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("decoy-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream(path, std::ios::binary) << contents;
}

/// Plays back a fixed list of words, then repeats the last one.
struct ScriptedBits {
    std::vector<std::uint64_t> words;
    std::size_t next = 0;
    std::uint64_t operator()() {
        const auto w = words[std::min(next, words.size() - 1)];
        ++next;
        return w;
    }
};

/// Random log entry with multilingual text, quotes, escapes and emoji.
inline LogEntry random_entry(Rng& rng) {
    static const std::vector<std::string> pieces = {
        "zimní", "olympiáda", "ŘEKA", "čaj", "погода", "київ", "İstanbul", "ağaç", "français", "ñandú",
        "quote\"d", "back\\slash", "tab\there", "line\nbreak", "日本語", "🙂", "€", "a", "", "ß"};
    const auto phrase = [&](std::size_t max_words) {
        std::string out;
        const auto n = 1 + draw_below(rng, max_words);
        for (std::uint64_t i = 0; i < n; ++i) {
            if (i) {
                out += ' ';
            }
            out += pieces[draw_below(rng, pieces.size())];
        }
        return out;
    };
    static const std::vector<std::string> langs = {"cs", "en", "fr", "it", "sk", "es", "tr", "uk"};
    const auto lang = langs[draw_below(rng, langs.size())];
    const auto user = "user-" + phrase(1);
    const auto ts = static_cast<std::int64_t>(draw_below(rng, 10'000'000'000ULL));
    switch (draw_below(rng, 3)) {
    case 0: {
        QueryRecord r{phrase(4), lang, user, ts, draw_below(rng, 2) ? Origin::decoy : Origin::genuine, {}};
        const auto n = draw_below(rng, 11);
        for (std::uint64_t i = 0; i < n; ++i) {
            std::optional<std::string> category;
            if (draw_below(rng, 2)) {
                category = phrase(1);
            }
            r.results.push_back({static_cast<int>(i + 1), "https://example.org/" + phrase(2), draw_below(rng, 4) != 0,
                                 category});
        }
        return r;
    }
    case 1: {
        InterestSnapshot s{user, static_cast<int>(draw_below(rng, 400)), {}};
        const auto n = draw_below(rng, 9);
        for (std::uint64_t i = 0; i < n; ++i) {
            s.interests.push_back(phrase(2));
        }
        return s;
    }
    default:
        return ErrorRecord{user, ts, phrase(6)};
    }
}

}  // namespace decoy::testkit
