#include "decoy/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "decoy/text.hpp"

namespace decoy {

FileUnreadable::FileUnreadable(const std::string& path)
    : LexiconError("cannot read wordlist file: " + path) {}

EmptyWordlist::EmptyWordlist(const std::string& source)
    : LexiconError("wordlist has no usable lines: " + source) {}

DuplicateWord::DuplicateWord(std::string word, std::size_t first_line, std::size_t second_line)
    : LexiconError("duplicate word '" + word + "' on lines " + std::to_string(first_line) + " and " +
                   std::to_string(second_line)),
      word_(std::move(word)),
      first_line_(first_line),
      second_line_(second_line) {}

MalformedWord::MalformedWord(std::string word, std::size_t line)
    : LexiconError("malformed word '" + word + "' on line " + std::to_string(line)), word_(std::move(word)), line_(line) {}

MissingLanguage::MissingLanguage(std::string code)
    : LexiconError("no wordlist for language '" + code + "'"), code_(std::move(code)) {}

DuplicateLanguage::DuplicateLanguage(std::string code)
    : LexiconError("language '" + code + "' requested twice"), code_(std::move(code)) {}

Wordlist parse_wordlist(std::istream& in, std::string language, std::string source) {
    Wordlist result{std::move(language), {}, std::move(source)};
    std::unordered_map<std::string, std::size_t> first_seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        if (!text::is_valid_utf8(trimmed)) {
            throw MalformedWord(std::string(trimmed), line_no);
        }
        std::string word = text::normalize(trimmed);
        if (text::has_space_or_control(word)) {
            throw MalformedWord(std::move(word), line_no);
        }
        auto [it, inserted] = first_seen.emplace(word, line_no);
        if (!inserted) {
            throw DuplicateWord(std::move(word), it->second, line_no);
        }
        result.words.push_back(std::move(word));
    }
    if (result.words.empty()) {
        throw EmptyWordlist(result.source_path);
    }
    return result;
}

Wordlist load_wordlist(const std::filesystem::path& path, std::string language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileUnreadable(path.string());
    }
    return parse_wordlist(in, std::move(language), path.string());
}

std::string serialize_wordlist(const Wordlist& wordlist) {
    std::string out;
    for (const auto& w : wordlist.words) {
        out += w;
        out += '\n';
    }
    return out;
}

std::vector<Wordlist> load_wordlist_dir(const std::filesystem::path& dir, std::span<const std::string> languages) {
    std::vector<Wordlist> lists;
    lists.reserve(languages.size());
    for (const auto& code : languages) {
        lists.push_back(load_wordlist(dir / (code + ".txt"), code));
    }
    return lists;
}

LanguagePool validate_language_pool(std::span<const Wordlist> wordlists, std::span<const std::string> requested) {
    if (requested.empty()) {
        throw ConfigError("language pool request is empty");
    }
    std::unordered_set<std::string> seen;
    LanguagePool pool;
    pool.reserve(requested.size());
    for (const auto& code : requested) {
        if (!seen.insert(code).second) {
            throw DuplicateLanguage(code);
        }
        auto it = std::find_if(wordlists.begin(), wordlists.end(), [&](const Wordlist& w) { return w.language == code; });
        if (it == wordlists.end()) {
            throw MissingLanguage(code);
        }
        pool.push_back(*it);
    }
    return pool;
}

}  // namespace decoy
