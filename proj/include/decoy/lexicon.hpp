#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "decoy/common.hpp"

namespace decoy {

/// Vocabulary for one language. Words are NFC-normalised, lowercase, unique
/// and free of whitespace; the list is never empty.
struct Wordlist {
    std::string language;
    std::vector<std::string> words;
    std::string source_path;

    std::size_t size() const { return words.size(); }
    friend bool operator==(const Wordlist&, const Wordlist&) = default;
};

/// Wordlists in rotation order. Position i is the i-th language of the round robin.
using LanguagePool = std::vector<Wordlist>;

class LexiconError : public Error {
public:
    using Error::Error;
};

class FileUnreadable : public LexiconError {
public:
    explicit FileUnreadable(const std::string& path);
};

class EmptyWordlist : public LexiconError {
public:
    explicit EmptyWordlist(const std::string& source);
};

class DuplicateWord : public LexiconError {
public:
    DuplicateWord(std::string word, std::size_t first_line, std::size_t second_line);

    const std::string& word() const { return word_; }
    std::size_t first_line() const { return first_line_; }
    std::size_t second_line() const { return second_line_; }

private:
    std::string word_;
    std::size_t first_line_;
    std::size_t second_line_;
};

class MalformedWord : public LexiconError {
public:
    MalformedWord(std::string word, std::size_t line);

    const std::string& word() const { return word_; }
    std::size_t line() const { return line_; }

private:
    std::string word_;
    std::size_t line_;
};

class MissingLanguage : public LexiconError {
public:
    explicit MissingLanguage(std::string code);
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class DuplicateLanguage : public LexiconError {
public:
    explicit DuplicateLanguage(std::string code);
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Parses the line format: UTF-8, one word per line, `#` starts a comment
/// line, blank lines are skipped, lines are trimmed and normalised.
Wordlist parse_wordlist(std::istream& in, std::string language, std::string source = "<memory>");

Wordlist load_wordlist(const std::filesystem::path& path, std::string language);

/// Inverse of parse_wordlist (no comments emitted).
std::string serialize_wordlist(const Wordlist& wordlist);

/// Loads `<dir>/<code>.txt` for each code.
std::vector<Wordlist> load_wordlist_dir(const std::filesystem::path& dir, std::span<const std::string> languages);

/// Reorders `wordlists` to the requested code order.
LanguagePool validate_language_pool(std::span<const Wordlist> wordlists, std::span<const std::string> requested);

}  // namespace decoy
