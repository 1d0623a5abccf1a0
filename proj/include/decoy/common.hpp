#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decoy {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration (flags, config values).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A fixture file (taxonomy, corpus, wordlist directory) is missing or malformed.
class FixtureError : public Error {
public:
    using Error::Error;
};

enum class Origin { genuine, decoy };

std::string_view to_string(Origin origin);
Origin parse_origin(std::string_view text);

}  // namespace decoy
