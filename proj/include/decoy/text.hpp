#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace decoy::text {

/// Unicode NFC followed by full lowercase mapping (root locale).
/// Throws decoy::Error on invalid UTF-8.
std::string normalize(std::string_view utf8);

bool is_valid_utf8(std::string_view bytes);

/// True if any code point is whitespace or a control character.
bool has_space_or_control(std::string_view utf8);

std::string_view trim(std::string_view s);

/// Splits on Unicode whitespace and normalises each word.
std::vector<std::string> split_words(std::string_view utf8);

}  // namespace decoy::text
