#include "decoy/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "decoy/common.hpp"

namespace decoy::text {

namespace {

template <class Fn>
void for_each_code_point(std::string_view s, Fn&& fn) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
    const auto length = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (!fn(c, start, i)) {
            return;
        }
    }
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
    bool ok = true;
    for_each_code_point(bytes, [&](UChar32 c, int32_t, int32_t) {
        if (c < 0) {
            ok = false;
        }
        return ok;
    });
    return ok;
}

std::string normalize(std::string_view utf8) {
    if (!is_valid_utf8(utf8)) {
        throw Error("invalid UTF-8 text");
    }
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
    }
    icu::UnicodeString source = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    icu::UnicodeString composed = nfc->normalize(source, status);
    if (U_FAILURE(status)) {
        throw Error(std::string("NFC normalisation failed: ") + u_errorName(status));
    }
    composed.toLower(icu::Locale::getRoot());
    // Lowercasing can produce decomposed sequences (e.g. U+0130), so compose again.
    icu::UnicodeString result = nfc->normalize(composed, status);
    if (U_FAILURE(status)) {
        throw Error(std::string("NFC normalisation failed: ") + u_errorName(status));
    }
    std::string out;
    result.toUTF8String(out);
    return out;
}

bool has_space_or_control(std::string_view utf8) {
    bool found = false;
    for_each_code_point(utf8, [&](UChar32 c, int32_t, int32_t) {
        if (c >= 0 && (u_isUWhiteSpace(c) || u_iscntrl(c))) {
            found = true;
        }
        return !found;
    });
    return found;
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(std::string_view utf8) {
    std::vector<std::string> words;
    int32_t word_start = -1;
    for_each_code_point(utf8, [&](UChar32 c, int32_t start, int32_t end) {
        const bool space = c >= 0 && (u_isUWhiteSpace(c) || u_iscntrl(c));
        if (space) {
            if (word_start >= 0) {
                words.push_back(normalize(utf8.substr(word_start, start - word_start)));
                word_start = -1;
            }
        } else if (word_start < 0) {
            word_start = start;
        }
        (void)end;
        return true;
    });
    if (word_start >= 0) {
        words.push_back(normalize(utf8.substr(word_start)));
    }
    return words;
}

}  // namespace decoy::text
