#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "decoy/common.hpp"

namespace decoy {

/// Bucket for query words that match no category. Never reported as an interest.
inline constexpr std::string_view kUncategorized = "uncategorized";

using CategoryScores = std::map<std::string, double>;

class UnsupportedLanguage : public Error {
public:
    explicit UnsupportedLanguage(const std::string& code);
};

/// Topic categories and their per-language keyword sets. Keyword sets are
/// disjoint within a language and every category covers every language.
class TopicTaxonomy {
public:
    TopicTaxonomy(std::vector<std::string> categories, std::vector<std::string> languages,
                  std::map<std::pair<std::string, std::string>, std::set<std::string>> keywords);

    const std::vector<std::string>& categories() const { return categories_; }
    const std::vector<std::string>& languages() const { return languages_; }
    bool supports(std::string_view language) const;

    /// Keywords of (category, language); words are normalised.
    const std::set<std::string>& keywords(const std::string& category, const std::string& language) const;

    /// Category owning `word` in `language`, or nullptr.
    const std::string* category_of(const std::string& word, const std::string& language) const;

private:
    std::vector<std::string> categories_;
    std::vector<std::string> languages_;
    std::map<std::pair<std::string, std::string>, std::set<std::string>> keywords_;
    std::unordered_map<std::string, std::unordered_map<std::string, std::string>> index_;  // lang -> word -> category
};

/// Reads the JSON fixture: {"languages":[...],"categories":[...],"keywords":{cat:{lang:[words]}}}.
TopicTaxonomy load_taxonomy(const std::filesystem::path& path);
TopicTaxonomy parse_taxonomy(std::string_view json_text);

/// score(c) = number of query words in keywords(c, language); unmatched words
/// count towards kUncategorized. Categories with score 0 are omitted.
CategoryScores classify_query(const TopicTaxonomy& taxonomy, std::string_view text, const std::string& language);

struct CorpusEntry {
    std::string category;
    std::string link;
    bool external = true;
};

using UrlCorpus = std::vector<CorpusEntry>;

/// TSV lines `category<TAB>url<TAB>0|1`, `#` comments.
UrlCorpus load_url_corpus(const std::filesystem::path& path);
UrlCorpus parse_url_corpus(std::istream& in, const std::string& source = "<memory>");

}  // namespace decoy
