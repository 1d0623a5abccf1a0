#include "decoy/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "decoy/text.hpp"
#include "json.hpp"

namespace decoy {

UnsupportedLanguage::UnsupportedLanguage(const std::string& code)
    : Error("language '" + code + "' is not covered by the taxonomy") {}

TopicTaxonomy::TopicTaxonomy(std::vector<std::string> categories, std::vector<std::string> languages,
                             std::map<std::pair<std::string, std::string>, std::set<std::string>> keywords)
    : categories_(std::move(categories)), languages_(std::move(languages)), keywords_(std::move(keywords)) {
    if (categories_.empty() || languages_.empty()) {
        throw FixtureError("taxonomy needs at least one category and one language");
    }
    for (const auto& category : categories_) {
        if (category == kUncategorized) {
            throw FixtureError("'uncategorized' is reserved");
        }
        for (const auto& language : languages_) {
            auto it = keywords_.find({category, language});
            if (it == keywords_.end() || it->second.empty()) {
                throw FixtureError("taxonomy category '" + category + "' has no keywords for '" + language + "'");
            }
            auto& words = index_[language];
            for (const auto& word : it->second) {
                auto [pos, inserted] = words.emplace(word, category);
                if (!inserted) {
                    throw FixtureError("keyword '" + word + "' (" + language + ") belongs to both '" + pos->second +
                                       "' and '" + category + "'");
                }
            }
        }
    }
}

bool TopicTaxonomy::supports(std::string_view language) const {
    return std::find(languages_.begin(), languages_.end(), language) != languages_.end();
}

const std::set<std::string>& TopicTaxonomy::keywords(const std::string& category, const std::string& language) const {
    auto it = keywords_.find({category, language});
    if (it == keywords_.end()) {
        throw Error("no keywords for (" + category + ", " + language + ")");
    }
    return it->second;
}

const std::string* TopicTaxonomy::category_of(const std::string& word, const std::string& language) const {
    auto lang = index_.find(language);
    if (lang == index_.end()) {
        return nullptr;
    }
    auto it = lang->second.find(word);
    return it == lang->second.end() ? nullptr : &it->second;
}

TopicTaxonomy parse_taxonomy(std::string_view json_text) {
    try {
        const auto doc = nlohmann::json::parse(json_text);
        auto categories = doc.at("categories").get<std::vector<std::string>>();
        auto languages = doc.at("languages").get<std::vector<std::string>>();
        std::map<std::pair<std::string, std::string>, std::set<std::string>> keywords;
        for (const auto& [category, per_language] : doc.at("keywords").items()) {
            for (const auto& [language, words] : per_language.items()) {
                auto& set = keywords[{category, language}];
                for (const auto& w : words) {
                    set.insert(text::normalize(w.get<std::string>()));
                }
            }
        }
        return TopicTaxonomy(std::move(categories), std::move(languages), std::move(keywords));
    } catch (const nlohmann::json::exception& e) {
        throw FixtureError(std::string("taxonomy: ") + e.what());
    }
}

TopicTaxonomy load_taxonomy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FixtureError("cannot read taxonomy: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_taxonomy(buffer.str());
}

CategoryScores classify_query(const TopicTaxonomy& taxonomy, std::string_view query, const std::string& language) {
    if (!taxonomy.supports(language)) {
        throw UnsupportedLanguage(language);
    }
    const auto words = text::split_words(query);
    if (words.empty()) {
        throw Error("cannot classify an empty query");
    }
    CategoryScores scores;
    for (const auto& word : words) {
        const std::string* category = taxonomy.category_of(word, language);
        scores[category ? *category : std::string(kUncategorized)] += 1.0;
    }
    return scores;
}

UrlCorpus parse_url_corpus(std::istream& in, const std::string& source) {
    UrlCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss{std::string(trimmed)};
        std::string field;
        while (std::getline(ss, field, '\t')) {
            fields.push_back(field);
        }
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || (fields[2] != "0" && fields[2] != "1")) {
            throw FixtureError(source + ":" + std::to_string(line_no) + ": expected category<TAB>url<TAB>0|1");
        }
        corpus.push_back({fields[0], fields[1], fields[2] == "1"});
    }
    if (corpus.empty()) {
        throw FixtureError(source + ": URL corpus is empty");
    }
    return corpus;
}

UrlCorpus load_url_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FixtureError("cannot read URL corpus: " + path.string());
    }
    return parse_url_corpus(in, path.string());
}

}  // namespace decoy
