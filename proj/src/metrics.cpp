#include "decoy/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace decoy {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) {
        return 1.0;
    }
    std::size_t common = 0;
    for (const auto& x : a) {
        common += b.count(x);
    }
    const std::size_t united = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(united);
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
    return jaccard(std::set<std::string>(a.begin(), a.end()), std::set<std::string>(b.begin(), b.end()));
}

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    // Single row over the shorter sequence.
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            const std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
            diagonal = above;
        }
    }
    return row[b.size()];
}

Aggregation parse_aggregation(std::string_view text) {
    if (text == "mean") {
        return Aggregation::mean;
    }
    if (text == "median") {
        return Aggregation::median;
    }
    throw ConfigError("unknown aggregation '" + std::string(text) + "' (expected mean or median)");
}

namespace {

std::vector<std::string> links(const QueryRecord& r, bool external_only) {
    std::vector<std::string> out;
    for (const auto& item : r.results) {
        if (!external_only || item.external) {
            out.push_back(item.link);
        }
    }
    return out;
}

double aggregate(std::vector<double> values, Aggregation how) {
    if (how == Aggregation::mean) {
        return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

ComparisonPoint compare_day(int day, std::span<const QueryRecord> a, std::span<const QueryRecord> b,
                            const CompareOptions& options) {
    std::map<std::string, std::vector<const QueryRecord*>> unmatched;
    std::size_t b_genuine = 0;
    for (const auto& r : b) {
        if (r.origin == Origin::genuine) {
            unmatched[r.query].push_back(&r);
            ++b_genuine;
        }
    }
    std::vector<double> jaccards;
    std::vector<double> distances;
    for (const auto& r : a) {
        if (r.origin != Origin::genuine) {
            continue;
        }
        auto it = unmatched.find(r.query);
        if (it == unmatched.end() || it->second.empty()) {
            throw MismatchedQueryPlans("day " + std::to_string(day) + ": query '" + r.query +
                                       "' has no counterpart in the other log");
        }
        const QueryRecord& other = *it->second.front();
        it->second.erase(it->second.begin());
        const auto la = links(r, options.external_only);
        const auto lb = links(other, options.external_only);
        jaccards.push_back(jaccard(la, lb));
        distances.push_back(static_cast<double>(edit_distance(la, lb)));
    }
    if (jaccards.size() != b_genuine) {
        throw MismatchedQueryPlans("day " + std::to_string(day) + ": the other log has " +
                                   std::to_string(b_genuine - jaccards.size()) + " unmatched genuine queries");
    }
    if (jaccards.empty()) {
        return {day, 1.0, 0.0};
    }
    return {day, aggregate(std::move(jaccards), options.aggregation), aggregate(std::move(distances), options.aggregation)};
}

ComparisonPoint compare_interests(const InterestSnapshot& a, const InterestSnapshot& b) {
    return {a.day, jaccard(a.interests, b.interests), static_cast<double>(edit_distance(a.interests, b.interests))};
}

}  // namespace decoy
