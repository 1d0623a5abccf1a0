#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "decoy/common.hpp"
#include "decoy/session_log.hpp"

namespace decoy {

/// |a ∩ b| / |a ∪ b|; 1.0 when both are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Jaccard over the distinct elements of two sequences.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

/// Levenshtein distance over whole tokens, unit costs.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

struct ComparisonPoint {
    int day = 0;
    double jaccard = 1.0;
    double edit_distance = 0.0;  ///< integral for interests, a daily mean for results

    friend bool operator==(const ComparisonPoint&, const ComparisonPoint&) = default;
};

enum class Aggregation { mean, median };

Aggregation parse_aggregation(std::string_view text);

struct CompareOptions {
    bool external_only = false;
    Aggregation aggregation = Aggregation::mean;
};

class MismatchedQueryPlans : public Error {
public:
    using Error::Error;
};

/// Compares one day of two agents' genuine queries. Decoys are ignored.
/// Queries are paired by text (in issue order for repeated texts); per pair,
/// Jaccard over link sets and edit distance over ranked link sequences are
/// aggregated over the day. Throws MismatchedQueryPlans when the genuine query
/// texts differ as multisets.
ComparisonPoint compare_day(int day, std::span<const QueryRecord> a, std::span<const QueryRecord> b,
                            const CompareOptions& options = {});

ComparisonPoint compare_interests(const InterestSnapshot& a, const InterestSnapshot& b);

}  // namespace decoy
