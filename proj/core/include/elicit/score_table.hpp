#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/category.hpp"

namespace elicit {

enum class Approach : int {
    gmm_cdf = 1,    // cumulative probability under the mixture (consensus default)
    kde_cdf = 2,    // cumulative probability under the KDE
    posterior = 3,  // responsibility of the highest-mean mixture component
};

Approach parse_approach(int number);

struct ApproachScores {
    double gmm_cdf = 0.0;
    double kde_cdf = 0.0;
    double posterior = 0.0;

    double get(Approach a) const;
    bool operator==(const ApproachScores&) const = default;
};

struct ScoreRow {
    std::size_t case_id = 0;
    std::vector<std::uint8_t> assignment;  // by answer column
    double raw_sum = 0.0;
    double normalized_sum = 0.0;
    ApproachScores scores;
    Category category = Category::low;

    bool operator==(const ScoreRow&) const = default;
};

struct ScoreTable {
    std::vector<std::string> answer_ids;
    std::vector<ScoreRow> rows;

    bool operator==(const ScoreTable&) const = default;
};

// Columns: case_id, one 0/1 column per answer id, raw_sum, normalized_sum,
// p_gmm_cdf, p_kde_cdf, p_posterior, category. Reals use %.17g.
std::string scores_to_csv(const ScoreTable& table);
ScoreTable scores_from_csv(std::string_view text);

void export_scores_csv(const ScoreTable& table, const std::filesystem::path& path);
ScoreTable load_scores_csv(const std::filesystem::path& path);

}  // namespace elicit
