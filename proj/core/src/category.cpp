#include "elicit/category.hpp"

#include <string>

#include "elicit/error.hpp"

namespace elicit {

std::string_view to_string(Category c) {
    switch (c) {
        case Category::low: return "LOW";
        case Category::medium: return "MEDIUM";
        case Category::high: return "HIGH";
    }
    return "LOW";
}

Category parse_category(std::string_view text) {
    if (text == "LOW") return Category::low;
    if (text == "MEDIUM") return Category::medium;
    if (text == "HIGH") return Category::high;
    throw validation_error("unknown category '" + std::string(text) + "'");
}

void validate_thresholds(const CategoryThresholds& t) {
    if (!(0.0 <= t.medium && t.medium < t.high && t.high <= 1.0)) {
        throw validation_error("category thresholds must be strictly increasing within [0, 1]");
    }
}

Category categorize(double score, const CategoryThresholds& thresholds) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw validation_error("score " + std::to_string(score) + " is outside [0, 1]");
    }
    if (score < thresholds.medium) return Category::low;
    if (score < thresholds.high) return Category::medium;
    return Category::high;
}

}  // namespace elicit
