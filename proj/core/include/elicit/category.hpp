#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace elicit {

enum class Category : std::uint8_t { low = 0, medium = 1, high = 2 };

inline constexpr std::size_t category_count = 3;
inline constexpr std::array<Category, category_count> all_categories{Category::low, Category::medium, Category::high};

std::string_view to_string(Category c);
Category parse_category(std::string_view text);

// LOW = [0, medium), MEDIUM = [medium, high), HIGH = [high, 1].
struct CategoryThresholds {
    double medium = 0.33;
    double high = 0.68;

    bool operator==(const CategoryThresholds&) const = default;
};

void validate_thresholds(const CategoryThresholds& t);

// Throws validation_error for scores outside [0, 1] (or NaN).
Category categorize(double score, const CategoryThresholds& thresholds = {});

}  // namespace elicit
