#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elicit/case_space.hpp"
#include "elicit/category.hpp"

namespace elicit {

using CategoryCounts = std::array<std::size_t, category_count>;

double gini_impurity(const CategoryCounts& counts);
// argmax of the counts; ties go to the earlier category (LOW before MEDIUM before HIGH).
Category majority_category(const CategoryCounts& counts);

// Binary indicator table, rows = instances, columns = named features.
class FeatureMatrix {
public:
    FeatureMatrix(std::vector<std::string> names, std::size_t rows, std::vector<std::uint8_t> cells);

    const std::vector<std::string>& names() const { return names_; }
    std::size_t rows() const { return rows_; }
    std::size_t columns() const { return names_.size(); }
    bool at(std::size_t row, std::size_t column) const { return cells_[row * names_.size() + column] != 0; }

private:
    std::vector<std::string> names_;
    std::size_t rows_;
    std::vector<std::uint8_t> cells_;
};

// One column per answer id, one row per case.
FeatureMatrix answer_indicators(const Questionnaire& q, const CaseSet& cases);

inline constexpr std::size_t no_child = std::numeric_limits<std::size_t>::max();

struct TreeNode {
    std::optional<std::size_t> split_feature;  // true branch = indicator set
    CategoryCounts counts{};
    Category majority = Category::low;
    std::size_t depth = 0;
    std::size_t true_child = no_child;
    std::size_t false_child = no_child;

    bool is_leaf() const { return !split_feature.has_value(); }
    std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
};

// Nodes stored in preorder; index 0 is the root.
class DecisionTree {
public:
    DecisionTree(std::vector<std::string> feature_names, std::vector<TreeNode> nodes);

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& root() const { return nodes_.front(); }
    const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
    std::size_t leaf_count() const;
    std::size_t depth() const;

    Category predict(std::span<const std::uint8_t> indicators) const;

private:
    std::vector<std::string> feature_names_;
    std::vector<TreeNode> nodes_;
};

struct TreeParams {
    std::size_t max_depth = 32;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
};

// Gini impurity reduction of splitting `rows` on each feature; features that
// leave one side empty (or below min_samples_leaf) get no value.
std::vector<std::optional<double>> split_gains(const FeatureMatrix& features, std::span<const Category> labels,
                                               std::span<const std::size_t> rows, std::size_t min_samples_leaf = 1);

// CART over binary indicators with Gini impurity. The best split wins; equal
// gains go to the lowest feature index. Throws validation_error on empty input.
DecisionTree fit_decision_tree(const FeatureMatrix& features, std::span<const Category> labels,
                               const TreeParams& params = {});
DecisionTree fit_decision_tree(const Questionnaire& q, const CaseSet& cases, std::span<const Category> labels,
                               const TreeParams& params = {});

// Minimal cost-complexity pruning with misclassification cost: the weakest
// link is collapsed while its effective alpha is below `alpha`.
DecisionTree prune_tree(const DecisionTree& tree, double alpha);

}  // namespace elicit
