#include "elicit/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "elicit/error.hpp"

namespace elicit {

double gini_impurity(const CategoryCounts& counts) {
    const std::size_t n = counts[0] + counts[1] + counts[2];
    if (n == 0) return 0.0;
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(n);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

Category majority_category(const CategoryCounts& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < category_count; ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return static_cast<Category>(best);
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> names, std::size_t rows, std::vector<std::uint8_t> cells)
    : names_(std::move(names)), rows_(rows), cells_(std::move(cells)) {
    if (cells_.size() != rows_ * names_.size()) throw validation_error("feature matrix shape mismatch");
}

FeatureMatrix answer_indicators(const Questionnaire& q, const CaseSet& cases) {
    std::vector<std::uint8_t> cells;
    cells.reserve(cases.size() * q.answer_count());
    for (const CaseVector& c : cases) {
        if (c.assignment.size() != q.answer_count()) throw validation_error("case does not match the schema");
        cells.insert(cells.end(), c.assignment.begin(), c.assignment.end());
    }
    return FeatureMatrix(q.answer_ids(), cases.size(), std::move(cells));
}

DecisionTree::DecisionTree(std::vector<std::string> feature_names, std::vector<TreeNode> nodes)
    : feature_names_(std::move(feature_names)), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw validation_error("a decision tree needs a root node");
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

Category DecisionTree::predict(std::span<const std::uint8_t> indicators) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        i = indicators[*nodes_[i].split_feature] ? nodes_[i].true_child : nodes_[i].false_child;
    }
    return nodes_[i].majority;
}

namespace {

CategoryCounts count_labels(std::span<const Category> labels, std::span<const std::size_t> rows) {
    CategoryCounts counts{};
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(labels[r])];
    return counts;
}

struct TreeBuilder {
    const FeatureMatrix& features;
    std::span<const Category> labels;
    const TreeParams& params;
    std::vector<TreeNode> nodes;

    std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t index = nodes.size();
        TreeNode node;
        node.counts = count_labels(labels, rows);
        node.majority = majority_category(node.counts);
        node.depth = depth;
        nodes.push_back(node);

        const bool pure = std::count_if(node.counts.begin(), node.counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
        if (pure || depth >= params.max_depth || rows.size() < params.min_samples_split) return index;

        const auto gains = split_gains(features, labels, rows, params.min_samples_leaf);
        std::optional<std::size_t> best;
        for (std::size_t f = 0; f < gains.size(); ++f) {
            if (gains[f] && *gains[f] > 1e-12 && (!best || *gains[f] > *gains[*best])) best = f;
        }
        if (!best) return index;

        std::vector<std::size_t> yes;
        std::vector<std::size_t> no;
        for (std::size_t r : rows) (features.at(r, *best) ? yes : no).push_back(r);
        nodes[index].split_feature = best;
        const std::size_t t = grow(yes, depth + 1);
        nodes[index].true_child = t;
        const std::size_t f = grow(no, depth + 1);
        nodes[index].false_child = f;
        return index;
    }
};

}  // namespace

std::vector<std::optional<double>> split_gains(const FeatureMatrix& features, std::span<const Category> labels,
                                               std::span<const std::size_t> rows, std::size_t min_samples_leaf) {
    const CategoryCounts parent = count_labels(labels, rows);
    const double parent_gini = gini_impurity(parent);
    const auto n = static_cast<double>(rows.size());
    std::vector<std::optional<double>> gains(features.columns());
    for (std::size_t f = 0; f < features.columns(); ++f) {
        CategoryCounts yes{};
        for (std::size_t r : rows) {
            if (features.at(r, f)) ++yes[static_cast<std::size_t>(labels[r])];
        }
        CategoryCounts no{};
        for (std::size_t c = 0; c < category_count; ++c) no[c] = parent[c] - yes[c];
        const std::size_t ny = yes[0] + yes[1] + yes[2];
        const std::size_t nn = rows.size() - ny;
        if (ny < std::max<std::size_t>(min_samples_leaf, 1) || nn < std::max<std::size_t>(min_samples_leaf, 1)) {
            continue;
        }
        gains[f] = parent_gini - (static_cast<double>(ny) / n * gini_impurity(yes) +
                                  static_cast<double>(nn) / n * gini_impurity(no));
    }
    return gains;
}

DecisionTree fit_decision_tree(const FeatureMatrix& features, std::span<const Category> labels,
                               const TreeParams& params) {
    if (features.rows() == 0) throw validation_error("cannot fit a decision tree to an empty case set");
    if (labels.size() != features.rows()) throw validation_error("one category per case is required");
    std::vector<std::size_t> rows(features.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    TreeBuilder builder{features, labels, params, {}};
    builder.grow(rows, 0);
    return DecisionTree(features.names(), std::move(builder.nodes));
}

DecisionTree fit_decision_tree(const Questionnaire& q, const CaseSet& cases, std::span<const Category> labels,
                               const TreeParams& params) {
    return fit_decision_tree(answer_indicators(q, cases), labels, params);
}

DecisionTree prune_tree(const DecisionTree& tree, double alpha) {
    if (!(alpha >= 0.0)) throw validation_error("pruning alpha must be non-negative");
    std::vector<TreeNode> nodes = tree.nodes();
    const auto total = static_cast<double>(nodes.front().total());
    auto errors = [](const TreeNode& n) { return n.total() - n.counts[static_cast<std::size_t>(n.majority)]; };

    for (;;) {
        // Subtree misclassification count and leaf count per node, children first.
        std::vector<std::size_t> subtree_errors(nodes.size());
        std::vector<std::size_t> leaves(nodes.size());
        std::function<void(std::size_t)> visit = [&](std::size_t i) {
            if (nodes[i].is_leaf()) {
                subtree_errors[i] = errors(nodes[i]);
                leaves[i] = 1;
                return;
            }
            visit(nodes[i].true_child);
            visit(nodes[i].false_child);
            subtree_errors[i] = subtree_errors[nodes[i].true_child] + subtree_errors[nodes[i].false_child];
            leaves[i] = leaves[nodes[i].true_child] + leaves[nodes[i].false_child];
        };
        visit(0);

        std::optional<double> weakest;
        std::vector<std::size_t> candidates;
        std::function<void(std::size_t)> scan = [&](std::size_t i) {
            if (nodes[i].is_leaf()) return;
            const double g = (static_cast<double>(errors(nodes[i])) - static_cast<double>(subtree_errors[i])) /
                             (total * static_cast<double>(leaves[i] - 1));
            if (!weakest || g < *weakest) {
                weakest = g;
                candidates.assign(1, i);
            } else if (g == *weakest) {
                candidates.push_back(i);
            }
            scan(nodes[i].true_child);
            scan(nodes[i].false_child);
        };
        scan(0);
        if (!weakest || !(*weakest < alpha)) break;
        for (std::size_t i : candidates) {
            nodes[i].split_feature.reset();
            nodes[i].true_child = no_child;
            nodes[i].false_child = no_child;
        }
    }

    // Compact the surviving nodes, keeping preorder.
    std::vector<TreeNode> kept;
    std::function<std::size_t(std::size_t)> copy = [&](std::size_t i) {
        const std::size_t at = kept.size();
        kept.push_back(nodes[i]);
        if (!nodes[i].is_leaf()) {
            const std::size_t t = copy(nodes[i].true_child);
            kept[at].true_child = t;
            const std::size_t f = copy(nodes[i].false_child);
            kept[at].false_child = f;
        }
        return at;
    };
    copy(0);
    return DecisionTree(tree.feature_names(), std::move(kept));
}

}  // namespace elicit
