#include "elicit/dot.hpp"

#include <cstdio>

#include "csv.hpp"

namespace elicit {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

// Record-shaped nodes also treat braces, bars and angle brackets specially.
std::string escape_record(const std::string& s) {
    std::string out;
    for (char c : escape(s)) {
        if (c == '{' || c == '}' || c == '|' || c == '<' || c == '>') out += '\\';
        out += c;
    }
    return out;
}

std::string percent(std::size_t part, std::size_t whole) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", whole ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0);
    return buf;
}

}  // namespace

std::string tree_to_dot(const DecisionTree& tree) {
    std::string out = "digraph decision_tree {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
        const TreeNode& n = tree.node(i);
        std::string label;
        if (!n.is_leaf()) label += tree.feature_names()[*n.split_feature] + " ?\n";
        label += std::string(to_string(n.majority)) + "\n";
        for (Category c : all_categories) {
            const std::size_t k = n.counts[static_cast<std::size_t>(c)];
            label += std::string(to_string(c)) + ": " + std::to_string(k) + " (" + percent(k, n.total()) + ")\n";
        }
        label += "cases: " + std::to_string(n.total()) + " (" + percent(n.total(), tree.root().total()) + ")";
        out += "  n" + std::to_string(i) + " [label=\"" + escape(label) + "\"];\n";
    }
    for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
        const TreeNode& n = tree.node(i);
        if (n.is_leaf()) continue;
        out += "  n" + std::to_string(i) + " -> n" + std::to_string(n.true_child) + " [label=\"yes\"];\n";
        out += "  n" + std::to_string(i) + " -> n" + std::to_string(n.false_child) + " [label=\"no\"];\n";
    }
    out += "}\n";
    return out;
}

std::string lattice_to_dot(const ConceptLattice& lattice, const FormalContext& context) {
    std::string out = "digraph concept_lattice {\n  node [shape=record];\n";
    for (std::size_t i = 0; i < lattice.concepts.size(); ++i) {
        std::string attrs;
        for (std::size_t a : lattice.introduced_attributes[i]) {
            if (!attrs.empty()) attrs += ", ";
            attrs += context.attributes()[a];
        }
        std::string label = "{" + escape_record(attrs) + "|" + std::to_string(lattice.concepts[i].extent.count()) + "}";
        out += "  c" + std::to_string(i) + " [label=\"" + label + "\"];\n";
    }
    for (const auto& [lower, upper] : lattice.edges) {
        out += "  c" + std::to_string(upper) + " -> c" + std::to_string(lower) + ";\n";
    }
    out += "}\n";
    return out;
}

void export_dot(const DecisionTree& tree, const std::filesystem::path& path) {
    detail::write_text_file(path, tree_to_dot(tree));
}

void export_dot(const ConceptLattice& lattice, const FormalContext& context, const std::filesystem::path& path) {
    detail::write_text_file(path, lattice_to_dot(lattice, context));
}

}  // namespace elicit
