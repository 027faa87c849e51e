#pragma once

#include <filesystem>
#include <string>

#include "elicit/decision_tree.hpp"
#include "elicit/formal_context.hpp"

namespace elicit {

// Nodes show the split answer, majority category and per-category counts
// with percentages; edges are labelled "yes"/"no".
std::string tree_to_dot(const DecisionTree& tree);
// Nodes show the attributes introduced at the concept and its extent size;
// edges run from each concept to its lower covers.
std::string lattice_to_dot(const ConceptLattice& lattice, const FormalContext& context);

void export_dot(const DecisionTree& tree, const std::filesystem::path& path);
void export_dot(const ConceptLattice& lattice, const FormalContext& context, const std::filesystem::path& path);

}  // namespace elicit
