#include <algorithm>
#include <map>

#include "elicit/error.hpp"
#include "elicit/formal_context.hpp"

namespace elicit {

ConceptLattice build_lattice(const FormalContext& context, std::vector<FormalConcept> concepts) {
    if (concepts.empty()) throw validation_error("a lattice needs at least one concept");
    std::map<Bitset, std::size_t> by_intent;
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        const FormalConcept& c = concepts[i];
        if (c.extent.size() != context.object_count() || c.intent.size() != context.attribute_count()) {
            throw validation_error("concept " + std::to_string(i) + " does not match the context shape");
        }
        if (context.up(c.extent) != c.intent || context.down(c.intent) != c.extent) {
            throw validation_error("concept " + std::to_string(i) + " is not closed");
        }
        if (!by_intent.emplace(c.intent, i).second) {
            throw validation_error("concept " + std::to_string(i) + " appears twice");
        }
    }

    ConceptLattice lattice;
    lattice.introduced_attributes.resize(concepts.size());

    // Lower neighbours of (A, B): among the concepts generated by adding one
    // attribute m not in B, those reached from exactly |D \ B| attributes.
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        const FormalConcept& c = concepts[i];
        std::map<Bitset, std::size_t> hits;
        for (std::size_t m = 0; m < context.attribute_count(); ++m) {
            if (c.intent.test(m)) continue;
            const Bitset extent = c.extent & context.attribute_extent(m);
            ++hits[context.up(extent)];
        }
        for (const auto& [intent, count] : hits) {
            if (count != (intent - c.intent).count()) continue;
            auto it = by_intent.find(intent);
            if (it == by_intent.end()) throw validation_error("concept set is incomplete");
            lattice.edges.emplace_back(it->second, i);
        }
    }
    std::sort(lattice.edges.begin(), lattice.edges.end());

    const Bitset top_intent = context.up(Bitset(context.object_count()).set());
    const Bitset bottom_intent = Bitset(context.attribute_count()).set();
    auto top = by_intent.find(top_intent);
    auto bottom = by_intent.find(context.close_attributes(bottom_intent));
    if (top == by_intent.end() || bottom == by_intent.end()) throw validation_error("concept set is incomplete");
    lattice.top = top->second;
    lattice.bottom = bottom->second;

    for (std::size_t m = 0; m < context.attribute_count(); ++m) {
        Bitset single(context.attribute_count());
        single.set(m);
        auto it = by_intent.find(context.close_attributes(single));
        if (it == by_intent.end()) throw validation_error("concept set is incomplete");
        lattice.introduced_attributes[it->second].push_back(m);
    }
    lattice.concepts = std::move(concepts);
    return lattice;
}

}  // namespace elicit
