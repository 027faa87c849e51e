#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elicit/score_table.hpp"

namespace elicit {

using Bitset = boost::dynamic_bitset<>;

// Objects x attributes incidence table.
class FormalContext {
public:
    FormalContext() = default;
    // rows[o] holds the attributes of object o.
    FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes, std::vector<Bitset> rows);

    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& attributes() const { return attributes_; }
    std::size_t object_count() const { return objects_.size(); }
    std::size_t attribute_count() const { return attributes_.size(); }

    bool incident(std::size_t object, std::size_t attribute) const { return rows_[object].test(attribute); }
    const Bitset& object_intent(std::size_t object) const { return rows_[object]; }
    const Bitset& attribute_extent(std::size_t attribute) const { return columns_[attribute]; }

    // A -> attributes shared by every object in A.
    Bitset up(const Bitset& object_set) const;
    // B -> objects having every attribute in B.
    Bitset down(const Bitset& attribute_set) const;
    Bitset close_attributes(const Bitset& attribute_set) const { return up(down(attribute_set)); }
    Bitset close_objects(const Bitset& object_set) const { return down(up(object_set)); }

    Bitset empty_objects() const { return Bitset(objects_.size()); }
    Bitset empty_attributes() const { return Bitset(attributes_.size()); }

    std::optional<std::size_t> object_index(std::string_view name) const;
    std::optional<std::size_t> attribute_index(std::string_view name) const;

    bool operator==(const FormalContext& other) const {
        return objects_ == other.objects_ && attributes_ == other.attributes_ && rows_ == other.rows_;
    }

private:
    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<Bitset> rows_;
    std::vector<Bitset> columns_;
};

enum class Side { objects, attributes };

// Derivation of a named subset of one side; the result lies on the other side.
std::vector<std::string> derive(const FormalContext& context, Side side, std::span<const std::string> names);

struct FormalConcept {
    Bitset extent;
    Bitset intent;

    bool operator==(const FormalConcept&) const = default;
};

// Lectic order on attribute sets: at the first position where they differ,
// the larger set holds the attribute.
bool lectic_less(const Bitset& a, const Bitset& b);

enum class EnumerationMode { sequential, parallel };

// Every concept exactly once, in lectic order of intents. Sequential mode is
// Next-Closure; parallel mode splits close-by-one branches across threads and
// sorts the result into the same order.
std::vector<FormalConcept> enumerate_concepts(const FormalContext& context,
                                              EnumerationMode mode = EnumerationMode::sequential);

struct ConceptLattice {
    std::vector<FormalConcept> concepts;
    // Covering pairs (lower, upper): extent(lower) is a maximal proper subset of extent(upper).
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t top = 0;     // all objects
    std::size_t bottom = 0;  // all attributes
    // Attributes whose attribute concept is concepts[i].
    std::vector<std::vector<std::size_t>> introduced_attributes;
};

// Throws validation_error when a concept is not closed in `context` or the
// set is missing a neighbour.
ConceptLattice build_lattice(const FormalContext& context, std::vector<FormalConcept> concepts);

// Score band [lower, upper), or [lower, upper] when upper_inclusive.
struct ProbabilityBand {
    double lower = 0.0;
    double upper = 1.0;
    bool upper_inclusive = false;

    bool contains(double score) const {
        return score >= lower && (upper_inclusive ? score <= upper : score < upper);
    }
};

void validate_band(const ProbabilityBand& band);

// Objects are the cases whose chosen score falls in the band (named "c<case_id>"),
// attributes are the answer ids. An empty band gives a context without objects.
FormalContext build_band_context(const ScoreTable& scores, const ProbabilityBand& band, Approach approach);

struct AttributeSupport {
    std::vector<std::size_t> attributes;
    std::size_t objects = 0;
};

// Object counts of every single attribute and every attribute pair with
// non-zero support, singles first, each group in attribute index order.
std::vector<AttributeSupport> attribute_supports(const FormalContext& context);

}  // namespace elicit
