#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "elicit/category.hpp"
#include "elicit/decision_tree.hpp"
#include "elicit/error.hpp"
#include "elicit/formal_context.hpp"
#include "test_support.hpp"

using namespace elicit;

namespace {

FormalContext make_context(const std::vector<std::string>& rows) {
    std::vector<std::string> objects, attributes;
    const std::size_t m = rows.empty() ? 0 : rows[0].size();
    for (std::size_t o = 0; o < rows.size(); ++o) objects.push_back("o" + std::to_string(o));
    for (std::size_t a = 0; a < m; ++a) attributes.push_back("y" + std::to_string(a));
    std::vector<Bitset> bits;
    for (const auto& r : rows) {
        Bitset b(m);
        for (std::size_t a = 0; a < m; ++a) b[a] = r[a] == 'X';
        bits.push_back(b);
    }
    return FormalContext(objects, attributes, bits);
}

// Closed attribute sets by checking all 2^m subsets directly.
std::set<std::vector<bool>> brute_force_intents(const FormalContext& ctx) {
    const std::size_t m = ctx.attribute_count(), n = ctx.object_count();
    std::set<std::vector<bool>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<bool> extent(n, true);
        for (std::size_t o = 0; o < n; ++o)
            for (std::size_t a = 0; a < m; ++a)
                if ((mask >> a) & 1 && !ctx.incident(o, a)) extent[o] = false;
        std::vector<bool> intent(m, true);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t o = 0; o < n; ++o)
                if (extent[o] && !ctx.incident(o, a)) intent[a] = false;
        bool closed = true;
        for (std::size_t a = 0; a < m; ++a) closed = closed && (intent[a] == bool((mask >> a) & 1));
        if (closed) out.insert(intent);
    }
    return out;
}

std::vector<bool> to_vec(const Bitset& b) {
    std::vector<bool> v(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) v[i] = b[i];
    return v;
}

// Covering pairs from the full order relation by removing transitive pairs.
std::set<std::pair<std::size_t, std::size_t>> brute_force_covers(const std::vector<FormalConcept>& cs) {
    const std::size_t n = cs.size();
    auto below = [&](std::size_t a, std::size_t b) {
        return a != b && cs[a].extent.is_subset_of(cs[b].extent) && cs[a].extent != cs[b].extent;
    };
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!below(a, b)) continue;
            bool cover = true;
            for (std::size_t c = 0; c < n && cover; ++c) cover = !(below(a, c) && below(c, b));
            if (cover) out.insert({a, b});
        }
    return out;
}

FormalContext random_context(std::mt19937_64& rng, std::size_t n, std::size_t m, double density) {
    std::bernoulli_distribution bit(density);
    std::vector<std::string> rows(n, std::string(m, '.'));
    for (auto& r : rows)
        for (auto& ch : r) ch = bit(rng) ? 'X' : '.';
    return make_context(rows);
}

const FormalContext& reference_band0() {
    static const FormalContext ctx = build_band_context(test::reference_scores(), {0.0, 0.1, false}, Approach::gmm_cdf);
    return ctx;
}

std::vector<Category> reference_labels() {
    std::vector<Category> labels;
    for (const auto& row : test::reference_scores().rows) labels.push_back(row.category);
    return labels;
}

}  // namespace

TEST_CASE("categorize boundaries are half-open") {
    CHECK(categorize(0.0) == Category::low);
    CHECK(categorize(0.329999) == Category::low);
    CHECK(categorize(0.33) == Category::medium);
    CHECK(categorize(0.679999) == Category::medium);
    CHECK(categorize(0.68) == Category::high);
    CHECK(categorize(1.0) == Category::high);
    CHECK_THROWS_AS(categorize(1.0000001), validation_error);
    CHECK_THROWS_AS(categorize(-0.1), validation_error);
    CHECK_THROWS_AS(validate_thresholds({0.7, 0.3}), validation_error);
    CHECK(parse_category("HIGH") == Category::high);
}

TEST_CASE("gini and majority") {
    CHECK(gini_impurity({4, 0, 0}) == 0.0);
    CHECK(gini_impurity({1, 1, 0}) == doctest::Approx(0.5));
    CHECK(gini_impurity({1, 1, 1}) == doctest::Approx(2.0 / 3));
    CHECK(majority_category({2, 2, 1}) == Category::low);
    CHECK(majority_category({0, 3, 3}) == Category::medium);
    CHECK(majority_category({0, 1, 3}) == Category::high);
}

TEST_CASE("uniform labels give a single leaf") {
    const FeatureMatrix f({"a", "b"}, 3, {1, 0, 0, 1, 1, 1});
    const std::vector<Category> labels(3, Category::medium);
    const DecisionTree t = fit_decision_tree(f, labels);
    CHECK(t.nodes().size() == 1);
    CHECK(t.root().is_leaf());
    CHECK(t.root().majority == Category::medium);
    CHECK_THROWS_AS(fit_decision_tree(FeatureMatrix({"a"}, 0, {}), std::vector<Category>{}), validation_error);
}

TEST_CASE("perfectly separating feature gives a depth-1 tree") {
    // Feature b separates; feature a is noise. Gini gain of b = 0.5, of a = 0.
    const FeatureMatrix f({"a", "b"}, 4, {1, 1, 0, 1, 1, 0, 0, 0});
    const std::vector<Category> labels{Category::high, Category::high, Category::low, Category::low};
    const std::vector<std::size_t> rows{0, 1, 2, 3};
    const auto gains = split_gains(f, labels, rows);
    REQUIRE(gains[1].has_value());
    CHECK(*gains[1] == doctest::Approx(0.5));
    CHECK(*gains[0] == doctest::Approx(0.0));
    const DecisionTree t = fit_decision_tree(f, labels);
    CHECK(t.depth() == 1);
    CHECK(*t.root().split_feature == 1);
    CHECK(gini_impurity(t.node(t.root().true_child).counts) == 0.0);
    CHECK(gini_impurity(t.node(t.root().false_child).counts) == 0.0);
    CHECK(t.predict(std::vector<std::uint8_t>{0, 1}) == Category::high);
}

TEST_CASE("shipped tree splits on a_1_q3 at the root with HIGH majority on its true branch") {
    const PreparedInputs& in = test::shipped_inputs();
    const std::vector<Category> labels = reference_labels();
    const DecisionTree t = fit_decision_tree(in.questionnaire, in.cases, labels);
    REQUIRE(t.root().split_feature);
    CHECK(t.feature_names()[*t.root().split_feature] == "a_1_q3");
    CHECK(t.node(t.root().true_child).majority == Category::high);

    const FeatureMatrix f = answer_indicators(in.questionnaire, in.cases);
    std::vector<std::size_t> all(f.rows());
    std::iota(all.begin(), all.end(), 0);
    const auto gains = split_gains(f, labels, all);
    const double best = *gains[*t.root().split_feature];
    for (const auto& g : gains)
        if (g) CHECK(best >= *g);

    for (const TreeNode& node : t.nodes()) {
        if (node.is_leaf()) continue;
        const auto& a = t.node(node.true_child).counts;
        const auto& b = t.node(node.false_child).counts;
        for (std::size_t k = 0; k < 3; ++k) CHECK(node.counts[k] == a[k] + b[k]);
    }
    // Every case lands in a leaf consistent with its assignment.
    for (std::size_t i = 0; i < in.cases.size(); i += 11) CHECK_NOTHROW(t.predict(in.cases[i].assignment));
}

TEST_CASE("pruning") {
    const PreparedInputs& in = test::shipped_inputs();
    const std::vector<Category> labels = reference_labels();
    const DecisionTree full = fit_decision_tree(in.questionnaire, in.cases, labels);
    const DecisionTree same = prune_tree(full, 0.0);
    CHECK(same.nodes().size() == full.nodes().size());
    const DecisionTree stump = prune_tree(full, 1e9);
    CHECK(stump.nodes().size() == 1);
    CHECK(stump.root().majority == majority_category(full.root().counts));
    CHECK(stump.root().counts == full.root().counts);
    const DecisionTree mid = prune_tree(full, 0.005);
    CHECK(mid.nodes().size() < full.nodes().size());
    REQUIRE(mid.root().split_feature);
    CHECK(mid.feature_names()[*mid.root().split_feature] == "a_1_q3");
    for (const TreeNode& node : mid.nodes()) {
        if (node.is_leaf()) continue;
        const auto& a = mid.node(node.true_child).counts;
        const auto& b = mid.node(node.false_child).counts;
        for (std::size_t k = 0; k < 3; ++k) CHECK(node.counts[k] == a[k] + b[k]);
    }
    // Larger alpha never grows the tree.
    std::size_t prev = full.nodes().size();
    for (double alpha : {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05}) {
        const std::size_t size = prune_tree(full, alpha).nodes().size();
        CHECK(size <= prev);
        prev = size;
    }
    CHECK_THROWS_AS(prune_tree(full, -1.0), validation_error);
}

TEST_CASE("derivation operators") {
    const FormalContext ctx = make_context({"X.X", ".XX", "XXX"});
    CHECK(derive(ctx, Side::attributes, {}).size() == 3);
    CHECK(derive(ctx, Side::objects, {}).size() == 3);
    const std::vector<std::string> y0{"y0"};
    CHECK(derive(ctx, Side::attributes, y0) == std::vector<std::string>{"o0", "o2"});
    const std::vector<std::string> o01{"o0", "o1"};
    CHECK(derive(ctx, Side::objects, o01) == std::vector<std::string>{"y2"});
    const std::vector<std::string> bogus{"nope"};
    CHECK_THROWS_AS(derive(ctx, Side::objects, bogus), validation_error);
}

TEST_CASE("band [0, 0.1) context under reference parameters") {
    const FormalContext& ctx = reference_band0();
    CHECK(ctx.object_count() == 162);
    CHECK(ctx.attribute_count() == 19);
    const std::vector<std::string> q6{"a_2_q6"};
    CHECK(derive(ctx, Side::attributes, q6).size() == 145);
    const std::vector<std::string> q4q6{"a_2_q4", "a_2_q6"};
    CHECK(derive(ctx, Side::attributes, q4q6).size() == 128);
}

TEST_CASE("band contexts against a brute-force filter") {
    const ScoreTable& scores = test::reference_scores();
    CHECK(build_band_context(scores, {0.0, 1.0, true}, Approach::gmm_cdf).object_count() == 1536);
    for (Approach a : {Approach::gmm_cdf, Approach::kde_cdf, Approach::posterior}) {
        std::size_t expected = 0;
        for (const auto& r : scores.rows) {
            const double s = r.scores.get(a);
            expected += s >= 0.9 && s < 1.0;
        }
        CHECK(build_band_context(scores, {0.9, 1.0, false}, a).object_count() == expected);
    }
    CHECK(build_band_context(scores, {0.999999, 1.0, false}, Approach::gmm_cdf).object_count() == 0);
    CHECK_THROWS_AS(validate_band({0.5, 0.2, false}), validation_error);
}

TEST_CASE("small concept lattices") {
    const FormalContext diag = make_context({"X.", ".X"});
    const auto dc = enumerate_concepts(diag);
    CHECK(dc.size() == 4);
    const ConceptLattice diamond = build_lattice(diag, dc);
    CHECK(diamond.edges.size() == 4);
    CHECK(diamond.concepts[diamond.top].extent.count() == 2);
    CHECK(diamond.concepts[diamond.bottom].intent.count() == 2);

    const FormalContext full = make_context({"XX", "XX"});
    const auto fc = enumerate_concepts(full);
    CHECK(fc.size() == 1);
    CHECK(build_lattice(full, fc).edges.empty());

    const FormalContext chain = make_context({"X..", "XX.", "XXX"});
    const auto cc = enumerate_concepts(chain);
    CHECK(cc.size() == 3);
    CHECK(build_lattice(chain, cc).edges.size() == 2);

    auto missing = dc;
    missing.pop_back();
    CHECK_THROWS_AS(build_lattice(diag, missing), validation_error);
    auto not_closed = dc;
    not_closed[0].intent.flip();
    CHECK_THROWS_AS(build_lattice(diag, not_closed), validation_error);
}

TEST_CASE("next closure emits lectic order and matches the brute-force oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const FormalContext ctx = random_context(rng, 6, 6, 0.45);
        const auto concepts = enumerate_concepts(ctx);
        const auto oracle = brute_force_intents(ctx);
        CHECK(concepts.size() == oracle.size());
        std::set<std::vector<bool>> got;
        for (const auto& c : concepts) {
            got.insert(to_vec(c.intent));
            CHECK(ctx.up(c.extent) == c.intent);
            CHECK(ctx.down(c.intent) == c.extent);
        }
        CHECK(got == oracle);
        for (std::size_t i = 1; i < concepts.size(); ++i) CHECK(lectic_less(concepts[i - 1].intent, concepts[i].intent));

        const ConceptLattice lat = build_lattice(ctx, concepts);
        const std::set<std::pair<std::size_t, std::size_t>> edges(lat.edges.begin(), lat.edges.end());
        CHECK(edges == brute_force_covers(concepts));
    }
}

TEST_CASE("parallel enumeration reproduces sequential order") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const FormalContext ctx = random_context(rng, 40, 12, 0.4);
        CHECK(enumerate_concepts(ctx, EnumerationMode::parallel) == enumerate_concepts(ctx));
    }
    const FormalContext& band = reference_band0();
    CHECK(enumerate_concepts(band, EnumerationMode::parallel) == enumerate_concepts(band));
}

TEST_CASE("band lattice has unique top and bottom") {
    const FormalContext& ctx = reference_band0();
    const ConceptLattice lat = build_lattice(ctx, enumerate_concepts(ctx));
    CHECK(lat.concepts[lat.top].extent.count() == ctx.object_count());
    CHECK(lat.concepts[lat.bottom].intent.count() == ctx.attribute_count());
    std::size_t without_upper = 0, without_lower = 0;
    std::vector<int> up(lat.concepts.size()), low(lat.concepts.size());
    for (auto [l, u] : lat.edges) {
        ++up[l];
        ++low[u];
    }
    for (std::size_t i = 0; i < lat.concepts.size(); ++i) {
        without_upper += up[i] == 0;
        without_lower += low[i] == 0;
    }
    CHECK(without_upper == 1);
    CHECK(without_lower == 1);
}

TEST_CASE("attribute supports list singles then pairs") {
    const FormalContext ctx = make_context({"XX.", "X.X", "XXX"});
    const auto s = attribute_supports(ctx);
    REQUIRE(s.size() == 6);
    CHECK(s[0].attributes == std::vector<std::size_t>{0});
    CHECK(s[0].objects == 3);
    CHECK(s[3].attributes == std::vector<std::size_t>{0, 1});
    CHECK(s[3].objects == 2);
    CHECK(s[5].attributes == std::vector<std::size_t>{1, 2});
    CHECK(s[5].objects == 1);
}
