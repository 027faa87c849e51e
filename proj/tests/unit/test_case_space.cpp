#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "elicit/case_space.hpp"
#include "elicit/error.hpp"
#include "test_support.hpp"

using namespace elicit;

namespace {

Questionnaire merged() { return load_questionnaire_file(test::data_dir() / "questionnaire.json"); }

// Per-question partial sums computed straight from the transcribed weights.
struct Extremes {
    double min;
    double max;
};

Extremes brute_force_extremes() {
    std::map<std::string, double> mean;
    for (const auto& row : test::reference_weights()) {
        double s = 0;
        for (double w : row.weights) s += w;
        mean[row.answer] = s / 15.0;
    }
    auto m = [&](const char* id) { return mean.at(id); };
    const double symptoms[3] = {m("a_2_q1"), m("a_3_q1"), m("a_4_q1")};
    std::vector<double> q1{m("a_1_q1")};
    for (int mask = 1; mask < 8; ++mask) {
        double s = 0;
        for (int b = 0; b < 3; ++b) {
            if (mask & (1 << b)) s += symptoms[b];
        }
        q1.push_back(s);
    }
    const std::vector<std::vector<double>> rest{
        {m("a_1_q2"), m("a_2_q2"), m("a_3_q2"), m("a_4_q2")},
        {m("a_1_q3"), m("a_2_q3"), m("a_3_q3")},
        {m("a_1_q4"), m("a_2_q4")},
        {m("a_1_q5"), m("a_2_q5"), m("a_3_q5"), m("a_4_q5")},
        {m("a_1_q6"), m("a_2_q6")},
    };
    Extremes e{1e9, -1e9};
    for (double a : q1)
        for (double b : rest[0])
            for (double c : rest[1])
                for (double d : rest[2])
                    for (double f : rest[3])
                        for (double g : rest[4]) {
                            const double s = a + b + c + d + f + g;
                            e.min = std::min(e.min, s);
                            e.max = std::max(e.max, s);
                        }
    return e;
}

}  // namespace

TEST_CASE("merged schema enumerates 1536 distinct cases") {
    const Questionnaire q = merged();
    const CaseSet cases = enumerate_cases(q);
    CHECK(case_count(q) == 8 * 4 * 3 * 2 * 4 * 2);
    REQUIRE(cases.size() == 1536);
    std::set<std::vector<std::uint8_t>> distinct;
    for (const auto& c : cases) distinct.insert(c.assignment);
    CHECK(distinct.size() == 1536);
    for (const auto& c : cases) CHECK_NOTHROW(validate_case(c, q));
}

TEST_CASE("unmerged schema enumerates 12288 cases") {
    const Questionnaire q = load_questionnaire_file(test::data_dir() / "questionnaire_unmerged.json");
    CHECK(case_count(q) == 12288);
    CHECK(enumerate_cases(q).size() == 12288);
}

TEST_CASE("one exclusive question with k answers has k cases") {
    const Questionnaire q = load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": [{"id": "a"}, {"id": "b"}, {"id": "c"}]}]})");
    const CaseSet cases = enumerate_cases(q);
    REQUIRE(cases.size() == 3);
    CHECK(cases[0].assignment == std::vector<std::uint8_t>{1, 0, 0});
    CHECK(cases[2].assignment == std::vector<std::uint8_t>{0, 0, 1});
}

TEST_CASE("empty questionnaire yields one empty case") {
    const CaseSet cases = enumerate_cases(Questionnaire{});
    REQUIRE(cases.size() == 1);
    CHECK(cases[0].assignment.empty());
}

TEST_CASE("canonical order: none-answer first, then binary counting over symptoms") {
    const Questionnaire q = load_questionnaire(R"({"questions": [
        {"id": "q1", "mode": "multi_select_with_exclusive_none", "none_answer_id": "no",
         "answers": [{"id": "no"}, {"id": "s1"}, {"id": "s2"}]},
        {"id": "q2", "mode": "exclusive", "answers": [{"id": "y"}, {"id": "n"}]}]})");
    const CaseSet cases = enumerate_cases(q);
    REQUIRE(cases.size() == 8);
    using V = std::vector<std::uint8_t>;
    CHECK(cases[0].assignment == V{1, 0, 0, 1, 0});
    CHECK(cases[1].assignment == V{1, 0, 0, 0, 1});
    CHECK(cases[2].assignment == V{0, 1, 0, 1, 0});
    CHECK(cases[4].assignment == V{0, 0, 1, 1, 0});
    CHECK(cases[6].assignment == V{0, 1, 1, 1, 0});
}

TEST_CASE("canonical index round trips over all 1536 cases") {
    const Questionnaire q = merged();
    const CaseSet cases = enumerate_cases(q);
    CHECK(canonical_index(cases.front(), q) == 0);
    CHECK(canonical_index(cases.back(), q) == 1535);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CHECK(canonical_index(cases[i], q) == i);
        CHECK(case_at(i, q) == cases[i]);
    }
    CHECK_THROWS_AS(case_at(1536, q), validation_error);
}

TEST_CASE("invalid cases are rejected") {
    const Questionnaire q = merged();
    CaseVector c = enumerate_cases(q).front();
    CaseVector both_q4 = c;
    both_q4.assignment[q.require_answer_position("a_1_q4")] = 1;
    both_q4.assignment[q.require_answer_position("a_2_q4")] = 1;
    CHECK_THROWS_AS(validate_case(both_q4, q), validation_error);
    CHECK_THROWS_AS(canonical_index(both_q4, q), validation_error);

    CaseVector none_and_symptom = c;
    none_and_symptom.assignment[q.require_answer_position("a_1_q1")] = 1;
    none_and_symptom.assignment[q.require_answer_position("a_3_q1")] = 1;
    CHECK_THROWS_AS(validate_case(none_and_symptom, q), validation_error);

    CaseVector empty_q1 = c;
    empty_q1.assignment[q.require_answer_position("a_1_q1")] = 0;
    CHECK_THROWS_AS(validate_case(empty_q1, q), validation_error);

    CaseVector short_case{{1, 0}};
    CHECK_THROWS_AS(validate_case(short_case, q), validation_error);
}

TEST_CASE("weight sums hit the brute-force extremes") {
    const Questionnaire q = merged();
    const AnswerWeights w = mean_weights(load_weight_matrix_file(test::data_dir() / "weights.csv"));
    const Extremes oracle = brute_force_extremes();
    CHECK(oracle.max == doctest::Approx(188.5 / 15).epsilon(1e-14));
    CHECK(oracle.min == doctest::Approx(-2.6).epsilon(1e-14));

    const std::vector<std::string> max_case{"a_2_q1", "a_3_q1", "a_3_q2", "a_1_q3", "a_1_q4", "a_4_q5", "a_1_q6"};
    const std::vector<std::string> min_case{"a_4_q1", "a_1_q2", "a_2_q3", "a_2_q4", "a_1_q5", "a_2_q6"};
    CHECK(weight_sum(case_from_answers(q, max_case), q, w) == doctest::Approx(oracle.max).epsilon(1e-14));
    CHECK(weight_sum(case_from_answers(q, min_case), q, w) == doctest::Approx(oracle.min).epsilon(1e-14));

    CaseVector zero{std::vector<std::uint8_t>(q.answer_count(), 0)};
    CHECK(weight_sum(zero, q, w) == 0.0);
}

TEST_CASE("weight sum is additive over questions") {
    const Questionnaire q = merged();
    const AnswerWeights w = mean_weights(load_weight_matrix_file(test::data_dir() / "weights.csv"));
    const std::vector<double> by_pos = w.by_position(q);
    for (std::size_t i = 0; i < 1536; i += 37) {
        const CaseVector c = case_at(i, q);
        double partial_total = 0.0;
        for (std::size_t k = 0; k < q.questions().size(); ++k) {
            double part = 0.0;
            for (std::size_t p = 0; p < q.answer_count(); ++p) {
                if (q.question_of(p) == k && c.assignment[p]) part += by_pos[p];
            }
            partial_total += part;
        }
        CHECK(weight_sum(c, q, w) == doctest::Approx(partial_total).epsilon(1e-13));
        CHECK(weight_sum(c, q, w) == weight_sum(c, by_pos));
    }
}

TEST_CASE("weight sum rejects answers the weight vector does not know") {
    const Questionnaire q = merged();
    const AnswerWeights partial({"a_1_q1"}, {1.0});
    CHECK_THROWS_AS(weight_sum(case_at(0, q), q, partial), validation_error);
}

TEST_CASE("normalization maps extremes to 0 and 1 and preserves order") {
    const PreparedInputs& in = test::shipped_inputs();
    const auto& raw = in.sums.raw;
    const auto& norm = in.sums.normalized;
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    CHECK(norm[lo - raw.begin()] == 0.0);
    CHECK(norm[hi - raw.begin()] == 1.0);
    for (double v : norm) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (std::size_t i = 0; i + 1 < raw.size(); i += 3) {
        for (std::size_t j = i + 1; j < raw.size(); j += 97) {
            CHECK((raw[i] < raw[j]) == (norm[i] < norm[j]));
        }
    }
    const Extremes oracle = brute_force_extremes();
    CHECK(in.sums.bounds.normalize(0.0).value == doctest::Approx((0 - oracle.min) / (oracle.max - oracle.min)));
    CHECK(in.sums.bounds.normalize(0.0).value == doctest::Approx(0.1714).epsilon(1e-3));
}

TEST_CASE("normalization errors and clamping") {
    const std::vector<double> flat{1, 1, 1};
    CHECK_THROWS_AS(normalize_sums(flat), validation_error);
    CHECK_THROWS_AS(normalize_sums(std::vector<double>{}), validation_error);
    const NormalizationBounds b{-1.0, 1.0};
    CHECK(b.normalize(2.0).value == 1.0);
    CHECK(b.normalize(2.0).clamped);
    CHECK(b.normalize(-3.0).value == 0.0);
    CHECK_FALSE(b.normalize(0.0).clamped);
}
