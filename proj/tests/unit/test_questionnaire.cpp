#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "elicit/error.hpp"
#include "elicit/questionnaire.hpp"
#include "test_support.hpp"

using namespace elicit;

namespace {

Questionnaire shipped_questionnaire() { return load_questionnaire_file(test::data_dir() / "questionnaire.json"); }

WeightMatrix shipped_weights() { return load_weight_matrix_file(test::data_dir() / "weights.csv"); }

const char* symptom_q1 = R"({
  "questions": [
    {"id": "q1", "mode": "multi_select_with_exclusive_none", "none_answer_id": "no",
     "answers": [{"id": "no"}, {"id": "s1"}, {"id": "s2"}, {"id": "s3"}]}
  ]
})";

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

TEST_CASE("shipped questionnaire has six questions and nineteen answers") {
    const Questionnaire q = shipped_questionnaire();
    REQUIRE(q.questions().size() == 6);
    CHECK(q.answer_count() == 19);
    const std::vector<std::size_t> expected{4, 4, 3, 2, 4, 2};
    for (std::size_t i = 0; i < 6; ++i) CHECK(q.questions()[i].answers.size() == expected[i]);
    CHECK(q.questions()[0].mode == QuestionMode::multi_select_with_exclusive_none);
    CHECK(q.questions()[0].none_answer_id == "a_1_q1");
    for (std::size_t i = 1; i < 6; ++i) CHECK(q.questions()[i].mode == QuestionMode::exclusive);
}

TEST_CASE("single exclusive question is a valid schema") {
    const Questionnaire q = load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": [{"id": "yes"}, {"id": "no"}]}]})");
    CHECK(q.questions().size() == 1);
    CHECK(q.questions()[0].combination_count() == 2);
}

TEST_CASE("multi-select with none plus three answers has eight combinations") {
    const Questionnaire q = load_questionnaire(symptom_q1);
    // none alone, plus every non-empty subset of three answers
    CHECK(q.questions()[0].combination_count() == 1 + ((1u << 3) - 1));
}

TEST_CASE("questionnaire validation rejects malformed schemas") {
    CHECK_THROWS_AS(load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": [{"id": "a"}]},
        {"id": "q", "mode": "exclusive", "answers": [{"id": "b"}]}]})"),
                    validation_error);
    CHECK_THROWS_AS(load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": [{"id": "a"}, {"id": "a"}]}]})"),
                    validation_error);
    CHECK_THROWS_AS(load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "multi_select_with_exclusive_none", "answers": [{"id": "a"}]}]})"),
                    validation_error);
    CHECK_THROWS_AS(load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": []}]})"),
                    validation_error);
    CHECK_THROWS_AS(load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "sometimes", "answers": [{"id": "a"}]}]})"),
                    validation_error);
    CHECK_THROWS_AS(load_questionnaire("{not json"), validation_error);
    CHECK_THROWS_AS(load_questionnaire(R"({"questions": [
        {"id": "q1", "mode": "exclusive", "answers": [{"id": "a"}]},
        {"id": "q2", "mode": "exclusive", "answers": [{"id": "b"}]}],
        "merge_rules": [{"sources": ["a", "b"], "merged": {"id": "ab"}}]})"),
                    validation_error);
}

TEST_CASE("questionnaire json round trip") {
    const Questionnaire q = load_questionnaire_file(test::data_dir() / "questionnaire_unmerged.json");
    const Questionnaire again = load_questionnaire(questionnaire_to_json(q));
    CHECK(again.answer_ids() == q.answer_ids());
    CHECK(again.merge_rules().size() == q.merge_rules().size());
    CHECK(questionnaire_to_json(again) == questionnaire_to_json(q));
}

TEST_CASE("shipped weight matrix validates") {
    const WeightMatrix wm = shipped_weights();
    CHECK(wm.doctors().size() == 15);
    CHECK(wm.answer_ids().size() == 19);
    CHECK_NOTHROW(validate_weights(wm, shipped_questionnaire()));
}

TEST_CASE("shipped matrix equals the hand transcription") {
    const WeightMatrix wm = shipped_weights();
    for (const auto& row : test::reference_weights()) {
        for (std::size_t d = 0; d < 15; ++d) {
            CHECK(wm.weight("d_" + std::to_string(d + 1), row.answer) == row.weights[d]);
        }
    }
}

TEST_CASE("weights outside [-1, 3] or missing cells are rejected") {
    const Questionnaire q = load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": [{"id": "a"}, {"id": "b"}]}]})");
    CHECK_THROWS_AS(validate_weights(parse_weight_matrix("doctor,a,b\nd_1,3.5,0\n"), q), validation_error);
    CHECK_THROWS_AS(validate_weights(parse_weight_matrix("doctor,a,b\nd_1,-1.5,0\n"), q), validation_error);
    CHECK_THROWS_AS(validate_weights(parse_weight_matrix("doctor,a,b\nd_1,1,\n"), q), validation_error);
    CHECK_THROWS_AS(validate_weights(parse_weight_matrix("doctor,a\nd_1,1\n"), q), validation_error);
    CHECK_NOTHROW(validate_weights(parse_weight_matrix("doctor,a,b\nd_1,-1,3\n"), q));
}

TEST_CASE("missing d_7 weight on a_1_q4 is a completeness error") {
    const WeightMatrix full = shipped_weights();
    std::vector<std::optional<double>> cells;
    for (std::size_t d = 0; d < full.doctors().size(); ++d) {
        for (std::size_t c = 0; c < full.answer_ids().size(); ++c) {
            const bool hole = full.doctors()[d] == "d_7" && full.answer_ids()[c] == "a_1_q4";
            cells.push_back(hole ? std::nullopt : full.at(d, c));
        }
    }
    const WeightMatrix holed(full.doctors(), full.answer_ids(), cells);
    CHECK_THROWS_WITH_AS(validate_weights(holed, shipped_questionnaire()), doctest::Contains("d_7"), validation_error);
}

TEST_CASE("merge averages the source weights per doctor") {
    const Questionnaire q = load_questionnaire(R"({"questions": [
        {"id": "q", "mode": "exclusive", "answers": [{"id": "a"}, {"id": "b"}, {"id": "c"}, {"id": "d"}, {"id": "e"}]}]})");
    const WeightMatrix wm = parse_weight_matrix("doctor,a,b,c,d,e\nx,1,2,-1,3,0\ny,0,0,0,1,2\n");
    const MergeRule rule{{"a", "b", "c", "d"}, {"abcd", "merged", "q"}};
    const WeightMatrix merged = apply_merge(wm, rule, q);
    CHECK(merged.answer_ids() == std::vector<std::string>{"abcd", "e"});
    CHECK(merged.weight("x", "abcd") == doctest::Approx((1 + 2 - 1 + 3) / 4.0));
    CHECK(merged.weight("y", "abcd") == doctest::Approx(0.25));
    CHECK(merged.weight("y", "e") == 2);
    CHECK_THROWS_AS(apply_merge(wm, MergeRule{{"a", "zz"}, {"m", "", "q"}}, q), validation_error);
}

TEST_CASE("unmerged 15x22 matrix merges to the shipped 15x19 matrix") {
    const Questionnaire uq = load_questionnaire_file(test::data_dir() / "questionnaire_unmerged.json");
    const WeightMatrix uw = load_weight_matrix_file(test::fixture_dir() / "weights_unmerged.csv");
    REQUIRE(uw.doctors().size() == 15);
    REQUIRE(uw.answer_ids().size() == 22);
    REQUIRE(uq.merge_rules().size() == 1);
    const MergeRule& rule = uq.merge_rules()[0];
    const WeightMatrix merged = apply_merge(uw, rule, uq);
    const Questionnaire mq = merge_questionnaire(uq, rule);
    CHECK(merged.answer_ids().size() == 19);
    CHECK(mq.answer_ids() == shipped_questionnaire().answer_ids());
    CHECK(merged.weight("d_4", "a_2_q1") == 0.75);
    const WeightMatrix shipped = shipped_weights();
    for (const auto& doctor : shipped.doctors()) {
        for (const auto& id : shipped.answer_ids()) CHECK(merged.weight(doctor, id) == shipped.weight(doctor, id));
    }
}

TEST_CASE("merging then averaging equals averaging then merging the means") {
    const Questionnaire uq = load_questionnaire_file(test::data_dir() / "questionnaire_unmerged.json");
    const WeightMatrix uw = load_weight_matrix_file(test::fixture_dir() / "weights_unmerged.csv");
    const MergeRule& rule = uq.merge_rules()[0];
    const AnswerWeights after = mean_weights(apply_merge(uw, rule, uq));
    const AnswerWeights before = mean_weights(uw);
    double mean_of_means = 0.0;
    for (const auto& id : rule.source_answer_ids) mean_of_means += before.at(id);
    mean_of_means /= static_cast<double>(rule.source_answer_ids.size());
    CHECK(after.at("a_2_q1") == doctest::Approx(mean_of_means).epsilon(1e-14));
}

TEST_CASE("mean weights reproduce the published average column") {
    const AnswerWeights means = mean_weights(shipped_weights());
    for (const auto& row : test::reference_weights()) {
        INFO(row.answer);
        CHECK(round2(means.at(row.answer)) == doctest::Approx(row.average).epsilon(1e-12));
    }
    CHECK(means.at("a_1_q3") == doctest::Approx(2.8).epsilon(1e-15));
    CHECK(means.at("a_4_q1") == doctest::Approx(-4.5 / 15).epsilon(1e-15));
}

TEST_CASE("mean of a constant column is that constant and means stay within column bounds") {
    const WeightMatrix wm = parse_weight_matrix("doctor,a,b\nx,2,-1\ny,2,3\nz,2,0.5\n");
    const AnswerWeights m = mean_weights(wm);
    CHECK(m.at("a") == 2.0);
    CHECK(m.at("b") == doctest::Approx(2.5 / 3));

    const WeightMatrix shipped = shipped_weights();
    const AnswerWeights sm = mean_weights(shipped);
    for (std::size_t c = 0; c < shipped.answer_ids().size(); ++c) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t d = 0; d < shipped.doctors().size(); ++d) {
            lo = std::min(lo, *shipped.at(d, c));
            hi = std::max(hi, *shipped.at(d, c));
        }
        const double v = sm.at(shipped.answer_ids()[c]);
        CHECK(v >= lo);
        CHECK(v <= hi);
    }
}

TEST_CASE("mean weights of an empty doctor list is an error") {
    CHECK_THROWS_AS(mean_weights(WeightMatrix({}, {"a"}, {})), validation_error);
}
