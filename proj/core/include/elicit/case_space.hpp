#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "elicit/questionnaire.hpp"

namespace elicit {

// One answer assignment, indexed by the questionnaire's flat answer positions.
struct CaseVector {
    std::vector<std::uint8_t> assignment;

    bool operator==(const CaseVector&) const = default;
};

using CaseSet = std::vector<CaseVector>;

// Upper bound on |C|; larger schemas are rejected rather than enumerated.
inline constexpr std::size_t max_case_count = std::size_t{1} << 26;

std::size_t case_count(const Questionnaire& q);

// All admissible assignments in canonical order: questions in schema order,
// first question most significant. Within a multi-select question the
// none-answer comes first, then the non-empty subsets of the other answers in
// binary counting order (first listed answer = least significant bit). Within
// an exclusive question, answer list order.
CaseSet enumerate_cases(const Questionnaire& q);

// Throws validation_error when the case breaks a question's mode constraint.
void validate_case(const CaseVector& c, const Questionnaire& q);

std::size_t canonical_index(const CaseVector& c, const Questionnaire& q);
CaseVector case_at(std::size_t index, const Questionnaire& q);

CaseVector case_from_answers(const Questionnaire& q, std::span<const std::string> true_answer_ids);
std::vector<std::string> true_answers(const CaseVector& c, const Questionnaire& q);

// Sum of the mean weights of the case's true answers.
double weight_sum(const CaseVector& c, const Questionnaire& q, const AnswerWeights& weights);
// Same, with weights already laid out by flat answer position.
double weight_sum(const CaseVector& c, std::span<const double> weights_by_position);

struct NormalizedValue {
    double value = 0.0;
    bool clamped = false;
};

struct NormalizationBounds {
    double min = 0.0;
    double max = 1.0;

    // Min-max normalization; values outside [min, max] are clamped to [0, 1]
    // and flagged.
    NormalizedValue normalize(double raw) const;
};

struct WeightSumTable {
    std::vector<double> raw;
    std::vector<double> normalized;
    NormalizationBounds bounds;
};

// Throws validation_error when fewer than two distinct values are given.
WeightSumTable normalize_sums(std::span<const double> sums);

}  // namespace elicit
