#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/case_space.hpp"
#include "elicit/category.hpp"
#include "elicit/gmm.hpp"
#include "elicit/kde.hpp"
#include "elicit/questionnaire.hpp"
#include "elicit/score_table.hpp"

namespace elicit {

// Everything needed to score one patient without re-running the pipeline.
struct ModelBundle {
    Questionnaire questionnaire;  // merged schema the weights refer to
    AnswerWeights weights;
    NormalizationBounds bounds;
    GaussianMixture gmm;
    KdeModel kde;
    CategoryThresholds thresholds;
};

struct PatientScore {
    std::size_t case_id = 0;
    std::vector<std::string> answers;
    double raw_sum = 0.0;
    double normalized_sum = 0.0;
    bool clamped = false;  // raw sum fell outside the enumerated bounds
    ApproachScores scores;
    Category category = Category::low;
};

// Throws validation_error when the case violates the schema.
PatientScore score_patient(const CaseVector& answers, const ModelBundle& bundle);
PatientScore score_patient(std::span<const std::string> true_answer_ids, const ModelBundle& bundle);

std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(std::string_view text);
void export_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

std::string patient_score_to_json(const PatientScore& score);

}  // namespace elicit
