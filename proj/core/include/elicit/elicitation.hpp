#pragma once

#include "elicit/case_space.hpp"
#include "elicit/category.hpp"
#include "elicit/gmm.hpp"
#include "elicit/kde.hpp"
#include "elicit/score_table.hpp"

namespace elicit {

ApproachScores elicit_scores(double normalized_sum, const GaussianMixture& gmm, const KdeModel& kde);

// Scores every case of `cases`; `sums` must come from the same cases in the
// same order. The category column uses the mixture CDF score.
ScoreTable elicit_probabilities(const Questionnaire& q, const CaseSet& cases, const WeightSumTable& sums,
                                const GaussianMixture& gmm, const KdeModel& kde,
                                const CategoryThresholds& thresholds = {});

}  // namespace elicit
