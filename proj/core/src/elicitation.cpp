#include "elicit/elicitation.hpp"

#include "elicit/error.hpp"

namespace elicit {

ApproachScores elicit_scores(double normalized_sum, const GaussianMixture& gmm, const KdeModel& kde) {
    return {gmm.cdf(normalized_sum), kde.cdf(normalized_sum), gmm.posterior(normalized_sum, gmm.ill_component())};
}

ScoreTable elicit_probabilities(const Questionnaire& q, const CaseSet& cases, const WeightSumTable& sums,
                                const GaussianMixture& gmm, const KdeModel& kde,
                                const CategoryThresholds& thresholds) {
    if (cases.size() != sums.raw.size() || cases.size() != sums.normalized.size()) {
        throw validation_error("case set and weight-sum table differ in size");
    }
    validate_thresholds(thresholds);
    ScoreTable table;
    table.answer_ids = q.answer_ids();
    table.rows.reserve(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        ScoreRow row;
        row.case_id = canonical_index(cases[i], q);
        row.assignment = cases[i].assignment;
        row.raw_sum = sums.raw[i];
        row.normalized_sum = sums.normalized[i];
        row.scores = elicit_scores(row.normalized_sum, gmm, kde);
        row.category = categorize(row.scores.gmm_cdf, thresholds);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace elicit
