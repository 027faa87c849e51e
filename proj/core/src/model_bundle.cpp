#include "elicit/model_bundle.hpp"

#include <json.hpp>

#include "csv.hpp"
#include "elicit/elicitation.hpp"
#include "elicit/error.hpp"

namespace elicit {

using json = nlohmann::json;

PatientScore score_patient(const CaseVector& answers, const ModelBundle& bundle) {
    const Questionnaire& q = bundle.questionnaire;
    validate_case(answers, q);
    PatientScore out;
    out.case_id = canonical_index(answers, q);
    out.answers = true_answers(answers, q);
    const std::vector<double> weights = bundle.weights.by_position(q);
    out.raw_sum = weight_sum(answers, weights);
    const NormalizedValue norm = bundle.bounds.normalize(out.raw_sum);
    out.normalized_sum = norm.value;
    out.clamped = norm.clamped;
    out.scores = elicit_scores(out.normalized_sum, bundle.gmm, bundle.kde);
    out.category = categorize(out.scores.gmm_cdf, bundle.thresholds);
    return out;
}

PatientScore score_patient(std::span<const std::string> true_answer_ids, const ModelBundle& bundle) {
    return score_patient(case_from_answers(bundle.questionnaire, true_answer_ids), bundle);
}

std::string bundle_to_json(const ModelBundle& bundle) {
    json doc;
    doc["format"] = "elicit-model-bundle/1";
    doc["questionnaire"] = json::parse(questionnaire_to_json(bundle.questionnaire));
    json weights = json::object();
    for (std::size_t i = 0; i < bundle.weights.answer_ids().size(); ++i) {
        weights[bundle.weights.answer_ids()[i]] = bundle.weights.values()[i];
    }
    doc["mean_weights"] = std::move(weights);
    doc["bounds"] = {{"min", bundle.bounds.min}, {"max", bundle.bounds.max}};
    doc["gmm"] = json::array();
    for (const auto& c : bundle.gmm.components()) {
        doc["gmm"].push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
    }
    doc["kde"] = {{"bandwidth", bundle.kde.bandwidth()}, {"points", bundle.kde.points()}};
    doc["thresholds"] = {bundle.thresholds.medium, bundle.thresholds.high};
    return doc.dump(2) + "\n";
}

ModelBundle bundle_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        if (doc.value("format", "") != "elicit-model-bundle/1") throw validation_error("not a model bundle");
        ModelBundle b;
        b.questionnaire = load_questionnaire(doc.at("questionnaire").dump());
        std::vector<std::string> ids;
        std::vector<double> means;
        for (const auto& [id, value] : doc.at("mean_weights").items()) {
            ids.push_back(id);
            means.push_back(value.get<double>());
        }
        b.weights = AnswerWeights(std::move(ids), std::move(means));
        b.bounds = {doc.at("bounds").at("min").get<double>(), doc.at("bounds").at("max").get<double>()};
        if (!(b.bounds.max > b.bounds.min)) throw validation_error("model bundle has degenerate bounds");
        std::vector<GaussianComponent> comps;
        for (const auto& c : doc.at("gmm")) {
            comps.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(), c.at("stddev").get<double>()});
        }
        b.gmm = GaussianMixture(std::move(comps));
        b.kde = KdeModel(doc.at("kde").at("points").get<std::vector<double>>(), doc.at("kde").at("bandwidth").get<double>());
        const auto t = doc.at("thresholds").get<std::vector<double>>();
        if (t.size() != 2) throw validation_error("model bundle needs two thresholds");
        b.thresholds = {t[0], t[1]};
        validate_thresholds(b.thresholds);
        return b;
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed model bundle: ") + e.what());
    }
}

void export_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
    detail::write_text_file(path, bundle_to_json(bundle));
}

ModelBundle load_bundle(const std::filesystem::path& path) { return bundle_from_json(detail::read_text_file(path)); }

std::string patient_score_to_json(const PatientScore& score) {
    json doc;
    doc["case_id"] = score.case_id;
    doc["answers"] = score.answers;
    doc["raw_sum"] = score.raw_sum;
    doc["normalized_sum"] = score.normalized_sum;
    doc["clamped"] = score.clamped;
    doc["p_gmm_cdf"] = score.scores.gmm_cdf;
    doc["p_kde_cdf"] = score.scores.kde_cdf;
    doc["p_posterior"] = score.scores.posterior;
    doc["category"] = std::string(to_string(score.category));
    return doc.dump(2) + "\n";
}

}  // namespace elicit
