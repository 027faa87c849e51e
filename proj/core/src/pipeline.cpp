#include "elicit/pipeline.hpp"

#include <cstdio>
#include <functional>
#include <json.hpp>
#include <set>
#include <type_traits>

#include "csv.hpp"
#include "elicit/cxt.hpp"
#include "elicit/dot.hpp"
#include "elicit/elicitation.hpp"
#include "elicit/error.hpp"

namespace elicit {

using json = nlohmann::json;

namespace {

template <typename F>
auto in_stage(std::string_view stage, F&& body) -> decltype(body()) {
    const std::string prefix = "[" + std::string(stage) + "] ";
    try {
        return body();
    } catch (const validation_error& e) {
        throw validation_error(prefix + e.what());
    } catch (const runtime_failure& e) {
        throw runtime_failure(prefix + e.what());
    } catch (const std::exception& e) {
        throw runtime_failure(prefix + e.what());
    }
}

void reject_unknown_keys(const json& node, std::string_view where, const std::set<std::string>& known) {
    for (const auto& [key, value] : node.items()) {
        if (!known.count(key)) throw validation_error(std::string(where) + ": unknown key '" + key + "'");
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

// Restricts the matrix to the schema's answers, in schema order.
WeightMatrix project_to_schema(const WeightMatrix& wm, const Questionnaire& q) {
    std::vector<std::optional<double>> cells;
    cells.reserve(wm.doctors().size() * q.answer_count());
    for (std::size_t d = 0; d < wm.doctors().size(); ++d) {
        for (const auto& id : q.answer_ids()) cells.push_back(wm.at(d, *wm.column_of(id)));
    }
    return WeightMatrix(wm.doctors(), q.answer_ids(), std::move(cells));
}

json fit_report_json(const FitReport& r, const GaussianMixture& model) {
    json comps = json::array();
    for (const auto& c : model.components()) comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
    return {{"components", r.components},
            {"free_parameters", r.free_parameters},
            {"log_likelihood", r.log_likelihood},
            {"aic", r.aic},
            {"bic", r.bic},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"log_likelihood_monotone", r.monotone},
            {"initialization", r.initialization},
            {"parameters", comps}};
}

std::string band_label(const ProbabilityBand& b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%g, %g%c", b.lower, b.upper, b.upper_inclusive ? ']' : ')');
    return buf;
}

}  // namespace

std::vector<BandSpec> default_bands() {
    std::vector<BandSpec> bands;
    for (int i = 0; i < 10; ++i) {
        bands.push_back({{i / 10.0, (i + 1) / 10.0, i == 9}, Approach::gmm_cdf});
    }
    return bands;
}

PipelineConfig parse_pipeline_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("pipeline config is not well-formed: ") + e.what());
    }
    if (!doc.is_object()) throw validation_error("pipeline config must be an object");
    reject_unknown_keys(doc, "pipeline config",
                        {"questionnaire", "weights", "output_dir", "components", "m_max", "em", "gmm", "kde_bandwidth",
                         "thresholds", "bands", "tree", "density_samples"});
    PipelineConfig cfg;
    try {
        cfg.questionnaire_path = resolve(base_dir, doc.at("questionnaire").get<std::string>());
        cfg.weights_path = resolve(base_dir, doc.at("weights").get<std::string>());
        if (doc.contains("output_dir")) cfg.output_dir = resolve(base_dir, doc["output_dir"].get<std::string>());
        if (doc.contains("components")) cfg.components = doc["components"].get<std::size_t>();
        if (doc.contains("m_max")) cfg.m_max = doc["m_max"].get<std::size_t>();
        if (doc.contains("em")) {
            const json& em = doc["em"];
            reject_unknown_keys(em, "em", {"tolerance", "max_iterations", "min_stddev", "restarts", "seed"});
            cfg.em.tolerance = em.value("tolerance", cfg.em.tolerance);
            cfg.em.max_iterations = em.value("max_iterations", cfg.em.max_iterations);
            cfg.em.min_stddev = em.value("min_stddev", cfg.em.min_stddev);
            cfg.em.restarts = em.value("restarts", cfg.em.restarts);
            cfg.em.seed = em.value("seed", cfg.em.seed);
        }
        if (doc.contains("gmm") && !doc["gmm"].is_null()) {
            std::vector<GaussianComponent> comps;
            for (const json& c : doc["gmm"]) {
                reject_unknown_keys(c, "gmm component", {"weight", "mean", "stddev"});
                comps.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(), c.at("stddev").get<double>()});
            }
            cfg.fixed_gmm = std::move(comps);
        }
        if (doc.contains("kde_bandwidth") && !doc["kde_bandwidth"].is_null()) {
            cfg.fixed_bandwidth = doc["kde_bandwidth"].get<double>();
        }
        if (doc.contains("thresholds")) {
            const auto t = doc["thresholds"].get<std::vector<double>>();
            if (t.size() != 2) throw validation_error("'thresholds' needs exactly two values");
            cfg.thresholds = {t[0], t[1]};
        }
        if (doc.contains("bands")) {
            for (const json& b : doc["bands"]) {
                reject_unknown_keys(b, "band", {"lower", "upper", "upper_inclusive", "approach"});
                BandSpec spec;
                spec.band = {b.at("lower").get<double>(), b.at("upper").get<double>(), b.value("upper_inclusive", false)};
                spec.approach = parse_approach(b.value("approach", 1));
                cfg.bands.push_back(spec);
            }
        } else {
            cfg.bands = default_bands();
        }
        if (doc.contains("tree")) {
            const json& t = doc["tree"];
            reject_unknown_keys(t, "tree", {"max_depth", "min_samples_split", "min_samples_leaf", "prune_alpha"});
            cfg.tree.max_depth = t.value("max_depth", cfg.tree.max_depth);
            cfg.tree.min_samples_split = t.value("min_samples_split", cfg.tree.min_samples_split);
            cfg.tree.min_samples_leaf = t.value("min_samples_leaf", cfg.tree.min_samples_leaf);
            cfg.prune_alpha = t.value("prune_alpha", cfg.prune_alpha);
        }
        if (doc.contains("density_samples")) cfg.density_samples = doc["density_samples"].get<std::size_t>();
    } catch (const json::exception& e) {
        throw validation_error(std::string("pipeline config: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return parse_pipeline_config(detail::read_text_file(path), path.parent_path());
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.components == 0) throw validation_error("'components' must be at least 1");
    if (!(cfg.em.tolerance > 0.0)) throw validation_error("EM tolerance must be positive");
    if (cfg.em.max_iterations == 0) throw validation_error("EM max_iterations must be at least 1");
    if (!(cfg.em.min_stddev > 0.0)) throw validation_error("EM min_stddev must be positive");
    if (cfg.fixed_bandwidth && !(*cfg.fixed_bandwidth > 0.0)) throw validation_error("kde_bandwidth must be positive");
    validate_thresholds(cfg.thresholds);
    for (const auto& b : cfg.bands) validate_band(b.band);
    if (cfg.density_samples < 2) throw validation_error("density_samples must be at least 2");
    if (!(cfg.prune_alpha >= 0.0)) throw validation_error("prune_alpha must be non-negative");
}

PreparedInputs prepare_inputs(const PipelineConfig& cfg) {
    PreparedInputs in;
    in.source_questionnaire = in_stage("load", [&] { return load_questionnaire_file(cfg.questionnaire_path); });
    WeightMatrix wm = in_stage("load", [&] { return load_weight_matrix_file(cfg.weights_path); });

    in_stage("merge", [&] {
        Questionnaire q = in.source_questionnaire;
        for (const MergeRule& rule : in.source_questionnaire.merge_rules()) {
            wm = apply_merge(wm, rule, q);
            q = merge_questionnaire(q, rule);
        }
        in.questionnaire = std::move(q);
    });

    in_stage("weights", [&] {
        validate_weights(wm, in.questionnaire);
        in.weights = project_to_schema(wm, in.questionnaire);
        in.means = mean_weights(in.weights);
    });

    in_stage("enumerate", [&] {
        in.cases = enumerate_cases(in.questionnaire);
        const std::vector<double> w = in.means.by_position(in.questionnaire);
        std::vector<double> raw;
        raw.reserve(in.cases.size());
        for (const CaseVector& c : in.cases) raw.push_back(weight_sum(c, w));
        in.sums = normalize_sums(raw);
    });
    return in;
}

FittedModels fit_models(const PreparedInputs& inputs, const PipelineConfig& cfg, bool run_selection) {
    return in_stage("fit", [&] {
        FittedModels m;
        const std::vector<double>& data = inputs.sums.normalized;
        if (run_selection && cfg.m_max > 0) m.selection = select_component_count(data, cfg.m_max, cfg.em);
        if (cfg.fixed_gmm) {
            m.gmm = GaussianMixture(*cfg.fixed_gmm);
        } else if (m.selection && cfg.components <= m.selection->fits.size()) {
            const EmFit& fit = m.selection->fits[cfg.components - 1];
            m.gmm = fit.model;
            m.scoring_fit = fit.report;
        } else {
            EmFit fit = em_fit(data, cfg.components, cfg.em);
            m.gmm = fit.model;
            m.scoring_fit = fit.report;
        }
        m.bandwidth = silverman_bandwidth_details(data);
        m.bandwidth_fixed = cfg.fixed_bandwidth.has_value();
        m.kde = KdeModel(data, cfg.fixed_bandwidth.value_or(m.bandwidth.bandwidth));
        return m;
    });
}

ModelBundle make_bundle(const PreparedInputs& inputs, const FittedModels& models, const PipelineConfig& cfg) {
    return {inputs.questionnaire, inputs.means, inputs.sums.bounds, models.gmm, models.kde, cfg.thresholds};
}

ScoreTable score_cases(const PreparedInputs& inputs, const FittedModels& models, const PipelineConfig& cfg) {
    return in_stage("score", [&] {
        return elicit_probabilities(inputs.questionnaire, inputs.cases, inputs.sums, models.gmm, models.kde,
                                    cfg.thresholds);
    });
}

TreeResult explain_with_tree(const PreparedInputs& inputs, const ScoreTable& scores, const PipelineConfig& cfg) {
    return in_stage("tree", [&] {
        std::vector<Category> labels;
        labels.reserve(scores.rows.size());
        for (const auto& row : scores.rows) labels.push_back(row.category);
        DecisionTree full = fit_decision_tree(inputs.questionnaire, inputs.cases, labels, cfg.tree);
        DecisionTree pruned = prune_tree(full, cfg.prune_alpha);
        return TreeResult{std::move(full), std::move(pruned)};
    });
}

std::vector<BandResult> analyze_bands(const ScoreTable& scores, const PipelineConfig& cfg) {
    return in_stage("lattice", [&] {
        std::vector<BandResult> out;
        for (const BandSpec& spec : cfg.bands) {
            FormalContext ctx = build_band_context(scores, spec.band, spec.approach);
            ConceptLattice lattice = build_lattice(ctx, enumerate_concepts(ctx));
            out.push_back({spec, std::move(ctx), std::move(lattice)});
        }
        return out;
    });
}

std::string cases_to_csv(const PreparedInputs& inputs) {
    std::string out = "case_id";
    for (const auto& id : inputs.questionnaire.answer_ids()) out += "," + id;
    out += ",raw_sum,normalized_sum\n";
    for (std::size_t i = 0; i < inputs.cases.size(); ++i) {
        out += std::to_string(canonical_index(inputs.cases[i], inputs.questionnaire));
        for (auto bit : inputs.cases[i].assignment) out += bit ? ",1" : ",0";
        out += "," + detail::format_double(inputs.sums.raw[i]) + "," + detail::format_double(inputs.sums.normalized[i]) + "\n";
    }
    return out;
}

std::string fit_report_to_json(const PreparedInputs& inputs, const FittedModels& models, const PipelineConfig& cfg) {
    json doc;
    doc["cases"] = inputs.cases.size();
    doc["doctors"] = inputs.weights.doctors().size();
    json means = json::object();
    for (std::size_t i = 0; i < inputs.means.answer_ids().size(); ++i) {
        means[inputs.means.answer_ids()[i]] = inputs.means.values()[i];
    }
    doc["mean_weights"] = std::move(means);
    doc["weight_sum_bounds"] = {{"min", inputs.sums.bounds.min}, {"max", inputs.sums.bounds.max}};

    if (models.selection) {
        json candidates = json::array();
        for (const EmFit& f : models.selection->fits) candidates.push_back(fit_report_json(f.report, f.model));
        doc["model_selection"] = {{"candidates", candidates},
                                  {"selected_by_bic", models.selection->by_bic},
                                  {"selected_by_aic", models.selection->by_aic},
                                  {"criteria_agree", models.selection->criteria_agree}};
    }
    json scoring;
    scoring["source"] = models.scoring_fit ? "em_fit" : "fixed";
    json comps = json::array();
    for (const auto& c : models.gmm.components()) comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
    scoring["parameters"] = comps;
    const InformationCriteria ic = information_criteria(models.gmm, inputs.sums.normalized);
    scoring["log_likelihood"] = ic.log_likelihood;
    scoring["aic"] = ic.aic;
    scoring["bic"] = ic.bic;
    if (models.scoring_fit) {
        scoring["iterations"] = models.scoring_fit->iterations;
        scoring["converged"] = models.scoring_fit->converged;
    }
    doc["scoring_mixture"] = scoring;
    doc["em_options"] = {{"tolerance", cfg.em.tolerance},
                         {"max_iterations", cfg.em.max_iterations},
                         {"min_stddev", cfg.em.min_stddev},
                         {"restarts", cfg.em.restarts},
                         {"seed", cfg.em.seed}};
    doc["kde"] = {{"bandwidth", models.kde.bandwidth()},
                  {"source", models.bandwidth_fixed ? "fixed" : "silverman"},
                  {"silverman_bandwidth", models.bandwidth.bandwidth},
                  {"stddev", models.bandwidth.stddev},
                  {"stddev_convention", std::string(to_string(models.bandwidth.stddev_convention))},
                  {"iqr", models.bandwidth.iqr},
                  {"quantile_method", "linear interpolation between order statistics"},
                  {"iqr_term_used", models.bandwidth.iqr_term_used}};
    doc["thresholds"] = {cfg.thresholds.medium, cfg.thresholds.high};
    return doc.dump(2) + "\n";
}

std::string density_samples_to_csv(const FittedModels& models, std::size_t samples) {
    std::string out = "x,gmm_pdf";
    for (std::size_t k = 0; k < models.gmm.size(); ++k) out += ",gmm_component_" + std::to_string(k + 1) + "_pdf";
    out += ",kde_pdf,p_gmm_cdf,p_kde_cdf,p_posterior\n";
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(samples - 1);
        out += detail::format_double(x) + "," + detail::format_double(models.gmm.pdf(x));
        for (std::size_t k = 0; k < models.gmm.size(); ++k) {
            out += "," + detail::format_double(models.gmm.weighted_component_pdf(k, x));
        }
        const ApproachScores s = elicit_scores(x, models.gmm, models.kde);
        out += "," + detail::format_double(models.kde.pdf(x)) + "," + detail::format_double(s.gmm_cdf) + "," +
               detail::format_double(s.kde_cdf) + "," + detail::format_double(s.posterior) + "\n";
    }
    return out;
}

std::string supports_to_csv(const FormalContext& context) {
    std::string out = "attributes,objects\n";
    for (const AttributeSupport& s : attribute_supports(context)) {
        std::string names;
        for (std::size_t a : s.attributes) {
            if (!names.empty()) names += '+';
            names += context.attributes()[a];
        }
        out += names + "," + std::to_string(s.objects) + "\n";
    }
    return out;
}

std::string band_summary_to_csv(const std::vector<BandResult>& bands) {
    std::string out = "band,interval,lower,upper,upper_inclusive,approach,objects,concepts,edges\n";
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const BandResult& b = bands[i];
        out += std::to_string(i) + ",\"" + band_label(b.spec.band) + "\"," + detail::format_double(b.spec.band.lower) + "," +
               detail::format_double(b.spec.band.upper) + "," + (b.spec.band.upper_inclusive ? "1" : "0") + "," +
               std::to_string(static_cast<int>(b.spec.approach)) + "," + std::to_string(b.context.object_count()) +
               "," + std::to_string(b.lattice.concepts.size()) + "," + std::to_string(b.lattice.edges.size()) + "\n";
    }
    return out;
}

std::string outputs::band_file(std::size_t index, std::string_view suffix) {
    return "band_" + std::to_string(index) + std::string(suffix);
}

PipelineResult run_pipeline(const PipelineConfig& cfg, Stage until) {
    in_stage("config", [&] { validate_config(cfg); });
    auto reached = [&](Stage s) { return until == Stage::report || s <= until; };

    PipelineResult r;
    r.inputs = prepare_inputs(cfg);
    if (reached(Stage::fit)) r.models = fit_models(r.inputs, cfg);
    if (reached(Stage::score)) r.scores = score_cases(r.inputs, r.models, cfg);
    if (reached(Stage::tree) && until != Stage::lattice) r.trees = explain_with_tree(r.inputs, r.scores, cfg);
    if (reached(Stage::lattice) && until != Stage::tree) r.bands = analyze_bands(r.scores, cfg);

    in_stage("write", [&] {
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec) throw runtime_failure("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());
        auto put = [&](std::string_view name, const std::string& content) {
            const auto path = cfg.output_dir / name;
            detail::write_text_file(path, content);
            r.written.push_back(path);
        };
        put(outputs::cases, cases_to_csv(r.inputs));
        if (reached(Stage::fit)) {
            put(outputs::fit_report, fit_report_to_json(r.inputs, r.models, cfg));
            put(outputs::model, bundle_to_json(make_bundle(r.inputs, r.models, cfg)));
            put(outputs::density, density_samples_to_csv(r.models, cfg.density_samples));
        }
        if (reached(Stage::score)) put(outputs::scores, scores_to_csv(r.scores));
        if (r.trees) {
            put(outputs::tree_full, tree_to_dot(r.trees->full));
            put(outputs::tree_pruned, tree_to_dot(r.trees->pruned));
        }
        for (std::size_t i = 0; i < r.bands.size(); ++i) {
            put(outputs::band_file(i, ".cxt"), context_to_cxt(r.bands[i].context));
            put(outputs::band_file(i, "_lattice.dot"), lattice_to_dot(r.bands[i].lattice, r.bands[i].context));
            put(outputs::band_file(i, "_supports.csv"), supports_to_csv(r.bands[i].context));
        }
        if (reached(Stage::lattice) && until != Stage::tree) put(outputs::band_summary, band_summary_to_csv(r.bands));
    });
    return r;
}

}  // namespace elicit
