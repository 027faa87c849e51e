#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/case_space.hpp"
#include "elicit/category.hpp"
#include "elicit/decision_tree.hpp"
#include "elicit/formal_context.hpp"
#include "elicit/gmm.hpp"
#include "elicit/kde.hpp"
#include "elicit/model_bundle.hpp"
#include "elicit/questionnaire.hpp"
#include "elicit/score_table.hpp"

namespace elicit {

struct BandSpec {
    ProbabilityBand band;
    Approach approach = Approach::gmm_cdf;
};

struct PipelineConfig {
    std::filesystem::path questionnaire_path;
    std::filesystem::path weights_path;
    std::filesystem::path output_dir = "out";

    std::size_t components = 2;  // mixture used for scoring
    std::size_t m_max = 4;       // candidates reported by model selection
    EmOptions em;
    // Fixed mixture parameters replace the EM fit for scoring when set.
    std::optional<std::vector<GaussianComponent>> fixed_gmm;
    // Fixed KDE bandwidth replaces Silverman's rule when set.
    std::optional<double> fixed_bandwidth;

    CategoryThresholds thresholds;
    std::vector<BandSpec> bands;  // defaults to ten 0.1-wide bands on approach 1
    TreeParams tree;
    double prune_alpha = 0.005;
    std::size_t density_samples = 1001;
};

std::vector<BandSpec> default_bands();

// Relative paths in the document resolve against `base_dir`.
PipelineConfig parse_pipeline_config(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void validate_config(const PipelineConfig& cfg);

struct PreparedInputs {
    Questionnaire source_questionnaire;  // as loaded
    Questionnaire questionnaire;         // after merge rules
    WeightMatrix weights;                // after merge rules
    AnswerWeights means;
    CaseSet cases;
    WeightSumTable sums;
};

struct FittedModels {
    std::optional<ComponentSelection> selection;
    std::optional<FitReport> scoring_fit;  // empty when the mixture is fixed
    GaussianMixture gmm;
    BandwidthEstimate bandwidth;
    bool bandwidth_fixed = false;
    KdeModel kde;
};

struct TreeResult {
    DecisionTree full;
    DecisionTree pruned;
};

struct BandResult {
    BandSpec spec;
    FormalContext context;
    ConceptLattice lattice;
};

struct PipelineResult {
    PreparedInputs inputs;
    FittedModels models;
    ScoreTable scores;
    std::optional<TreeResult> trees;
    std::vector<BandResult> bands;
    std::vector<std::filesystem::path> written;
};

PreparedInputs prepare_inputs(const PipelineConfig& cfg);
FittedModels fit_models(const PreparedInputs& inputs, const PipelineConfig& cfg, bool run_selection = true);
ModelBundle make_bundle(const PreparedInputs& inputs, const FittedModels& models, const PipelineConfig& cfg);
ScoreTable score_cases(const PreparedInputs& inputs, const FittedModels& models, const PipelineConfig& cfg);
TreeResult explain_with_tree(const PreparedInputs& inputs, const ScoreTable& scores, const PipelineConfig& cfg);
std::vector<BandResult> analyze_bands(const ScoreTable& scores, const PipelineConfig& cfg);

// Text artifacts. Every one is a pure function of its inputs.
std::string cases_to_csv(const PreparedInputs& inputs);
std::string fit_report_to_json(const PreparedInputs& inputs, const FittedModels& models, const PipelineConfig& cfg);
std::string density_samples_to_csv(const FittedModels& models, std::size_t samples);
std::string supports_to_csv(const FormalContext& context);
std::string band_summary_to_csv(const std::vector<BandResult>& bands);

// Fixed output file names under cfg.output_dir.
namespace outputs {
inline constexpr std::string_view cases = "cases.csv";
inline constexpr std::string_view scores = "scores.csv";
inline constexpr std::string_view fit_report = "fit_report.json";
inline constexpr std::string_view model = "model.json";
inline constexpr std::string_view density = "density_samples.csv";
inline constexpr std::string_view tree_full = "tree_full.dot";
inline constexpr std::string_view tree_pruned = "tree_pruned.dot";
inline constexpr std::string_view band_summary = "bands.csv";
std::string band_file(std::size_t index, std::string_view suffix);  // band_<index><suffix>
}  // namespace outputs

// Stages in execution order; running a stage runs everything before it.
enum class Stage { enumerate, fit, score, tree, lattice, report };

// Runs the stages up to `until` and writes their artifacts. Errors carry the
// failing stage name as a prefix.
PipelineResult run_pipeline(const PipelineConfig& cfg, Stage until = Stage::report);

}  // namespace elicit
