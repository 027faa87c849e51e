#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "elicit/error.hpp"
#include "elicit/model_bundle.hpp"
#include "elicit/pipeline.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_validation = 2;

struct Overrides {
    std::string config;
    std::optional<std::string> output_dir;
    std::optional<std::size_t> components;
    std::optional<std::size_t> m_max;
    std::vector<double> thresholds;
    std::optional<double> prune_alpha;
    std::optional<double> bandwidth;
};

void add_pipeline_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config, "Pipeline config file (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--output-dir", o.output_dir, "Directory for generated artifacts");
    cmd->add_option("--components", o.components, "Mixture components used for scoring");
    cmd->add_option("--m-max", o.m_max, "Largest component count tried during model selection (0 skips it)");
    cmd->add_option("--thresholds", o.thresholds, "MEDIUM and HIGH category thresholds")->expected(2);
    cmd->add_option("--prune-alpha", o.prune_alpha, "Cost-complexity pruning strength");
    cmd->add_option("--kde-bandwidth", o.bandwidth, "Fixed KDE bandwidth instead of Silverman's rule");
}

elicit::PipelineConfig resolve_config(const Overrides& o) {
    elicit::PipelineConfig cfg = elicit::load_pipeline_config(o.config);
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (o.components) cfg.components = *o.components;
    if (o.m_max) cfg.m_max = *o.m_max;
    if (o.thresholds.size() == 2) cfg.thresholds = {o.thresholds[0], o.thresholds[1]};
    if (o.prune_alpha) cfg.prune_alpha = *o.prune_alpha;
    if (o.bandwidth) cfg.fixed_bandwidth = *o.bandwidth;
    elicit::validate_config(cfg);
    return cfg;
}

void print_written(const elicit::PipelineResult& r) {
    for (const auto& p : r.written) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expert-elicited probability scoring for questionnaire cases"};
    app.require_subcommand(1);

    Overrides o;
    struct StageCommand {
        const char* name;
        const char* help;
        elicit::Stage stage;
    };
    const StageCommand stages[] = {
        {"enumerate", "Enumerate cases and their weight sums", elicit::Stage::enumerate},
        {"fit", "Fit the mixture and KDE densities", elicit::Stage::fit},
        {"score", "Score every case with the three approaches", elicit::Stage::score},
        {"tree", "Fit and prune the decision tree explainer", elicit::Stage::tree},
        {"lattice", "Build formal contexts and concept lattices per band", elicit::Stage::lattice},
        {"report", "Run every stage and write all artifacts", elicit::Stage::report},
    };
    std::optional<elicit::Stage> chosen;
    for (const auto& s : stages) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_pipeline_options(cmd, o);
        cmd->callback([&chosen, stage = s.stage] { chosen = stage; });
    }

    std::string model_path;
    std::vector<std::string> answers;
    CLI::App* patient = app.add_subcommand("score-patient", "Score one answer set against a saved model bundle");
    patient->add_option("-m,--model", model_path, "Model bundle written by fit/report")->required()->check(CLI::ExistingFile);
    patient->add_option("-a,--answers", answers, "Answer ids that are true for the patient")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (chosen) {
            print_written(elicit::run_pipeline(resolve_config(o), *chosen));
        } else {
            const elicit::ModelBundle bundle = elicit::load_bundle(model_path);
            std::cout << elicit::patient_score_to_json(elicit::score_patient(answers, bundle));
        }
    } catch (const elicit::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
