#include <iostream>

#include "CLI11.hpp"
#include "asrs/error.hpp"
#include "asrs/metadata.hpp"
#include "asrs/parallel.hpp"
#include "asrs/pipeline.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitLeakage = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Augmentation-sensitivity risk scoring and stratified reliability reports"};
    app.set_version_flag("--version", std::string(asrs::kToolName) + " " + asrs::kToolVersion);
    app.require_subcommand(1);

    std::string embeddings, scores, thresholds, out;

    auto* score = app.add_subcommand("score", "Compute per-sample ASRS scores from embeddings");
    score->add_option("--embeddings", embeddings, "Embedding file (binary or JSONL)")->required();
    score->add_option("--out", out, "Scores CSV")->required();

    auto* fit = app.add_subcommand("thresholds", "Fit quartile thresholds on validation scores");
    fit->add_option("--scores", scores, "Validation scores CSV")->required();
    fit->add_option("--out", out, "Thresholds JSON")->required();

    auto* group = app.add_subcommand("group", "Assign scores to G1..G4");
    group->add_option("--scores", scores, "Scores CSV of the split to stratify")->required();
    group->add_option("--thresholds", thresholds, "Thresholds JSON")->required();
    group->add_option("--out", out, "Groups CSV")->required();

    asrs::ReportPaths report_paths;
    asrs::ReportSettings settings;
    std::string cohort, anchor = "G4", format = "json";
    auto* report = app.add_subcommand("report", "Stratified metrics, confidence and demographics");
    report->add_option("--groups", report_paths.groups, "Groups CSV")->required();
    report->add_option("--predictions", report_paths.predictions, "Predictions CSV")->required();
    report->add_option("--labels", report_paths.labels, "Labels CSV")->required();
    report->add_option("--cohort", cohort, "Cohort CSV (enables the demographics section)");
    report->add_option("--tasks", settings.tasks, "Comma-separated tasks (default: all)")->delimiter(',');
    report->add_option("--threshold", settings.threshold, "Positive call when prob >= threshold")
        ->capture_default_str();
    report->add_option("--resample-anchor", anchor, "Group whose prevalence the others are resampled to")
        ->check(CLI::IsMember({"G1", "G2", "G3", "G4"}))
        ->capture_default_str();
    report->add_option("--reps", settings.reps, "Resampling repetitions")->capture_default_str();
    report->add_option("--seed", settings.seed, "Resampling seed")->required();
    report->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    report->add_option("--model", settings.model, "Model name shown in tables")->capture_default_str();
    report->add_option("--out", report_paths.out, "Report file")->required();

    asrs::SynthConfig synth_config;
    std::string out_dir;
    std::vector<double> miss_rates;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with known instability coupling");
    synth->add_option("--out-dir", out_dir, "Output directory")->required();
    synth->add_option("--seed", synth_config.seed, "Generator seed")->required();
    synth->add_option("--n-val", synth_config.n_val)->capture_default_str();
    synth->add_option("--n-test", synth_config.n_test)->capture_default_str();
    synth->add_option("--dim", synth_config.dim)->capture_default_str();
    synth->add_option("--shift-log-mean", synth_config.shift_log_mean)->capture_default_str();
    synth->add_option("--shift-log-sd", synth_config.shift_log_sd)->capture_default_str();
    synth->add_option("--view-noise", synth_config.view_noise)->capture_default_str();
    synth->add_option("--miss-rates", miss_rates, "Four comma-separated miss rates, G1..G4")
        ->delimiter(',')
        ->expected(4);
    synth->add_option("--prevalence", synth_config.prevalence)->capture_default_str();
    synth->add_option("--confidence-inflation", synth_config.confidence_inflation)->capture_default_str();
    synth->add_option("--false-positive-rate", synth_config.false_positive_rate)->capture_default_str();
    synth->add_option("--tasks", synth_config.tasks, "Comma-separated task names")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        const unsigned workers = asrs::worker_count_from_env();
        if (*score) {
            asrs::run_score(embeddings, out, workers);
        } else if (*fit) {
            asrs::run_thresholds(scores, out);
        } else if (*group) {
            asrs::run_group(scores, thresholds, out, workers);
        } else if (*report) {
            if (!cohort.empty()) report_paths.cohort = cohort;
            settings.anchor = *asrs::parse_group(anchor);
            asrs::run_report(report_paths, settings, *asrs::parse_report_format(format), workers);
        } else if (*synth) {
            if (!miss_rates.empty()) std::copy(miss_rates.begin(), miss_rates.end(), synth_config.miss_rate_by_quartile.begin());
            asrs::run_synth(synth_config, out_dir);
        }
    } catch (const asrs::Error& e) {
        std::cerr << "asrs: error: " << e.what() << "\n";
        return e.code() == asrs::ErrorCode::LeakageGuard ? kExitLeakage : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "asrs: error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
