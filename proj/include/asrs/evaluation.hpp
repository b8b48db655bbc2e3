#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrs/types.hpp"

namespace asrs {

// A metric that may be undefined; `reason` explains why when `value` is empty.
struct Metric {
    std::optional<double> value;
    std::string reason;

    static Metric of(double v) { return Metric{v, {}}; }
    static Metric undefined(std::string why) { return Metric{std::nullopt, std::move(why)}; }
    bool defined() const { return value.has_value(); }

    friend bool operator==(const Metric&, const Metric&) = default;
};

// One prediction joined with its ground truth.
struct Outcome {
    double prob = 0.0;
    int label = 0;
};

struct LabeledPrediction {
    SampleId sample_id;
    double prob = 0.0;
    int label = 0;
};

// Joins predictions and labels for one task, in prediction-file order.
// Throws MissingLabel / MissingPrediction for unmatched (sample_id, task) keys.
std::vector<LabeledPrediction> match_task(std::span<const PredictionRecord> preds,
                                          std::span<const LabelRecord> labels,
                                          const std::string& task);

// All (sample_id, task) pairs of both files, in prediction-file order.
std::vector<Outcome> match_all(std::span<const PredictionRecord> preds,
                               std::span<const LabelRecord> labels);

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// A prediction is a positive call iff prob >= threshold.
ConfusionCounts confusion(std::span<const Outcome> outcomes, double threshold);
ConfusionCounts confusion(std::span<const PredictionRecord> preds,
                          std::span<const LabelRecord> labels, double threshold);

struct PrecisionRecall {
    Metric precision;
    Metric recall;
};

PrecisionRecall precision_recall(const ConfusionCounts& c);

// Mann-Whitney U of the positives: pairs where the positive scores higher
// count 1, ties count 1/2. Computed from average ranks in O(n log n). The value
// is always an integer or half-integer, so it is exact in double arithmetic
// for any realistic n.
struct RankStatistic {
    double u = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

RankStatistic rank_statistic(std::span<const Outcome> outcomes);

// U / (n_pos * n_neg); undefined when either class is empty.
Metric auroc(std::span<const Outcome> outcomes);
Metric auroc(std::span<const PredictionRecord> preds, std::span<const LabelRecord> labels);

// Indices (ascending) of a subset whose prevalence matches target_prev.
// Over-prevalent groups keep every negative and a uniform subset of
// floor(t * n_neg / (1 - t)) positives; under-prevalent groups keep every
// positive and floor(n_pos * (1 - t) / t) negatives. Throws DegenerateGroup
// for single-class input and UnreachableTarget when the target lies outside
// (0, 1) or would keep no sample of the subsampled class.
std::vector<std::size_t> resample_to_prevalence(std::span<const Outcome> samples,
                                                double target_prev, std::uint64_t seed);

// Seed of one resampling repetition: SplitMix64 over seed, group and rep, so
// adding repetitions never changes earlier ones.
std::uint64_t derive_rep_seed(std::uint64_t seed, GroupLabel group, std::uint64_t rep);

struct MetricsRow {
    std::string task;
    GroupLabel group = GroupLabel::G1;
    std::size_t n = 0;
    std::size_t n_pos = 0;
    Metric prevalence;
    ConfusionCounts counts;
    Metric precision;
    Metric recall;
    Metric auroc;
    Metric recall_resampled;
    Metric auroc_resampled;
    // Standard deviation across repetitions, when the resampled metric is defined.
    std::optional<double> recall_resampled_sd;
    std::optional<double> auroc_resampled_sd;
};

struct StratifiedOptions {
    double threshold = 0.5;
    GroupLabel anchor = GroupLabel::G4;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

// One row per group (G1..G4, always four rows). Every prediction of `task`
// must belong to a group (UngroupedSample otherwise). The anchor group reports
// no resampled columns; every other group averages recall and AUROC over
// `reps` resamples to the anchor's prevalence.
std::vector<MetricsRow> evaluate_stratified(std::span<const GroupAssignment> groups,
                                            std::span<const PredictionRecord> preds,
                                            std::span<const LabelRecord> labels,
                                            const std::string& task,
                                            const StratifiedOptions& options);

}  // namespace asrs
