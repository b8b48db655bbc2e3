#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "asrs/types.hpp"
#include "json.hpp"

namespace asrs {

struct SynthConfig {
    std::uint64_t seed = 17;
    std::size_t n_val = 2000;
    std::size_t n_test = 2000;
    std::uint32_t dim = 16;
    // Per-sample shift magnitude delta ~ lognormal(shift_log_mean, shift_log_sd).
    double shift_log_mean = 0.0;
    double shift_log_sd = 0.5;
    // Optional isotropic Gaussian noise added to each rotated view.
    double view_noise = 0.0;
    // Probability that a positive in true quartile q gets a low probability.
    std::array<double, 4> miss_rate_by_quartile{0.2, 0.25, 0.3, 0.45};
    double prevalence = 0.2;
    // Pushes the low probabilities of negatives toward 0 as the quartile grows.
    double confidence_inflation = 1.0;
    double false_positive_rate = 0.1;
    std::vector<std::string> tasks{"finding"};
};

// Throws InvalidArgument when a field is out of range.
void validate(const SynthConfig& config);

nlohmann::ordered_json to_json(const SynthConfig& config);

struct SynthData {
    std::vector<EmbeddingRecord> val;
    std::vector<EmbeddingRecord> test;
    std::vector<PredictionRecord> predictions;  // test split only
    std::vector<LabelRecord> labels;
    std::vector<CohortRecord> cohort;
    // Intended score (4 * delta) per sample, same order as val / test.
    std::vector<double> val_intended;
    std::vector<double> test_intended;
    // Quartile of delta within the test split.
    std::vector<GroupLabel> test_quartile;
};

// Pure function of the config: one mt19937_64 stream consumed in a fixed order.
SynthData synthesize(const SynthConfig& config);

// Writes val_embeddings.asrs, test_embeddings.asrs, predictions.csv,
// labels.csv, cohort.csv and manifest.json into out_dir (created if needed)
// and returns the manifest.
nlohmann::ordered_json generate(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace asrs
