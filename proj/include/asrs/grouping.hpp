#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrs/metadata.hpp"
#include "asrs/types.hpp"

namespace asrs {

inline constexpr const char* kQuantileMethod = "linear_interp_q7";

// Quartile cut points fitted on validation scores. source_digest identifies
// the scores table the thresholds were fitted on (content digest, see
// table_content_digest) and backs the leakage guard.
struct GroupThresholds {
    double tau25 = 0.0;
    double tau50 = 0.0;
    double tau75 = 0.0;
    std::size_t n_val = 0;
    std::string method = kQuantileMethod;
    std::optional<std::string> source_digest;

    friend bool operator==(const GroupThresholds&, const GroupThresholds&) = default;
};

// Quantile at probability q of an ascending-sorted sample: linear
// interpolation between order statistics at position (n - 1) * q.
double sorted_quantile(std::span<const double> sorted, double q);

// Input order is irrelevant. Throws TooFewSamples (n < 4), NonFiniteScore.
GroupThresholds fit_thresholds(std::span<const ScoreRecord> val_scores);

// G1: s <= tau25, G2: tau25 < s <= tau50, G3: tau50 < s <= tau75, G4: s > tau75.
GroupLabel assign_group(double score, const GroupThresholds& thr);

std::vector<GroupAssignment> assign_batch(std::span<const ScoreRecord> scores,
                                          const GroupThresholds& thr, unsigned workers = 1);

// Throws BadValue when the thresholds break their invariants.
void validate(const GroupThresholds& thr);

struct ThresholdsFile {
    GroupThresholds thresholds;
    std::optional<RunMetadata> metadata;
};

std::string format_thresholds_json(const GroupThresholds& thr, const RunMetadata* meta = nullptr);
ThresholdsFile parse_thresholds_json(std::string_view text);
ThresholdsFile read_thresholds(const std::filesystem::path& path);

}  // namespace asrs
