#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrs/evaluation.hpp"
#include "asrs/types.hpp"

namespace asrs {

// max(p, 1 - p). Throws OutOfRange outside [0, 1].
double conf_overall(double prob);

struct ConfidenceRow {
    std::string task;
    GroupLabel group = GroupLabel::G1;
    std::size_t n = 0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    Metric mean_overall;
    Metric mean_pos;
    Metric mean_neg;
};

std::vector<ConfidenceRow> confidence_table(std::span<const GroupAssignment> groups,
                                            std::span<const PredictionRecord> preds,
                                            std::span<const LabelRecord> labels,
                                            const std::string& task);

// The group whose mean overall confidence is the highest while its recall is
// the lowest. Ties count as extremes; if several groups qualify the highest
// group label is returned. Groups with an undefined recall or confidence are
// not candidates.
std::optional<GroupLabel> overconfident_unstable_group(std::span<const MetricsRow> metrics,
                                                       std::span<const ConfidenceRow> confidence);

}  // namespace asrs
