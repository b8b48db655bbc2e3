#include "asrs/confidence.hpp"

#include <array>
#include <unordered_map>

#include "asrs/error.hpp"

namespace asrs {

double conf_overall(double prob) {
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "probability outside [0, 1]");
    }
    return std::max(prob, 1.0 - prob);
}

std::vector<ConfidenceRow> confidence_table(std::span<const GroupAssignment> groups,
                                            std::span<const PredictionRecord> preds,
                                            std::span<const LabelRecord> labels,
                                            const std::string& task) {
    std::unordered_map<std::string, GroupLabel> group_of;
    group_of.reserve(groups.size());
    for (const auto& g : groups) group_of.emplace(g.sample_id.str(), g.group);

    struct Acc {
        double sum_pos = 0.0;
        double sum_neg = 0.0;
        std::size_t n_pos = 0;
        std::size_t n_neg = 0;
    };
    std::array<Acc, kGroupCount> acc{};
    for (const auto& m : match_task(preds, labels, task)) {
        const auto it = group_of.find(m.sample_id.str());
        if (it == group_of.end()) {
            throw Error(ErrorCode::UngroupedSample,
                        "sample '" + m.sample_id.str() + "' has a prediction but no group");
        }
        auto& a = acc[index_of(it->second)];
        const double c = conf_overall(m.prob);
        if (m.label == 1) {
            a.sum_pos += c;
            ++a.n_pos;
        } else {
            a.sum_neg += c;
            ++a.n_neg;
        }
    }

    std::vector<ConfidenceRow> rows;
    for (GroupLabel g : kAllGroups) {
        const auto& a = acc[index_of(g)];
        ConfidenceRow row;
        row.task = task;
        row.group = g;
        row.n_pos = a.n_pos;
        row.n_neg = a.n_neg;
        row.n = a.n_pos + a.n_neg;
        row.mean_overall = row.n == 0 ? Metric::undefined("empty group")
                                      : Metric::of((a.sum_pos + a.sum_neg) / static_cast<double>(row.n));
        row.mean_pos = a.n_pos == 0 ? Metric::undefined("no positives")
                                    : Metric::of(a.sum_pos / static_cast<double>(a.n_pos));
        row.mean_neg = a.n_neg == 0 ? Metric::undefined("no negatives")
                                    : Metric::of(a.sum_neg / static_cast<double>(a.n_neg));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<GroupLabel> overconfident_unstable_group(std::span<const MetricsRow> metrics,
                                                       std::span<const ConfidenceRow> confidence) {
    std::optional<GroupLabel> flagged;
    for (const auto& c : confidence) {
        if (!c.mean_overall.defined()) continue;
        const MetricsRow* m = nullptr;
        for (const auto& row : metrics) {
            if (row.group == c.group) m = &row;
        }
        if (m == nullptr || !m->recall.defined()) continue;

        bool max_conf = true;
        bool min_recall = true;
        for (const auto& other : confidence) {
            if (other.mean_overall.defined() && *other.mean_overall.value > *c.mean_overall.value) {
                max_conf = false;
            }
        }
        for (const auto& other : metrics) {
            if (other.recall.defined() && *other.recall.value < *m->recall.value) min_recall = false;
        }
        // Highest group wins when several hold both extremes.
        if (max_conf && min_recall) flagged = c.group;
    }
    return flagged;
}

}  // namespace asrs
