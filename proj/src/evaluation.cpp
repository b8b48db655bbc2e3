#include "asrs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "asrs/error.hpp"
#include "asrs/parallel.hpp"

namespace asrs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform integer in [0, n) from raw engine output by rejection, so the draw
// sequence does not depend on the standard library's distribution classes.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

// k distinct elements of `pool`, chosen uniformly (partial Fisher-Yates).
void choose(std::vector<std::size_t>& pool, std::size_t k, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(bounded(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

}  // namespace

std::vector<LabeledPrediction> match_task(std::span<const PredictionRecord> preds,
                                          std::span<const LabelRecord> labels,
                                          const std::string& task) {
    std::unordered_map<std::string, int> by_id;
    for (const auto& l : labels) {
        if (l.task == task) by_id.emplace(l.sample_id.str(), l.label);
    }
    std::vector<LabeledPrediction> out;
    std::size_t matched = 0;
    for (const auto& p : preds) {
        if (p.task != task) continue;
        const auto it = by_id.find(p.sample_id.str());
        if (it == by_id.end()) {
            throw Error(ErrorCode::MissingLabel,
                        "no label for sample '" + p.sample_id.str() + "' task '" + task + "'");
        }
        out.push_back({p.sample_id, p.prob, it->second});
        ++matched;
    }
    if (matched != by_id.size()) {
        std::unordered_map<std::string, bool> predicted;
        for (const auto& p : preds) {
            if (p.task == task) predicted.emplace(p.sample_id.str(), true);
        }
        for (const auto& l : labels) {
            if (l.task == task && !predicted.count(l.sample_id.str())) {
                throw Error(ErrorCode::MissingPrediction,
                            "no prediction for sample '" + l.sample_id.str() + "' task '" + task + "'");
            }
        }
    }
    return out;
}

std::vector<Outcome> match_all(std::span<const PredictionRecord> preds,
                               std::span<const LabelRecord> labels) {
    std::map<std::pair<std::string, std::string>, int> by_key;
    for (const auto& l : labels) by_key.emplace(std::make_pair(l.sample_id.str(), l.task), l.label);
    std::vector<Outcome> out;
    out.reserve(preds.size());
    for (const auto& p : preds) {
        const auto it = by_key.find({p.sample_id.str(), p.task});
        if (it == by_key.end()) {
            throw Error(ErrorCode::MissingLabel,
                        "no label for sample '" + p.sample_id.str() + "' task '" + p.task + "'");
        }
        out.push_back({p.prob, it->second});
    }
    if (out.size() != by_key.size()) {
        throw Error(ErrorCode::MissingPrediction,
                    std::to_string(by_key.size() - out.size()) + " labels have no prediction");
    }
    return out;
}

ConfusionCounts confusion(std::span<const Outcome> outcomes, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "threshold must lie in [0, 1]");
    }
    ConfusionCounts c;
    for (const auto& o : outcomes) {
        const bool called = o.prob >= threshold;
        if (o.label == 1) {
            ++(called ? c.tp : c.fn);
        } else {
            ++(called ? c.fp : c.tn);
        }
    }
    return c;
}

ConfusionCounts confusion(std::span<const PredictionRecord> preds,
                          std::span<const LabelRecord> labels, double threshold) {
    const auto outcomes = match_all(preds, labels);
    return confusion(outcomes, threshold);
}

PrecisionRecall precision_recall(const ConfusionCounts& c) {
    PrecisionRecall out;
    out.precision = c.tp + c.fp == 0
                        ? Metric::undefined("no positive calls")
                        : Metric::of(static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp));
    out.recall = c.tp + c.fn == 0
                     ? Metric::undefined("no positives")
                     : Metric::of(static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn));
    return out;
}

RankStatistic rank_statistic(std::span<const Outcome> outcomes) {
    std::vector<std::size_t> order(outcomes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return outcomes[a].prob < outcomes[b].prob; });

    RankStatistic st;
    // Twice the positive rank sum keeps every tied average rank an integer.
    std::uint64_t twice_rank_sum = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::size_t pos_in_block = 0;
        while (j < order.size() && outcomes[order[j]].prob == outcomes[order[i]].prob) {
            if (outcomes[order[j]].label == 1) ++pos_in_block;
            ++j;
        }
        // Ranks i+1 .. j share the average (i + 1 + j) / 2.
        twice_rank_sum += static_cast<std::uint64_t>(pos_in_block) * (i + 1 + j);
        st.n_pos += pos_in_block;
        i = j;
    }
    st.n_neg = outcomes.size() - st.n_pos;
    const std::uint64_t twice_min = static_cast<std::uint64_t>(st.n_pos) * (st.n_pos + 1);
    st.u = static_cast<double>(twice_rank_sum - twice_min) / 2.0;
    return st;
}

Metric auroc(std::span<const Outcome> outcomes) {
    const auto st = rank_statistic(outcomes);
    if (st.n_pos == 0) return Metric::undefined("no positives");
    if (st.n_neg == 0) return Metric::undefined("no negatives");
    return Metric::of(st.u / (static_cast<double>(st.n_pos) * static_cast<double>(st.n_neg)));
}

Metric auroc(std::span<const PredictionRecord> preds, std::span<const LabelRecord> labels) {
    const auto outcomes = match_all(preds, labels);
    return auroc(outcomes);
}

std::vector<std::size_t> resample_to_prevalence(std::span<const Outcome> samples,
                                                double target_prev, std::uint64_t seed) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (samples[i].label == 1 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        throw Error(ErrorCode::DegenerateGroup, "resampling needs both classes (" +
                                                    std::to_string(pos.size()) + " positives, " +
                                                    std::to_string(neg.size()) + " negatives)");
    }
    if (!(target_prev > 0.0 && target_prev < 1.0)) {
        throw Error(ErrorCode::UnreachableTarget, "target prevalence must lie strictly inside (0, 1)");
    }
    const double n_pos = static_cast<double>(pos.size());
    const double n_neg = static_cast<double>(neg.size());
    const double current = n_pos / (n_pos + n_neg);

    std::vector<std::size_t> kept;
    std::mt19937_64 rng(seed);
    // The small epsilon keeps exact integer fits (e.g. 9.999999999999998) from
    // flooring one below.
    constexpr double kFitSlack = 1e-9;
    if (current > target_prev) {
        const double want = std::floor(target_prev * n_neg / (1.0 - target_prev) + kFitSlack);
        if (want < 1.0) {
            throw Error(ErrorCode::UnreachableTarget,
                        "target prevalence would keep no positives");
        }
        const auto k = std::min(pos.size(), static_cast<std::size_t>(want));
        choose(pos, k, rng);
    } else if (current < target_prev) {
        const double want = std::floor(n_pos * (1.0 - target_prev) / target_prev + kFitSlack);
        if (want < 1.0) {
            throw Error(ErrorCode::UnreachableTarget,
                        "target prevalence would keep no negatives");
        }
        const auto k = std::min(neg.size(), static_cast<std::size_t>(want));
        choose(neg, k, rng);
    }
    kept.reserve(pos.size() + neg.size());
    kept.insert(kept.end(), pos.begin(), pos.end());
    kept.insert(kept.end(), neg.begin(), neg.end());
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::uint64_t derive_rep_seed(std::uint64_t seed, GroupLabel group, std::uint64_t rep) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(index_of(group)) + 1));
    h = splitmix64(h ^ rep);
    return h;
}

std::vector<MetricsRow> evaluate_stratified(std::span<const GroupAssignment> groups,
                                            std::span<const PredictionRecord> preds,
                                            std::span<const LabelRecord> labels,
                                            const std::string& task,
                                            const StratifiedOptions& options) {
    if (options.reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be at least 1");
    if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "threshold must lie in [0, 1]");
    }
    std::unordered_map<std::string, GroupLabel> group_of;
    group_of.reserve(groups.size());
    for (const auto& g : groups) group_of.emplace(g.sample_id.str(), g.group);

    const auto matched = match_task(preds, labels, task);
    std::array<std::vector<Outcome>, kGroupCount> by_group;
    for (const auto& m : matched) {
        const auto it = group_of.find(m.sample_id.str());
        if (it == group_of.end()) {
            throw Error(ErrorCode::UngroupedSample,
                        "sample '" + m.sample_id.str() + "' has a prediction but no group");
        }
        by_group[index_of(it->second)].push_back({m.prob, m.label});
    }

    std::vector<MetricsRow> rows;
    rows.reserve(kGroupCount);
    for (GroupLabel g : kAllGroups) {
        const auto& outs = by_group[index_of(g)];
        MetricsRow row;
        row.task = task;
        row.group = g;
        row.n = outs.size();
        row.counts = confusion(outs, options.threshold);
        row.n_pos = row.counts.tp + row.counts.fn;
        if (row.n == 0) {
            row.prevalence = Metric::undefined("empty group");
            row.precision = Metric::undefined("empty group");
            row.recall = Metric::undefined("empty group");
            row.auroc = Metric::undefined("empty group");
        } else {
            row.prevalence = Metric::of(static_cast<double>(row.n_pos) / static_cast<double>(row.n));
            auto pr = precision_recall(row.counts);
            row.precision = std::move(pr.precision);
            row.recall = std::move(pr.recall);
            row.auroc = auroc(outs);
        }
        rows.push_back(std::move(row));
    }

    const auto& anchor = rows[index_of(options.anchor)];
    const bool anchor_ok = anchor.n > 0 && anchor.n_pos > 0 && anchor.n_pos < anchor.n;
    for (auto& row : rows) {
        if (row.group == options.anchor) {
            row.recall_resampled = Metric::undefined("anchor group");
            row.auroc_resampled = Metric::undefined("anchor group");
            continue;
        }
        if (!anchor_ok) {
            row.recall_resampled = Metric::undefined("anchor prevalence undefined");
            row.auroc_resampled = Metric::undefined("anchor prevalence undefined");
            continue;
        }
        const double target = *anchor.prevalence.value;
        const auto& outs = by_group[index_of(row.group)];

        std::vector<double> recalls(options.reps);
        std::vector<double> aurocs(options.reps);
        std::vector<std::string> failure(options.reps);
        parallel_for(options.reps, options.workers, [&](std::size_t rep) {
            try {
                const auto idx =
                    resample_to_prevalence(outs, target, derive_rep_seed(options.seed, row.group, rep));
                std::vector<Outcome> subset;
                subset.reserve(idx.size());
                for (auto i : idx) subset.push_back(outs[i]);
                recalls[rep] = *precision_recall(confusion(subset, options.threshold)).recall.value;
                aurocs[rep] = *auroc(subset).value;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::DegenerateGroup) {
                    failure[rep] = "degenerate group";
                } else if (e.code() == ErrorCode::UnreachableTarget) {
                    failure[rep] = "unreachable target";
                } else {
                    throw;
                }
            }
        });
        const auto failed = std::find_if(failure.begin(), failure.end(),
                                         [](const std::string& f) { return !f.empty(); });
        if (failed != failure.end()) {
            row.recall_resampled = Metric::undefined(*failed);
            row.auroc_resampled = Metric::undefined(*failed);
            continue;
        }
        const auto r = mean_sd(recalls);
        const auto a = mean_sd(aurocs);
        row.recall_resampled = Metric::of(r.mean);
        row.auroc_resampled = Metric::of(a.mean);
        row.recall_resampled_sd = r.sd;
        row.auroc_resampled_sd = a.sd;
    }
    return rows;
}

}  // namespace asrs
