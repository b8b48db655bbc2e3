#include "asrs/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "asrs/error.hpp"
#include "asrs/file_io.hpp"
#include "asrs/parallel.hpp"

namespace asrs {

double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorCode::TooFewSamples, "quantile of an empty sample");
    const double pos = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    // std::lerp is monotone in frac and exact at the endpoints, which keeps
    // tau25 <= tau50 <= tau75 without a separate clamp.
    return std::lerp(sorted[lo], sorted[lo + 1], frac);
}

GroupThresholds fit_thresholds(std::span<const ScoreRecord> val_scores) {
    if (val_scores.size() < 4) {
        throw Error(ErrorCode::TooFewSamples, "need at least 4 validation scores, got " +
                                                  std::to_string(val_scores.size()));
    }
    std::vector<double> sorted;
    sorted.reserve(val_scores.size());
    for (const auto& s : val_scores) {
        if (!std::isfinite(s.score)) {
            throw Error(ErrorCode::NonFiniteScore, "sample '" + s.sample_id.str() + "'");
        }
        sorted.push_back(s.score);
    }
    std::sort(sorted.begin(), sorted.end());
    GroupThresholds thr;
    thr.tau25 = sorted_quantile(sorted, 0.25);
    thr.tau50 = sorted_quantile(sorted, 0.50);
    thr.tau75 = sorted_quantile(sorted, 0.75);
    thr.n_val = sorted.size();
    return thr;
}

GroupLabel assign_group(double score, const GroupThresholds& thr) {
    if (!std::isfinite(score)) throw Error(ErrorCode::NonFiniteScore, "cannot group a non-finite score");
    if (score <= thr.tau25) return GroupLabel::G1;
    if (score <= thr.tau50) return GroupLabel::G2;
    if (score <= thr.tau75) return GroupLabel::G3;
    return GroupLabel::G4;
}

std::vector<GroupAssignment> assign_batch(std::span<const ScoreRecord> scores,
                                          const GroupThresholds& thr, unsigned workers) {
    std::unordered_set<std::string> seen;
    seen.reserve(scores.size());
    for (const auto& s : scores) {
        if (!seen.insert(s.sample_id.str()).second) {
            throw Error(ErrorCode::DuplicateSampleId, "duplicate sample id '" + s.sample_id.str() + "'");
        }
    }
    std::vector<GroupAssignment> out(scores.size());
    parallel_for(scores.size(), workers, [&](std::size_t i) {
        out[i] = GroupAssignment{scores[i].sample_id, assign_group(scores[i].score, thr)};
    });
    return out;
}

void validate(const GroupThresholds& thr) {
    if (!std::isfinite(thr.tau25) || !std::isfinite(thr.tau50) || !std::isfinite(thr.tau75)) {
        throw Error(ErrorCode::BadValue, "thresholds must be finite");
    }
    if (!(thr.tau25 <= thr.tau50 && thr.tau50 <= thr.tau75)) {
        throw Error(ErrorCode::BadValue, "thresholds must satisfy tau25 <= tau50 <= tau75");
    }
    if (thr.n_val < 4) throw Error(ErrorCode::BadValue, "n_val must be at least 4");
    if (thr.method.empty()) throw Error(ErrorCode::BadValue, "quantile method is empty");
}

std::string format_thresholds_json(const GroupThresholds& thr, const RunMetadata* meta) {
    nlohmann::ordered_json j;
    j["tau25"] = thr.tau25;
    j["tau50"] = thr.tau50;
    j["tau75"] = thr.tau75;
    j["n_val"] = thr.n_val;
    j["method"] = thr.method;
    j["source_digest"] = thr.source_digest ? nlohmann::ordered_json(*thr.source_digest)
                                           : nlohmann::ordered_json(nullptr);
    if (meta != nullptr) j["metadata"] = to_json(*meta);
    return j.dump(2) + "\n";
}

ThresholdsFile parse_thresholds_json(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::BadValue, std::string("malformed thresholds JSON: ") + e.what());
    }
    ThresholdsFile out;
    try {
        auto& thr = out.thresholds;
        for (const char* key : {"tau25", "tau50", "tau75", "n_val", "method"}) {
            if (!j.contains(key)) throw Error(ErrorCode::MissingColumn, std::string("thresholds JSON lacks '") + key + "'");
        }
        thr.tau25 = j.at("tau25").get<double>();
        thr.tau50 = j.at("tau50").get<double>();
        thr.tau75 = j.at("tau75").get<double>();
        thr.n_val = j.at("n_val").get<std::size_t>();
        thr.method = j.at("method").get<std::string>();
        if (j.contains("source_digest") && !j.at("source_digest").is_null()) {
            thr.source_digest = j.at("source_digest").get<std::string>();
        }
        if (j.contains("metadata")) out.metadata = run_metadata_from_json(j.at("metadata"));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadValue, std::string("malformed thresholds JSON: ") + e.what());
    }
    validate(out.thresholds);
    return out;
}

ThresholdsFile read_thresholds(const std::filesystem::path& path) {
    const auto text = read_file(path);
    try {
        return parse_thresholds_json(text);
    } catch (const Error& e) {
        throw with_context(e, path.string());
    }
}

}  // namespace asrs
