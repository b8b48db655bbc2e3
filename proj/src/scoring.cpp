#include "asrs/scoring.hpp"

#include <cmath>
#include <unordered_set>

#include "asrs/error.hpp"
#include "asrs/parallel.hpp"

namespace asrs {

double shift_norm(std::span<const float> z0, std::span<const float> zt) {
    if (z0.size() != zt.size()) {
        throw Error(ErrorCode::LengthMismatch, "vectors of length " + std::to_string(z0.size()) +
                                                   " and " + std::to_string(zt.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < z0.size(); ++i) {
        if (!std::isfinite(z0[i]) || !std::isfinite(zt[i])) {
            throw Error(ErrorCode::NonFiniteValue, "non-finite component at index " + std::to_string(i));
        }
        const double d = static_cast<double>(zt[i]) - static_cast<double>(z0[i]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

ShiftBreakdown score_sample(const EmbeddingRecord& rec) {
    ShiftBreakdown out;
    out.sample_id = rec.sample_id;
    const auto& z0 = rec.view(ViewTag::Original);
    for (std::size_t k = 0; k < kRotatedViews.size(); ++k) {
        try {
            out.per_view[k] = shift_norm(z0, rec.view(kRotatedViews[k]));
        } catch (const Error& e) {
            throw Error(e.code(), "sample '" + rec.sample_id.str() + "' view " +
                                      std::string(to_string(kRotatedViews[k])) + ": " + e.detail());
        }
        out.total += out.per_view[k];
    }
    return out;
}

std::vector<ScoreRecord> score_batch(std::span<const EmbeddingRecord> recs, unsigned workers) {
    std::unordered_set<std::string> seen;
    seen.reserve(recs.size());
    for (const auto& rec : recs) {
        if (!seen.insert(rec.sample_id.str()).second) {
            throw Error(ErrorCode::DuplicateSampleId, "duplicate sample id '" + rec.sample_id.str() + "'");
        }
    }
    std::vector<ScoreRecord> out(recs.size());
    parallel_for(recs.size(), workers, [&](std::size_t i) {
        out[i] = ScoreRecord{recs[i].sample_id, score_sample(recs[i]).total};
    });
    return out;
}

}  // namespace asrs
