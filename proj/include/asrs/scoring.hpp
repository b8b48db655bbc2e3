#pragma once

#include <array>
#include <span>
#include <vector>

#include "asrs/types.hpp"

namespace asrs {

// Per-view L2 shifts of one sample and their sum, the augmentation-sensitivity
// score. per_view is indexed like kRotatedViews.
struct ShiftBreakdown {
    SampleId sample_id;
    std::array<double, 4> per_view{};
    double total = 0.0;
};

// Euclidean norm of (zt - z0), accumulated in double in index order.
double shift_norm(std::span<const float> z0, std::span<const float> zt);

// Sum of the four rotated-view shifts, added in canonical view order. No
// normalisation is applied to the embeddings.
ShiftBreakdown score_sample(const EmbeddingRecord& rec);

// One score per record, same order. Each sample is computed independently, so
// the result is bit-identical for every worker count (0 = auto).
std::vector<ScoreRecord> score_batch(std::span<const EmbeddingRecord> recs, unsigned workers = 1);

}  // namespace asrs
