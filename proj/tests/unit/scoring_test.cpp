#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "asrs/error.hpp"
#include "asrs/scoring.hpp"
#include "oracles.hpp"

namespace asrs {
namespace {

EmbeddingRecord record(const std::string& id, std::vector<float> z0, const std::array<std::vector<float>, 4>& rotated) {
    EmbeddingRecord rec;
    rec.sample_id = SampleId(id);
    rec.dim = static_cast<std::uint32_t>(z0.size());
    rec.view(ViewTag::Original) = std::move(z0);
    for (std::size_t i = 0; i < 4; ++i) rec.view(kRotatedViews[i]) = rotated[i];
    return rec;
}

TEST(ShiftNormTest, HandComputedValue) {
    const std::vector<float> z0{0.0f, 0.0f, 0.0f};
    const std::vector<float> zt{1.0f, 2.0f, 3.0f};
    EXPECT_DOUBLE_EQ(shift_norm(z0, zt), 3.7416573867739413);
}

TEST(ShiftNormTest, RejectsLengthMismatchAndNonFinite) {
    const std::vector<float> a{0.0f, 1.0f};
    const std::vector<float> b{0.0f};
    try {
        shift_norm(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
    }
    const std::vector<float> inf{0.0f, std::numeric_limits<float>::infinity()};
    try {
        shift_norm(a, inf);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
    }
}

TEST(ScoreSampleTest, SumsTheFourRotatedShifts) {
    // Shifts 1, 2, 3 (axis-aligned) and 5 (3-4-5 triangle).
    const auto rec = record("x", {0, 0}, {{{1, 0}, {0, 2}, {-3, 0}, {3, 4}}});
    const auto b = score_sample(rec);
    EXPECT_EQ(b.per_view, (std::array<double, 4>{1.0, 2.0, 3.0, 5.0}));
    EXPECT_EQ(b.total, 11.0);
}

TEST(ScoreSampleTest, ZeroIffAllViewsIdentical) {
    const std::vector<float> z{0.5f, -1.25f, 3.0f};
    EXPECT_EQ(score_sample(record("same", z, {z, z, z, z})).total, 0.0);
    auto moved = z;
    moved[1] = std::nextafter(moved[1], 0.0f);
    EXPECT_GT(score_sample(record("one-ulp", z, {z, z, moved, z})).total, 0.0);
}

TEST(ScoreSampleTest, TranslationAndScalingOnExactGrid) {
    // Components are small dyadic rationals, so translating by a dyadic offset
    // and scaling by a power of two are exact in float.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> grid(-64, 64);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<std::vector<float>, 5> v;
        for (auto& vec : v) {
            vec.resize(8);
            for (auto& x : vec) x = static_cast<float>(grid(rng)) / 8.0f;
        }
        const auto base = record("t", v[0], {v[1], v[2], v[3], v[4]});
        const double s = score_sample(base).total;

        auto shifted = base;
        auto scaled = base;
        for (std::size_t k = 0; k < kViewCount; ++k) {
            for (std::size_t d = 0; d < 8; ++d) {
                shifted.vectors[k][d] += 0.75f * static_cast<float>(d);
                scaled.vectors[k][d] *= 4.0f;
            }
        }
        EXPECT_EQ(score_sample(shifted).total, s);
        EXPECT_EQ(score_sample(scaled).total, 4.0 * s);
    }
}

TEST(ScoreBatchTest, MatchesLongDoubleOracleAndIsWorkerIndependent) {
    std::mt19937_64 rng(11);
    std::normal_distribution<float> normal;
    std::vector<EmbeddingRecord> recs;
    for (int i = 0; i < 64; ++i) {
        EmbeddingRecord rec;
        rec.sample_id = SampleId("s" + std::to_string(i));
        rec.dim = 32;
        for (auto& v : rec.vectors) {
            v.resize(32);
            for (auto& x : v) x = normal(rng);
        }
        recs.push_back(std::move(rec));
    }
    const auto one = score_batch(recs, 1);
    const auto four = score_batch(recs, 4);
    ASSERT_EQ(one.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(one[i].sample_id, recs[i].sample_id);
        EXPECT_EQ(one[i].score, four[i].score);
        long double expected = 0.0L;
        for (ViewTag t : kRotatedViews) expected += testing::l2_shift(recs[i].view(ViewTag::Original), recs[i].view(t));
        EXPECT_NEAR(one[i].score, static_cast<double>(expected), 1e-12 * static_cast<double>(expected));
    }
}

TEST(ScoreBatchTest, RejectsDuplicateIds) {
    const std::vector<float> z{0.0f};
    const std::vector<EmbeddingRecord> recs{record("a", z, {z, z, z, z}), record("a", z, {z, z, z, z})};
    try {
        score_batch(recs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateSampleId);
    }
}

}  // namespace
}  // namespace asrs
