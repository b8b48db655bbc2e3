#include <gtest/gtest.h>

#include <cstring>

#include "asrs/embedding_io.hpp"
#include "asrs/error.hpp"
#include "temp_dir.hpp"

namespace asrs {
namespace {

EmbeddingRecord make(const std::string& id, std::uint32_t dim, float base) {
    EmbeddingRecord rec;
    rec.sample_id = SampleId(id);
    rec.dim = dim;
    for (std::size_t v = 0; v < kViewCount; ++v) {
        rec.vectors[v].resize(dim);
        for (std::uint32_t k = 0; k < dim; ++k) rec.vectors[v][k] = base + 0.25f * static_cast<float>(v) + k;
    }
    return rec;
}

ErrorCode decode_error(std::string_view bytes) {
    try {
        decode_embeddings(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "decode succeeded";
    return ErrorCode::InvalidArgument;
}

TEST(EmbeddingBinaryTest, LayoutMatchesHandEncoding) {
    EmbeddingRecord rec;
    rec.sample_id = SampleId("ab");
    rec.dim = 1;
    for (std::size_t v = 0; v < kViewCount; ++v) rec.vectors[v] = {static_cast<float>(v)};
    const std::vector<EmbeddingRecord> recs{rec};

    std::string expected("ASRS", 4);
    auto u32 = [&](std::uint32_t x) {
        for (int b = 0; b < 4; ++b) expected.push_back(static_cast<char>((x >> (8 * b)) & 0xFF));
    };
    u32(1);
    u32(1);
    u32(5);
    u32(1);
    u32(0);
    expected += std::string("\x02\x00", 2) + "ab";
    for (int v = 0; v < 5; ++v) {
        std::uint32_t bits = 0;
        const float f = static_cast<float>(v);
        std::memcpy(&bits, &f, 4);
        u32(bits);
    }
    EXPECT_EQ(encode_embeddings(recs), expected);
    EXPECT_EQ(expected.size(), kEmbeddingHeaderBytes + 2 + 2 + 5 * 4);
}

TEST(EmbeddingBinaryTest, RoundTripsBitExactly) {
    const std::vector<EmbeddingRecord> recs{make("a", 3, 0.1f), make("bb", 3, -7.5f)};
    const std::string bytes = encode_embeddings(recs);
    EXPECT_EQ(bytes.size(), 24u + (2 + 1 + 60) + (2 + 2 + 60));
    EXPECT_EQ(decode_embeddings(bytes), recs);
}

TEST(EmbeddingBinaryTest, RejectsDamagedFiles) {
    const std::vector<EmbeddingRecord> recs{make("a", 3, 0.1f), make("bb", 3, -7.5f)};
    const std::string good = encode_embeddings(recs);

    EXPECT_EQ(decode_error(""), ErrorCode::TruncatedFile);
    EXPECT_EQ(decode_error("AS"), ErrorCode::TruncatedFile);
    EXPECT_EQ(decode_error("PNG\x89 and more"), ErrorCode::BadMagic);
    EXPECT_EQ(decode_error(good.substr(0, good.size() - 1)), ErrorCode::TruncatedFile);
    EXPECT_EQ(decode_error(good + "x"), ErrorCode::TrailingData);

    std::string v2 = good;
    v2[4] = 2;
    EXPECT_EQ(decode_error(v2), ErrorCode::VersionUnsupported);

    std::string views = good;
    views[12] = 4;
    EXPECT_EQ(decode_error(views), ErrorCode::BadHeader);

    std::string nan = good;
    const float q = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(nan.data() + 24 + 2 + 1 + 4 * 7, &q, 4);  // sample 'a', view ROT_N15, component 1
    try {
        decode_embeddings(nan);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
        EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("ROT_N15"), std::string::npos);
    }
}

TEST(EmbeddingBinaryTest, DuplicateIdsAreRejectedOnReadAndWrite) {
    const std::vector<EmbeddingRecord> recs{make("a", 2, 0.0f), make("b", 2, 1.0f)};
    std::string bytes = encode_embeddings(recs);
    bytes[24 + 2 + 1 + 40 + 2] = 'a';
    EXPECT_EQ(decode_error(bytes), ErrorCode::DuplicateSampleId);

    const std::vector<EmbeddingRecord> dup{make("a", 2, 0.0f), make("a", 2, 1.0f)};
    try {
        encode_embeddings(dup);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateSampleId);
    }
}

TEST(EmbeddingBinaryTest, WriterRejectsEmptyAndMixedDimensions) {
    try {
        encode_embeddings({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
    }
    const std::vector<EmbeddingRecord> mixed{make("a", 2, 0.0f), make("b", 3, 1.0f)};
    try {
        encode_embeddings(mixed);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MixedDimensions);
    }
}

TEST(EmbeddingJsonlTest, RoundTripsAndMatchesBinary) {
    const std::vector<EmbeddingRecord> recs{make("a", 4, 0.1f), make("b", 4, 3.3f)};
    const std::string text = encode_embeddings_jsonl(recs);
    EXPECT_EQ(text.front(), '{');
    EXPECT_EQ(decode_embeddings(text), recs);
    EXPECT_EQ(decode_embeddings(text), decode_embeddings(encode_embeddings(recs)));
}

TEST(EmbeddingJsonlTest, RejectsMalformedLines) {
    EXPECT_EQ(decode_error("{\"sample_id\": \"a\""), ErrorCode::BadValue);
    EXPECT_EQ(decode_error(R"({"sample_id":"a","dim":1,"views":{"ORIGINAL":[0]}})"), ErrorCode::BadValue);
    const std::string two_dims =
        R"({"sample_id":"a","dim":1,"views":{"ORIGINAL":[0],"ROT_N30":[0],"ROT_N15":[0],"ROT_P15":[0],"ROT_P30":[0]}})"
        "\n"
        R"({"sample_id":"b","dim":2,"views":{"ORIGINAL":[0,0],"ROT_N30":[0,0],"ROT_N15":[0,0],"ROT_P15":[0,0],"ROT_P30":[0,0]}})";
    EXPECT_EQ(decode_error(two_dims), ErrorCode::MixedDimensions);
}

TEST(EmbeddingFileTest, ReadErrorsNameThePath) {
    testing::TempDir dir;
    try {
        read_embeddings(dir / "missing.asrs");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoFailure);
        EXPECT_NE(std::string(e.what()).find("missing.asrs"), std::string::npos);
    }
    const std::vector<EmbeddingRecord> recs{make("a", 2, 0.0f)};
    write_embeddings(recs, dir / "e.asrs");
    EXPECT_EQ(read_embeddings(dir / "e.asrs"), recs);
    EXPECT_FALSE(std::filesystem::exists(dir / "e.asrs.partial"));
}

}  // namespace
}  // namespace asrs
