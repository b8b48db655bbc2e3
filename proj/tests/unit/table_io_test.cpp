#include <gtest/gtest.h>

#include "asrs/error.hpp"
#include "asrs/file_io.hpp"
#include "asrs/table_io.hpp"

namespace asrs {
namespace {

template <typename Fn>
Error capture(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error";
    return Error(ErrorCode::InvalidArgument, "none");
}

TEST(ScoresTableTest, ParsesWithMetadataBomAndExtraColumns) {
    const std::string text = "\xEF\xBB\xBF# run: {}\n# note: x\nscore,sample_id,extra\n1.5,a,q\n0,b,r\n";
    const auto recs = parse_scores(text);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].sample_id.str(), "a");
    EXPECT_EQ(recs[0].score, 1.5);
    EXPECT_EQ(recs[1].score, 0.0);
    const auto meta = parse_table_metadata(text);
    EXPECT_EQ(meta.at("run"), "{}");
    EXPECT_EQ(meta.at("note"), "x");
}

TEST(ScoresTableTest, ErrorsCarryPhysicalRowAndColumn) {
    auto e = capture([] { parse_scores("# m: 1\nsample_id,score\na,1\nb,-2\n"); });
    EXPECT_EQ(e.code(), ErrorCode::BadValue);
    EXPECT_EQ(e.row(), 4u);
    EXPECT_EQ(e.column(), "score");

    e = capture([] { parse_scores("sample_id,score\na,nan\n"); });
    EXPECT_EQ(e.code(), ErrorCode::BadValue);

    e = capture([] { parse_scores("sample_id,value\na,1\n"); });
    EXPECT_EQ(e.code(), ErrorCode::MissingColumn);

    e = capture([] { parse_scores("sample_id,score\na,1\na,2\n"); });
    EXPECT_EQ(e.code(), ErrorCode::DuplicateKey);
    EXPECT_EQ(e.row(), 3u);
}

TEST(ScoresTableTest, FormatRoundTripsDoublesExactly) {
    const std::vector<ScoreRecord> recs{{SampleId("a"), 0.1 + 0.2}, {SampleId("b,c"), 1e-300}};
    const std::string text = format_scores(recs, {{"run", "{\"x\":1}"}});
    EXPECT_EQ(text.rfind("# run: ", 0), 0u);
    EXPECT_EQ(parse_scores(text), recs);
}

TEST(PredictionsTableTest, ProbabilityRangeAndCompositeKey) {
    const auto preds = parse_predictions("sample_id,task,prob\na,edema,0\na,effusion,1\n");
    EXPECT_EQ(preds.size(), 2u);
    auto e = capture([] { parse_predictions("sample_id,task,prob\na,edema,1.01\n"); });
    EXPECT_EQ(e.code(), ErrorCode::BadValue);
    EXPECT_EQ(e.column(), "prob");
    e = capture([] { parse_predictions("sample_id,task,prob\na,edema,0.1\na,edema,0.2\n"); });
    EXPECT_EQ(e.code(), ErrorCode::DuplicateKey);
}

TEST(LabelsTableTest, OnlyZeroOrOne) {
    EXPECT_EQ(parse_labels("sample_id,task,label\na,t,1\nb,t,0\n").size(), 2u);
    for (const char* bad : {"2", "1.0", "", "yes"}) {
        const auto e = capture([&] { parse_labels(std::string("sample_id,task,label\na,t,") + bad + "\n"); });
        EXPECT_EQ(e.code(), ErrorCode::BadValue) << bad;
    }
}

TEST(CohortTableTest, MissingAgeUnknownRaceAndBadSex) {
    const auto t = parse_cohort("sample_id,age,sex,race\na,70,F,White\nb,,M,Martian\nc,45.5,,\n");
    ASSERT_EQ(t.records.size(), 3u);
    EXPECT_EQ(t.records[0].age, 70.0);
    EXPECT_FALSE(t.records[1].age);
    EXPECT_EQ(t.records[1].race, Race::OtherUnknown);
    EXPECT_EQ(t.records[2].sex, Sex::OtherUnknown);
    EXPECT_EQ(t.unrecognized_race_rows, 1u);

    auto e = capture([] { parse_cohort("sample_id,age,sex,race\na,70,Q,White\n"); });
    EXPECT_EQ(e.code(), ErrorCode::BadValue);
    EXPECT_EQ(e.column(), "sex");
    e = capture([] { parse_cohort("sample_id,age,sex,race\na,131,F,White\n"); });
    EXPECT_EQ(e.code(), ErrorCode::BadValue);
    EXPECT_EQ(e.column(), "age");
}

TEST(CohortTableTest, FormatRoundTrip) {
    std::vector<CohortRecord> recs(2);
    recs[0] = {SampleId("a"), 64.5, Sex::Female, Race::HispanicLatino};
    recs[1] = {SampleId("b"), std::nullopt, Sex::OtherUnknown, Race::Black};
    EXPECT_EQ(parse_cohort(format_cohort(recs)).records, recs);
}

TEST(CsvTest, QuotedFieldsAndShapeErrors) {
    EXPECT_EQ(split_csv_line(R"(a,"b,c","d""e")", 1), (std::vector<std::string>{"a", "b,c", "d\"e"}));
    EXPECT_EQ(csv_field("x,y"), "\"x,y\"");
    EXPECT_EQ(csv_field("plain"), "plain");
    auto e = capture([] { parse_csv("a,b\n1\n"); });
    EXPECT_EQ(e.row(), 2u);
    e = capture([] { parse_csv("a,a\n1,2\n"); });
    EXPECT_EQ(e.code(), ErrorCode::BadValue);
    EXPECT_EQ(e.row(), 1u);
}

TEST(TableDigestTest, ContentDigestIgnoresMetadataLines) {
    const std::string a = "# run: one\nsample_id,score\nx,1\n";
    const std::string b = "# run: two\n# extra: 3\nsample_id,score\nx,1\n";
    EXPECT_EQ(table_content_digest(a), table_content_digest(b));
    EXPECT_NE(sha256_digest(a), sha256_digest(b));
    EXPECT_NE(table_content_digest(a), table_content_digest("sample_id,score\nx,2\n"));
}

TEST(DigestTest, KnownSha256Vector) {
    EXPECT_EQ(sha256_digest("abc"), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace asrs
