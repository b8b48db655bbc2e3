#include <gtest/gtest.h>

#include "asrs/error.hpp"
#include "asrs/report.hpp"
#include "asrs/summary_tables.hpp"
#include "published_fixtures.hpp"

namespace asrs {
namespace {

using testing::row_tokens;

TEST(CellFormatTest, FixedSignedAndThousands) {
    EXPECT_EQ(fixed_cell(Metric::of(0.5556), 3), "0.556");
    EXPECT_EQ(fixed_cell(Metric::undefined("x"), 3), "n/a");
    EXPECT_EQ(signed_cell(Metric::of(53.90 - 64.83), 2), "-10.93");
    EXPECT_EQ(signed_cell(Metric::of(0.95), 2), "+0.95");
    EXPECT_EQ(signed_cell(Metric::of(-0.001), 2), "+0.00");
    EXPECT_EQ(thousands(0), "0");
    EXPECT_EQ(thousands(999), "999");
    EXPECT_EQ(thousands(10415), "10,415");
    EXPECT_EQ(thousands(1234567), "1,234,567");
}

TEST(RenderAlignedTest, PadsByCodePoints) {
    const std::string out = render_aligned({{"a", "1"}, {"\xC2\xB1x", "10"}});
    EXPECT_EQ(out, "a    1\n\xC2\xB1x  10\n");
}

TEST(SummaryTablesTest, MetricsRowsRenderCellForCell) {
    const std::string csv = testing::read_fixture("metrics_summary.csv");
    const auto rows = parse_metrics_summary(csv);
    ASSERT_EQ(rows.size(), 12u);
    const std::string text = render_metrics_table(rows, GroupLabel::G4);

    const auto cardio = row_tokens(text, "Cardiomegaly RAD-DINO");
    ASSERT_EQ(cardio.size(), 18u);
    EXPECT_EQ(cardio[15], "0.360");
    EXPECT_EQ(cardio[16], "0.556");
    EXPECT_EQ(cardio[17], "0.851");

    // Every transcribed value reappears in its own row and column.
    const CsvTable t = parse_csv(csv);
    for (const auto& r : rows) {
        const auto cells = row_tokens(text, r.task + " " + r.model);
        ASSERT_EQ(cells.size(), 18u) << r.task << " " << r.model;
        std::size_t col = 0;
        for (GroupLabel g : kAllGroups) {
            const auto& c = r.groups[index_of(g)];
            EXPECT_EQ(cells[col++], fixed_cell(c.precision, 3));
            EXPECT_EQ(cells[col++], fixed_cell(c.recall, 3));
            EXPECT_EQ(cells[col++], fixed_cell(c.auroc, 3));
            if (g != GroupLabel::G4) {
                EXPECT_EQ(cells[col++], fixed_cell(c.recall_resampled, 3));
                EXPECT_EQ(cells[col++], fixed_cell(c.auroc_resampled, 3));
            }
        }
    }
    std::size_t checked = 0;
    for (const auto& row : t.rows) {
        for (std::size_t f = 3; f < row.fields.size(); ++f) {
            if (row.fields[f].empty()) continue;
            EXPECT_NE(text.find(row.fields[f]), std::string::npos) << row.fields[f];
            ++checked;
        }
    }
    EXPECT_EQ(checked, 12u * (3 * 5 + 3));
}

TEST(SummaryTablesTest, ConfidenceEdemaRadDino) {
    const auto rows = parse_confidence_summary(testing::read_fixture("confidence_summary.csv"));
    ASSERT_EQ(rows.size(), 12u);
    const std::string text = render_confidence_table(rows);
    const auto cells = row_tokens(text, "Edema Rad-Dino");
    ASSERT_EQ(cells.size(), 12u);
    EXPECT_EQ(cells[9], "0.915");
    EXPECT_EQ(cells[10], "0.784");
    EXPECT_EQ(cells[11], "0.920");
}

TEST(SummaryTablesTest, DemographicsWithComputedDeltas) {
    const auto rows = parse_demographics_summary(testing::read_fixture("demographics_summary.csv"));
    const auto delta = delta_row(rows, GroupLabel::G1, GroupLabel::G4);
    const std::string text = render_demographics_table(rows, delta);
    EXPECT_EQ(row_tokens(text, "N (images)"), (std::vector<std::string>{"10,415", "10,768", "10,781", "10,954", "--"}));
    EXPECT_EQ(row_tokens(text, "Age, mean (years)").back(), "-10.93");
    EXPECT_EQ(row_tokens(text, "Female (%)").back(), "+0.95");
    EXPECT_EQ(row_tokens(text, "White (%)").back(), "-5.67");
    EXPECT_EQ(row_tokens(text, "Black (%)").back(), "+6.02");
    EXPECT_EQ(row_tokens(text, "Hispanic/Latino (%)").back(), "+4.93");
    // Indicators the table does not report are omitted rather than shown as n/a.
    EXPECT_TRUE(row_tokens(text, "Male (%)").empty());
    EXPECT_TRUE(row_tokens(text, "Asian (%)").empty());
}

TEST(SummaryTablesTest, CohortSplits) {
    const auto rows = parse_cohort_summary(testing::read_fixture("cohort_summary.csv"));
    const auto prev = parse_prevalence_summary(testing::read_fixture("prevalence_summary.csv"));
    const std::string text = render_cohort_table(rows, prev);
    EXPECT_EQ(row_tokens(text, "Test"),
              (std::vector<std::string>{"10,081", "38,444", "42,918", "15,815", "27,103", "61.3\xC2\xB1" "17.1", "45.9",
                                        "65.5", "15.9", "3.9", "5.8", "9.0"}));
    EXPECT_NE(text.find("Pleural Effusion=23.8"), std::string::npos);
}

TEST(SummaryTablesTest, BadCellsNameRowAndColumn) {
    try {
        parse_metrics_summary("task,model,group,precision,recall,auroc,recall_resampled,auroc_resampled\nA,B,G1,x,1,1,,\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_EQ(e.column(), "precision");
    }
}

struct SmallInputs {
    std::vector<GroupAssignment> groups;
    std::vector<PredictionRecord> preds;
    std::vector<LabelRecord> labels;
    CohortTable cohort;
};

SmallInputs small_inputs() {
    SmallInputs in;
    for (int i = 0; i < 40; ++i) {
        const SampleId id("s" + std::to_string(i));
        const auto g = static_cast<GroupLabel>(i % 4);
        in.groups.push_back({id, g});
        const int label = i % 3 == 0 ? 1 : 0;
        in.preds.push_back({id, "edema", label ? 0.3 + 0.01 * i : 0.6 - 0.01 * i});
        in.labels.push_back({id, "edema", label});
        in.preds.push_back({id, "effusion", 0.02 * i});
        in.labels.push_back({id, "effusion", i % 2});
        in.cohort.records.push_back({id, 40.0 + i, i % 2 ? Sex::Female : Sex::Male, Race::White});
    }
    return in;
}

TEST(BuildReportTest, UnknownTaskListsAvailable) {
    const auto in = small_inputs();
    ReportSettings s;
    s.tasks = {"edema", "pneumonia"};
    try {
        build_report(in.groups, in.preds, in.labels, nullptr, s, RunMetadata{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownTask);
        EXPECT_NE(std::string(e.what()).find("edema, effusion"), std::string::npos);
    }
}

TEST(BuildReportTest, FormatsAreDeterministicAndComplete) {
    const auto in = small_inputs();
    ReportSettings s;
    s.seed = 3;
    s.reps = 10;
    const auto meta = make_run_metadata(report_command(s, ReportFormat::Json), {{"groups", "sha256:aa"}}, s.seed);
    const Report a = build_report(in.groups, in.preds, in.labels, &in.cohort, s, meta, 1);
    const Report b = build_report(in.groups, in.preds, in.labels, &in.cohort, s, meta, 4);
    ASSERT_EQ(a.tasks.size(), 2u);
    for (ReportFormat f : {ReportFormat::Json, ReportFormat::Csv, ReportFormat::Text}) {
        EXPECT_EQ(format_report(a, f), format_report(b, f));
    }

    const auto j = nlohmann::ordered_json::parse(format_report_json(a));
    EXPECT_EQ(j["metadata"]["threshold"], 0.5);
    EXPECT_EQ(j["metadata"]["positive_call_rule"], "prob >= threshold");
    EXPECT_EQ(j["metadata"]["resample"]["anchor"], "G4");
    EXPECT_EQ(j["metadata"]["run"]["inputs"]["groups"], "sha256:aa");
    EXPECT_EQ(j["tasks"][0]["metrics"].size(), 4u);
    EXPECT_TRUE(j["tasks"][0]["metrics"][3]["recall_resampled"].is_null());
    EXPECT_EQ(j["tasks"][0]["metrics"][3]["recall_resampled_reason"], "anchor group");
    EXPECT_EQ(j["demographics"]["rows"].size(), 4u);
    EXPECT_FALSE(j["demographics"]["delta"].is_null());

    const std::string csv = format_report_csv(a);
    EXPECT_EQ(csv.rfind("# run: ", 0), 0u);
    for (const char* section : {"[metrics]", "[confidence]", "[flags]", "[demographics]"}) {
        EXPECT_NE(csv.find(section), std::string::npos) << section;
    }
}

}  // namespace
}  // namespace asrs
