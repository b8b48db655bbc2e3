#include <gtest/gtest.h>

#include "asrs/demographics.hpp"
#include "asrs/error.hpp"
#include "asrs/summary_tables.hpp"
#include "published_fixtures.hpp"

namespace asrs {
namespace {

CohortRecord person(const std::string& id, std::optional<double> age, Sex sex, Race race) {
    return CohortRecord{SampleId(id), age, sex, race};
}

TEST(SummarizeGroupsTest, MeanAgeAndPercentages) {
    const std::vector<GroupAssignment> groups{{SampleId("a"), GroupLabel::G1}, {SampleId("b"), GroupLabel::G1},
                                              {SampleId("c"), GroupLabel::G1}};
    CohortTable cohort;
    cohort.records = {person("a", 40.0, Sex::Female, Race::White), person("b", 60.0, Sex::Male, Race::Black),
                      person("c", std::nullopt, Sex::Female, Race::Asian)};
    const auto s = summarize_groups(groups, cohort);
    const auto& g1 = s.rows[0];
    EXPECT_EQ(g1.n, 3u);
    EXPECT_EQ(g1.n_age, 2u);
    EXPECT_EQ(g1.age_mean.value, 50.0);
    EXPECT_EQ(g1.sex_pct[static_cast<std::size_t>(Sex::Female)].value, 66.67);
    EXPECT_EQ(g1.race_pct[static_cast<std::size_t>(Race::Black)].value, 33.33);
    EXPECT_EQ(s.missing_age, 1u);
    EXPECT_EQ(s.rows[1].age_mean.reason, "no age data");
}

TEST(SummarizeGroupsTest, MissingCohortRowsCountAsUnknown) {
    const std::vector<GroupAssignment> groups{{SampleId("a"), GroupLabel::G3}, {SampleId("z"), GroupLabel::G3}};
    CohortTable cohort;
    cohort.records = {person("a", 70.0, Sex::Male, Race::White)};
    const auto s = summarize_groups(groups, cohort);
    EXPECT_EQ(s.missing_cohort_rows, 1u);
    const auto& g3 = s.rows[2];
    EXPECT_EQ(g3.sex_pct[static_cast<std::size_t>(Sex::OtherUnknown)].value, 50.0);
    EXPECT_EQ(g3.race_pct[static_cast<std::size_t>(Race::OtherUnknown)].value, 50.0);
    EXPECT_EQ(g3.age_mean.value, 70.0);
}

TEST(DeltaRowTest, HandSubtractionAndIdentity) {
    std::vector<GroupAssignment> groups;
    CohortTable cohort;
    // G1: 4 people aged 60, 1 female, all White. G4: 4 people aged 50, 3 female, 2 Black.
    for (int i = 0; i < 4; ++i) {
        const std::string a = "g1-" + std::to_string(i);
        const std::string b = "g4-" + std::to_string(i);
        groups.push_back({SampleId(a), GroupLabel::G1});
        groups.push_back({SampleId(b), GroupLabel::G4});
        cohort.records.push_back(person(a, 60.0, i == 0 ? Sex::Female : Sex::Male, Race::White));
        cohort.records.push_back(person(b, 50.0, i < 3 ? Sex::Female : Sex::Male, i < 2 ? Race::Black : Race::White));
    }
    const auto s = summarize_groups(groups, cohort);
    const auto d = delta_row(s.rows, GroupLabel::G1, GroupLabel::G4);
    EXPECT_EQ(d.age_mean.value, -10.0);
    EXPECT_EQ(d.sex_pct[static_cast<std::size_t>(Sex::Female)].value, 50.0);
    EXPECT_EQ(d.race_pct[static_cast<std::size_t>(Race::White)].value, -50.0);
    EXPECT_EQ(d.race_pct[static_cast<std::size_t>(Race::Black)].value, 50.0);

    const auto same = delta_row(s.rows, GroupLabel::G4, GroupLabel::G4);
    EXPECT_EQ(same.age_mean.value, 0.0);
    for (const auto& m : same.race_pct) EXPECT_EQ(m.value, 0.0);

    try {
        delta_row(s.rows, GroupLabel::G2, GroupLabel::G4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingGroup);
    }
}

TEST(PublishedCohortFixtureTest, ReproducesPublishedAgesAndDeltas) {
    const auto published = parse_demographics_summary(testing::read_fixture("demographics_summary.csv"));
    std::vector<GroupAssignment> groups;
    std::size_t next = 0;
    for (GroupLabel g : kAllGroups) {
        for (std::size_t i = 0; i < testing::kPublishedGroupSizes[index_of(g)]; ++i) {
            groups.push_back({SampleId("img-" + std::to_string(next++)), g});
        }
    }
    const auto cohort = testing::build_cohort_fixture(published, groups);
    const auto s = summarize_groups(groups, cohort);
    EXPECT_EQ(testing::fixed2(*s.rows[0].age_mean.value), "64.83");
    EXPECT_EQ(testing::fixed2(*s.rows[3].age_mean.value), "53.90");
    const auto d = delta_row(s.rows, GroupLabel::G1, GroupLabel::G4);
    EXPECT_EQ(testing::fixed2(*d.age_mean.value), "-10.93");
    EXPECT_EQ(testing::fixed2(*d.race_pct[static_cast<std::size_t>(Race::Black)].value), "6.02");
}

}  // namespace
}  // namespace asrs
