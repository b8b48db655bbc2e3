#pragma once

#include <array>
#include <span>
#include <vector>

#include "asrs/evaluation.hpp"
#include "asrs/table_io.hpp"
#include "asrs/types.hpp"

namespace asrs {

// Composition of one ASRS group. Percentages are over the group's own n and
// rounded to two decimals; samples without a cohort record count as unknown
// sex and race.
struct DemographicsRow {
    GroupLabel group = GroupLabel::G1;
    std::size_t n = 0;
    std::size_t n_age = 0;
    Metric age_mean;
    std::array<Metric, 3> sex_pct;   // indexed by Sex
    std::array<Metric, 5> race_pct;  // indexed by Race
};

struct DemographicsSummary {
    std::vector<DemographicsRow> rows;  // G1..G4
    std::size_t missing_cohort_rows = 0;
    std::size_t missing_age = 0;
    std::size_t unrecognized_race_rows = 0;
};

DemographicsSummary summarize_groups(std::span<const GroupAssignment> groups,
                                     const CohortTable& cohort);

struct DemographicsDelta {
    GroupLabel from = GroupLabel::G1;
    GroupLabel to = GroupLabel::G4;
    Metric age_mean;
    std::array<Metric, 3> sex_pct;
    std::array<Metric, 5> race_pct;
};

// Componentwise `to - from`. Throws MissingGroup when either group is absent
// or empty.
DemographicsDelta delta_row(std::span<const DemographicsRow> rows, GroupLabel from, GroupLabel to);

double round_to(double value, int decimals);

}  // namespace asrs
