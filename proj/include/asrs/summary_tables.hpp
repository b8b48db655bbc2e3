#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "asrs/demographics.hpp"
#include "asrs/report.hpp"

namespace asrs {

// Readers for already-aggregated tables (one row per task/model/group rather
// than per sample). They feed the same renderers as computed reports, so a
// transcribed table and a computed one print identically. Empty cells are
// undefined metrics.

struct CohortSplitRow {
    std::string split;
    std::size_t patients = 0;
    std::size_t studies = 0;
    std::size_t images = 0;
    std::size_t pa = 0;
    std::size_t ap = 0;
    double age_mean = 0.0;
    double age_sd = 0.0;
    // female, white, black, asian, hispanic/latino, other/unknown
    std::array<double, 6> pct{};
};

struct TaskPrevalence {
    std::string task;
    double pct = 0.0;
};

// Columns: split,patients,studies,images,pa,ap,age_mean,age_sd,female_pct,
// white_pct,black_pct,asian_pct,hispanic_pct,other_pct
std::vector<CohortSplitRow> parse_cohort_summary(std::string_view text);
// Columns: task,prevalence_pct
std::vector<TaskPrevalence> parse_prevalence_summary(std::string_view text);
// Columns: task,model,group,precision,recall,auroc,recall_resampled,auroc_resampled.
// Rows sharing (task, model) are merged in first-appearance order.
std::vector<MetricsTableRow> parse_metrics_summary(std::string_view text);
// Columns: task,model,group,overall,pos,neg
std::vector<ConfidenceTableRow> parse_confidence_summary(std::string_view text);
// Columns: group,n,age_mean, then any of female_pct, male_pct, other_sex_pct,
// white_pct, black_pct, asian_pct, hispanic_pct, other_race_pct.
std::vector<DemographicsRow> parse_demographics_summary(std::string_view text);

std::string render_cohort_table(std::span<const CohortSplitRow> rows,
                                std::span<const TaskPrevalence> prevalence);

}  // namespace asrs
