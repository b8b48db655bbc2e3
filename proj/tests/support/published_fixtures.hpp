#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asrs/report.hpp"
#include "asrs/summary_tables.hpp"

namespace asrs::testing {

std::filesystem::path fixture_dir();
std::string read_fixture(const std::string& name);

// Published N (images) per group.
inline constexpr std::array<std::size_t, 4> kPublishedGroupSizes{10415, 10768, 10781, 10954};

// Sample-level inputs whose per-group statistics reproduce printed cells.
struct SampleFixture {
    std::vector<GroupAssignment> groups;
    std::vector<PredictionRecord> predictions;
    std::vector<LabelRecord> labels;
};

// Counts for one (task, group) cell. Probabilities are laid out so that the
// confusion counts give the printed precision/recall at threshold 0.5 and the
// Mann-Whitney U gives the printed AUROC.
struct MetricsCell {
    std::size_t n = 0;
    std::size_t n_pos = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::uint64_t u = 0;
};

// Finds counts whose precision, recall and AUROC lie within `margin` of the
// targets, preferring a positive count close to prevalence * n. nullopt when
// no such counts exist.
std::optional<MetricsCell> solve_metrics_cell(std::size_t n, double prevalence, double precision,
                                              double recall, double auroc, double margin = 4e-4);

// Probabilities and labels (same order) realising the cell.
void realise_metrics_cell(const MetricsCell& cell, std::vector<double>& probs, std::vector<int>& labels);

// Group blocks of kPublishedGroupSizes with one prediction per task and sample.
// `rows` supplies Prec./Rec./AUC per group; prevalence_pct seeds the search.
// Throws std::runtime_error when a cell has no solution.
SampleFixture build_metrics_fixture(const std::vector<MetricsTableRow>& rows,
                                    const std::map<std::string, double>& prevalence_pct);

// Positives get prob = Pos., negatives prob = 1 - Neg., and the positive
// count is chosen so the overall mean rounds to Ovr.
SampleFixture build_confidence_fixture(const std::vector<ConfidenceTableRow>& rows);

// One cohort record per grouped sample: ages averaging to the printed mean,
// female/race counts whose rounded percentages equal the printed ones.
// Asian takes the published test-split share and Other/Unknown the rest.
CohortTable build_cohort_fixture(const std::vector<DemographicsRow>& rows,
                                 const std::vector<GroupAssignment>& groups);

// Whitespace tokens of the first line of `text` whose leading tokens equal
// those of `prefix`, with the prefix tokens removed. Empty when absent.
std::vector<std::string> row_tokens(const std::string& text, const std::string& prefix);

std::string fixed3(double v);
std::string fixed2(double v);

}  // namespace asrs::testing
