#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrs/confidence.hpp"
#include "asrs/demographics.hpp"
#include "asrs/evaluation.hpp"
#include "asrs/metadata.hpp"
#include "asrs/table_io.hpp"

namespace asrs {

enum class ReportFormat { Json, Csv, Text };

std::optional<ReportFormat> parse_report_format(std::string_view text);
std::string_view to_string(ReportFormat f);

struct ReportSettings {
    std::vector<std::string> tasks;  // empty = every task in the predictions
    double threshold = 0.5;
    GroupLabel anchor = GroupLabel::G4;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    std::string model = "model";
    std::string quantile_method = "unknown";
};

struct TaskSection {
    std::string task;
    std::vector<MetricsRow> metrics;
    std::vector<ConfidenceRow> confidence;
    std::optional<GroupLabel> overconfident_unstable;
};

struct DemographicsSection {
    DemographicsSummary summary;
    std::optional<DemographicsDelta> delta;  // G4 vs G1
};

struct Report {
    RunMetadata metadata;
    ReportSettings settings;
    std::vector<TaskSection> tasks;
    std::optional<DemographicsSection> demographics;
};

// Task names in first-appearance order of the predictions.
std::vector<std::string> available_tasks(std::span<const PredictionRecord> preds);

// Canonical command string recorded in the report metadata (no file paths).
std::string report_command(const ReportSettings& settings, ReportFormat format);

Report build_report(std::span<const GroupAssignment> groups, std::span<const PredictionRecord> preds,
                    std::span<const LabelRecord> labels, const CohortTable* cohort,
                    const ReportSettings& settings, RunMetadata metadata, unsigned workers = 1);

std::string format_report(const Report& report, ReportFormat format);
std::string format_report_json(const Report& report);
std::string format_report_csv(const Report& report);
std::string format_report_text(const Report& report);

// ---------------------------------------------------------------------------
// Table renderers shared by reports and by transcribed summary tables.

struct MetricsCells {
    Metric precision;
    Metric recall;
    Metric auroc;
    Metric recall_resampled;
    Metric auroc_resampled;
};

struct MetricsTableRow {
    std::string task;
    std::string model;
    std::array<MetricsCells, kGroupCount> groups;
};

struct ConfidenceTableRow {
    std::string task;
    std::string model;
    // overall, pos, neg per group
    std::array<std::array<Metric, 3>, kGroupCount> groups;
};

std::string render_metrics_table(std::span<const MetricsTableRow> rows, GroupLabel anchor);
std::string render_confidence_table(std::span<const ConfidenceTableRow> rows);
std::string render_demographics_table(std::span<const DemographicsRow> rows,
                                      const std::optional<DemographicsDelta>& delta);

// Fixed-point cell text, "n/a" when undefined.
std::string fixed_cell(const Metric& m, int decimals);
std::string signed_cell(const Metric& m, int decimals);
std::string thousands(std::size_t n);

// Renders rows as columns padded to the widest cell. The first
// `left_columns` columns are left-aligned, the rest right-aligned.
std::string render_aligned(const std::vector<std::vector<std::string>>& rows,
                           std::size_t left_columns = 1);

}  // namespace asrs
