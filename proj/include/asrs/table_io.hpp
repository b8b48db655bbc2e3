#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asrs/types.hpp"

namespace asrs {

// Comma-delimited UTF-8 tables with a mandatory header row. Any number of
// leading lines starting with '#' carry "key: value" metadata and are skipped
// by the record parsers. Extra columns are ignored; column order is free.
enum class TableSchema { Scores, Groups, Predictions, Labels, Cohort };

std::string_view to_string(TableSchema schema);

struct CohortTable {
    std::vector<CohortRecord> records;
    // Rows whose race string was not one of the known categories and was
    // mapped to Other/Unknown.
    std::size_t unrecognized_race_rows = 0;
};

using TableData = std::variant<std::vector<ScoreRecord>, std::vector<GroupAssignment>,
                               std::vector<PredictionRecord>, std::vector<LabelRecord>, CohortTable>;

std::vector<ScoreRecord> parse_scores(std::string_view text);
std::vector<GroupAssignment> parse_groups(std::string_view text);
std::vector<PredictionRecord> parse_predictions(std::string_view text);
std::vector<LabelRecord> parse_labels(std::string_view text);
CohortTable parse_cohort(std::string_view text);

TableData parse_table(std::string_view text, TableSchema schema);
TableData read_table(const std::filesystem::path& path, TableSchema schema);

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);
std::vector<GroupAssignment> read_groups(const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
std::vector<LabelRecord> read_labels(const std::filesystem::path& path);
CohortTable read_cohort(const std::filesystem::path& path);

// "# key: value" lines preceding the header.
std::map<std::string, std::string> parse_table_metadata(std::string_view text);

using MetadataLines = std::vector<std::pair<std::string, std::string>>;

std::string format_scores(std::span<const ScoreRecord> records, const MetadataLines& meta = {});
std::string format_groups(std::span<const GroupAssignment> records, const MetadataLines& meta = {});
std::string format_predictions(std::span<const PredictionRecord> records,
                               const MetadataLines& meta = {});
std::string format_labels(std::span<const LabelRecord> records, const MetadataLines& meta = {});
std::string format_cohort(std::span<const CohortRecord> records, const MetadataLines& meta = {});

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// Low-level helpers shared with the summary-table readers.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row);
std::string csv_field(std::string_view value);

struct CsvTable {
    std::vector<std::string> header;
    struct Row {
        std::size_t line = 0;
        std::vector<std::string> fields;
    };
    std::vector<Row> rows;
    // Physical line of the header row.
    std::size_t header_line = 0;

    // Index of `name` in the header; throws MissingColumn.
    std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

}  // namespace asrs
