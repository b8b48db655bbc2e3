#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "asrs/report.hpp"
#include "asrs/synth.hpp"

namespace asrs {

// File-to-file steps behind the command-line tool. Every artifact is written
// atomically and embeds the run metadata; nothing is written on error.

void run_score(const std::filesystem::path& embeddings, const std::filesystem::path& out,
               unsigned workers = 1);

void run_thresholds(const std::filesystem::path& scores, const std::filesystem::path& out);

// Throws LeakageGuard when `scores` holds the same rows the thresholds were
// fitted on, regardless of file name or metadata lines.
void run_group(const std::filesystem::path& scores, const std::filesystem::path& thresholds,
               const std::filesystem::path& out, unsigned workers = 1);

struct ReportPaths {
    std::filesystem::path groups;
    std::filesystem::path predictions;
    std::filesystem::path labels;
    std::optional<std::filesystem::path> cohort;
    std::filesystem::path out;
};

void run_report(const ReportPaths& paths, const ReportSettings& settings, ReportFormat format,
                unsigned workers = 1);

nlohmann::ordered_json run_synth(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace asrs
