#include "asrs/pipeline.hpp"

#include "asrs/embedding_io.hpp"
#include "asrs/error.hpp"
#include "asrs/file_io.hpp"
#include "asrs/grouping.hpp"
#include "asrs/metadata.hpp"
#include "asrs/scoring.hpp"
#include "asrs/table_io.hpp"

namespace asrs {

void run_score(const std::filesystem::path& embeddings, const std::filesystem::path& out, unsigned workers) {
    const std::string bytes = read_file(embeddings);
    std::vector<EmbeddingRecord> recs;
    try {
        recs = decode_embeddings(bytes);
    } catch (const Error& e) {
        throw with_context(e, embeddings.string());
    }
    const auto scores = score_batch(recs, workers);
    const RunMetadata meta = make_run_metadata("score", {{"embeddings", sha256_digest(bytes)}});
    write_file_atomic(out, format_scores(scores, {{"run", to_line(meta)}}));
}

void run_thresholds(const std::filesystem::path& scores, const std::filesystem::path& out) {
    const std::string text = read_file(scores);
    std::vector<ScoreRecord> recs;
    try {
        recs = parse_scores(text);
    } catch (const Error& e) {
        throw with_context(e, scores.string());
    }
    GroupThresholds thr = fit_thresholds(recs);
    thr.source_digest = table_content_digest(text);
    const RunMetadata meta = make_run_metadata("thresholds", {{"scores", sha256_digest(text)}});
    write_file_atomic(out, format_thresholds_json(thr, &meta));
}

void run_group(const std::filesystem::path& scores, const std::filesystem::path& thresholds,
               const std::filesystem::path& out, unsigned workers) {
    const std::string thr_text = read_file(thresholds);
    const ThresholdsFile thr_file = [&] {
        try {
            return parse_thresholds_json(thr_text);
        } catch (const Error& e) {
            throw with_context(e, thresholds.string());
        }
    }();
    const GroupThresholds& thr = thr_file.thresholds;
    const std::string text = read_file(scores);
    if (thr.source_digest && *thr.source_digest == table_content_digest(text)) {
        throw Error(ErrorCode::LeakageGuard,
                    "scores in '" + scores.string() +
                        "' are the rows the thresholds were fitted on; assign groups on a held-out split");
    }
    std::vector<ScoreRecord> recs;
    try {
        recs = parse_scores(text);
    } catch (const Error& e) {
        throw with_context(e, scores.string());
    }
    const auto groups = assign_batch(recs, thr, workers);
    const RunMetadata meta = make_run_metadata(
        "group", {{"scores", sha256_digest(text)}, {"thresholds", sha256_digest(thr_text)}});
    const MetadataLines lines{{"run", to_line(meta)},
                              {"quantile_method", thr.method},
                              {"tau25", format_double(thr.tau25)},
                              {"tau50", format_double(thr.tau50)},
                              {"tau75", format_double(thr.tau75)}};
    write_file_atomic(out, format_groups(groups, lines));
}

void run_report(const ReportPaths& paths, const ReportSettings& settings, ReportFormat format,
                unsigned workers) {
    auto load = [](const std::filesystem::path& p, TableSchema schema, std::string& text) {
        text = read_file(p);
        try {
            return parse_table(text, schema);
        } catch (const Error& e) {
            throw with_context(e, p.string());
        }
    };
    std::string groups_text;
    std::string preds_text;
    std::string labels_text;
    std::string cohort_text;
    const auto groups = std::get<std::vector<GroupAssignment>>(load(paths.groups, TableSchema::Groups, groups_text));
    const auto preds =
        std::get<std::vector<PredictionRecord>>(load(paths.predictions, TableSchema::Predictions, preds_text));
    const auto labels = std::get<std::vector<LabelRecord>>(load(paths.labels, TableSchema::Labels, labels_text));
    std::optional<CohortTable> cohort;
    if (paths.cohort) cohort = std::get<CohortTable>(load(*paths.cohort, TableSchema::Cohort, cohort_text));

    ReportSettings s = settings;
    const auto group_meta = parse_table_metadata(groups_text);
    if (const auto it = group_meta.find("quantile_method"); it != group_meta.end()) s.quantile_method = it->second;

    std::vector<std::pair<std::string, std::string>> inputs{{"groups", sha256_digest(groups_text)},
                                                            {"predictions", sha256_digest(preds_text)},
                                                            {"labels", sha256_digest(labels_text)}};
    if (cohort) inputs.emplace_back("cohort", sha256_digest(cohort_text));
    RunMetadata meta = make_run_metadata(report_command(s, format), std::move(inputs), s.seed);

    const Report report = build_report(groups, preds, labels, cohort ? &*cohort : nullptr, s, std::move(meta),
                                       workers);
    write_file_atomic(paths.out, format_report(report, format));
}

nlohmann::ordered_json run_synth(const SynthConfig& config, const std::filesystem::path& out_dir) {
    return generate(config, out_dir);
}

}  // namespace asrs
