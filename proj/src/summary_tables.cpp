#include "asrs/summary_tables.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "asrs/error.hpp"

namespace asrs {

namespace {

Metric parse_cell(const CsvTable::Row& row, std::size_t col, const std::string& name) {
    const std::string& text = row.fields[col];
    if (text.empty()) return Metric::undefined("not reported");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::BadValue, "not a number: '" + text + "'", row.line, name);
    }
    return Metric::of(v);
}

double parse_required(const CsvTable::Row& row, std::size_t col, const std::string& name) {
    const Metric m = parse_cell(row, col, name);
    if (!m.defined()) throw Error(ErrorCode::BadValue, "empty value", row.line, name);
    return *m.value;
}

std::size_t parse_count(const CsvTable::Row& row, std::size_t col, const std::string& name) {
    const std::string& text = row.fields[col];
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::BadValue, "not a count: '" + text + "'", row.line, name);
    }
    return v;
}

GroupLabel parse_group_cell(const CsvTable::Row& row, std::size_t col) {
    const auto g = parse_group(row.fields[col]);
    if (!g) throw Error(ErrorCode::BadValue, "unknown group '" + row.fields[col] + "'", row.line, "group");
    return *g;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

template <typename Row>
Row& row_for(std::vector<Row>& rows, std::map<std::pair<std::string, std::string>, std::size_t>& index,
             const std::string& task, const std::string& model) {
    const auto [it, inserted] = index.emplace(std::pair{task, model}, rows.size());
    if (inserted) {
        Row r;
        r.task = task;
        r.model = model;
        for (auto& g : r.groups) {
            if constexpr (std::is_same_v<Row, MetricsTableRow>) {
                g.precision = g.recall = g.auroc = Metric::undefined("not reported");
                g.recall_resampled = g.auroc_resampled = Metric::undefined("not reported");
            } else {
                for (auto& m : g) m = Metric::undefined("not reported");
            }
        }
        rows.push_back(std::move(r));
    }
    return rows[it->second];
}

}  // namespace

std::vector<CohortSplitRow> parse_cohort_summary(std::string_view text) {
    const CsvTable t = parse_csv(text);
    static const std::array<const char*, 6> pct_cols{"female_pct", "white_pct",    "black_pct",
                                                     "asian_pct",  "hispanic_pct", "other_pct"};
    std::vector<CohortSplitRow> out;
    for (const auto& row : t.rows) {
        CohortSplitRow r;
        r.split = row.fields[t.column("split")];
        r.patients = parse_count(row, t.column("patients"), "patients");
        r.studies = parse_count(row, t.column("studies"), "studies");
        r.images = parse_count(row, t.column("images"), "images");
        r.pa = parse_count(row, t.column("pa"), "pa");
        r.ap = parse_count(row, t.column("ap"), "ap");
        r.age_mean = parse_required(row, t.column("age_mean"), "age_mean");
        r.age_sd = parse_required(row, t.column("age_sd"), "age_sd");
        for (std::size_t i = 0; i < pct_cols.size(); ++i) {
            r.pct[i] = parse_required(row, t.column(pct_cols[i]), pct_cols[i]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TaskPrevalence> parse_prevalence_summary(std::string_view text) {
    const CsvTable t = parse_csv(text);
    std::vector<TaskPrevalence> out;
    for (const auto& row : t.rows) {
        out.push_back({row.fields[t.column("task")],
                       parse_required(row, t.column("prevalence_pct"), "prevalence_pct")});
    }
    return out;
}

std::vector<MetricsTableRow> parse_metrics_summary(std::string_view text) {
    const CsvTable t = parse_csv(text);
    std::vector<MetricsTableRow> out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& row : t.rows) {
        auto& r = row_for(out, index, row.fields[t.column("task")], row.fields[t.column("model")]);
        auto& c = r.groups[index_of(parse_group_cell(row, t.column("group")))];
        c.precision = parse_cell(row, t.column("precision"), "precision");
        c.recall = parse_cell(row, t.column("recall"), "recall");
        c.auroc = parse_cell(row, t.column("auroc"), "auroc");
        c.recall_resampled = parse_cell(row, t.column("recall_resampled"), "recall_resampled");
        c.auroc_resampled = parse_cell(row, t.column("auroc_resampled"), "auroc_resampled");
    }
    return out;
}

std::vector<ConfidenceTableRow> parse_confidence_summary(std::string_view text) {
    const CsvTable t = parse_csv(text);
    std::vector<ConfidenceTableRow> out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& row : t.rows) {
        auto& r = row_for(out, index, row.fields[t.column("task")], row.fields[t.column("model")]);
        auto& c = r.groups[index_of(parse_group_cell(row, t.column("group")))];
        c[0] = parse_cell(row, t.column("overall"), "overall");
        c[1] = parse_cell(row, t.column("pos"), "pos");
        c[2] = parse_cell(row, t.column("neg"), "neg");
    }
    return out;
}

std::vector<DemographicsRow> parse_demographics_summary(std::string_view text) {
    const CsvTable t = parse_csv(text);
    auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (t.header[i] == name) return i;
        }
        return std::nullopt;
    };
    static const std::array<const char*, 3> sex_cols{"female_pct", "male_pct", "other_sex_pct"};
    static const std::array<const char*, 5> race_cols{"white_pct", "black_pct", "asian_pct", "hispanic_pct",
                                                      "other_race_pct"};
    std::vector<DemographicsRow> out;
    for (const auto& row : t.rows) {
        DemographicsRow r;
        r.group = parse_group_cell(row, t.column("group"));
        r.n = parse_count(row, t.column("n"), "n");
        r.n_age = r.n;
        r.age_mean = parse_cell(row, t.column("age_mean"), "age_mean");
        for (std::size_t i = 0; i < sex_cols.size(); ++i) {
            const auto col = optional_column(sex_cols[i]);
            r.sex_pct[i] = col ? parse_cell(row, *col, sex_cols[i]) : Metric::undefined("not reported");
        }
        for (std::size_t i = 0; i < race_cols.size(); ++i) {
            const auto col = optional_column(race_cols[i]);
            r.race_pct[i] = col ? parse_cell(row, *col, race_cols[i]) : Metric::undefined("not reported");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string render_cohort_table(std::span<const CohortSplitRow> rows,
                                std::span<const TaskPrevalence> prevalence) {
    std::vector<std::vector<std::string>> table;
    table.push_back({"Split", "Patients", "Studies", "Images", "PA", "AP", "Age(mean±SD)", "Female%", "White%",
                     "Black%", "Asian%", "Hisp./Lat.%", "Other/Unk.%"});
    for (const auto& r : rows) {
        std::vector<std::string> line{r.split,         thousands(r.patients), thousands(r.studies),
                                      thousands(r.images), thousands(r.pa),   thousands(r.ap),
                                      fixed(r.age_mean, 1) + "±" + fixed(r.age_sd, 1)};
        for (double p : r.pct) line.push_back(fixed(p, 1));
        table.push_back(std::move(line));
    }
    std::string out = render_aligned(table, 1);
    if (!prevalence.empty()) {
        out += "Test-set prevalence (%):";
        for (const auto& p : prevalence) out += " " + p.task + "=" + fixed(p.pct, 1);
        out += "\n";
    }
    return out;
}

}  // namespace asrs
