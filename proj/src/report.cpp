#include "asrs/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "asrs/error.hpp"

namespace asrs {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kPositiveRule = "prob >= threshold";
constexpr const char* kResampleRule =
    "per group, keep the under-represented class and draw a uniform subset of the other class "
    "of size floor(target-fit), matching the anchor group's prevalence";
constexpr const char* kSeedScheme = "splitmix64(seed, group, rep) seeding mt19937_64";

std::size_t display_width(std::string_view s) {
    std::size_t w = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++w;
    }
    return w;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void put_metric(ojson& j, const std::string& name, const Metric& m) {
    if (m.defined()) {
        j[name] = *m.value;
    } else {
        j[name] = nullptr;
        j[name + "_reason"] = m.reason;
    }
}

std::string csv_metric(const Metric& m) { return m.defined() ? format_double(*m.value) : std::string(); }

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

MetricsTableRow to_table_row(const TaskSection& section, const std::string& model) {
    MetricsTableRow row;
    row.task = section.task;
    row.model = model;
    for (const auto& m : section.metrics) {
        auto& cells = row.groups[index_of(m.group)];
        cells.precision = m.precision;
        cells.recall = m.recall;
        cells.auroc = m.auroc;
        cells.recall_resampled = m.recall_resampled;
        cells.auroc_resampled = m.auroc_resampled;
    }
    return row;
}

ConfidenceTableRow to_confidence_row(const TaskSection& section, const std::string& model) {
    ConfidenceTableRow row;
    row.task = section.task;
    row.model = model;
    for (const auto& c : section.confidence) {
        row.groups[index_of(c.group)] = {c.mean_overall, c.mean_pos, c.mean_neg};
    }
    return row;
}

std::string sex_label(Sex s) {
    switch (s) {
        case Sex::Female: return "Female (%)";
        case Sex::Male: return "Male (%)";
        case Sex::OtherUnknown: return "Other/unknown sex (%)";
    }
    return "?";
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view text) {
    if (text == "json") return ReportFormat::Json;
    if (text == "csv") return ReportFormat::Csv;
    if (text == "text") return ReportFormat::Text;
    return std::nullopt;
}

std::string_view to_string(ReportFormat f) {
    switch (f) {
        case ReportFormat::Json: return "json";
        case ReportFormat::Csv: return "csv";
        case ReportFormat::Text: return "text";
    }
    return "?";
}

std::vector<std::string> available_tasks(std::span<const PredictionRecord> preds) {
    std::vector<std::string> tasks;
    std::set<std::string> seen;
    for (const auto& p : preds) {
        if (seen.insert(p.task).second) tasks.push_back(p.task);
    }
    return tasks;
}

std::string report_command(const ReportSettings& settings, ReportFormat format) {
    std::string cmd = "report";
    if (!settings.tasks.empty()) cmd += " --tasks " + join(settings.tasks, ",");
    cmd += " --threshold " + format_double(settings.threshold);
    cmd += " --resample-anchor " + std::string(to_string(settings.anchor));
    cmd += " --reps " + std::to_string(settings.reps);
    cmd += " --seed " + std::to_string(settings.seed);
    cmd += " --format " + std::string(to_string(format));
    cmd += " --model " + settings.model;
    return cmd;
}

Report build_report(std::span<const GroupAssignment> groups, std::span<const PredictionRecord> preds,
                    std::span<const LabelRecord> labels, const CohortTable* cohort,
                    const ReportSettings& settings, RunMetadata metadata, unsigned workers) {
    const auto known = available_tasks(preds);
    std::vector<std::string> tasks = settings.tasks.empty() ? known : settings.tasks;
    for (const auto& t : tasks) {
        if (std::find(known.begin(), known.end(), t) == known.end()) {
            throw Error(ErrorCode::UnknownTask, "task '" + t + "' not in predictions; available: " +
                                                    (known.empty() ? "(none)" : join(known, ", ")));
        }
    }
    if (tasks.empty()) throw Error(ErrorCode::EmptyInput, "predictions contain no tasks");

    Report report;
    report.metadata = std::move(metadata);
    report.settings = settings;
    report.settings.tasks = tasks;

    StratifiedOptions opts;
    opts.threshold = settings.threshold;
    opts.anchor = settings.anchor;
    opts.reps = settings.reps;
    opts.seed = settings.seed;
    opts.workers = workers;
    for (const auto& task : tasks) {
        TaskSection section;
        section.task = task;
        section.metrics = evaluate_stratified(groups, preds, labels, task, opts);
        section.confidence = confidence_table(groups, preds, labels, task);
        section.overconfident_unstable =
            overconfident_unstable_group(section.metrics, section.confidence);
        report.tasks.push_back(std::move(section));
    }

    if (cohort != nullptr) {
        DemographicsSection demo;
        demo.summary = summarize_groups(groups, *cohort);
        const auto& rows = demo.summary.rows;
        if (rows[index_of(GroupLabel::G1)].n > 0 && rows[index_of(GroupLabel::G4)].n > 0) {
            demo.delta = delta_row(rows, GroupLabel::G1, GroupLabel::G4);
        }
        report.demographics = std::move(demo);
    }
    return report;
}

std::string format_report(const Report& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return format_report_json(report);
        case ReportFormat::Csv: return format_report_csv(report);
        case ReportFormat::Text: return format_report_text(report);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown report format");
}

std::string format_report_json(const Report& report) {
    const auto& s = report.settings;
    ojson root;
    ojson meta;
    meta["run"] = to_json(report.metadata);
    meta["model"] = s.model;
    meta["threshold"] = s.threshold;
    meta["positive_call_rule"] = kPositiveRule;
    meta["quantile_method"] = s.quantile_method;
    meta["resample"] = {{"anchor", std::string(to_string(s.anchor))},
                        {"reps", s.reps},
                        {"seed", s.seed},
                        {"rule", kResampleRule},
                        {"seed_scheme", kSeedScheme}};
    meta["tasks"] = s.tasks;
    root["metadata"] = std::move(meta);

    ojson tasks = ojson::array();
    for (const auto& t : report.tasks) {
        ojson jt;
        jt["task"] = t.task;
        ojson metrics = ojson::array();
        for (const auto& m : t.metrics) {
            ojson r;
            r["group"] = std::string(to_string(m.group));
            r["n"] = m.n;
            r["n_pos"] = m.n_pos;
            put_metric(r, "prevalence", m.prevalence);
            r["confusion"] = {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}};
            put_metric(r, "precision", m.precision);
            put_metric(r, "recall", m.recall);
            put_metric(r, "auroc", m.auroc);
            put_metric(r, "recall_resampled", m.recall_resampled);
            if (m.recall_resampled_sd) r["recall_resampled_sd"] = *m.recall_resampled_sd;
            put_metric(r, "auroc_resampled", m.auroc_resampled);
            if (m.auroc_resampled_sd) r["auroc_resampled_sd"] = *m.auroc_resampled_sd;
            metrics.push_back(std::move(r));
        }
        jt["metrics"] = std::move(metrics);
        ojson conf = ojson::array();
        for (const auto& c : t.confidence) {
            ojson r;
            r["group"] = std::string(to_string(c.group));
            r["n"] = c.n;
            r["n_pos"] = c.n_pos;
            r["n_neg"] = c.n_neg;
            put_metric(r, "mean_overall", c.mean_overall);
            put_metric(r, "mean_pos", c.mean_pos);
            put_metric(r, "mean_neg", c.mean_neg);
            conf.push_back(std::move(r));
        }
        jt["confidence"] = std::move(conf);
        jt["overconfident_unstable"] = t.overconfident_unstable
                                           ? ojson(std::string(to_string(*t.overconfident_unstable)))
                                           : ojson(nullptr);
        tasks.push_back(std::move(jt));
    }
    root["tasks"] = std::move(tasks);

    if (report.demographics) {
        const auto& d = *report.demographics;
        ojson jd;
        jd["weighting"] = "per image";
        jd["missing_cohort_rows"] = d.summary.missing_cohort_rows;
        jd["missing_age"] = d.summary.missing_age;
        jd["unrecognized_race_rows"] = d.summary.unrecognized_race_rows;
        ojson rows = ojson::array();
        for (const auto& r : d.summary.rows) {
            ojson jr;
            jr["group"] = std::string(to_string(r.group));
            jr["n"] = r.n;
            jr["n_age"] = r.n_age;
            put_metric(jr, "age_mean", r.age_mean);
            ojson sex;
            for (Sex x : kAllSexes) put_metric(sex, std::string(to_string(x)), r.sex_pct[static_cast<std::size_t>(x)]);
            ojson race;
            for (Race x : kAllRaces) put_metric(race, std::string(to_string(x)), r.race_pct[static_cast<std::size_t>(x)]);
            jr["sex_pct"] = std::move(sex);
            jr["race_pct"] = std::move(race);
            rows.push_back(std::move(jr));
        }
        jd["rows"] = std::move(rows);
        if (d.delta) {
            ojson jr;
            jr["from"] = std::string(to_string(d.delta->from));
            jr["to"] = std::string(to_string(d.delta->to));
            put_metric(jr, "age_mean", d.delta->age_mean);
            ojson sex;
            for (Sex x : kAllSexes) put_metric(sex, std::string(to_string(x)), d.delta->sex_pct[static_cast<std::size_t>(x)]);
            ojson race;
            for (Race x : kAllRaces) put_metric(race, std::string(to_string(x)), d.delta->race_pct[static_cast<std::size_t>(x)]);
            jr["sex_pct"] = std::move(sex);
            jr["race_pct"] = std::move(race);
            jd["delta"] = std::move(jr);
        } else {
            jd["delta"] = nullptr;
        }
        root["demographics"] = std::move(jd);
    }
    return root.dump(2) + "\n";
}

std::string format_report_csv(const Report& report) {
    const auto& s = report.settings;
    std::string out;
    out += "# run: " + to_line(report.metadata) + "\n";
    out += "# model: " + s.model + "\n";
    out += "# threshold: " + format_double(s.threshold) + " (" + kPositiveRule + ")\n";
    out += "# quantile_method: " + s.quantile_method + "\n";
    out += "# resample: anchor=" + std::string(to_string(s.anchor)) + " reps=" + std::to_string(s.reps) +
           " seed=" + std::to_string(s.seed) + "\n";

    out += "[metrics]\n";
    out += "task,group,n,n_pos,prevalence,tp,fp,tn,fn,precision,recall,auroc,recall_resampled,"
           "recall_resampled_sd,auroc_resampled,auroc_resampled_sd,notes\n";
    for (const auto& t : report.tasks) {
        for (const auto& m : t.metrics) {
            std::vector<std::string> notes;
            for (const auto& [name, metric] :
                 {std::pair<const char*, const Metric*>{"precision", &m.precision},
                  {"recall", &m.recall},
                  {"auroc", &m.auroc},
                  {"resampled", &m.recall_resampled}}) {
                if (!metric->defined()) notes.push_back(std::string(name) + ": " + metric->reason);
            }
            out += csv_field(t.task) + "," + std::string(to_string(m.group)) + "," + std::to_string(m.n) +
                   "," + std::to_string(m.n_pos) + "," + csv_metric(m.prevalence) + "," +
                   std::to_string(m.counts.tp) + "," + std::to_string(m.counts.fp) + "," +
                   std::to_string(m.counts.tn) + "," + std::to_string(m.counts.fn) + "," +
                   csv_metric(m.precision) + "," + csv_metric(m.recall) + "," + csv_metric(m.auroc) + "," +
                   csv_metric(m.recall_resampled) + "," + csv_opt(m.recall_resampled_sd) + "," +
                   csv_metric(m.auroc_resampled) + "," + csv_opt(m.auroc_resampled_sd) + "," +
                   csv_field(join(notes, "; ")) + "\n";
        }
    }

    out += "[confidence]\n";
    out += "task,group,n,n_pos,n_neg,mean_overall,mean_pos,mean_neg\n";
    for (const auto& t : report.tasks) {
        for (const auto& c : t.confidence) {
            out += csv_field(t.task) + "," + std::string(to_string(c.group)) + "," + std::to_string(c.n) +
                   "," + std::to_string(c.n_pos) + "," + std::to_string(c.n_neg) + "," +
                   csv_metric(c.mean_overall) + "," + csv_metric(c.mean_pos) + "," +
                   csv_metric(c.mean_neg) + "\n";
        }
    }

    out += "[flags]\n";
    out += "task,overconfident_unstable\n";
    for (const auto& t : report.tasks) {
        out += csv_field(t.task) + "," +
               (t.overconfident_unstable ? std::string(to_string(*t.overconfident_unstable)) : "") + "\n";
    }

    if (report.demographics) {
        const auto& d = *report.demographics;
        std::string header = "group,n,n_age,age_mean";
        for (Sex x : kAllSexes) header += "," + csv_field("sex_pct:" + std::string(to_string(x)));
        for (Race x : kAllRaces) header += "," + csv_field("race_pct:" + std::string(to_string(x)));
        out += "[demographics]\n";
        out += "# missing_cohort_rows: " + std::to_string(d.summary.missing_cohort_rows) +
               " missing_age: " + std::to_string(d.summary.missing_age) +
               " unrecognized_race_rows: " + std::to_string(d.summary.unrecognized_race_rows) + "\n";
        out += header + "\n";
        for (const auto& r : d.summary.rows) {
            out += std::string(to_string(r.group)) + "," + std::to_string(r.n) + "," +
                   std::to_string(r.n_age) + "," + csv_metric(r.age_mean);
            for (const auto& p : r.sex_pct) out += "," + csv_metric(p);
            for (const auto& p : r.race_pct) out += "," + csv_metric(p);
            out += "\n";
        }
        if (d.delta) {
            out += std::string(to_string(d.delta->to)) + "-" + std::string(to_string(d.delta->from)) +
                   ",,," + csv_metric(d.delta->age_mean);
            for (const auto& p : d.delta->sex_pct) out += "," + csv_metric(p);
            for (const auto& p : d.delta->race_pct) out += "," + csv_metric(p);
            out += "\n";
        }
    }
    return out;
}

std::string format_report_text(const Report& report) {
    const auto& s = report.settings;
    std::ostringstream out;
    const auto& md = report.metadata;
    out << "# " << md.tool << " " << md.version << "\n";
    out << "# command: " << md.command << "\n";
    for (const auto& [role, digest] : md.inputs) out << "# input " << role << ": " << digest << "\n";
    out << "# seed: " << (md.seed ? std::to_string(*md.seed) : "none") << "\n";
    out << "# timestamp: " << (md.timestamp ? *md.timestamp : "unset") << "\n";
    out << "# threshold: " << format_double(s.threshold) << " (" << kPositiveRule << ")\n";
    out << "# quantile method: " << s.quantile_method << "\n";
    out << "# resampling: anchor " << to_string(s.anchor) << ", reps " << s.reps << ", seed " << s.seed
        << " (" << kSeedScheme << ")\n\n";

    std::vector<MetricsTableRow> mrows;
    std::vector<ConfidenceTableRow> crows;
    for (const auto& t : report.tasks) {
        mrows.push_back(to_table_row(t, s.model));
        crows.push_back(to_confidence_row(t, s.model));
    }

    out << "Per-group metrics (Rec.(R)/AUC(R): resampled to " << to_string(s.anchor) << " prevalence)\n";
    out << render_metrics_table(mrows, s.anchor) << "\n";

    std::vector<std::vector<std::string>> sizes;
    {
        std::vector<std::string> head{"Task"};
        for (GroupLabel g : kAllGroups) {
            head.push_back(std::string(to_string(g)) + " N");
            head.push_back("Prev.");
        }
        sizes.push_back(std::move(head));
        for (const auto& t : report.tasks) {
            std::vector<std::string> row{t.task};
            for (const auto& m : t.metrics) {
                row.push_back(thousands(m.n));
                row.push_back(fixed_cell(m.prevalence, 3));
            }
            sizes.push_back(std::move(row));
        }
    }
    out << "Group sizes and prevalence\n" << render_aligned(sizes) << "\n";

    out << "Mean confidence by group (overall, positive, negative)\n";
    out << render_confidence_table(crows) << "\n";

    out << "Overconfident-unstable groups (highest mean confidence with lowest recall)\n";
    for (const auto& t : report.tasks) {
        out << "  " << t.task << ": "
            << (t.overconfident_unstable ? std::string(to_string(*t.overconfident_unstable)) : "none")
            << "\n";
    }

    std::vector<std::string> notes;
    for (const auto& t : report.tasks) {
        for (const auto& m : t.metrics) {
            for (const auto& [name, metric] :
                 {std::pair<const char*, const Metric*>{"precision", &m.precision},
                  {"recall", &m.recall},
                  {"AUROC", &m.auroc},
                  {"resampled", &m.recall_resampled}}) {
                if (!metric->defined() && metric->reason != "anchor group") {
                    notes.push_back(t.task + " " + std::string(to_string(m.group)) + " " + name + ": " +
                                    metric->reason);
                }
            }
        }
    }
    if (!notes.empty()) {
        out << "\nUndefined metrics\n";
        for (const auto& n : notes) out << "  " << n << "\n";
    }

    if (report.demographics) {
        const auto& d = *report.demographics;
        out << "\nDemographics by group (per image)\n";
        out << render_demographics_table(d.summary.rows, d.delta);
        out << "missing cohort rows: " << d.summary.missing_cohort_rows
            << "; missing ages: " << d.summary.missing_age
            << "; unrecognized race values: " << d.summary.unrecognized_race_rows << "\n";
    }
    return out.str();
}

std::string fixed_cell(const Metric& m, int decimals) {
    if (!m.defined()) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, *m.value);
    return buf;
}

std::string signed_cell(const Metric& m, int decimals) {
    if (!m.defined()) return "n/a";
    char buf[64];
    // Avoid printing "-0.00" for differences that round to zero.
    const double v = round_to(*m.value, decimals) == 0.0 ? 0.0 : *m.value;
    std::snprintf(buf, sizeof(buf), "%+.*f", decimals, v);
    return buf;
}

std::string thousands(std::size_t n) {
    std::string digits = std::to_string(n);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

std::string render_aligned(const std::vector<std::vector<std::string>>& rows, std::size_t left_columns) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (row.size() > width.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            const std::string pad(width[c] - display_width(row[c]), ' ');
            line += c < left_columns ? row[c] + pad : pad + row[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string render_metrics_table(std::span<const MetricsTableRow> rows, GroupLabel anchor) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> groups{"", ""};
    std::vector<std::string> head{"Task", "Model"};
    for (GroupLabel g : kAllGroups) {
        const bool resampled = g != anchor;
        groups.push_back(std::string(to_string(g)));
        for (int i = 0; i < (resampled ? 4 : 2); ++i) groups.emplace_back();
        for (const char* name : {"Prec.", "Rec.", "AUC"}) head.emplace_back(name);
        if (resampled) {
            head.emplace_back("Rec.(R)");
            head.emplace_back("AUC(R)");
        }
    }
    table.push_back(std::move(groups));
    table.push_back(std::move(head));
    for (const auto& r : rows) {
        std::vector<std::string> line{r.task, r.model};
        for (GroupLabel g : kAllGroups) {
            const auto& c = r.groups[index_of(g)];
            line.push_back(fixed_cell(c.precision, 3));
            line.push_back(fixed_cell(c.recall, 3));
            line.push_back(fixed_cell(c.auroc, 3));
            if (g != anchor) {
                line.push_back(fixed_cell(c.recall_resampled, 3));
                line.push_back(fixed_cell(c.auroc_resampled, 3));
            }
        }
        table.push_back(std::move(line));
    }
    return render_aligned(table, 2);
}

std::string render_confidence_table(std::span<const ConfidenceTableRow> rows) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> groups{"", ""};
    std::vector<std::string> head{"Task", "Model"};
    for (GroupLabel g : kAllGroups) {
        groups.push_back(std::string(to_string(g)));
        groups.emplace_back();
        groups.emplace_back();
        for (const char* name : {"Ovr.", "Pos.", "Neg."}) head.emplace_back(name);
    }
    table.push_back(std::move(groups));
    table.push_back(std::move(head));
    for (const auto& r : rows) {
        std::vector<std::string> line{r.task, r.model};
        for (const auto& g : r.groups) {
            for (const auto& m : g) line.push_back(fixed_cell(m, 3));
        }
        table.push_back(std::move(line));
    }
    return render_aligned(table, 2);
}

std::string render_demographics_table(std::span<const DemographicsRow> rows,
                                      const std::optional<DemographicsDelta>& delta) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> head{"Indicator"};
    for (GroupLabel g : kAllGroups) head.push_back(std::string(to_string(g)));
    const std::string delta_head =
        delta ? std::string(to_string(delta->to)) + " vs. " + std::string(to_string(delta->from))
              : "G4 vs. G1";
    head.push_back(delta_head);
    table.push_back(std::move(head));

    auto find = [&](GroupLabel g) -> const DemographicsRow* {
        for (const auto& r : rows) {
            if (r.group == g) return &r;
        }
        return nullptr;
    };
    auto add_row = [&](std::string label, auto cell, auto delta_cell) {
        std::vector<std::string> line{std::move(label)};
        bool any = false;
        for (GroupLabel g : kAllGroups) {
            const auto* r = find(g);
            line.push_back(r ? cell(*r) : "n/a");
            any = any || line.back() != "n/a";
        }
        // Indicators absent from every group (e.g. a partial transcription) are omitted.
        if (!any) return;
        line.push_back(delta ? delta_cell(*delta) : "n/a");
        table.push_back(std::move(line));
    };

    add_row("N (images)", [](const DemographicsRow& r) { return thousands(r.n); },
            [](const DemographicsDelta&) { return std::string("--"); });
    add_row("Age, mean (years)", [](const DemographicsRow& r) { return fixed_cell(r.age_mean, 2); },
            [](const DemographicsDelta& d) { return signed_cell(d.age_mean, 2); });
    for (Sex x : kAllSexes) {
        const auto i = static_cast<std::size_t>(x);
        add_row(sex_label(x), [i](const DemographicsRow& r) { return fixed_cell(r.sex_pct[i], 2); },
                [i](const DemographicsDelta& d) { return signed_cell(d.sex_pct[i], 2); });
    }
    for (Race x : kAllRaces) {
        const auto i = static_cast<std::size_t>(x);
        add_row(std::string(to_string(x)) + " (%)",
                [i](const DemographicsRow& r) { return fixed_cell(r.race_pct[i], 2); },
                [i](const DemographicsDelta& d) { return signed_cell(d.race_pct[i], 2); });
    }
    return render_aligned(table, 1);
}

}  // namespace asrs
