#include "asrs/table_io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include "asrs/error.hpp"
#include "asrs/file_io.hpp"

namespace asrs {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(std::string_view raw, std::size_t row, const char* column) {
    const auto text = trim(raw);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::BadValue, "'" + std::string(raw) + "' is not a number", row, column);
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::BadValue, "non-finite value", row, column);
    }
    return value;
}

SampleId parse_id(const std::string& raw, std::size_t row) {
    if (auto problem = sample_id_problem(raw); !problem.empty()) {
        throw Error(ErrorCode::BadValue, problem, row, "sample_id");
    }
    return SampleId(raw);
}

std::string parse_task(const std::string& raw, std::size_t row) {
    const auto t = trim(raw);
    if (t.empty()) throw Error(ErrorCode::BadValue, "empty task name", row, "task");
    return std::string(t);
}

void append_meta(std::string& out, const MetadataLines& meta) {
    for (const auto& [key, value] : meta) {
        out += "# ";
        out += key;
        out += ": ";
        out += value;
        out += '\n';
    }
}

class UniqueIds {
public:
    void insert(const std::string& key, std::size_t row, ErrorCode code, const std::string& what) {
        if (!seen_.insert(key).second) {
            throw Error(code, "duplicate " + what, row, "sample_id");
        }
    }

private:
    std::unordered_set<std::string> seen_;
};

}  // namespace

std::string_view to_string(TableSchema schema) {
    switch (schema) {
        case TableSchema::Scores: return "scores";
        case TableSchema::Groups: return "groups";
        case TableSchema::Predictions: return "predictions";
        case TableSchema::Labels: return "labels";
        case TableSchema::Cohort: return "cohort";
    }
    return "?";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool field_was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty() && !field_was_quoted) {
            quoted = true;
            field_was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            field_was_quoted = false;
        } else if (field_was_quoted) {
            throw Error(ErrorCode::BadValue, "characters after closing quote", row, "");
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw Error(ErrorCode::BadValue, "unterminated quoted field", row, "");
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_field(std::string_view value) {
    const bool needs_quotes = value.find_first_of(",\"") != std::string_view::npos ||
                              (!value.empty() && (value.front() == ' ' || value.back() == ' '));
    if (!needs_quotes) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error(ErrorCode::MissingColumn, "required column '" + std::string(name) + "' not in header",
                header_line, std::string(name));
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool in_preamble = true;
    // Skip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (in_preamble && !line.empty() && line.front() == '#') continue;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line, line_no);
        if (in_preamble) {
            in_preamble = false;
            table.header_line = line_no;
            for (auto& f : fields) f = std::string(trim(f));
            std::set<std::string> names;
            for (const auto& f : fields) {
                if (!names.insert(f).second) {
                    throw Error(ErrorCode::BadValue, "duplicate column '" + f + "'", line_no, f);
                }
            }
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(ErrorCode::BadValue,
                        "expected " + std::to_string(table.header.size()) + " fields, found " +
                            std::to_string(fields.size()),
                        line_no, "");
        }
        table.rows.push_back({line_no, std::move(fields)});
    }
    if (in_preamble) throw Error(ErrorCode::MissingColumn, "table has no header row");
    return table;
}

std::map<std::string, std::string> parse_table_metadata(std::string_view text) {
    std::map<std::string, std::string> meta;
    std::size_t pos = text.starts_with("\xEF\xBB\xBF") ? 3 : 0;
    while (pos < text.size() && text[pos] == '#') {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = trim(text.substr(pos + 1, nl - pos - 1));
        pos = nl + 1;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        meta[std::string(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 1)));
    }
    return meta;
}

std::vector<ScoreRecord> parse_scores(std::string_view text) {
    const auto table = parse_csv(text);
    const auto c_id = table.column("sample_id");
    const auto c_score = table.column("score");
    std::vector<ScoreRecord> out;
    out.reserve(table.rows.size());
    UniqueIds ids;
    for (const auto& row : table.rows) {
        auto id = parse_id(row.fields[c_id], row.line);
        const double score = parse_real(row.fields[c_score], row.line, "score");
        if (score < 0.0) throw Error(ErrorCode::BadValue, "negative score", row.line, "score");
        ids.insert(id.str(), row.line, ErrorCode::DuplicateKey, "sample id");
        out.push_back({std::move(id), score});
    }
    return out;
}

std::vector<GroupAssignment> parse_groups(std::string_view text) {
    const auto table = parse_csv(text);
    const auto c_id = table.column("sample_id");
    const auto c_group = table.column("group");
    std::vector<GroupAssignment> out;
    out.reserve(table.rows.size());
    UniqueIds ids;
    for (const auto& row : table.rows) {
        auto id = parse_id(row.fields[c_id], row.line);
        const auto group = parse_group(trim(row.fields[c_group]));
        if (!group) {
            throw Error(ErrorCode::BadValue, "'" + row.fields[c_group] + "' is not one of G1..G4",
                        row.line, "group");
        }
        ids.insert(id.str(), row.line, ErrorCode::DuplicateKey, "sample id");
        out.push_back({std::move(id), *group});
    }
    return out;
}

std::vector<PredictionRecord> parse_predictions(std::string_view text) {
    const auto table = parse_csv(text);
    const auto c_id = table.column("sample_id");
    const auto c_task = table.column("task");
    const auto c_prob = table.column("prob");
    std::vector<PredictionRecord> out;
    out.reserve(table.rows.size());
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        auto id = parse_id(row.fields[c_id], row.line);
        auto task = parse_task(row.fields[c_task], row.line);
        const double prob = parse_real(row.fields[c_prob], row.line, "prob");
        if (prob < 0.0 || prob > 1.0) {
            throw Error(ErrorCode::BadValue, "probability outside [0,1]", row.line, "prob");
        }
        if (!seen.emplace(id.str(), task).second) {
            throw Error(ErrorCode::DuplicateKey, "duplicate (sample_id, task)", row.line, "sample_id");
        }
        out.push_back({std::move(id), std::move(task), prob});
    }
    return out;
}

std::vector<LabelRecord> parse_labels(std::string_view text) {
    const auto table = parse_csv(text);
    const auto c_id = table.column("sample_id");
    const auto c_task = table.column("task");
    const auto c_label = table.column("label");
    std::vector<LabelRecord> out;
    out.reserve(table.rows.size());
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        auto id = parse_id(row.fields[c_id], row.line);
        auto task = parse_task(row.fields[c_task], row.line);
        const auto raw = trim(row.fields[c_label]);
        int label = 0;
        if (raw == "1") {
            label = 1;
        } else if (raw != "0") {
            throw Error(ErrorCode::BadValue, "label must be 0 or 1", row.line, "label");
        }
        if (!seen.emplace(id.str(), task).second) {
            throw Error(ErrorCode::DuplicateKey, "duplicate (sample_id, task)", row.line, "sample_id");
        }
        out.push_back({std::move(id), std::move(task), label});
    }
    return out;
}

CohortTable parse_cohort(std::string_view text) {
    const auto table = parse_csv(text);
    const auto c_id = table.column("sample_id");
    const auto c_age = table.column("age");
    const auto c_sex = table.column("sex");
    const auto c_race = table.column("race");
    CohortTable out;
    out.records.reserve(table.rows.size());
    UniqueIds ids;
    for (const auto& row : table.rows) {
        CohortRecord rec;
        rec.sample_id = parse_id(row.fields[c_id], row.line);
        if (!trim(row.fields[c_age]).empty()) {
            const double age = parse_real(row.fields[c_age], row.line, "age");
            if (age < 0.0 || age > 130.0) {
                throw Error(ErrorCode::BadValue, "age outside [0, 130]", row.line, "age");
            }
            rec.age = age;
        }
        const auto sex = parse_sex(trim(row.fields[c_sex]));
        if (!sex) {
            throw Error(ErrorCode::BadValue, "unrecognised sex '" + row.fields[c_sex] + "'", row.line,
                        "sex");
        }
        rec.sex = *sex;
        const auto race_text = trim(row.fields[c_race]);
        if (auto race = parse_race(race_text)) {
            rec.race = *race;
        } else {
            // An empty cell is an explicit unknown; only unmapped text is counted.
            rec.race = Race::OtherUnknown;
            if (!race_text.empty()) ++out.unrecognized_race_rows;
        }
        ids.insert(rec.sample_id.str(), row.line, ErrorCode::DuplicateKey, "sample id");
        out.records.push_back(std::move(rec));
    }
    return out;
}

TableData parse_table(std::string_view text, TableSchema schema) {
    switch (schema) {
        case TableSchema::Scores: return parse_scores(text);
        case TableSchema::Groups: return parse_groups(text);
        case TableSchema::Predictions: return parse_predictions(text);
        case TableSchema::Labels: return parse_labels(text);
        case TableSchema::Cohort: return parse_cohort(text);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown table schema");
}

namespace {

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& parse) {
    const std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const Error& e) {
        throw with_context(e, path.string());
    }
}

}  // namespace

TableData read_table(const std::filesystem::path& path, TableSchema schema) {
    return with_path(path, [schema](std::string_view t) { return parse_table(t, schema); });
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
    return with_path(path, [](std::string_view t) { return parse_scores(t); });
}
std::vector<GroupAssignment> read_groups(const std::filesystem::path& path) {
    return with_path(path, [](std::string_view t) { return parse_groups(t); });
}
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    return with_path(path, [](std::string_view t) { return parse_predictions(t); });
}
std::vector<LabelRecord> read_labels(const std::filesystem::path& path) {
    return with_path(path, [](std::string_view t) { return parse_labels(t); });
}
CohortTable read_cohort(const std::filesystem::path& path) {
    return with_path(path, [](std::string_view t) { return parse_cohort(t); });
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error(ErrorCode::BadValue, "cannot format number");
    return std::string(buf, ptr);
}

std::string format_scores(std::span<const ScoreRecord> records, const MetadataLines& meta) {
    std::string out;
    append_meta(out, meta);
    out += "sample_id,score\n";
    for (const auto& r : records) {
        out += csv_field(r.sample_id.str());
        out += ',';
        out += format_double(r.score);
        out += '\n';
    }
    return out;
}

std::string format_groups(std::span<const GroupAssignment> records, const MetadataLines& meta) {
    std::string out;
    append_meta(out, meta);
    out += "sample_id,group\n";
    for (const auto& r : records) {
        out += csv_field(r.sample_id.str());
        out += ',';
        out += to_string(r.group);
        out += '\n';
    }
    return out;
}

std::string format_predictions(std::span<const PredictionRecord> records, const MetadataLines& meta) {
    std::string out;
    append_meta(out, meta);
    out += "sample_id,task,prob\n";
    for (const auto& r : records) {
        out += csv_field(r.sample_id.str());
        out += ',';
        out += csv_field(r.task);
        out += ',';
        out += format_double(r.prob);
        out += '\n';
    }
    return out;
}

std::string format_labels(std::span<const LabelRecord> records, const MetadataLines& meta) {
    std::string out;
    append_meta(out, meta);
    out += "sample_id,task,label\n";
    for (const auto& r : records) {
        out += csv_field(r.sample_id.str());
        out += ',';
        out += csv_field(r.task);
        out += ',';
        out += r.label == 1 ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string format_cohort(std::span<const CohortRecord> records, const MetadataLines& meta) {
    std::string out;
    append_meta(out, meta);
    out += "sample_id,age,sex,race\n";
    for (const auto& r : records) {
        out += csv_field(r.sample_id.str());
        out += ',';
        if (r.age) out += format_double(*r.age);
        out += ',';
        out += csv_field(to_string(r.sex));
        out += ',';
        out += csv_field(to_string(r.race));
        out += '\n';
    }
    return out;
}

}  // namespace asrs
