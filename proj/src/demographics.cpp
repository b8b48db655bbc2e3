#include "asrs/demographics.hpp"

#include <cmath>
#include <unordered_map>

#include "asrs/error.hpp"

namespace asrs {

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

DemographicsSummary summarize_groups(std::span<const GroupAssignment> groups,
                                     const CohortTable& cohort) {
    std::unordered_map<std::string, const CohortRecord*> by_id;
    by_id.reserve(cohort.records.size());
    for (const auto& rec : cohort.records) by_id.emplace(rec.sample_id.str(), &rec);

    struct Acc {
        std::size_t n = 0;
        std::size_t n_age = 0;
        double age_sum = 0.0;
        std::array<std::size_t, 3> sex{};
        std::array<std::size_t, 5> race{};
    };
    std::array<Acc, kGroupCount> acc{};
    DemographicsSummary out;
    out.unrecognized_race_rows = cohort.unrecognized_race_rows;

    for (const auto& g : groups) {
        auto& a = acc[index_of(g.group)];
        ++a.n;
        const auto it = by_id.find(g.sample_id.str());
        if (it == by_id.end()) {
            ++out.missing_cohort_rows;
            ++out.missing_age;
            ++a.sex[static_cast<std::size_t>(Sex::OtherUnknown)];
            ++a.race[static_cast<std::size_t>(Race::OtherUnknown)];
            continue;
        }
        const auto& rec = *it->second;
        if (rec.age) {
            a.age_sum += *rec.age;
            ++a.n_age;
        } else {
            ++out.missing_age;
        }
        ++a.sex[static_cast<std::size_t>(rec.sex)];
        ++a.race[static_cast<std::size_t>(rec.race)];
    }

    for (GroupLabel g : kAllGroups) {
        const auto& a = acc[index_of(g)];
        DemographicsRow row;
        row.group = g;
        row.n = a.n;
        row.n_age = a.n_age;
        row.age_mean = a.n_age == 0 ? Metric::undefined("no age data")
                                    : Metric::of(a.age_sum / static_cast<double>(a.n_age));
        auto pct = [&](std::size_t count) {
            if (a.n == 0) return Metric::undefined("empty group");
            return Metric::of(round_to(100.0 * static_cast<double>(count) / static_cast<double>(a.n), 2));
        };
        for (std::size_t i = 0; i < row.sex_pct.size(); ++i) row.sex_pct[i] = pct(a.sex[i]);
        for (std::size_t i = 0; i < row.race_pct.size(); ++i) row.race_pct[i] = pct(a.race[i]);
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {

Metric difference(const Metric& from, const Metric& to) {
    if (!from.defined()) return Metric::undefined(from.reason);
    if (!to.defined()) return Metric::undefined(to.reason);
    return Metric::of(*to.value - *from.value);
}

}  // namespace

DemographicsDelta delta_row(std::span<const DemographicsRow> rows, GroupLabel from, GroupLabel to) {
    const DemographicsRow* a = nullptr;
    const DemographicsRow* b = nullptr;
    for (const auto& r : rows) {
        if (r.group == from) a = &r;
        if (r.group == to) b = &r;
    }
    for (auto [row, label] : {std::pair{a, from}, std::pair{b, to}}) {
        if (row == nullptr || row->n == 0) {
            throw Error(ErrorCode::MissingGroup,
                        "group " + std::string(to_string(label)) + " has no samples");
        }
    }
    DemographicsDelta d;
    d.from = from;
    d.to = to;
    d.age_mean = difference(a->age_mean, b->age_mean);
    for (std::size_t i = 0; i < d.sex_pct.size(); ++i) d.sex_pct[i] = difference(a->sex_pct[i], b->sex_pct[i]);
    for (std::size_t i = 0; i < d.race_pct.size(); ++i) {
        d.race_pct[i] = difference(a->race_pct[i], b->race_pct[i]);
    }
    return d;
}

}  // namespace asrs
