#include "asrs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "asrs/embedding_io.hpp"
#include "asrs/error.hpp"
#include "asrs/file_io.hpp"
#include "asrs/metadata.hpp"
#include "asrs/table_io.hpp"

namespace asrs {

namespace {

// Distributions are spelled out instead of using <random>'s, whose output is
// implementation-defined, so a config yields the same files on any stdlib.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : rng_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller, one variate per call.
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <std::size_t N>
    std::size_t categorical(const std::array<double, N>& weights) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        double x = uniform() * total;
        for (std::size_t i = 0; i + 1 < N; ++i) {
            if (x < weights[i]) return i;
            x -= weights[i];
        }
        return N - 1;
    }

private:
    std::mt19937_64 rng_;
};

std::string padded_id(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, i);
    return buf;
}

EmbeddingRecord make_record(Stream& s, const SynthConfig& c, std::string id, double& delta_out) {
    const double delta = std::exp(c.shift_log_mean + c.shift_log_sd * s.normal());
    EmbeddingRecord rec;
    rec.sample_id = SampleId(std::move(id));
    rec.dim = c.dim;
    auto& z0 = rec.view(ViewTag::Original);
    z0.resize(c.dim);
    for (auto& v : z0) v = static_cast<float>(s.normal());
    std::vector<double> u(c.dim);
    for (ViewTag tag : kRotatedViews) {
        double norm2 = 0.0;
        for (auto& v : u) {
            v = s.normal();
            norm2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        auto& zt = rec.view(tag);
        zt.resize(c.dim);
        for (std::uint32_t k = 0; k < c.dim; ++k) {
            double v = static_cast<double>(z0[k]) + delta * u[k] * inv;
            if (c.view_noise > 0.0) v += c.view_noise * s.normal();
            zt[k] = static_cast<float>(v);
        }
    }
    delta_out = delta;
    return rec;
}

std::string synth_command(const SynthConfig& c) {
    std::string miss;
    for (std::size_t i = 0; i < c.miss_rate_by_quartile.size(); ++i) {
        if (i) miss += ",";
        miss += format_double(c.miss_rate_by_quartile[i]);
    }
    std::string tasks;
    for (std::size_t i = 0; i < c.tasks.size(); ++i) {
        if (i) tasks += ",";
        tasks += c.tasks[i];
    }
    return "synth --seed " + std::to_string(c.seed) + " --n-val " + std::to_string(c.n_val) + " --n-test " +
           std::to_string(c.n_test) + " --dim " + std::to_string(c.dim) + " --shift-log-mean " +
           format_double(c.shift_log_mean) + " --shift-log-sd " + format_double(c.shift_log_sd) +
           " --view-noise " + format_double(c.view_noise) + " --miss-rates " + miss + " --prevalence " +
           format_double(c.prevalence) + " --confidence-inflation " + format_double(c.confidence_inflation) +
           " --false-positive-rate " + format_double(c.false_positive_rate) + " --tasks " + tasks;
}

}  // namespace

void validate(const SynthConfig& c) {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
    if (c.n_val < 8 || c.n_test < 8) fail("n_val and n_test must be at least 8");
    if (c.dim == 0) fail("dim must be positive");
    if (!std::isfinite(c.shift_log_mean) || !std::isfinite(c.shift_log_sd) || c.shift_log_sd < 0.0) {
        fail("shift_log_sd must be finite and non-negative");
    }
    if (!(c.view_noise >= 0.0) || !std::isfinite(c.view_noise)) fail("view_noise must be >= 0");
    for (double r : c.miss_rate_by_quartile) {
        if (!(r >= 0.0 && r <= 1.0)) fail("miss rates must lie in [0, 1]");
    }
    if (!(c.prevalence > 0.0 && c.prevalence < 1.0)) fail("prevalence must lie in (0, 1)");
    if (!(c.confidence_inflation >= 0.0) || !std::isfinite(c.confidence_inflation)) {
        fail("confidence_inflation must be >= 0");
    }
    if (!(c.false_positive_rate >= 0.0 && c.false_positive_rate <= 1.0)) {
        fail("false_positive_rate must lie in [0, 1]");
    }
    if (c.tasks.empty()) fail("at least one task is required");
    for (const auto& t : c.tasks) {
        if (t.empty() || t.find_first_of(",\"\n\r") != std::string::npos) fail("invalid task name '" + t + "'");
    }
}

nlohmann::ordered_json to_json(const SynthConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["n_val"] = c.n_val;
    j["n_test"] = c.n_test;
    j["dim"] = c.dim;
    j["shift_log_mean"] = c.shift_log_mean;
    j["shift_log_sd"] = c.shift_log_sd;
    j["view_noise"] = c.view_noise;
    j["miss_rate_by_quartile"] = c.miss_rate_by_quartile;
    j["prevalence"] = c.prevalence;
    j["confidence_inflation"] = c.confidence_inflation;
    j["false_positive_rate"] = c.false_positive_rate;
    j["tasks"] = c.tasks;
    return j;
}

SynthData synthesize(const SynthConfig& c) {
    validate(c);
    Stream s(c.seed);
    SynthData out;

    out.val.reserve(c.n_val);
    for (std::size_t i = 0; i < c.n_val; ++i) {
        double delta = 0.0;
        out.val.push_back(make_record(s, c, padded_id("val", i), delta));
        out.val_intended.push_back(4.0 * delta);
    }
    std::vector<double> deltas(c.n_test);
    out.test.reserve(c.n_test);
    for (std::size_t i = 0; i < c.n_test; ++i) {
        out.test.push_back(make_record(s, c, padded_id("test", i), deltas[i]));
        out.test_intended.push_back(4.0 * deltas[i]);
    }

    std::vector<std::size_t> order(c.n_test);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
    out.test_quartile.resize(c.n_test);
    for (std::size_t rank = 0; rank < c.n_test; ++rank) {
        out.test_quartile[order[rank]] = static_cast<GroupLabel>(4 * rank / c.n_test);
    }

    for (std::size_t i = 0; i < c.n_test; ++i) {
        const std::size_t q = index_of(out.test_quartile[i]);
        const auto& id = out.test[i].sample_id;
        for (const auto& task : c.tasks) {
            const bool positive = s.bernoulli(c.prevalence);
            double p = 0.0;
            if (positive) {
                p = s.bernoulli(c.miss_rate_by_quartile[q]) ? s.uniform(0.05, 0.45) : s.uniform(0.55, 0.95);
            } else if (s.bernoulli(c.false_positive_rate)) {
                p = s.uniform(0.55, 0.95);
            } else {
                p = s.uniform(0.05, 0.45) / (1.0 + c.confidence_inflation * static_cast<double>(q) / 3.0);
            }
            out.predictions.push_back({id, task, p});
            out.labels.push_back({id, task, positive ? 1 : 0});
        }
        CohortRecord rec;
        rec.sample_id = id;
        if (!s.bernoulli(0.02)) {
            const double age = std::clamp(68.0 - 4.0 * static_cast<double>(q) + 15.0 * s.normal(), 18.0, 100.0);
            rec.age = std::round(age * 10.0) / 10.0;
        }
        rec.sex = s.bernoulli(0.46) ? Sex::Female : Sex::Male;
        const double shift = 0.01 * static_cast<double>(q);
        rec.race = static_cast<Race>(s.categorical(std::array<double, 5>{
            0.68 - 2 * shift, 0.14 + shift, 0.04, 0.05 + shift, 0.09}));
        out.cohort.push_back(std::move(rec));
    }
    return out;
}

nlohmann::ordered_json generate(const SynthConfig& config, const std::filesystem::path& out_dir) {
    const SynthData data = synthesize(config);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + out_dir.string() + "': " + ec.message());

    const RunMetadata meta = make_run_metadata(synth_command(config), {}, config.seed);
    const MetadataLines lines{{"run", to_line(meta)}};

    std::vector<std::pair<std::string, std::string>> files{
        {"val_embeddings.asrs", encode_embeddings(data.val)},
        {"test_embeddings.asrs", encode_embeddings(data.test)},
        {"predictions.csv", format_predictions(data.predictions, lines)},
        {"labels.csv", format_labels(data.labels, lines)},
        {"cohort.csv", format_cohort(data.cohort, lines)},
    };
    nlohmann::ordered_json manifest;
    manifest["metadata"] = to_json(meta);
    manifest["config"] = to_json(config);
    auto listed = nlohmann::ordered_json::array();
    for (const auto& [name, bytes] : files) {
        write_file_atomic(out_dir / name, bytes);
        listed.push_back({{"name", name}, {"bytes", bytes.size()}, {"digest", sha256_digest(bytes)}});
    }
    manifest["files"] = std::move(listed);
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

}  // namespace asrs
