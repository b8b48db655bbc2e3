#include "asrs/embedding_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_set>

#include "asrs/error.hpp"
#include "asrs/file_io.hpp"
#include "json.hpp"

namespace asrs {

namespace {

using json = nlohmann::json;

template <typename T>
void put_le(std::string& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
    }
}

class Cursor {
public:
    explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get_le(const char* what) {
        need(sizeof(T), what);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }

    std::string_view take(std::size_t n, const char* what) {
        need(n, what);
        auto out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            throw Error(ErrorCode::TruncatedFile, std::string("file ends inside ") + what +
                                                      " at byte offset " + std::to_string(pos_));
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

void check_writable(std::span<const EmbeddingRecord> records) {
    if (records.empty()) throw Error(ErrorCode::EmptyInput, "no embedding records to write");
    const std::uint32_t dim = records.front().dim;
    std::unordered_set<std::string> seen;
    for (const auto& rec : records) {
        if (rec.dim != dim) {
            throw Error(ErrorCode::MixedDimensions,
                        "sample '" + rec.sample_id.str() + "' has dim " + std::to_string(rec.dim) +
                            ", expected " + std::to_string(dim));
        }
        if (!seen.insert(rec.sample_id.str()).second) {
            throw Error(ErrorCode::DuplicateSampleId, "duplicate sample id '" + rec.sample_id.str() + "'");
        }
        if (rec.sample_id.str().empty()) {
            throw Error(ErrorCode::InvalidSampleId, "record without a sample id");
        }
        validate(rec);
    }
}

std::vector<EmbeddingRecord> decode_binary(std::string_view bytes) {
    Cursor cur(bytes);
    cur.take(4, "magic");
    const auto version = cur.get_le<std::uint32_t>("header");
    if (version != kEmbeddingVersion) {
        throw Error(ErrorCode::VersionUnsupported,
                    "embedding file version " + std::to_string(version) + " (supported: 1)");
    }
    const auto dim = cur.get_le<std::uint32_t>("header");
    const auto n_views = cur.get_le<std::uint32_t>("header");
    const auto n_samples = cur.get_le<std::uint64_t>("header");
    if (dim == 0) throw Error(ErrorCode::BadHeader, "embedding dim is 0");
    if (n_views != kViewCount) {
        throw Error(ErrorCode::BadHeader,
                    "n_views is " + std::to_string(n_views) + ", expected 5");
    }
    // Each sample needs at least 3 bytes of id framing plus its vectors; reject
    // absurd counts before allocating.
    const std::uint64_t min_block = 3 + std::uint64_t{kViewCount} * dim * 4;
    if (n_samples > cur.remaining() / min_block + 1) {
        throw Error(ErrorCode::TruncatedFile, "header declares " + std::to_string(n_samples) +
                                                  " samples but the file is too short");
    }

    std::vector<EmbeddingRecord> records;
    records.reserve(static_cast<std::size_t>(n_samples));
    std::unordered_set<std::string> seen;
    for (std::uint64_t s = 0; s < n_samples; ++s) {
        const auto id_len = cur.get_le<std::uint16_t>("sample id length");
        std::string id(cur.take(id_len, "sample id"));
        if (auto problem = sample_id_problem(id); !problem.empty()) {
            throw Error(ErrorCode::InvalidSampleId,
                        problem + " (sample #" + std::to_string(s) + ")");
        }
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::DuplicateSampleId, "duplicate sample id '" + id + "'");
        }
        EmbeddingRecord rec;
        rec.sample_id = SampleId(id);
        rec.dim = dim;
        for (ViewTag tag : kAllViews) {
            auto raw = cur.take(std::size_t{dim} * 4, "embedding vector");
            auto& vec = rec.view(tag);
            vec.resize(dim);
            for (std::uint32_t i = 0; i < dim; ++i) {
                std::uint32_t bits = 0;
                for (int b = 0; b < 4; ++b) {
                    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(raw[4 * i + b]))
                            << (8 * b);
                }
                const float x = std::bit_cast<float>(bits);
                if (!std::isfinite(x)) {
                    throw Error(ErrorCode::NonFiniteValue,
                                "non-finite component " + std::to_string(i) + " in sample '" + id +
                                    "' view " + std::string(to_string(tag)));
                }
                vec[i] = x;
            }
        }
        records.push_back(std::move(rec));
    }
    if (cur.remaining() != 0) {
        throw Error(ErrorCode::TrailingData,
                    std::to_string(cur.remaining()) + " unexpected bytes after the last sample");
    }
    return records;
}

std::vector<EmbeddingRecord> decode_jsonl(std::string_view text) {
    std::vector<EmbeddingRecord> records;
    std::unordered_set<std::string> seen;
    std::optional<std::uint32_t> file_dim;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        const std::string where = " (line " + std::to_string(line_no) + ")";
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::BadValue, std::string("malformed JSON: ") + e.what() + where);
        }
        if (!obj.is_object() || !obj.contains("sample_id") || !obj.contains("dim") ||
            !obj.contains("views")) {
            throw Error(ErrorCode::BadValue, "expected object with sample_id, dim, views" + where);
        }
        if (!obj["sample_id"].is_string()) throw Error(ErrorCode::BadValue, "sample_id must be a string" + where);
        const std::string id = obj["sample_id"].get<std::string>();
        if (auto problem = sample_id_problem(id); !problem.empty()) {
            throw Error(ErrorCode::InvalidSampleId, problem + where);
        }
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::DuplicateSampleId, "duplicate sample id '" + id + "'" + where);
        }
        const auto& jdim = obj["dim"];
        if (!jdim.is_number_unsigned() || jdim.get<std::uint64_t>() == 0 ||
            jdim.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
            throw Error(ErrorCode::BadValue, "dim must be a positive integer" + where);
        }
        const auto dim = static_cast<std::uint32_t>(jdim.get<std::uint64_t>());
        if (file_dim && *file_dim != dim) {
            throw Error(ErrorCode::MixedDimensions, "sample '" + id + "' has dim " +
                                                        std::to_string(dim) + ", expected " +
                                                        std::to_string(*file_dim) + where);
        }
        file_dim = dim;

        const auto& views = obj["views"];
        if (!views.is_object() || views.size() != kViewCount) {
            throw Error(ErrorCode::BadValue, "views must map exactly the five view tags" + where);
        }
        EmbeddingRecord rec;
        rec.sample_id = SampleId(id);
        rec.dim = dim;
        for (ViewTag tag : kAllViews) {
            const std::string key(to_string(tag));
            if (!views.contains(key)) {
                throw Error(ErrorCode::BadValue, "missing view " + key + where);
            }
            const auto& arr = views[key];
            if (!arr.is_array() || arr.size() != dim) {
                throw Error(ErrorCode::MixedDimensions,
                            "view " + key + " of sample '" + id + "' is not an array of length " +
                                std::to_string(dim) + where);
            }
            auto& vec = rec.view(tag);
            vec.reserve(dim);
            for (const auto& el : arr) {
                if (!el.is_number()) throw Error(ErrorCode::BadValue, "non-numeric component" + where);
                const float x = static_cast<float>(el.get<double>());
                if (!std::isfinite(x)) {
                    throw Error(ErrorCode::NonFiniteValue, "non-finite component in sample '" + id +
                                                               "' view " + key + where);
                }
                vec.push_back(x);
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace

std::string encode_embeddings(std::span<const EmbeddingRecord> records) {
    check_writable(records);
    const std::uint32_t dim = records.front().dim;
    std::string out;
    std::size_t total = kEmbeddingHeaderBytes;
    for (const auto& rec : records) total += 2 + rec.sample_id.str().size() + kViewCount * dim * 4;
    out.reserve(total);

    out.append(kEmbeddingMagic);
    put_le<std::uint32_t>(out, kEmbeddingVersion);
    put_le<std::uint32_t>(out, dim);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kViewCount));
    put_le<std::uint64_t>(out, records.size());
    for (const auto& rec : records) {
        const auto& id = rec.sample_id.str();
        put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
        out.append(id);
        for (ViewTag tag : kAllViews) {
            for (float x : rec.view(tag)) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
        }
    }
    return out;
}

std::string encode_embeddings_jsonl(std::span<const EmbeddingRecord> records) {
    check_writable(records);
    std::string out;
    for (const auto& rec : records) {
        json views = json::object();
        for (ViewTag tag : kAllViews) {
            json arr = json::array();
            for (float x : rec.view(tag)) arr.push_back(x);
            views[std::string(to_string(tag))] = std::move(arr);
        }
        json obj = {{"sample_id", rec.sample_id.str()}, {"dim", rec.dim}, {"views", std::move(views)}};
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<EmbeddingRecord> decode_embeddings(std::string_view bytes) {
    if (bytes.size() >= 4 && bytes.substr(0, 4) == kEmbeddingMagic) return decode_binary(bytes);
    if (kEmbeddingMagic.substr(0, bytes.size()) == bytes) {
        throw Error(ErrorCode::TruncatedFile, "file ends inside the magic header");
    }
    const auto first = bytes.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && bytes[first] == '{') return decode_jsonl(bytes);
    throw Error(ErrorCode::BadMagic, "not an embedding file (expected 'ASRS' magic or JSONL)");
}

std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    try {
        return decode_embeddings(bytes);
    } catch (const Error& e) {
        throw with_context(e, path.string());
    }
}

void write_embeddings(std::span<const EmbeddingRecord> records, const std::filesystem::path& path) {
    write_file_atomic(path, encode_embeddings(records));
}

void write_embeddings_jsonl(std::span<const EmbeddingRecord> records,
                            const std::filesystem::path& path) {
    write_file_atomic(path, encode_embeddings_jsonl(records));
}

}  // namespace asrs
