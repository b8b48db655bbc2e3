#include "asrs/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "asrs/error.hpp"

namespace asrs {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Minimal UTF-8 well-formedness check (no overlongs beyond the lead-byte ranges).
bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        if (c < 0x80) {
            extra = 0;
        } else if (c >= 0xC2 && c <= 0xDF) {
            extra = 1;
        } else if (c >= 0xE0 && c <= 0xEF) {
            extra = 2;
        } else if (c >= 0xF0 && c <= 0xF4) {
            extra = 3;
        } else {
            return false;
        }
        if (i + extra >= s.size() && extra > 0) return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
        }
        i += extra + 1;
    }
    return true;
}

}  // namespace

std::string sample_id_problem(std::string_view value) {
    if (value.empty()) return "sample id is empty";
    if (value.size() > SampleId::kMaxBytes) return "sample id longer than 128 bytes";
    for (char ch : value) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x20 || c == 0x7F) return "sample id contains a control character";
    }
    if (!valid_utf8(value)) return "sample id is not valid UTF-8";
    return {};
}

SampleId::SampleId(std::string value) : value_(std::move(value)) {
    if (auto problem = sample_id_problem(value_); !problem.empty()) {
        throw Error(ErrorCode::InvalidSampleId, problem + ": '" + value_ + "'");
    }
}

std::string_view to_string(ViewTag tag) {
    switch (tag) {
        case ViewTag::Original: return "ORIGINAL";
        case ViewTag::RotN30: return "ROT_N30";
        case ViewTag::RotN15: return "ROT_N15";
        case ViewTag::RotP15: return "ROT_P15";
        case ViewTag::RotP30: return "ROT_P30";
    }
    return "?";
}

std::optional<ViewTag> parse_view_tag(std::string_view text) {
    for (ViewTag tag : kAllViews) {
        if (to_string(tag) == text) return tag;
    }
    return std::nullopt;
}

void validate(const EmbeddingRecord& rec) {
    if (rec.dim == 0) {
        throw Error(ErrorCode::BadValue, "embedding dim must be positive for sample '" +
                                             rec.sample_id.str() + "'");
    }
    for (ViewTag tag : kAllViews) {
        const auto& v = rec.view(tag);
        if (v.size() != rec.dim) {
            throw Error(ErrorCode::MixedDimensions,
                        "sample '" + rec.sample_id.str() + "' view " + std::string(to_string(tag)) +
                            " has " + std::to_string(v.size()) + " components, expected " +
                            std::to_string(rec.dim));
        }
        for (float x : v) {
            if (!std::isfinite(x)) {
                throw Error(ErrorCode::NonFiniteValue, "non-finite component in sample '" +
                                                           rec.sample_id.str() + "' view " +
                                                           std::string(to_string(tag)));
            }
        }
    }
}

std::string_view to_string(GroupLabel g) {
    switch (g) {
        case GroupLabel::G1: return "G1";
        case GroupLabel::G2: return "G2";
        case GroupLabel::G3: return "G3";
        case GroupLabel::G4: return "G4";
    }
    return "?";
}

std::optional<GroupLabel> parse_group(std::string_view text) {
    for (GroupLabel g : kAllGroups) {
        if (to_string(g) == text) return g;
    }
    return std::nullopt;
}

std::string_view to_string(Sex s) {
    switch (s) {
        case Sex::Female: return "F";
        case Sex::Male: return "M";
        case Sex::OtherUnknown: return "other/unknown";
    }
    return "?";
}

std::string_view to_string(Race r) {
    switch (r) {
        case Race::White: return "White";
        case Race::Black: return "Black";
        case Race::Asian: return "Asian";
        case Race::HispanicLatino: return "Hispanic/Latino";
        case Race::OtherUnknown: return "Other/Unknown";
    }
    return "?";
}

std::optional<Sex> parse_sex(std::string_view text) {
    const std::string t = lower(text);
    if (t == "f" || t == "female") return Sex::Female;
    if (t == "m" || t == "male") return Sex::Male;
    if (t.empty() || t == "other/unknown" || t == "other" || t == "unknown" || t == "u" ||
        t == "o") {
        return Sex::OtherUnknown;
    }
    return std::nullopt;
}

std::optional<Race> parse_race(std::string_view text) {
    const std::string t = lower(text);
    if (t == "white") return Race::White;
    if (t == "black") return Race::Black;
    if (t == "asian") return Race::Asian;
    if (t == "hispanic/latino" || t == "hispanic" || t == "latino") return Race::HispanicLatino;
    if (t == "other/unknown" || t == "other" || t == "unknown") return Race::OtherUnknown;
    return std::nullopt;
}

}  // namespace asrs
