#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asrs {

// Validated sample identifier: 1-128 bytes of UTF-8, no control characters.
class SampleId {
public:
    static constexpr std::size_t kMaxBytes = 128;

    SampleId() = default;
    explicit SampleId(std::string value);

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const SampleId&, const SampleId&) = default;
    friend auto operator<=>(const SampleId&, const SampleId&) = default;

private:
    std::string value_;
};

// Returns an empty string when `value` is a valid id, otherwise the reason.
std::string sample_id_problem(std::string_view value);

// Canonical on-disk order.
enum class ViewTag : std::uint8_t { Original = 0, RotN30, RotN15, RotP15, RotP30 };

inline constexpr std::size_t kViewCount = 5;
inline constexpr std::array<ViewTag, kViewCount> kAllViews{
    ViewTag::Original, ViewTag::RotN30, ViewTag::RotN15, ViewTag::RotP15, ViewTag::RotP30};
inline constexpr std::array<ViewTag, 4> kRotatedViews{
    ViewTag::RotN30, ViewTag::RotN15, ViewTag::RotP15, ViewTag::RotP30};

std::string_view to_string(ViewTag tag);
std::optional<ViewTag> parse_view_tag(std::string_view text);

struct EmbeddingRecord {
    SampleId sample_id;
    std::uint32_t dim = 0;
    // Indexed by ViewTag; every vector has `dim` components.
    std::array<std::vector<float>, kViewCount> vectors;

    const std::vector<float>& view(ViewTag tag) const {
        return vectors[static_cast<std::size_t>(tag)];
    }
    std::vector<float>& view(ViewTag tag) { return vectors[static_cast<std::size_t>(tag)]; }

    friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

// Throws NonFiniteValue / MixedDimensions when the record breaks its invariants.
void validate(const EmbeddingRecord& rec);

struct ScoreRecord {
    SampleId sample_id;
    double score = 0.0;

    friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

enum class GroupLabel : std::uint8_t { G1 = 0, G2, G3, G4 };

inline constexpr std::size_t kGroupCount = 4;
inline constexpr std::array<GroupLabel, kGroupCount> kAllGroups{
    GroupLabel::G1, GroupLabel::G2, GroupLabel::G3, GroupLabel::G4};

inline constexpr std::size_t index_of(GroupLabel g) { return static_cast<std::size_t>(g); }
std::string_view to_string(GroupLabel g);
std::optional<GroupLabel> parse_group(std::string_view text);

struct GroupAssignment {
    SampleId sample_id;
    GroupLabel group = GroupLabel::G1;

    friend bool operator==(const GroupAssignment&, const GroupAssignment&) = default;
};

struct PredictionRecord {
    SampleId sample_id;
    std::string task;
    double prob = 0.0;

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct LabelRecord {
    SampleId sample_id;
    std::string task;
    int label = 0;

    friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

enum class Sex : std::uint8_t { Female = 0, Male, OtherUnknown };
enum class Race : std::uint8_t { White = 0, Black, Asian, HispanicLatino, OtherUnknown };

inline constexpr std::array<Sex, 3> kAllSexes{Sex::Female, Sex::Male, Sex::OtherUnknown};
inline constexpr std::array<Race, 5> kAllRaces{Race::White, Race::Black, Race::Asian,
                                               Race::HispanicLatino, Race::OtherUnknown};

std::string_view to_string(Sex s);
std::string_view to_string(Race r);
std::optional<Sex> parse_sex(std::string_view text);
// Unrecognised strings are not an error: callers map them to OtherUnknown and count them.
std::optional<Race> parse_race(std::string_view text);

struct CohortRecord {
    SampleId sample_id;
    std::optional<double> age;
    Sex sex = Sex::OtherUnknown;
    Race race = Race::OtherUnknown;

    friend bool operator==(const CohortRecord&, const CohortRecord&) = default;
};

}  // namespace asrs
