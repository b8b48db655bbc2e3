#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace asrs {

inline constexpr const char* kToolName = "asrs";
inline constexpr const char* kToolVersion = "1.0.0";

// Provenance embedded in every artifact. Inputs are identified by content
// digest and the command is recorded without file paths, so an artifact does
// not change when its inputs are moved or renamed. The timestamp comes from
// SOURCE_DATE_EPOCH when set and is otherwise left empty; the toolkit never
// reads the wall clock.
struct RunMetadata {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // role -> digest
    std::optional<std::uint64_t> seed;
    std::optional<std::string> timestamp;

    friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

RunMetadata make_run_metadata(std::string command,
                              std::vector<std::pair<std::string, std::string>> inputs,
                              std::optional<std::uint64_t> seed = std::nullopt);

nlohmann::ordered_json to_json(const RunMetadata& meta);
RunMetadata run_metadata_from_json(const nlohmann::ordered_json& j);

// Single-line form used in table preambles ("# run: {...}").
std::string to_line(const RunMetadata& meta);

}  // namespace asrs
