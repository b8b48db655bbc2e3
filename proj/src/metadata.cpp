#include "asrs/metadata.hpp"

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <string_view>

#include "asrs/error.hpp"

namespace asrs {

namespace {

std::optional<std::string> timestamp_from_env() {
    const char* raw = std::getenv("SOURCE_DATE_EPOCH");
    if (raw == nullptr) return std::nullopt;
    std::string_view text(raw);
    long long secs = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), secs);
    if (ec != std::errc() || ptr != text.data() + text.size() || secs < 0) return std::nullopt;
    const std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

}  // namespace

RunMetadata make_run_metadata(std::string command,
                              std::vector<std::pair<std::string, std::string>> inputs,
                              std::optional<std::uint64_t> seed) {
    RunMetadata meta;
    meta.command = std::move(command);
    meta.inputs = std::move(inputs);
    meta.seed = seed;
    meta.timestamp = timestamp_from_env();
    return meta;
}

nlohmann::ordered_json to_json(const RunMetadata& meta) {
    nlohmann::ordered_json j;
    j["tool"] = meta.tool;
    j["version"] = meta.version;
    j["command"] = meta.command;
    auto inputs = nlohmann::ordered_json::object();
    for (const auto& [role, digest] : meta.inputs) inputs[role] = digest;
    j["inputs"] = std::move(inputs);
    j["seed"] = meta.seed ? nlohmann::ordered_json(*meta.seed) : nlohmann::ordered_json(nullptr);
    j["timestamp"] = meta.timestamp ? nlohmann::ordered_json(*meta.timestamp)
                                    : nlohmann::ordered_json(nullptr);
    return j;
}

RunMetadata run_metadata_from_json(const nlohmann::ordered_json& j) {
    try {
        RunMetadata meta;
        meta.tool = j.at("tool").get<std::string>();
        meta.version = j.at("version").get<std::string>();
        meta.command = j.at("command").get<std::string>();
        for (const auto& [role, digest] : j.at("inputs").items()) {
            meta.inputs.emplace_back(role, digest.get<std::string>());
        }
        if (!j.at("seed").is_null()) meta.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("timestamp").is_null()) meta.timestamp = j.at("timestamp").get<std::string>();
        return meta;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadValue, std::string("malformed run metadata: ") + e.what());
    }
}

std::string to_line(const RunMetadata& meta) { return to_json(meta).dump(); }

}  // namespace asrs
