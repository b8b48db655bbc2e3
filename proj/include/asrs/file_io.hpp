#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace asrs {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames over `path`, so readers never
// observe a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// "sha256:<64 hex chars>"
std::string sha256_digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

// Digest of a delimited table with its leading '#' metadata lines removed, so
// two files carrying the same rows under different run metadata compare equal.
std::string table_content_digest(std::string_view table_text);
std::string table_file_digest(const std::filesystem::path& path);

}  // namespace asrs
