#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrs/types.hpp"

namespace asrs {

// Binary layout (all little-endian):
//   "ASRS" | version u32 = 1 | dim u32 | n_views u32 = 5 | n_samples u64
//   per sample: id_len u16 | id bytes | 5 x dim f32, canonical ViewTag order
inline constexpr std::string_view kEmbeddingMagic = "ASRS";
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 24;

std::string encode_embeddings(std::span<const EmbeddingRecord> records);
std::string encode_embeddings_jsonl(std::span<const EmbeddingRecord> records);

// Accepts either the binary format or JSONL; the format is sniffed from the
// leading bytes.
std::vector<EmbeddingRecord> decode_embeddings(std::string_view bytes);

std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path);
void write_embeddings(std::span<const EmbeddingRecord> records, const std::filesystem::path& path);
void write_embeddings_jsonl(std::span<const EmbeddingRecord> records,
                            const std::filesystem::path& path);

}  // namespace asrs
