#pragma once

// SNET1 checkpoint: see docs/formats.md for the byte layout.

#include "nlos/classifier/simplenet.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nlos::classifier {

inline constexpr char kCheckpointMagic[5] = {'S', 'N', 'E', 'T', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> serialize_params(const SimpleNetParams<float>& params);

/// Bad magic, CRC mismatch or a tensor table that does not describe a
/// SimpleNet raise CorruptCheckpointError; truncation raises ParseError
/// with the offset where more bytes were needed.
SimpleNetParams<float> parse_params(std::span<const std::uint8_t> bytes);

void save_params(const SimpleNetParams<float>& params, const std::filesystem::path& path);
SimpleNetParams<float> load_params(const std::filesystem::path& path);

}  // namespace nlos::classifier
