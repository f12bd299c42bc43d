#pragma once

#include "nlos/dataset/generate.hpp"

#include <filesystem>
#include <iosfwd>

namespace nlos::dataset {

/// SPKL1 container: "SPKL1\n", one JSON header line, one JSON line per record,
/// then record_count * height * width little-endian float32 pixels.
/// Byte layout is documented in docs/formats.md.
inline constexpr char kDatasetMagic[] = "SPKL1\n";

void write_dataset(std::ostream& out, const Dataset& ds);
Dataset read_dataset(std::istream& in);

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace nlos::dataset
