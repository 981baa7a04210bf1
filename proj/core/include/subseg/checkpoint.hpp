#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "subseg/tagger.hpp"

namespace subseg {

inline constexpr std::string_view kCheckpointMagic = "SUBSEGCK";
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout, all integers little-endian:
//   magic[8] | u32 version | u8 syntactic | i32 x 7 dims
//   3 x vocabulary: u32 count, then count x (u32 length, bytes)
//   u32 tensor count, then per tensor: u32 name length, name,
//   u32 rows, u32 cols, rows*cols x f64 in row-major order
void write_checkpoint(std::ostream& out, const Model& model);
Model read_checkpoint(std::istream& in);

void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace subseg
