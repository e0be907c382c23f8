#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gazekit/grid.hpp"

namespace gazekit {

/// PGM16: binary "P5", maxval 65535, big-endian samples, row-major.
/// CSVF: decimal cells, comma separated, one grid row per line.
enum class MapFormat { PGM16, CSVF };

/// ".pgm" -> PGM16, ".csv" -> CSVF; anything else is a ParseError.
MapFormat format_from_path(const std::filesystem::path& path);
bool is_map_file(const std::filesystem::path& path);

/// Raw samples: PGM values scaled to [0, 1] by 1/65535, CSV values as written.
Grid decode_pgm16(std::string_view bytes);
Grid decode_csvf(std::string_view text);

/// Samples are v / max(v) * 65535 rounded, so the peak always uses full range.
std::string encode_pgm16(const Grid& grid);
/// Shortest round-trip decimal representation of every cell.
std::string encode_csvf(const Grid& grid);

Grid read_grid(const std::filesystem::path& path);
/// read_grid followed by normalize_to_simplex (AllZeroGrid on a blank map).
GazeMap read_gaze_map(const std::filesystem::path& path);
/// Cells whose raw value exceeds 0.5 are fixated.
FixationMap read_fixation_map(const std::filesystem::path& path);

void write_grid(const std::filesystem::path& path, const Grid& grid);
inline void write_gaze_map(const std::filesystem::path& path, const GazeMap& map) { write_grid(path, map.grid()); }

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gazekit
