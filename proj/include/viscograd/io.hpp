#pragma once

#include "viscograd/grid.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace viscograd::io {

/// Writes `content` to a temporary file beside `path`, then renames it over
/// `path`. Throws IoError.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// CSV: `# grid dims=NxM h=... origin=a,b` header, a column line, then one row
/// of coordinates and value per region node (%.17g, exact round trip).
std::string to_csv(const GridFunction& u);
/// Rebuilds the grid from the header; nodes without a row are outside the
/// region. Throws ParseError.
GridFunction parse_csv(std::string_view text);

void write_csv(const GridFunction& u, const std::filesystem::path& path);
GridFunction read_csv(const std::filesystem::path& path);

/// Grid metadata for the JSON sidecar.
nlohmann::json grid_metadata(const GridFunction& u);
void write_sidecar(const GridFunction& u, const std::filesystem::path& path);

/// Metadata plus the IEEE-754 bit pattern of every value as 16 hex digits.
nlohmann::json to_hex_json(const GridFunction& u);
/// Throws ParseError.
GridFunction from_hex_json(const nlohmann::json& doc);

/// Grayscale P2 image, top row = largest y, values mapped linearly to 0..255;
/// a comment line records the field min and max. Throws Not2D.
std::string to_pgm(const GridFunction& u);
void write_pgm(const GridFunction& u, const std::filesystem::path& path);

} // namespace viscograd::io
