#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace worldgen {

// 16-bit grayscale PNG, row-major, top row first.
void write_png16(const std::string& path, int width, int height,
                 const std::vector<uint16_t>& pixels);

// Reads a 16-bit grayscale PNG written by write_png16 (filter types 0-4
// supported). Throws IoError on anything else.
std::vector<uint16_t> read_png16(const std::string& path, int& width, int& height);

}  // namespace worldgen
