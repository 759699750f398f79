#pragma once

#include <filesystem>

#include "daca/image.hpp"

namespace daca {

/// Load a raster image. Format chosen by content (PPM P6 or PNG);
/// PPM is the canonical bit-exact format, PNG must be 8-bit (converted
/// to RGB on read).
Image load_image(const std::filesystem::path& path);

/// Save by extension: ".ppm" writes binary P6 (maxval 255), ".png"
/// writes 8-bit RGB PNG.
void save_image(const std::filesystem::path& path, const Image& image);

Image decode_ppm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_ppm(const Image& image);

}  // namespace daca
