#pragma once

#include <array>
#include <vector>

#include "daca/image.hpp"
#include "daca/types.hpp"

namespace daca {

enum class ColorBy { Class, Confidence };

/// Fixed palette, stable per class id across runs.
std::array<std::uint8_t, 3> class_color(int class_id);

/// Red (0.0) to green (1.0) gradient.
std::array<std::uint8_t, 3> confidence_color(double confidence);

/// Draws a 2-px rectangle outline, clipped to the image.
void draw_box(Image& image, const BBox& box,
              const std::array<std::uint8_t, 3>& color, int thickness = 2);

Image annotate(const Image& image, const std::vector<Detection>& labels,
               ColorBy color_by);

}  // namespace daca
