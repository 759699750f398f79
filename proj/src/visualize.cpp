#include "daca/visualize.hpp"

#include <algorithm>
#include <cmath>

namespace daca {

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 10> kPalette = {{
    {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
    {245, 130, 48}, {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
    {210, 245, 60}, {250, 190, 190},
}};

void fill_rect(Image& image, int x0, int y0, int x1, int y1,
               const std::array<std::uint8_t, 3>& color) {
    x0 = std::clamp(x0, 0, image.width());
    x1 = std::clamp(x1, 0, image.width());
    y0 = std::clamp(y0, 0, image.height());
    y1 = std::clamp(y1, 0, image.height());
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            for (int c = 0; c < 3; ++c) image.at(x, y, c) = color[c];
        }
    }
}

}  // namespace

std::array<std::uint8_t, 3> class_color(int class_id) {
    return kPalette[static_cast<std::size_t>(class_id) % kPalette.size()];
}

std::array<std::uint8_t, 3> confidence_color(double confidence) {
    const double t = std::clamp(confidence, 0.0, 1.0);
    return {quantize_channel(255.0 * (1.0 - t)), quantize_channel(255.0 * t), 0};
}

void draw_box(Image& image, const BBox& box,
              const std::array<std::uint8_t, 3>& color, int thickness) {
    const int x0 = static_cast<int>(std::lround(box.x_min));
    const int y0 = static_cast<int>(std::lround(box.y_min));
    const int x1 = static_cast<int>(std::lround(box.x_max));
    const int y1 = static_cast<int>(std::lround(box.y_max));
    fill_rect(image, x0, y0, x1, y0 + thickness, color);            // top
    fill_rect(image, x0, y1 - thickness, x1, y1, color);            // bottom
    fill_rect(image, x0, y0, x0 + thickness, y1, color);            // left
    fill_rect(image, x1 - thickness, y0, x1, y1, color);            // right
}

Image annotate(const Image& image, const std::vector<Detection>& labels,
               ColorBy color_by) {
    Image out = image;
    for (const auto& det : labels) {
        const auto color = color_by == ColorBy::Class
                               ? class_color(det.class_id)
                               : confidence_color(det.confidence);
        draw_box(out, det.bbox, color);
    }
    return out;
}

}  // namespace daca
