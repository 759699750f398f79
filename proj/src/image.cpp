#include "daca/image.hpp"

#include <algorithm>
#include <cmath>

namespace daca {

std::uint8_t quantize_channel(double v) {
    long r = std::lround(v);  // halfway cases away from zero
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<std::uint8_t>(r);
}

Image crop_image(const Image& src, int x0, int y0, int w, int h) {
    if (x0 < 0 || y0 < 0 || w < 1 || h < 1 ||
        x0 + w > src.width() || y0 + h > src.height()) {
        throw DimensionMismatch("crop rectangle outside image");
    }
    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = src.pixels().data() +
            (static_cast<std::size_t>(y0 + y) * src.width() + x0) * 3;
        std::copy(row, row + static_cast<std::size_t>(w) * 3,
                  out.pixels().data() + static_cast<std::size_t>(y) * w * 3);
    }
    return out;
}

void blit(Image& dst, const Image& src, int x, int y) {
    if (x < 0 || y < 0 || x + src.width() > dst.width() ||
        y + src.height() > dst.height()) {
        throw DimensionMismatch("blit target outside image");
    }
    for (int row = 0; row < src.height(); ++row) {
        const std::uint8_t* s = src.pixels().data() +
            static_cast<std::size_t>(row) * src.width() * 3;
        std::uint8_t* d = dst.pixels().data() +
            (static_cast<std::size_t>(y + row) * dst.width() + x) * 3;
        std::copy(s, s + static_cast<std::size_t>(src.width()) * 3, d);
    }
}

Image resize_bilinear(const Image& src, int new_width, int new_height) {
    if (new_width < 1 || new_height < 1) {
        throw InvalidParams("resize target must be >= 1x1");
    }
    if (new_width == src.width() && new_height == src.height()) {
        return src;
    }
    Image out(new_width, new_height);
    const double sx = static_cast<double>(src.width()) / new_width;
    const double sy = static_cast<double>(src.height()) / new_height;
    for (int dy = 0; dy < new_height; ++dy) {
        double fy = (dy + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src.height() - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src.height() - 1);
        const double wy = fy - y0;
        for (int dx = 0; dx < new_width; ++dx) {
            double fx = (dx + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(src.width() - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src.width() - 1);
            const double wx = fx - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = src.at(x0, y0, c) * (1.0 - wx) + src.at(x1, y0, c) * wx;
                const double bot = src.at(x0, y1, c) * (1.0 - wx) + src.at(x1, y1, c) * wx;
                out.at(dx, dy, c) = quantize_channel(top * (1.0 - wy) + bot * wy);
            }
        }
    }
    return out;
}

}  // namespace daca
