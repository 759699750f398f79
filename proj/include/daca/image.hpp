#pragma once

#include <cstdint>
#include <vector>

#include "daca/types.hpp"

namespace daca {

/// Owned 8-bit RGB raster, row-major, 3 channels.
class Image {
public:
    Image() = default;
    Image(int width, int height)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * height * 3, 0) {
        if (width < 1 || height < 1) {
            throw InvalidParams("image dimensions must be >= 1");
        }
    }
    Image(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (width < 1 || height < 1) {
            throw InvalidParams("image dimensions must be >= 1");
        }
        if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
            throw InvalidParams("pixel buffer size does not match dimensions");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t& at(int x, int y, int c) {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    bool operator==(const Image&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Round half away from zero, clamp to [0, 255].
std::uint8_t quantize_channel(double v);

/// Extract the sub-rectangle [x0, x0+w) x [y0, y0+h); must lie inside.
Image crop_image(const Image& src, int x0, int y0, int w, int h);

/// Copy src into dst with top-left corner at (x, y); src must fit.
void blit(Image& dst, const Image& src, int x, int y);

/// Plain bilinear stretch (half-pixel centers, edge-clamped).
Image resize_bilinear(const Image& src, int new_width, int new_height);

}  // namespace daca
