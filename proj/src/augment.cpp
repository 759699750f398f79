#include "daca/augment.hpp"

#include <algorithm>
#include <cmath>

namespace daca {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

void require_draws(const std::vector<double>& draws, AugKind kind) {
    if (static_cast<int>(draws.size()) != draw_count(kind)) {
        throw InvalidParams(std::string("wrong draw count for ") +
                            aug_kind_name(kind));
    }
}

// Maps a raw uniform to an integer in [0, n-1].
int pick_index(double u, int n) {
    return std::min(n - 1, static_cast<int>(u * n));
}

Image box_blur(const Image& src, int k) {
    const int r = k / 2;
    Image out(src.width(), src.height());
    for (int y = 0; y < src.height(); ++y) {
        for (int x = 0; x < src.width(); ++x) {
            double sum[3] = {0, 0, 0};
            for (int dy = -r; dy <= r; ++dy) {
                const int sy = std::clamp(y + dy, 0, src.height() - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, src.width() - 1);
                    for (int c = 0; c < 3; ++c) sum[c] += src.at(sx, sy, c);
                }
            }
            const double inv = 1.0 / (k * k);
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = quantize_channel(sum[c] * inv);
            }
        }
    }
    return out;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx <= 0.0 ? 0.0 : d / mx;
    if (d <= 0.0) {
        h = 0.0;
    } else if (mx == r) {
        h = 60.0 * std::fmod((g - b) / d, 6.0);
    } else if (mx == g) {
        h = 60.0 * ((b - r) / d + 2.0);
    } else {
        h = 60.0 * ((r - g) / d + 4.0);
    }
    if (h < 0.0) h += 360.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r1 = 0, g1 = 0, b1 = 0;
    if (hp < 1)      { r1 = c; g1 = x; }
    else if (hp < 2) { r1 = x; g1 = c; }
    else if (hp < 3) { g1 = c; b1 = x; }
    else if (hp < 4) { g1 = x; b1 = c; }
    else if (hp < 5) { r1 = x; b1 = c; }
    else             { r1 = c; b1 = x; }
    const double m = v - c;
    r = r1 + m;
    g = g1 + m;
    b = b1 + m;
}

Image color_jitter(const Image& src, const AugParams& p,
                   const std::vector<double>& draws) {
    const double fb = 1.0 - p.brightness + draws[0] * 2.0 * p.brightness;
    const double fc = 1.0 - p.contrast + draws[1] * 2.0 * p.contrast;
    const double fs = 1.0 - p.saturation + draws[2] * 2.0 * p.saturation;
    const double hue_turns = -p.hue + draws[3] * 2.0 * p.hue;

    const std::size_t n = src.pixels().size();
    std::vector<double> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = src.pixels()[i] * fb;

    double mean_luma = 0.0;
    for (std::size_t i = 0; i < n; i += 3) {
        mean_luma += kLumaR * buf[i] + kLumaG * buf[i + 1] + kLumaB * buf[i + 2];
    }
    mean_luma /= static_cast<double>(n / 3);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i] = mean_luma + (buf[i] - mean_luma) * fc;
    }

    for (std::size_t i = 0; i < n; i += 3) {
        const double l =
            kLumaR * buf[i] + kLumaG * buf[i + 1] + kLumaB * buf[i + 2];
        for (int c = 0; c < 3; ++c) {
            buf[i + c] = l + (buf[i + c] - l) * fs;
        }
    }

    Image out(src.width(), src.height());
    for (std::size_t i = 0; i < n; i += 3) {
        double r = std::clamp(buf[i], 0.0, 255.0) / 255.0;
        double g = std::clamp(buf[i + 1], 0.0, 255.0) / 255.0;
        double b = std::clamp(buf[i + 2], 0.0, 255.0) / 255.0;
        double h, s, v;
        rgb_to_hsv(r, g, b, h, s, v);
        h = std::fmod(h + hue_turns * 360.0 + 360.0, 360.0);
        hsv_to_rgb(h, s, v, r, g, b);
        out.pixels()[i] = quantize_channel(r * 255.0);
        out.pixels()[i + 1] = quantize_channel(g * 255.0);
        out.pixels()[i + 2] = quantize_channel(b * 255.0);
    }
    return out;
}

Image downscale(const Image& src, const AugParams& p,
                const std::vector<double>& draws) {
    if (!(p.scale_min > 0.0) || p.scale_max > 1.0 || p.scale_min > p.scale_max) {
        throw InvalidParams("downscale range must be within (0,1]");
    }
    const double scale = p.scale_min + draws[0] * (p.scale_max - p.scale_min);
    const int w = std::max(1, static_cast<int>(std::lround(src.width() * scale)));
    const int h = std::max(1, static_cast<int>(std::lround(src.height() * scale)));
    if (w == src.width() && h == src.height()) return src;
    return resize_bilinear(resize_bilinear(src, w, h), src.width(), src.height());
}

Image brightness_contrast(const Image& src, const AugParams& p,
                          const std::vector<double>& draws) {
    if (p.brightness_limit < 0.0 || p.contrast_limit < 0.0) {
        throw InvalidParams("brightness/contrast limits must be non-negative");
    }
    const double shift =
        (-p.brightness_limit + draws[0] * 2.0 * p.brightness_limit) * 255.0;
    const double factor =
        1.0 + (-p.contrast_limit + draws[1] * 2.0 * p.contrast_limit);
    Image out(src.width(), src.height());
    for (std::size_t i = 0; i < src.pixels().size(); ++i) {
        // Brightness shift first, then contrast about mid-gray.
        const double v = src.pixels()[i] + shift;
        out.pixels()[i] = quantize_channel((v - 127.5) * factor + 127.5);
    }
    return out;
}

}  // namespace

const char* aug_kind_name(AugKind kind) {
    switch (kind) {
        case AugKind::HorizontalFlip: return "horizontal_flip";
        case AugKind::BBoxSafeRandomCrop: return "bbox_safe_random_crop";
        case AugKind::Blur: return "blur";
        case AugKind::ColorJitter: return "color_jitter";
        case AugKind::Downscale: return "downscale";
        case AugKind::BrightnessContrast: return "brightness_contrast";
    }
    return "unknown";
}

std::vector<AugOp> default_ops() {
    return {
        {AugKind::HorizontalFlip, 0.5, {}},
        {AugKind::BBoxSafeRandomCrop, 0.2, {}},
        {AugKind::Blur, 0.5, {}},
        {AugKind::ColorJitter, 0.5, {}},
        {AugKind::Downscale, 0.5, {}},
        {AugKind::BrightnessContrast, 0.5, {}},
    };
}

int draw_count(AugKind kind) {
    switch (kind) {
        case AugKind::HorizontalFlip: return 0;
        case AugKind::BBoxSafeRandomCrop: return 4;
        case AugKind::Blur: return 1;
        case AugKind::ColorJitter: return 4;
        case AugKind::Downscale: return 1;
        case AugKind::BrightnessContrast: return 2;
    }
    return 0;
}

std::pair<Image, std::vector<Detection>> horizontal_flip(
    const Image& crop, const std::vector<Detection>& boxes) {
    Image out(crop.width(), crop.height());
    for (int y = 0; y < crop.height(); ++y) {
        for (int x = 0; x < crop.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                out.at(crop.width() - 1 - x, y, c) = crop.at(x, y, c);
            }
        }
    }
    std::vector<Detection> flipped;
    flipped.reserve(boxes.size());
    const double w = crop.width();
    for (const auto& det : boxes) {
        flipped.push_back({BBox(w - det.bbox.x_max, det.bbox.y_min,
                                w - det.bbox.x_min, det.bbox.y_max),
                           det.class_id, det.confidence});
    }
    return {std::move(out), std::move(flipped)};
}

std::pair<Image, std::vector<Detection>> bbox_safe_random_crop(
    const Image& crop, const std::vector<Detection>& boxes,
    const std::vector<double>& draws) {
    require_draws(draws, AugKind::BBoxSafeRandomCrop);
    const int w = crop.width();
    const int h = crop.height();
    if (boxes.empty()) {
        return {crop, boxes};  // union degenerates to the full crop
    }

    double ux0 = w, uy0 = h, ux1 = 0, uy1 = 0;
    for (const auto& det : boxes) {
        ux0 = std::min(ux0, det.bbox.x_min);
        uy0 = std::min(uy0, det.bbox.y_min);
        ux1 = std::max(ux1, det.bbox.x_max);
        uy1 = std::max(uy1, det.bbox.y_max);
    }
    const int ax0 = std::clamp(static_cast<int>(std::floor(ux0)), 0, w);
    const int ay0 = std::clamp(static_cast<int>(std::floor(uy0)), 0, h);
    const int ax1 = std::clamp(static_cast<int>(std::ceil(ux1)), 0, w);
    const int ay1 = std::clamp(static_cast<int>(std::ceil(uy1)), 0, h);

    const int x0 = pick_index(draws[0], ax0 + 1);
    const int y0 = pick_index(draws[1], ay0 + 1);
    const int x1 = ax1 + pick_index(draws[2], w - ax1 + 1);
    const int y1 = ay1 + pick_index(draws[3], h - ay1 + 1);

    const double sx = static_cast<double>(w) / (x1 - x0);
    const double sy = static_cast<double>(h) / (y1 - y0);
    Image out = resize_bilinear(crop_image(crop, x0, y0, x1 - x0, y1 - y0), w, h);

    std::vector<Detection> mapped;
    mapped.reserve(boxes.size());
    for (const auto& det : boxes) {
        mapped.push_back({BBox((det.bbox.x_min - x0) * sx, (det.bbox.y_min - y0) * sy,
                               (det.bbox.x_max - x0) * sx, (det.bbox.y_max - y0) * sy),
                          det.class_id, det.confidence});
    }
    return {std::move(out), std::move(mapped)};
}

std::pair<Image, std::vector<Detection>> bbox_safe_random_crop(
    const Image& crop, const std::vector<Detection>& boxes, Rng& rng) {
    std::vector<double> draws(draw_count(AugKind::BBoxSafeRandomCrop));
    for (auto& d : draws) d = rng.uniform();
    return bbox_safe_random_crop(crop, boxes, draws);
}

Image apply_photometric(const Image& crop, AugKind kind, const AugParams& params,
                        const std::vector<double>& draws) {
    require_draws(draws, kind);
    switch (kind) {
        case AugKind::Blur:
            return box_blur(crop, 3 + 2 * pick_index(draws[0], 3));
        case AugKind::ColorJitter:
            return color_jitter(crop, params, draws);
        case AugKind::Downscale:
            return downscale(crop, params, draws);
        case AugKind::BrightnessContrast:
            return brightness_contrast(crop, params, draws);
        default:
            throw InvalidParams("not a photometric op");
    }
}

Image apply_photometric(const Image& crop, AugKind kind, const AugParams& params,
                        Rng& rng) {
    std::vector<double> draws(draw_count(kind));
    for (auto& d : draws) d = rng.uniform();
    return apply_photometric(crop, kind, params, draws);
}

SampledPipeline sample_pipeline(const std::vector<AugOp>& ops,
                                std::uint64_t base_seed,
                                const std::string& image_id,
                                std::uint64_t cell_index) {
    Rng rng(substream_seed(base_seed, image_id, cell_index));
    SampledPipeline pipeline;
    pipeline.seed_trace = "seed=" + std::to_string(base_seed) +
                          "/image=" + image_id +
                          "/cell=" + std::to_string(cell_index);
    pipeline.ops.reserve(ops.size());
    for (const auto& op : ops) {
        SampledOp sampled;
        sampled.op = op;
        sampled.fired = rng.bernoulli(op.probability);
        sampled.draws.resize(draw_count(op.kind));
        for (auto& d : sampled.draws) d = rng.uniform();
        pipeline.ops.push_back(std::move(sampled));
    }
    return pipeline;
}

std::pair<Image, std::vector<Detection>> apply_pipeline(
    const Image& crop, const std::vector<Detection>& boxes,
    const SampledPipeline& pipeline) {
    Image image = crop;
    std::vector<Detection> out_boxes = boxes;
    for (const auto& sampled : pipeline.ops) {
        if (!sampled.fired) continue;
        switch (sampled.op.kind) {
            case AugKind::HorizontalFlip:
                std::tie(image, out_boxes) = horizontal_flip(image, out_boxes);
                break;
            case AugKind::BBoxSafeRandomCrop:
                std::tie(image, out_boxes) =
                    bbox_safe_random_crop(image, out_boxes, sampled.draws);
                break;
            default:
                image = apply_photometric(image, sampled.op.kind,
                                          sampled.op.params, sampled.draws);
                break;
        }
    }
    return {std::move(image), std::move(out_boxes)};
}

}  // namespace daca
