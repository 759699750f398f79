#pragma once

#include <string>
#include <utility>
#include <vector>

#include "daca/image.hpp"
#include "daca/rng.hpp"
#include "daca/types.hpp"

namespace daca {

enum class AugKind {
    HorizontalFlip,
    BBoxSafeRandomCrop,
    Blur,
    ColorJitter,
    Downscale,
    BrightnessContrast,
};

const char* aug_kind_name(AugKind kind);

/// Flat parameter record; each kind reads the fields it needs.
struct AugParams {
    // ColorJitter
    double brightness = 0.2;
    double contrast = 0.2;
    double saturation = 0.2;
    double hue = 0.2;
    // Downscale
    double scale_min = 0.5;
    double scale_max = 0.99;
    // BrightnessContrast
    double brightness_limit = 0.1;
    double contrast_limit = 0.1;
};

struct AugOp {
    AugKind kind;
    double probability = 0.5;
    AugParams params;
};

/// The default operation list in its canonical order:
/// HF(0.5), SRC(0.2), Blur(0.5), CJ(0.5), Downscale(0.5), BC(0.5).
std::vector<AugOp> default_ops();

/// One operation with its fired flag and raw uniform draws frozen in,
/// so application is a pure function and replays are byte-identical.
struct SampledOp {
    AugOp op;
    bool fired = false;
    std::vector<double> draws;  // raw uniforms in [0,1), mapped at apply time
};

struct SampledPipeline {
    std::vector<SampledOp> ops;
    std::string seed_trace;
};

std::pair<Image, std::vector<Detection>> horizontal_flip(
    const Image& crop, const std::vector<Detection>& boxes);

/// Crops a random sub-rectangle containing the union of all boxes, then
/// resizes back to the original size. Boxes are remapped by the same
/// affine transform; none is lost or clipped.
std::pair<Image, std::vector<Detection>> bbox_safe_random_crop(
    const Image& crop, const std::vector<Detection>& boxes,
    const std::vector<double>& draws);
std::pair<Image, std::vector<Detection>> bbox_safe_random_crop(
    const Image& crop, const std::vector<Detection>& boxes, Rng& rng);

/// Pixel-only transforms (Blur, ColorJitter, Downscale, BrightnessContrast).
/// Math in floating point, rounded half away from zero, clamped to [0,255].
Image apply_photometric(const Image& crop, AugKind kind, const AugParams& params,
                        const std::vector<double>& draws);
Image apply_photometric(const Image& crop, AugKind kind, const AugParams& params,
                        Rng& rng);

/// Number of raw uniforms an op consumes beyond its fired draw.
int draw_count(AugKind kind);

/// Draws fired flags and all kind-specific uniforms from the substream
/// derived from (base_seed, image_id, cell_index).
SampledPipeline sample_pipeline(const std::vector<AugOp>& ops,
                                std::uint64_t base_seed,
                                const std::string& image_id,
                                std::uint64_t cell_index);

/// Applies the fired ops in order with their frozen draws. Output
/// dimensions equal input dimensions.
std::pair<Image, std::vector<Detection>> apply_pipeline(
    const Image& crop, const std::vector<Detection>& boxes,
    const SampledPipeline& pipeline);

}  // namespace daca
