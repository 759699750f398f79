#pragma once

#include <string>
#include <vector>

#include "daca/augment.hpp"
#include "daca/selection.hpp"

namespace daca {

struct CompositeResult {
    Image image;  // (cols * crop_w) x (rows * crop_h)
    std::vector<Detection> pseudo_labels;  // composite coordinates

    struct CellRecord {
        int cell_index = 0;  // row-major
        SampledPipeline pipeline;
        std::size_t label_count = 0;
    };
    std::vector<CellRecord> per_cell;
};

/// Tiles the rows x cols grid with independently augmented copies of the
/// crop, offsetting each cell's boxes into composite coordinates. The first
/// `augmented_regions` row-major cells get sampled pipelines; the rest are
/// filled with the unaugmented crop (labels still emitted).
/// augmented_regions < 0 means all cells.
CompositeResult compose(const Image& crop, const std::vector<Detection>& boxes,
                        const GridLayout& grid, const std::vector<AugOp>& ops,
                        std::uint64_t base_seed, const std::string& image_id,
                        int augmented_regions = -1);

}  // namespace daca
