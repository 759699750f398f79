#include "daca/compose.hpp"

#include <tuple>

namespace daca {

CompositeResult compose(const Image& crop, const std::vector<Detection>& boxes,
                        const GridLayout& grid, const std::vector<AugOp>& ops,
                        std::uint64_t base_seed, const std::string& image_id,
                        int augmented_regions) {
    if (grid.rows < 1 || grid.cols < 1) {
        throw NonDivisibleGrid("grid must be at least 1x1");
    }
    const int cells = grid.rows * grid.cols;
    if (augmented_regions < 0) augmented_regions = cells;
    if (augmented_regions < 1 || augmented_regions > cells) {
        throw InvalidConfig("augmented_regions must be in [1, rows*cols]");
    }

    CompositeResult result;
    result.image = Image(grid.cols * crop.width(), grid.rows * crop.height());
    for (int idx = 0; idx < cells; ++idx) {
        const int row = idx / grid.cols;
        const int col = idx % grid.cols;
        const int off_x = col * crop.width();
        const int off_y = row * crop.height();

        CompositeResult::CellRecord record;
        record.cell_index = idx;

        Image cell_image = crop;
        std::vector<Detection> cell_boxes = boxes;
        if (idx < augmented_regions) {
            record.pipeline = sample_pipeline(ops, base_seed, image_id,
                                              static_cast<std::uint64_t>(idx));
            std::tie(cell_image, cell_boxes) =
                apply_pipeline(crop, boxes, record.pipeline);
        } else {
            record.pipeline.seed_trace = "identity";
        }
        if (cell_image.width() != crop.width() ||
            cell_image.height() != crop.height()) {
            throw DimensionMismatch("augmented cell changed dimensions");
        }

        blit(result.image, cell_image, off_x, off_y);
        for (const auto& det : cell_boxes) {
            result.pseudo_labels.push_back(
                {det.bbox.translated(off_x, off_y), det.class_id, det.confidence});
        }
        record.label_count = cell_boxes.size();
        result.per_cell.push_back(std::move(record));
    }
    return result;
}

}  // namespace daca
