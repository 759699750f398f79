#include "daca/selection.hpp"

#include <algorithm>
#include <cmath>

namespace daca {

void require_divisible(const GridLayout& grid, int width, int height) {
    if (grid.rows < 1 || grid.cols < 1) {
        throw NonDivisibleGrid("grid must be at least 1x1");
    }
    if (width % grid.cols != 0 || height % grid.rows != 0) {
        throw NonDivisibleGrid("image " + std::to_string(width) + "x" +
                               std::to_string(height) +
                               " not divisible by grid " +
                               std::to_string(grid.rows) + "x" +
                               std::to_string(grid.cols));
    }
}

CellIndex assign_cell(const BBox& bbox, const GridLayout& grid,
                      int width, int height) {
    require_divisible(grid, width, height);
    const double cell_w = static_cast<double>(width) / grid.cols;
    const double cell_h = static_cast<double>(height) / grid.rows;
    int col = static_cast<int>(std::floor(bbox.center_x() / cell_w));
    int row = static_cast<int>(std::floor(bbox.center_y() / cell_h));
    col = std::clamp(col, 0, grid.cols - 1);
    row = std::clamp(row, 0, grid.rows - 1);
    return {row, col};
}

std::vector<std::optional<double>> cell_confidences(
    const std::vector<Detection>& detections, const GridLayout& grid,
    int width, int height) {
    require_divisible(grid, width, height);
    const std::size_t n = static_cast<std::size_t>(grid.rows) * grid.cols;
    std::vector<double> sums(n, 0.0);
    std::vector<int> counts(n, 0);
    for (const auto& det : detections) {
        const auto cell = assign_cell(det.bbox, grid, width, height);
        const std::size_t idx = static_cast<std::size_t>(cell.row) * grid.cols + cell.col;
        sums[idx] += det.confidence;
        counts[idx] += 1;
    }
    std::vector<std::optional<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] > 0) out[i] = sums[i] / counts[i];
    }
    return out;
}

std::optional<BBox> trim_box(const BBox& bbox, const Rect& rect,
                             double min_visibility) {
    const double x0 = std::max(bbox.x_min, rect.x0);
    const double y0 = std::max(bbox.y_min, rect.y0);
    const double x1 = std::min(bbox.x_max, rect.x1);
    const double y1 = std::min(bbox.y_max, rect.y1);
    if (x1 - x0 < 1.0 || y1 - y0 < 1.0) {
        return std::nullopt;
    }
    const double area = (x1 - x0) * (y1 - y0);
    if (area < min_visibility * bbox.area()) {
        return std::nullopt;
    }
    return BBox(x0 - rect.x0, y0 - rect.y0, x1 - rect.x0, y1 - rect.y0);
}

std::vector<Detection> filter_confidence(const std::vector<Detection>& detections,
                                         double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw InvalidThreshold("confidence threshold must be in [0,1]");
    }
    std::vector<Detection> out;
    out.reserve(detections.size());
    for (const auto& det : detections) {
        if (det.confidence >= threshold) out.push_back(det);
    }
    return out;
}

RegionSelection select_region(const Image& image,
                              const std::vector<Detection>& detections,
                              const GridLayout& grid, double min_visibility) {
    require_divisible(grid, image.width(), image.height());
    const auto confidences =
        cell_confidences(detections, grid, image.width(), image.height());

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < confidences.size(); ++i) {
        if (!confidences[i]) continue;
        if (!best || *confidences[i] > *confidences[*best]) best = i;
    }
    if (!best) {
        throw NoConfidentRegion("no detection in any cell");
    }

    const int cell_w = image.width() / grid.cols;
    const int cell_h = image.height() / grid.rows;
    const CellIndex cell{static_cast<int>(*best) / grid.cols,
                         static_cast<int>(*best) % grid.cols};
    const Rect rect{static_cast<double>(cell.col * cell_w),
                    static_cast<double>(cell.row * cell_h),
                    static_cast<double>((cell.col + 1) * cell_w),
                    static_cast<double>((cell.row + 1) * cell_h)};

    RegionSelection sel;
    sel.cell = cell;
    sel.rect = rect;
    sel.crop = crop_image(image, cell.col * cell_w, cell.row * cell_h,
                          cell_w, cell_h);
    sel.mean_confidence = *confidences[*best];
    // All detections are trim candidates, including boxes centered in a
    // neighboring cell that straddle the boundary.
    for (const auto& det : detections) {
        if (auto trimmed = trim_box(det.bbox, rect, min_visibility)) {
            sel.pseudo_labels.push_back({*trimmed, det.class_id, det.confidence});
        }
    }
    return sel;
}

}  // namespace daca
