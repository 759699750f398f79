#pragma once

#include <optional>
#include <vector>

#include "daca/image.hpp"
#include "daca/types.hpp"

namespace daca {

struct GridLayout {
    int rows = 2;
    int cols = 2;

    bool operator==(const GridLayout&) const = default;
};

struct CellIndex {
    int row = 0;
    int col = 0;

    bool operator==(const CellIndex&) const = default;
};

/// Half-open rectangle [x0, x1) x [y0, y1) in image coordinates.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

struct RegionSelection {
    CellIndex cell;
    Rect rect;
    Image crop;
    std::vector<Detection> pseudo_labels;  // crop-local coordinates
    double mean_confidence = 0.0;
};

/// Throws NonDivisibleGrid unless width % cols == 0 and height % rows == 0.
void require_divisible(const GridLayout& grid, int width, int height);

/// Cell containing the box center; cells are half-open, centers exactly on
/// an interior boundary go to the higher-index cell, clamped at image edges.
CellIndex assign_cell(const BBox& bbox, const GridLayout& grid,
                      int width, int height);

/// Row-major rows x cols matrix; entry empty when no detection center fell
/// in that cell.
std::vector<std::optional<double>> cell_confidences(
    const std::vector<Detection>& detections, const GridLayout& grid,
    int width, int height);

/// Intersect bbox with rect and translate to rect-local coordinates.
/// Empty when the intersection vanishes, has a side below 1 px, or covers
/// less than min_visibility of the original area.
std::optional<BBox> trim_box(const BBox& bbox, const Rect& rect,
                             double min_visibility);

/// Keeps detections with confidence >= threshold, order preserved.
std::vector<Detection> filter_confidence(const std::vector<Detection>& detections,
                                         double threshold);

/// Picks the cell with the highest mean confidence (row-major tie-break),
/// crops it, and trims every detection overlapping the cell into crop-local
/// coordinates. Throws NoConfidentRegion when no cell has any detection.
RegionSelection select_region(const Image& image,
                              const std::vector<Detection>& detections,
                              const GridLayout& grid, double min_visibility);

}  // namespace daca
