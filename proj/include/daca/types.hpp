#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace daca {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedLine : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct DegenerateBox : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptHeader : Error { using Error::Error; };
struct NonDivisibleGrid : Error { using Error::Error; };
struct NoConfidentRegion : Error { using Error::Error; };
struct InvalidThreshold : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct NoGroundTruth : Error { using Error::Error; };

/// Axis-aligned box in continuous pixel coordinates, origin top-left.
/// Corners are strictly ordered: x_min < x_max, y_min < y_max.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    BBox() = default;
    BBox(double x0, double y0, double x1, double y1)
        : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {
        if (!(x_min < x_max) || !(y_min < y_max)) {
            throw DegenerateBox("BBox corners must be strictly ordered");
        }
    }

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }

    BBox translated(double dx, double dy) const {
        return BBox(x_min + dx, y_min + dy, x_max + dx, y_max + dy);
    }

    bool operator==(const BBox&) const = default;
};

struct GroundTruth {
    BBox bbox;
    int class_id = 0;
};

struct Detection {
    BBox bbox;
    int class_id = 0;
    double confidence = 0.0;
};

inline GroundTruth to_ground_truth(const Detection& d) {
    return GroundTruth{d.bbox, d.class_id};
}

inline Detection to_detection(const GroundTruth& g, double confidence) {
    return Detection{g.bbox, g.class_id, confidence};
}

}  // namespace daca
