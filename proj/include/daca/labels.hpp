#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "daca/types.hpp"

namespace daca {

enum class LabelMode { GroundTruth, Detection };

struct ParsedLabel {
    BBox bbox;
    int class_id = 0;
    double confidence = 1.0;  // meaningful in Detection mode only

    GroundTruth as_ground_truth() const { return {bbox, class_id}; }
    Detection as_detection() const { return {bbox, class_id, confidence}; }
};

/// Parses one normalized record `class cx cy w h [conf]` against the image
/// dimensions, returning denormalized corner coordinates.
ParsedLabel parse_label_line(const std::string& line, LabelMode mode,
                             int image_width, int image_height);

std::string serialize_labels(const std::vector<GroundTruth>& labels,
                             int image_width, int image_height);
std::string serialize_labels(const std::vector<Detection>& labels,
                             int image_width, int image_height);

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path,
                                           int image_width, int image_height);
std::vector<Detection> load_detections(const std::filesystem::path& path,
                                       int image_width, int image_height);

void save_labels(const std::filesystem::path& path,
                 const std::vector<Detection>& labels,
                 int image_width, int image_height);
void save_labels(const std::filesystem::path& path,
                 const std::vector<GroundTruth>& labels,
                 int image_width, int image_height);

}  // namespace daca
