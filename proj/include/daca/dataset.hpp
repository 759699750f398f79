#pragma once

#include <filesystem>
#include <vector>

#include "daca/harness.hpp"

namespace daca {

/// Stems of the image files (.ppm/.png) in a directory, sorted.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Loads every image in `images_dir`, bilinearly stretched to the target
/// size, with ground-truth labels from `<labels_dir>/<stem>.txt` (labels
/// parsed against the resized dimensions). Missing label files throw
/// IoError unless `labels_optional`.
std::vector<DatasetSample> load_dataset(const std::filesystem::path& images_dir,
                                        const std::filesystem::path& labels_dir,
                                        int width, int height,
                                        bool labels_optional = false);

}  // namespace daca
