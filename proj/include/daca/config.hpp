#pragma once

#include <filesystem>
#include <string>

#include "daca/harness.hpp"

namespace daca {

/// Runtime configuration; defaults match the reference setup
/// (600x600 images, 2x2 grid, confidence threshold 0.25, 50 iterations).
struct Config {
    int image_width = 600;
    int image_height = 600;
    GridLayout grid{2, 2};
    double conf_threshold = 0.25;
    double min_visibility = 0.0;
    int regions = -1;  // -1: all cells
    std::vector<AugOp> ops = default_ops();
    std::uint64_t seed = 0;
    bool seed_set = false;  // true when the config file named a seed
    MockDetectorConfig mock;
    int n_iterations = 50;
    std::string image_format = "ppm";  // composite output: "ppm" or "png"

    void validate() const;

    HarnessConfig harness() const;
};

Config load_config(const std::filesystem::path& path);

/// Parse "RxC", e.g. "2x2" or "3x2".
GridLayout parse_grid(const std::string& text);

/// Build an op list from acronyms: "HF", "SRC", "B", "CJ", "D", "BC",
/// "All", "None" (comma/plus separated, e.g. "HF+D+B"). Table-order,
/// default parameters.
std::vector<AugOp> ops_from_names(const std::string& names);

}  // namespace daca
