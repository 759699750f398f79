#include "daca/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace daca {

namespace {

using nlohmann::json;

const std::vector<std::pair<std::string, AugKind>> kAcronyms = {
    {"HF", AugKind::HorizontalFlip}, {"SRC", AugKind::BBoxSafeRandomCrop},
    {"B", AugKind::Blur},            {"CJ", AugKind::ColorJitter},
    {"D", AugKind::Downscale},       {"BC", AugKind::BrightnessContrast},
};

AugOp default_op(AugKind kind) {
    for (const auto& op : default_ops()) {
        if (op.kind == kind) return op;
    }
    throw InvalidConfig("unknown augmentation kind");
}

AugOp parse_op(const std::string& key, const json& value) {
    AugKind kind{};
    bool found = false;
    for (const auto& [name, k] : kAcronyms) {
        if (key == name || key == aug_kind_name(k)) {
            kind = k;
            found = true;
            break;
        }
    }
    if (!found) throw InvalidConfig("unknown augmentation: " + key);
    AugOp op = default_op(kind);
    if (value.contains("probability")) op.probability = value["probability"];
    if (op.probability < 0.0 || op.probability > 1.0) {
        throw InvalidConfig("probability must be in [0,1] for " + key);
    }
    auto& p = op.params;
    if (value.contains("brightness")) p.brightness = value["brightness"];
    if (value.contains("contrast")) p.contrast = value["contrast"];
    if (value.contains("saturation")) p.saturation = value["saturation"];
    if (value.contains("hue")) p.hue = value["hue"];
    if (value.contains("scale_min")) p.scale_min = value["scale_min"];
    if (value.contains("scale_max")) p.scale_max = value["scale_max"];
    if (value.contains("brightness_limit")) p.brightness_limit = value["brightness_limit"];
    if (value.contains("contrast_limit")) p.contrast_limit = value["contrast_limit"];
    return op;
}

}  // namespace

void Config::validate() const {
    if (image_width < 1 || image_height < 1) {
        throw InvalidConfig("image_size must be positive");
    }
    require_divisible(grid, image_width, image_height);
    if (conf_threshold < 0.0 || conf_threshold > 1.0) {
        throw InvalidConfig("conf_threshold must be in [0,1]");
    }
    if (min_visibility < 0.0 || min_visibility > 1.0) {
        throw InvalidConfig("min_visibility must be in [0,1]");
    }
    const int cells = grid.rows * grid.cols;
    if (regions != -1 && (regions < 1 || regions > cells)) {
        throw InvalidConfig("regions must be in [1, rows*cols]");
    }
    if (n_iterations < 0) {
        throw InvalidConfig("n_iterations must be non-negative");
    }
    if (image_format != "ppm" && image_format != "png") {
        throw InvalidConfig("image_format must be ppm or png");
    }
    mock.validate();
}

HarnessConfig Config::harness() const {
    HarnessConfig h;
    h.grid = grid;
    h.conf_threshold = conf_threshold;
    h.min_visibility = min_visibility;
    h.ops = ops;
    h.augmented_regions = regions;
    h.seed = seed;
    h.n_iterations = n_iterations;
    return h;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidConfig("config parse error: " + std::string(e.what()));
    }

    Config cfg;
    try {
        if (j.contains("image_size")) {
            cfg.image_width = j["image_size"][0];
            cfg.image_height = j["image_size"][1];
        }
        if (j.contains("grid")) {
            if (j["grid"].is_string()) {
                cfg.grid = parse_grid(j["grid"]);
            } else {
                cfg.grid = {j["grid"][0], j["grid"][1]};
            }
        }
        if (j.contains("conf_threshold")) cfg.conf_threshold = j["conf_threshold"];
        if (j.contains("min_visibility")) cfg.min_visibility = j["min_visibility"];
        if (j.contains("regions")) cfg.regions = j["regions"];
        if (j.contains("seed")) {
            cfg.seed = j["seed"].get<std::uint64_t>();
            cfg.seed_set = true;
        }
        if (j.contains("n_iterations")) cfg.n_iterations = j["n_iterations"];
        if (j.contains("image_format")) cfg.image_format = j["image_format"];
        if (j.contains("augment")) {
            std::vector<AugOp> ops;
            // Kept in canonical table order regardless of key order.
            for (const auto& [name, kind] : kAcronyms) {
                for (const auto& [key, value] : j["augment"].items()) {
                    AugKind parsed{};
                    for (const auto& [n2, k2] : kAcronyms) {
                        if (key == n2 || key == aug_kind_name(k2)) parsed = k2;
                    }
                    if (parsed != kind) continue;
                    if (value.contains("enabled") && !value["enabled"].get<bool>()) {
                        continue;
                    }
                    ops.push_back(parse_op(key, value));
                }
            }
            cfg.ops = std::move(ops);
        }
        if (j.contains("mock")) {
            const auto& m = j["mock"];
            auto& mk = cfg.mock;
            if (m.contains("corner_jitter_sigma")) mk.corner_jitter_sigma = m["corner_jitter_sigma"];
            if (m.contains("drop_probability")) mk.drop_probability = m["drop_probability"];
            if (m.contains("false_positives_per_image")) mk.false_positives_per_image = m["false_positives_per_image"];
            if (m.contains("confidence_base")) mk.confidence_base = m["confidence_base"];
            if (m.contains("confidence_decay")) mk.confidence_decay = m["confidence_decay"];
            if (m.contains("confidence_noise_sigma")) mk.confidence_noise_sigma = m["confidence_noise_sigma"];
        }
    } catch (const json::exception& e) {
        throw InvalidConfig("config field error: " + std::string(e.what()));
    }
    cfg.validate();
    return cfg;
}

GridLayout parse_grid(const std::string& text) {
    const auto sep = text.find('x');
    if (sep == std::string::npos) {
        throw InvalidConfig("grid must be RxC, e.g. 2x2");
    }
    try {
        const int rows = std::stoi(text.substr(0, sep));
        const int cols = std::stoi(text.substr(sep + 1));
        if (rows < 1 || cols < 1) throw InvalidConfig("grid must be >= 1x1");
        return {rows, cols};
    } catch (const std::logic_error&) {
        throw InvalidConfig("grid must be RxC, e.g. 2x2");
    }
}

std::vector<AugOp> ops_from_names(const std::string& names) {
    if (names == "None" || names.empty()) return {};
    if (names == "All") return default_ops();
    std::vector<AugKind> kinds;
    std::string token;
    std::istringstream ss(names);
    while (std::getline(ss, token, '+')) {
        std::istringstream ss2(token);
        std::string t;
        while (std::getline(ss2, t, ',')) {
            bool found = false;
            for (const auto& [name, kind] : kAcronyms) {
                if (t == name) {
                    kinds.push_back(kind);
                    found = true;
                }
            }
            if (!found) throw InvalidConfig("unknown augmentation acronym: " + t);
        }
    }
    std::vector<AugOp> ops;
    for (const auto& op : default_ops()) {
        for (const auto kind : kinds) {
            if (op.kind == kind) ops.push_back(op);
        }
    }
    return ops;
}

}  // namespace daca
