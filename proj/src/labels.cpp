#include "daca/labels.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace daca {

namespace {

constexpr double kNormTolerance = 1e-6;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) fields.push_back(tok);
    return fields;
}

double parse_number(const std::string& tok) {
    double value = 0.0;
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw MalformedLine("non-numeric field: " + tok);
    }
    return value;
}

void check_normalized(double v, const char* name) {
    if (v < -kNormTolerance || v > 1.0 + kNormTolerance) {
        throw OutOfRange(std::string(name) + " outside [0,1]");
    }
}

std::string format_record(const BBox& box, int class_id, int w, int h,
                          const double* confidence) {
    const double cx = box.center_x() / w;
    const double cy = box.center_y() / h;
    const double bw = box.width() / w;
    const double bh = box.height() / h;
    char buf[160];
    if (confidence) {
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.6f",
                      class_id, cx, cy, bw, bh, *confidence);
    } else {
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f",
                      class_id, cx, cy, bw, bh);
    }
    return buf;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            lines.push_back(line);
        }
    }
    return lines;
}

}  // namespace

ParsedLabel parse_label_line(const std::string& line, LabelMode mode,
                             int image_width, int image_height) {
    const auto fields = split_fields(line);
    const std::size_t expected = mode == LabelMode::GroundTruth ? 5 : 6;
    if (fields.size() != expected) {
        throw MalformedLine("expected " + std::to_string(expected) +
                            " fields, got " + std::to_string(fields.size()));
    }
    const double class_val = parse_number(fields[0]);
    if (class_val < 0 || class_val != static_cast<int>(class_val)) {
        throw MalformedLine("class id must be a non-negative integer");
    }
    const double cx = parse_number(fields[1]);
    const double cy = parse_number(fields[2]);
    const double w = parse_number(fields[3]);
    const double h = parse_number(fields[4]);
    check_normalized(cx, "cx");
    check_normalized(cy, "cy");
    check_normalized(w, "w");
    check_normalized(h, "h");
    if (w * image_width < 1.0 || h * image_height < 1.0) {
        throw DegenerateBox("box denormalizes below 1 pixel");
    }
    ParsedLabel out;
    out.class_id = static_cast<int>(class_val);
    out.bbox = BBox((cx - w / 2) * image_width, (cy - h / 2) * image_height,
                    (cx + w / 2) * image_width, (cy + h / 2) * image_height);
    if (mode == LabelMode::Detection) {
        const double conf = parse_number(fields[5]);
        if (conf < -kNormTolerance || conf > 1.0 + kNormTolerance) {
            throw OutOfRange("confidence outside [0,1]");
        }
        out.confidence = std::clamp(conf, 0.0, 1.0);
    }
    return out;
}

std::string serialize_labels(const std::vector<GroundTruth>& labels,
                             int image_width, int image_height) {
    std::string out;
    for (const auto& gt : labels) {
        out += format_record(gt.bbox, gt.class_id, image_width, image_height,
                             nullptr);
        out += '\n';
    }
    return out;
}

std::string serialize_labels(const std::vector<Detection>& labels,
                             int image_width, int image_height) {
    std::string out;
    for (const auto& det : labels) {
        out += format_record(det.bbox, det.class_id, image_width, image_height,
                             &det.confidence);
        out += '\n';
    }
    return out;
}

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path,
                                           int image_width, int image_height) {
    std::vector<GroundTruth> out;
    for (const auto& line : read_lines(path)) {
        out.push_back(parse_label_line(line, LabelMode::GroundTruth,
                                       image_width, image_height)
                          .as_ground_truth());
    }
    return out;
}

std::vector<Detection> load_detections(const std::filesystem::path& path,
                                       int image_width, int image_height) {
    std::vector<Detection> out;
    for (const auto& line : read_lines(path)) {
        out.push_back(parse_label_line(line, LabelMode::Detection,
                                       image_width, image_height)
                          .as_detection());
    }
    return out;
}

namespace {
void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
}
}  // namespace

void save_labels(const std::filesystem::path& path,
                 const std::vector<Detection>& labels,
                 int image_width, int image_height) {
    write_text(path, serialize_labels(labels, image_width, image_height));
}

void save_labels(const std::filesystem::path& path,
                 const std::vector<GroundTruth>& labels,
                 int image_width, int image_height) {
    write_text(path, serialize_labels(labels, image_width, image_height));
}

}  // namespace daca
