#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "daca/image_io.hpp"
#include "daca/labels.hpp"
#include "daca/rng.hpp"

using namespace daca;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "daca_test_model";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("bbox rejects inverted corners") {
    CHECK_THROWS_AS(BBox(10, 0, 5, 5), DegenerateBox);
    CHECK_THROWS_AS(BBox(0, 5, 5, 5), DegenerateBox);
    CHECK_NOTHROW(BBox(0, 0, 1, 1));
}

TEST_CASE("parse_label_line ground truth") {
    const auto label = parse_label_line("0 0.5 0.5 0.5 0.5",
                                        LabelMode::GroundTruth, 600, 600);
    CHECK(label.class_id == 0);
    CHECK(label.bbox.x_min == doctest::Approx(150));
    CHECK(label.bbox.y_min == doctest::Approx(150));
    CHECK(label.bbox.x_max == doctest::Approx(450));
    CHECK(label.bbox.y_max == doctest::Approx(450));
}

TEST_CASE("parse_label_line detection") {
    const auto label = parse_label_line("2 0.5 0.5 0.2 0.2 0.25",
                                        LabelMode::Detection, 600, 600);
    CHECK(label.class_id == 2);
    CHECK(label.bbox.x_min == doctest::Approx(240));
    CHECK(label.bbox.x_max == doctest::Approx(360));
    CHECK(label.confidence == doctest::Approx(0.25));
}

TEST_CASE("parse_label_line error paths") {
    CHECK_THROWS_AS(parse_label_line("0 0.5 0.5 0.5", LabelMode::GroundTruth,
                                     600, 600),
                    MalformedLine);
    CHECK_THROWS_AS(parse_label_line("0 0.5 0.5 0.5 0.5 0.9",
                                     LabelMode::GroundTruth, 600, 600),
                    MalformedLine);
    CHECK_THROWS_AS(parse_label_line("0 abc 0.5 0.5 0.5", LabelMode::GroundTruth,
                                     600, 600),
                    MalformedLine);
    CHECK_THROWS_AS(parse_label_line("0 1.5 0.5 0.5 0.5", LabelMode::GroundTruth,
                                     600, 600),
                    OutOfRange);
    CHECK_THROWS_AS(parse_label_line("0 0.5 0.5 0.2 0.2 1.5",
                                     LabelMode::Detection, 600, 600),
                    OutOfRange);
    // w denormalizes below one pixel
    CHECK_THROWS_AS(parse_label_line("0 0.5 0.5 0.0001 0.5",
                                     LabelMode::GroundTruth, 600, 600),
                    DegenerateBox);
}

TEST_CASE("serialize_labels inverse of parse") {
    const std::vector<GroundTruth> labels = {{BBox(150, 150, 450, 450), 0}};
    CHECK(serialize_labels(labels, 600, 600) ==
          "0 0.500000 0.500000 0.500000 0.500000\n");
    CHECK(serialize_labels(std::vector<GroundTruth>{}, 600, 600).empty());
}

TEST_CASE("parse/serialize round trip on random label sets") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Detection> labels;
        const int n = rng.uniform_int(0, 8);
        for (int i = 0; i < n; ++i) {
            const double w = rng.uniform(2.0 / 600, 0.5);
            const double h = rng.uniform(2.0 / 600, 0.5);
            const double cx = rng.uniform(w / 2, 1.0 - w / 2);
            const double cy = rng.uniform(h / 2, 1.0 - h / 2);
            labels.push_back({BBox((cx - w / 2) * 600, (cy - h / 2) * 600,
                                   (cx + w / 2) * 600, (cy + h / 2) * 600),
                              rng.uniform_int(0, 7), rng.uniform()});
        }
        std::istringstream text(serialize_labels(labels, 600, 600));
        std::string line;
        std::size_t i = 0;
        while (std::getline(text, line)) {
            REQUIRE(i < labels.size());
            const auto parsed =
                parse_label_line(line, LabelMode::Detection, 600, 600);
            CHECK(parsed.class_id == labels[i].class_id);
            CHECK(std::abs(parsed.bbox.x_min - labels[i].bbox.x_min) < 1e-2);
            CHECK(std::abs(parsed.bbox.y_min - labels[i].bbox.y_min) < 1e-2);
            CHECK(std::abs(parsed.bbox.x_max - labels[i].bbox.x_max) < 1e-2);
            CHECK(std::abs(parsed.bbox.y_max - labels[i].bbox.y_max) < 1e-2);
            ++i;
        }
        CHECK(i == labels.size());
    }
}

TEST_CASE("ppm literal byte layout") {
    const std::string data = "P6\n2 1\n255\n";
    std::vector<std::uint8_t> bytes(data.begin(), data.end());
    const std::uint8_t px[6] = {255, 0, 0, 0, 255, 0};
    bytes.insert(bytes.end(), px, px + 6);
    const auto image = decode_ppm(bytes);
    CHECK(image.width() == 2);
    CHECK(image.height() == 1);
    CHECK(image.pixels() == std::vector<std::uint8_t>{255, 0, 0, 0, 255, 0});
}

TEST_CASE("ppm save/load round trip is byte exact") {
    Rng rng(7);
    Image image(600, 600);
    for (auto& p : image.pixels()) {
        p = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
    }
    const auto path = temp_dir() / "roundtrip.ppm";
    save_image(path, image);
    const auto loaded = load_image(path);
    CHECK(loaded.pixels() == image.pixels());

    // round trip again: bytes on disk identical
    const auto path2 = temp_dir() / "roundtrip2.ppm";
    save_image(path2, loaded);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
}

TEST_CASE("png save/load round trip") {
    Rng rng(11);
    Image image(64, 48);
    for (auto& p : image.pixels()) {
        p = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
    }
    const auto path = temp_dir() / "roundtrip.png";
    save_image(path, image);
    const auto loaded = load_image(path);
    CHECK(loaded.width() == 64);
    CHECK(loaded.height() == 48);
    CHECK(loaded.pixels() == image.pixels());
}

TEST_CASE("truncated ppm payload rejected") {
    const std::string data = "P6\n4 4\n255\nabc";
    CHECK_THROWS_AS(decode_ppm({data.begin(), data.end()}), CorruptHeader);
}

TEST_CASE("unsupported and missing files") {
    CHECK_THROWS_AS(load_image(temp_dir() / "does_not_exist.ppm"), IoError);
    const auto path = temp_dir() / "garbage.ppm";
    std::ofstream(path) << "not an image";
    CHECK_THROWS_AS(load_image(path), UnsupportedFormat);
}
