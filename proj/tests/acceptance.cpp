// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. The determinism and closed-loop criteria drive the CLI binary
// (path in the DACA_CLI environment variable).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "daca/compose.hpp"
#include "daca/eval.hpp"
#include "daca/harness.hpp"
#include "daca/image_io.hpp"
#include "daca/labels.hpp"
#include "daca/selection.hpp"

using namespace daca;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<bool()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body();
    } catch (const std::exception& e) {
        detail = e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << ms << " ms)";
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
}

bool approx_zero(double v, double tol = 1e-9) { return std::fabs(v) <= tol; }

Image random_image(int w, int h, std::uint64_t seed) {
    Rng rng(seed);
    Image image(w, h);
    for (auto& p : image.pixels()) {
        p = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
    }
    return image;
}

BBox random_box(Rng& rng, double extent) {
    const double x0 = rng.uniform(0, extent * 0.8);
    const double y0 = rng.uniform(0, extent * 0.8);
    return BBox(x0, y0, x0 + rng.uniform(1.5, extent - x0),
                y0 + rng.uniform(1.5, extent - y0));
}

// ---------------------------------------------------------------------------
// Criterion 1: geometry
// ---------------------------------------------------------------------------

bool geometry_suite() {
    Rng rng(101);

    // flip involution on pixels and boxes
    for (int trial = 0; trial < 20; ++trial) {
        const auto image = random_image(120, 90, 1000 + trial);
        std::vector<Detection> boxes;
        for (int i = 0, n = rng.uniform_int(0, 5); i < n; ++i) {
            boxes.push_back({random_box(rng, 90.0), 0, rng.uniform()});
        }
        const auto [f1, b1] = horizontal_flip(image, boxes);
        const auto [f2, b2] = horizontal_flip(f1, b1);
        if (f2 != image) return false;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            // w - (w - x) can round by one ulp for arbitrary doubles
            if (!approx_zero(b2[i].bbox.x_min - boxes[i].bbox.x_min) ||
                !approx_zero(b2[i].bbox.x_max - boxes[i].bbox.x_max) ||
                b2[i].bbox.y_min != boxes[i].bbox.y_min ||
                b2[i].bbox.y_max != boxes[i].bbox.y_max) {
                return false;
            }
        }
    }

    // trim-box interval-intersection oracle, 500 random cases, exact
    for (int trial = 0; trial < 500; ++trial) {
        const BBox box = random_box(rng, 600.0);
        const double rx = 100.0 * rng.uniform_int(0, 4);
        const double ry = 100.0 * rng.uniform_int(0, 4);
        const Rect rect{rx, ry, rx + 200.0, ry + 200.0};
        const double ix0 = std::max(box.x_min, rect.x0);
        const double ix1 = std::min(box.x_max, rect.x1);
        const double iy0 = std::max(box.y_min, rect.y0);
        const double iy1 = std::min(box.y_max, rect.y1);
        const auto trimmed = trim_box(box, rect, 0.0);
        if (ix1 - ix0 >= 1.0 && iy1 - iy0 >= 1.0) {
            if (!trimmed) return false;
            if (trimmed->x_min != ix0 - rect.x0 || trimmed->x_max != ix1 - rect.x0 ||
                trimmed->y_min != iy0 - rect.y0 || trimmed->y_max != iy1 - rect.y0) {
                return false;
            }
        } else if (trimmed) {
            return false;
        }
    }

    // cell-assignment oracle, 200 cases, exact
    for (int trial = 0; trial < 200; ++trial) {
        const GridLayout grids[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
        const GridLayout grid = grids[trial % 4];
        const BBox box = random_box(rng, 600.0);
        const auto cell = assign_cell(box, grid, 600, 600);
        const double cw = 600.0 / grid.cols;
        const double ch = 600.0 / grid.rows;
        int expect_col = grid.cols - 1;
        int expect_row = grid.rows - 1;
        for (int c = 0; c < grid.cols; ++c) {
            if (box.center_x() >= c * cw && box.center_x() < (c + 1) * cw) {
                expect_col = c;
            }
        }
        for (int r = 0; r < grid.rows; ++r) {
            if (box.center_y() >= r * ch && box.center_y() < (r + 1) * ch) {
                expect_row = r;
            }
        }
        if (cell.row != expect_row || cell.col != expect_col) return false;
    }

    // compose offset/tiling exactness under identity pipelines, byte-exact
    auto identity_ops = default_ops();
    for (auto& op : identity_ops) op.probability = 0.0;
    for (const GridLayout grid : {GridLayout{2, 2}, GridLayout{2, 3},
                                  GridLayout{3, 2}, GridLayout{3, 3}}) {
        const int cw = 600 / grid.cols;
        const int ch = 600 / grid.rows;
        const auto crop = random_image(cw, ch, 7 + grid.rows * 10 + grid.cols);
        const std::vector<Detection> boxes = {
            {BBox(5, 6, cw / 2.0, ch / 2.0), 1, 0.9}};
        const auto result = compose(crop, boxes, grid, identity_ops, 3, "g");
        if (result.image.width() != 600 || result.image.height() != 600) {
            return false;
        }
        for (int idx = 0; idx < grid.rows * grid.cols; ++idx) {
            const int ox = (idx % grid.cols) * cw;
            const int oy = (idx / grid.cols) * ch;
            if (crop_image(result.image, ox, oy, cw, ch) != crop) return false;
            const BBox expected = boxes[0].bbox.translated(ox, oy);
            if (result.pseudo_labels[idx].bbox != expected) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: evaluation oracle
// ---------------------------------------------------------------------------

// Independent brute-force AP: literal greedy protocol plus an O(n^2)
// precision-envelope scan.
double brute_force_ap(const std::vector<Detection>& dets,
                      const std::vector<GroundTruth>& gts, int class_id,
                      double thr) {
    std::vector<Detection> mine;
    for (const auto& d : dets) {
        if (d.class_id == class_id) mine.push_back(d);
    }
    std::stable_sort(mine.begin(), mine.end(),
                     [](const Detection& a, const Detection& b) {
                         return a.confidence > b.confidence;
                     });
    int gt_count = 0;
    for (const auto& g : gts) gt_count += g.class_id == class_id;
    if (gt_count == 0) throw NoGroundTruth("oracle: no GT");

    std::vector<bool> used(gts.size(), false);
    std::vector<double> recalls, precisions;
    int tp = 0;
    for (std::size_t i = 0; i < mine.size(); ++i) {
        int best = -1;
        double best_iou = 0.0;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (used[g] || gts[g].class_id != class_id) continue;
            const double v = iou(mine[i].bbox, gts[g].bbox);
            if (v >= thr && v > best_iou) {
                best_iou = v;
                best = static_cast<int>(g);
            }
        }
        if (best >= 0) {
            used[best] = true;
            ++tp;
        }
        recalls.push_back(static_cast<double>(tp) / gt_count);
        precisions.push_back(static_cast<double>(tp) / (i + 1));
    }
    double ap = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < recalls.size(); ++i) {
        double env = 0.0;
        for (std::size_t j = 0; j < recalls.size(); ++j) {
            if (recalls[j] >= recalls[i]) env = std::max(env, precisions[j]);
        }
        ap += (recalls[i] - prev) * env;
        prev = recalls[i];
    }
    return ap;
}

bool evaluation_oracle() {
    // hand case: flags [TP, FP, TP] with 2 GT -> 0.8333...
    {
        const std::vector<GroundTruth> gts = {{BBox(0, 0, 10, 10), 0},
                                              {BBox(50, 50, 60, 60), 0}};
        const std::vector<Detection> dets = {{BBox(0, 0, 10, 10), 0, 0.9},
                                             {BBox(80, 80, 90, 90), 0, 0.8},
                                             {BBox(50, 50, 60, 60), 0, 0.7}};
        const double expected = 0.5 + 0.5 * (2.0 / 3.0);
        if (!approx_zero(average_precision(dets, gts, 0, 0.5).ap - expected)) {
            return false;
        }
    }

    Rng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Detection> dets;
        std::vector<GroundTruth> gts;
        const int classes = rng.uniform_int(1, 3);
        for (int i = 0, n = rng.uniform_int(1, 10); i < n; ++i) {
            gts.push_back({random_box(rng, 100.0), rng.uniform_int(0, classes - 1)});
        }
        for (int i = 0, n = rng.uniform_int(0, 10); i < n; ++i) {
            dets.push_back({random_box(rng, 100.0), rng.uniform_int(0, classes - 1),
                            rng.uniform()});
        }
        std::vector<int> gt_classes;
        for (const auto& g : gts) {
            if (std::find(gt_classes.begin(), gt_classes.end(), g.class_id) ==
                gt_classes.end()) {
                gt_classes.push_back(g.class_id);
            }
        }
        double oracle_sum = 0.0;
        for (const int c : gt_classes) {
            const double oracle = brute_force_ap(dets, gts, c, 0.5);
            if (!approx_zero(average_precision(dets, gts, c, 0.5).ap - oracle)) {
                return false;
            }
            oracle_sum += oracle;
        }
        const double oracle_map = oracle_sum / gt_classes.size();
        if (!approx_zero(mean_ap(dets, gts, 0.5) - oracle_map)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: threshold monotonicity
// ---------------------------------------------------------------------------

bool threshold_monotonicity() {
    Rng rng(303);
    const double taus[] = {0.1, 0.25, 0.5, 0.8};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Detection> dets;
        std::vector<GroundTruth> gts;
        for (int i = 0, n = rng.uniform_int(1, 10); i < n; ++i) {
            gts.push_back({random_box(rng, 100.0), 0});
        }
        for (int i = 0, n = rng.uniform_int(0, 15); i < n; ++i) {
            dets.push_back({random_box(rng, 100.0), 0, rng.uniform()});
        }
        double prev_recall = 2.0;
        std::size_t prev_count = dets.size() + 1;
        for (const double tau : taus) {
            const auto kept = filter_confidence(dets, tau);
            if (kept.size() > prev_count) return false;  // exact subset property
            for (const auto& k : kept) {
                bool present = false;
                for (const auto& d : dets) {
                    if (d.bbox == k.bbox && d.confidence == k.confidence) {
                        present = true;
                    }
                }
                if (!present) return false;
            }
            const double recall = average_precision(kept, gts, 0, 0.5).recall;
            if (recall > prev_recall) return false;
            prev_recall = recall;
            prev_count = kept.size();
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criteria 4-5: CLI determinism and closed-loop zero
// ---------------------------------------------------------------------------

std::string cli_path() {
    const char* env = std::getenv("DACA_CLI");
    if (!env) throw Error("DACA_CLI not set");
    return env;
}

int run(const std::string& command) {
    return std::system((command + " > /dev/null 2>&1").c_str());
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool dirs_identical(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a)) {
        names.push_back(entry.path().filename());
    }
    std::sort(names.begin(), names.end());
    std::size_t b_count = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(b)) {
        ++b_count;
    }
    if (b_count != names.size()) return false;
    for (const auto& name : names) {
        if (slurp(a / name) != slurp(b / name)) return false;
    }
    return !names.empty();
}

fs::path make_synthetic_dataset(const fs::path& root, const std::string& name,
                                std::uint64_t seed) {
    const auto dir = root / name;
    fs::create_directories(dir);
    Rng rng(seed);
    for (int i = 0; i < 5; ++i) {
        const std::string id = name + "_" + std::to_string(i);
        Image image(600, 600);
        std::vector<GroundTruth> labels;
        for (int b = 0, n = rng.uniform_int(2, 5); b < n; ++b) {
            const double x0 = rng.uniform(0, 520);
            const double y0 = rng.uniform(0, 520);
            const BBox box(x0, y0, x0 + rng.uniform(20, 80), y0 + rng.uniform(20, 80));
            labels.push_back({box, rng.uniform_int(0, 2)});
            // draw a solid block so the scene has structure
            for (int y = static_cast<int>(box.y_min); y < static_cast<int>(box.y_max); ++y) {
                for (int x = static_cast<int>(box.x_min); x < static_cast<int>(box.x_max); ++x) {
                    image.at(x, y, 0) = static_cast<std::uint8_t>(60 + 50 * labels.back().class_id);
                    image.at(x, y, 1) = 200;
                    image.at(x, y, 2) = 90;
                }
            }
        }
        save_image(dir / (id + ".ppm"), image);
        save_labels(dir / (id + ".txt"), labels, 600, 600);
    }
    return dir;
}

bool determinism(const fs::path& scratch) {
    const auto targets = make_synthetic_dataset(scratch, "det_targets", 11);
    const auto sources = make_synthetic_dataset(scratch, "det_sources", 12);
    const std::string cli = cli_path();

    for (const char* suffix : {"a", "b"}) {
        const auto out = scratch / (std::string("compose_") + suffix);
        const std::string cmd = cli + " compose --images " + targets.string() +
                                " --out " + out.string() +
                                " --mock --seed 99";
        if (run(cmd) != 0) return false;
    }
    if (!dirs_identical(scratch / "compose_a", scratch / "compose_b")) {
        return false;
    }

    for (const char* suffix : {"a", "b"}) {
        const auto out = scratch / (std::string("simulate_") + suffix);
        const std::string cmd = cli + " simulate --source-images " +
                                sources.string() + " --target-images " +
                                targets.string() + " --out " + out.string() +
                                " --seed 99 --n-iterations 20";
        if (run(cmd) != 0) return false;
    }
    return dirs_identical(scratch / "simulate_a", scratch / "simulate_b");
}

bool closed_loop_zero(const fs::path& scratch) {
    const auto targets = make_synthetic_dataset(scratch, "loop_targets", 21);
    const auto sources = make_synthetic_dataset(scratch, "loop_sources", 22);
    const auto out = scratch / "loop_out";
    // default mock config is noise-free: detections == GT at confidence 1
    const std::string cmd = cli_path() + " simulate --source-images " +
                            sources.string() + " --target-images " +
                            targets.string() + " --out " + out.string() +
                            " --seed 7 --n-iterations 50";
    if (run(cmd) != 0) return false;

    std::ifstream steps(out / "steps.jsonl");
    if (!steps) return false;
    std::string line;
    int count = 0;
    while (std::getline(steps, line)) {
        const auto j = json::parse(line);
        if (j["skipped"].get<bool>()) return false;
        if (!approx_zero(j["loss_source"].get<double>())) return false;
        if (!approx_zero(j["loss_target"].get<double>())) return false;
        ++count;
    }
    return count == 50;
}

// ---------------------------------------------------------------------------
// Criterion 6: ablation configuration coverage
// ---------------------------------------------------------------------------

bool configuration_coverage() {
    std::vector<DatasetSample> sources, targets;
    Rng rng(404);
    for (int i = 0; i < 3; ++i) {
        DatasetSample s;
        s.id = "s" + std::to_string(i);
        s.image = random_image(600, 600, 500 + i);
        for (int b = 0; b < 3; ++b) {
            const double x0 = rng.uniform(0, 520);
            const double y0 = rng.uniform(0, 520);
            s.ground_truth.push_back(
                {BBox(x0, y0, x0 + rng.uniform(20, 80), y0 + rng.uniform(20, 80)),
                 rng.uniform_int(0, 2)});
        }
        targets.push_back(s);
        s.id = "t" + std::to_string(i);
        sources.push_back(std::move(s));
    }

    auto run_sim = [&](const HarnessConfig& cfg) {
        MockDetectorConfig mock;
        mock.corner_jitter_sigma = 2.0;
        MockDetector detector(mock, 1);
        RecordingTrainer trainer;
        const auto report =
            run_adaptation(sources, targets, detector, trainer, cfg);
        return report.steps.size() == 10;
    };

    const std::vector<std::vector<AugKind>> subsets = {
        {},
        {AugKind::HorizontalFlip},
        {AugKind::BBoxSafeRandomCrop},
        {AugKind::Blur},
        {AugKind::ColorJitter},
        {AugKind::Downscale},
        {AugKind::BrightnessContrast},
        {AugKind::HorizontalFlip, AugKind::Blur},
        {AugKind::HorizontalFlip, AugKind::Downscale},
        {AugKind::Downscale, AugKind::Blur},
        {AugKind::HorizontalFlip, AugKind::Downscale, AugKind::Blur},
        {AugKind::HorizontalFlip, AugKind::BBoxSafeRandomCrop, AugKind::Blur,
         AugKind::ColorJitter, AugKind::Downscale, AugKind::BrightnessContrast},
    };
    for (const auto& subset : subsets) {
        HarnessConfig cfg;
        cfg.n_iterations = 10;
        cfg.ops.clear();
        for (const auto& op : default_ops()) {
            if (std::find(subset.begin(), subset.end(), op.kind) != subset.end()) {
                cfg.ops.push_back(op);
            }
        }
        if (!run_sim(cfg)) return false;
    }
    for (const GridLayout grid : {GridLayout{2, 2}, GridLayout{2, 3},
                                  GridLayout{3, 2}, GridLayout{3, 3}}) {
        HarnessConfig cfg;
        cfg.n_iterations = 10;
        cfg.grid = grid;
        if (!run_sim(cfg)) return false;
    }
    for (const int regions : {1, 2, 3, 4}) {
        HarnessConfig cfg;
        cfg.n_iterations = 10;
        cfg.augmented_regions = regions;
        if (!run_sim(cfg)) return false;
    }
    return true;
}

}  // namespace

int main() {
    const auto suite_start = std::chrono::steady_clock::now();

    const auto scratch =
        fs::temp_directory_path() / "daca_acceptance";
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    criterion("geometry: flip involution, trim/cell oracles, identity tiling",
              geometry_suite);
    criterion("evaluation: AP/mAP vs brute-force oracle (tol 1e-9)",
              evaluation_oracle);
    criterion("threshold monotonicity over {0.1, 0.25, 0.5, 0.8}",
              threshold_monotonicity);
    criterion("determinism: compose/simulate byte-identical across runs",
              [&] { return determinism(scratch); });
    criterion("closed-loop zero: noise-free simulate, 50 steps, loss <= 1e-9",
              [&] { return closed_loop_zero(scratch); });
    criterion("configuration coverage: augmentation/grid/region ablations",
              configuration_coverage);

    const auto total = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - suite_start)
                           .count();
    std::cout << "total runtime: " << total << " ms\n";
    if (total > 120000) {
        std::cout << "[FAIL] suite exceeded the 2 minute budget\n";
        ++failures;
    } else {
        std::cout << "[PASS] suite within the 2 minute budget\n";
    }
    return failures == 0 ? 0 : 1;
}
