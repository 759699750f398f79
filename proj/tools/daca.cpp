#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "daca/compose.hpp"
#include "daca/config.hpp"
#include "daca/dataset.hpp"
#include "daca/eval.hpp"
#include "daca/harness.hpp"
#include "daca/image_io.hpp"
#include "daca/labels.hpp"
#include "daca/selection.hpp"
#include "daca/visualize.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> grid;
    std::optional<double> conf_threshold;
    std::optional<int> regions;
    std::optional<std::string> augmentations;
    std::optional<int> n_iterations;
    bool use_mock = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--seed", opts.seed, "Random seed (overrides config)");
    cmd->add_option("--grid", opts.grid, "Grid layout RxC, e.g. 2x2");
    cmd->add_option("--conf-threshold", opts.conf_threshold,
                    "Pseudo-label confidence threshold");
    cmd->add_option("--regions", opts.regions,
                    "Number of augmented regions (<= rows*cols)");
    cmd->add_option("--augmentations", opts.augmentations,
                    "Augmentation subset, e.g. All, None, HF+D+B");
    cmd->add_option("--n-iterations", opts.n_iterations,
                    "Adaptation iterations");
}

daca::Config resolve_config(const CommonOpts& opts) {
    daca::Config cfg;
    if (!opts.config_path.empty()) {
        cfg = daca::load_config(opts.config_path);
    }
    // Seed priority: flag > config file > DACA_SEED env > 0.
    if (!cfg.seed_set) {
        if (const char* env = std::getenv("DACA_SEED")) {
            cfg.seed = std::strtoull(env, nullptr, 10);
        }
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.grid) cfg.grid = daca::parse_grid(*opts.grid);
    if (opts.conf_threshold) cfg.conf_threshold = *opts.conf_threshold;
    if (opts.regions) cfg.regions = *opts.regions;
    if (opts.augmentations) cfg.ops = daca::ops_from_names(*opts.augmentations);
    if (opts.n_iterations) cfg.n_iterations = *opts.n_iterations;
    cfg.validate();
    return cfg;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw daca::IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json step_to_json(int step, const daca::StepReport& r) {
    json j;
    j["step"] = step;
    j["source_id"] = r.source_id;
    j["target_id"] = r.target_id;
    j["skipped"] = r.skipped;
    j["loss_source"] = r.loss_source;
    j["loss_total"] = r.loss_total;
    if (!r.skipped) {
        j["cell"] = {r.cell.row, r.cell.col};
        j["mean_confidence"] = r.mean_confidence;
        j["pseudo_labels_pre_trim"] = r.pseudo_labels_pre_trim;
        j["pseudo_labels_post_trim"] = r.pseudo_labels_post_trim;
        j["composite_labels"] = r.composite_labels;
        j["loss_target"] = r.loss_target;
    }
    return j;
}

int cmd_compose(const CommonOpts& opts, const std::string& images_dir,
                std::string labels_dir, const std::string& out_dir) {
    const auto cfg = resolve_config(opts);
    if (labels_dir.empty()) labels_dir = images_dir;
    fs::create_directories(out_dir);

    json summary;
    summary["processed"] = json::array();
    summary["skipped"] = json::array();

    for (const auto& path : daca::list_images(images_dir)) {
        const std::string id = path.stem().string();
        const auto image = daca::resize_bilinear(daca::load_image(path),
                                                 cfg.image_width, cfg.image_height);
        const auto label_path = fs::path(labels_dir) / (id + ".txt");

        std::vector<daca::Detection> detections;
        if (opts.use_mock) {
            const auto gt = daca::load_ground_truth(label_path, cfg.image_width,
                                                    cfg.image_height);
            daca::Rng rng(daca::substream_seed(cfg.seed, id, 0xdecafULL));
            detections = daca::mock_detect(gt, cfg.image_width, cfg.image_height,
                                           cfg.mock, rng);
        } else {
            detections = daca::load_detections(label_path, cfg.image_width,
                                               cfg.image_height);
        }

        const auto confident =
            daca::filter_confidence(detections, cfg.conf_threshold);
        if (confident.empty()) {
            std::cerr << "skip " << id << ": no detection above threshold\n";
            summary["skipped"].push_back(id);
            continue;
        }
        const auto selection = daca::select_region(image, confident, cfg.grid,
                                                   cfg.min_visibility);
        const auto composite =
            daca::compose(selection.crop, selection.pseudo_labels, cfg.grid,
                          cfg.ops, cfg.seed, id, cfg.regions);

        const fs::path image_out =
            fs::path(out_dir) / (id + "_composite." + cfg.image_format);
        daca::save_image(image_out, composite.image);
        daca::save_labels(fs::path(out_dir) / (id + "_composite.txt"),
                          composite.pseudo_labels, cfg.image_width,
                          cfg.image_height);

        json sidecar;
        sidecar["id"] = id;
        sidecar["cell"] = {selection.cell.row, selection.cell.col};
        sidecar["mean_confidence"] = selection.mean_confidence;
        sidecar["label_count"] = composite.pseudo_labels.size();
        sidecar["pipelines"] = json::array();
        for (const auto& cell : composite.per_cell) {
            sidecar["pipelines"].push_back(cell.pipeline.seed_trace);
        }
        write_json(fs::path(out_dir) / (id + "_composite.json"), sidecar);
        summary["processed"].push_back(id);
    }
    write_json(fs::path(out_dir) / "summary.json", summary);
    return kExitOk;
}

int cmd_evaluate(const std::string& detections_dir, const std::string& gt_dir,
                 double iou_threshold, const std::string& classes_path,
                 int width, int height) {
    std::vector<daca::ImageLabels> images;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        if (entry.path().extension() != ".txt") continue;
        daca::ImageLabels labels;
        labels.gts = daca::load_ground_truth(entry.path(), width, height);
        const auto det_path = fs::path(detections_dir) / entry.path().filename();
        if (fs::exists(det_path)) {
            labels.dets = daca::load_detections(det_path, width, height);
        }
        images.push_back(std::move(labels));
    }
    const auto report = daca::evaluate(images, iou_threshold);

    std::vector<std::string> class_names;
    if (!classes_path.empty()) {
        std::ifstream in(classes_path);
        if (!in) throw daca::IoError("cannot open " + classes_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) class_names.push_back(line);
        }
    }

    json j;
    j["iou_threshold"] = iou_threshold;
    j["map"] = report.map;
    j["per_class"] = json::array();
    for (const auto& [class_id, ap] : report.per_class) {
        json c;
        c["class_id"] = class_id;
        if (class_id < static_cast<int>(class_names.size())) {
            c["name"] = class_names[class_id];
        }
        c["ap"] = ap.ap;
        c["precision"] = ap.precision;
        c["recall"] = ap.recall;
        j["per_class"].push_back(std::move(c));
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts, const std::string& source_images,
                 std::string source_labels, const std::string& target_images,
                 std::string target_labels, const std::string& out_dir) {
    const auto cfg = resolve_config(opts);
    if (source_labels.empty()) source_labels = source_images;
    if (target_labels.empty()) target_labels = target_images;
    fs::create_directories(out_dir);

    const auto sources = daca::load_dataset(source_images, source_labels,
                                            cfg.image_width, cfg.image_height);
    const auto targets = daca::load_dataset(target_images, target_labels,
                                            cfg.image_width, cfg.image_height);

    daca::MockDetector detector(cfg.mock, cfg.seed);
    daca::RecordingTrainer trainer;
    const auto report = daca::run_adaptation(sources, targets, detector, trainer,
                                             cfg.harness());

    std::ofstream steps(fs::path(out_dir) / "steps.jsonl", std::ios::trunc);
    if (!steps) throw daca::IoError("cannot write steps.jsonl");
    double sum_source = 0, sum_target = 0, sum_total = 0, sum_pseudo = 0;
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const auto& step = report.steps[i];
        steps << step_to_json(static_cast<int>(i), step).dump() << "\n";
        sum_source += step.loss_source;
        sum_target += step.loss_target;
        sum_total += step.loss_total;
        sum_pseudo += step.pseudo_labels_pre_trim;
    }
    const double n = std::max<std::size_t>(1, report.steps.size());

    json summary;
    summary["n_iterations"] = cfg.n_iterations;
    summary["steps"] = report.steps.size();
    summary["skipped"] = report.skipped_count;
    summary["seed"] = cfg.seed;
    summary["mean_loss_source"] = sum_source / n;
    summary["mean_loss_target"] = sum_target / n;
    summary["mean_loss_total"] = sum_total / n;
    summary["mean_pseudo_labels"] = sum_pseudo / n;
    write_json(fs::path(out_dir) / "summary.json", summary);
    return kExitOk;
}

int cmd_visualize(const std::string& image_path, const std::string& labels_path,
                  const std::string& out_path, const std::string& color_by,
                  bool ground_truth_mode) {
    const auto image = daca::load_image(image_path);
    std::vector<daca::Detection> labels;
    if (ground_truth_mode) {
        for (const auto& gt : daca::load_ground_truth(labels_path, image.width(),
                                                      image.height())) {
            labels.push_back(daca::to_detection(gt, 1.0));
        }
    } else {
        labels = daca::load_detections(labels_path, image.width(), image.height());
    }
    const auto mode = color_by == "confidence" ? daca::ColorBy::Confidence
                                               : daca::ColorBy::Class;
    daca::save_image(out_path, daca::annotate(image, labels, mode));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DACA pipeline: confident-region selection, box-aware "
                 "augmentation, composite construction, adaptation "
                 "simulation, and AP/mAP evaluation"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* compose = app.add_subcommand(
        "compose", "Build composite images and pseudo-label files");
    std::string images_dir, labels_dir, out_dir;
    compose->add_option("--images", images_dir, "Target image directory")->required();
    compose->add_option("--labels", labels_dir,
                        "Detection (or GT, with --mock) label directory; "
                        "defaults to --images");
    compose->add_option("--out", out_dir, "Output directory")->required();
    compose->add_flag("--mock", opts.use_mock,
                      "Synthesize detections from GT with the mock detector");
    add_common(compose, opts);

    auto* evaluate = app.add_subcommand("evaluate", "Compute per-class AP and mAP");
    std::string det_dir, gt_dir, classes_path;
    double iou_threshold = 0.5;
    int eval_w = 600, eval_h = 600;
    evaluate->add_option("--detections", det_dir, "Detection label directory")->required();
    evaluate->add_option("--ground-truth", gt_dir, "Ground-truth label directory")->required();
    evaluate->add_option("--iou", iou_threshold, "IoU matching threshold");
    evaluate->add_option("--classes", classes_path, "Class-name file, one per line");
    evaluate->add_option("--width", eval_w, "Denormalization width");
    evaluate->add_option("--height", eval_h, "Denormalization height");

    auto* simulate = app.add_subcommand(
        "simulate", "Run the adaptation loop with the mock detector");
    std::string src_images, src_labels, tgt_images, tgt_labels, sim_out;
    simulate->add_option("--source-images", src_images, "Source image directory")->required();
    simulate->add_option("--source-labels", src_labels, "Source GT directory; defaults to --source-images");
    simulate->add_option("--target-images", tgt_images, "Target image directory")->required();
    simulate->add_option("--target-labels", tgt_labels, "Target GT directory (mock detector + evaluation only)");
    simulate->add_option("--out", sim_out, "Output directory")->required();
    add_common(simulate, opts);

    auto* visualize = app.add_subcommand("visualize", "Draw boxes onto an image");
    std::string vis_image, vis_labels, vis_out, color_by = "class";
    bool vis_gt = false;
    visualize->add_option("--image", vis_image, "Input image")->required();
    visualize->add_option("--labels", vis_labels, "Label file")->required();
    visualize->add_option("--out", vis_out, "Output image (.ppm or .png)")->required();
    visualize->add_option("--color-by", color_by, "class or confidence")
        ->check(CLI::IsMember({"class", "confidence"}));
    visualize->add_flag("--ground-truth", vis_gt, "Labels are 5-field GT records");

    try {
        app.parse(argc, argv);
        if (compose->parsed()) {
            return cmd_compose(opts, images_dir, labels_dir, out_dir);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(det_dir, gt_dir, iou_threshold, classes_path,
                                eval_w, eval_h);
        }
        if (simulate->parsed()) {
            return cmd_simulate(opts, src_images, src_labels, tgt_images,
                                tgt_labels, sim_out);
        }
        if (visualize->parsed()) {
            return cmd_visualize(vis_image, vis_labels, vis_out, color_by, vis_gt);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const daca::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const daca::CorruptHeader& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const daca::UnsupportedFormat& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const daca::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
