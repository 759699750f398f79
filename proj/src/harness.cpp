#include "daca/harness.hpp"

#include <algorithm>
#include <cmath>

#include "daca/eval.hpp"

namespace daca {

void MockDetectorConfig::validate() const {
    if (corner_jitter_sigma < 0.0 || false_positives_per_image < 0.0 ||
        confidence_decay < 0.0 || confidence_noise_sigma < 0.0) {
        throw InvalidConfig("mock detector rates/sigmas must be non-negative");
    }
    if (drop_probability < 0.0 || drop_probability > 1.0) {
        throw InvalidConfig("drop_probability must be in [0,1]");
    }
}

namespace {

constexpr int kMaxJitterAttempts = 100;

struct JitteredBox {
    BBox box;
    double magnitude;  // L2 norm of the four corner displacements
};

JitteredBox jitter_box(const BBox& box, double sigma, int width, int height,
                       Rng& rng) {
    if (sigma <= 0.0) return {box, 0.0};
    for (int attempt = 0; attempt < kMaxJitterAttempts; ++attempt) {
        const double dx0 = rng.gaussian(0.0, sigma);
        const double dy0 = rng.gaussian(0.0, sigma);
        const double dx1 = rng.gaussian(0.0, sigma);
        const double dy1 = rng.gaussian(0.0, sigma);
        const double x0 = std::clamp(box.x_min + dx0, 0.0, static_cast<double>(width));
        const double y0 = std::clamp(box.y_min + dy0, 0.0, static_cast<double>(height));
        const double x1 = std::clamp(box.x_max + dx1, 0.0, static_cast<double>(width));
        const double y1 = std::clamp(box.y_max + dy1, 0.0, static_cast<double>(height));
        if (x1 - x0 >= 1.0 && y1 - y0 >= 1.0) {
            const double mag =
                std::sqrt(dx0 * dx0 + dy0 * dy0 + dx1 * dx1 + dy1 * dy1);
            return {BBox(x0, y0, x1, y1), mag};
        }
    }
    return {box, 0.0};  // jitter kept inverting the box; keep the original
}

}  // namespace

std::vector<Detection> mock_detect(const std::vector<GroundTruth>& ground_truth,
                                   int width, int height,
                                   const MockDetectorConfig& config, Rng& rng) {
    config.validate();
    const double diagonal = std::sqrt(static_cast<double>(width) * width +
                                      static_cast<double>(height) * height);
    std::vector<Detection> out;
    for (const auto& gt : ground_truth) {
        if (config.drop_probability > 0.0 && rng.bernoulli(config.drop_probability)) {
            continue;
        }
        const auto jittered =
            jitter_box(gt.bbox, config.corner_jitter_sigma, width, height, rng);
        double conf = config.confidence_base -
                      config.confidence_decay * (jittered.magnitude / diagonal);
        if (config.confidence_noise_sigma > 0.0) {
            conf += rng.gaussian(0.0, config.confidence_noise_sigma);
        }
        out.push_back({jittered.box, gt.class_id, std::clamp(conf, 0.0, 1.0)});
    }
    const int fp = rng.poisson(config.false_positives_per_image);
    int max_class = 0;
    for (const auto& gt : ground_truth) max_class = std::max(max_class, gt.class_id);
    for (int i = 0; i < fp; ++i) {
        const double w =
            std::min<double>(width, rng.uniform(4.0, std::max(5.0, width * 0.4)));
        const double h =
            std::min<double>(height, rng.uniform(4.0, std::max(5.0, height * 0.4)));
        const double x0 = rng.uniform(0.0, width - w);
        const double y0 = rng.uniform(0.0, height - h);
        out.push_back({BBox(x0, y0, x0 + w, y0 + h),
                       rng.uniform_int(0, max_class),
                       rng.uniform(0.0, 0.3)});
    }
    return out;
}

MockDetector::MockDetector(MockDetectorConfig config, std::uint64_t seed)
    : config_(config), rng_(detail::splitmix64(seed ^ 0x6d6f636bULL)) {
    config_.validate();
}

std::vector<Detection> MockDetector::detect(
    const Image& image, const std::vector<GroundTruth>& reference_labels) {
    return mock_detect(reference_labels, image.width(), image.height(), config_,
                       rng_);
}

double surrogate_loss(const std::vector<Detection>& predictions,
                      const std::vector<Detection>& targets) {
    std::vector<std::size_t> order(predictions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return predictions[a].confidence > predictions[b].confidence;
                     });
    std::vector<bool> target_used(targets.size(), false);
    double matched_cost = 0.0;
    std::size_t matched = 0;
    for (const std::size_t pi : order) {
        double best_iou = 0.0;
        std::size_t best = targets.size();
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            if (target_used[ti] ||
                targets[ti].class_id != predictions[pi].class_id) {
                continue;
            }
            const double v = iou(predictions[pi].bbox, targets[ti].bbox);
            if (v >= 0.5 && v > best_iou) {
                best_iou = v;
                best = ti;
            }
        }
        if (best < targets.size()) {
            target_used[best] = true;
            matched_cost += 1.0 - best_iou;
            ++matched;
        }
    }
    const double unmatched_predictions =
        static_cast<double>(predictions.size() - matched);
    const double unmatched_targets =
        static_cast<double>(targets.size() - matched);
    return (matched_cost + unmatched_predictions + unmatched_targets) /
           std::max<std::size_t>(1, targets.size());
}

double RecordingTrainer::source_loss(const std::vector<GroundTruth>& gt,
                                     const std::vector<Detection>& dets) {
    std::vector<Detection> targets;
    targets.reserve(gt.size());
    for (const auto& g : gt) targets.push_back(to_detection(g, 1.0));
    return surrogate_loss(dets, targets);
}

double RecordingTrainer::target_loss(const std::vector<Detection>& pseudo_labels,
                                     const std::vector<Detection>& dets) {
    return surrogate_loss(dets, pseudo_labels);
}

void RecordingTrainer::update(const LossReport& report) {
    history_.push_back(report);
}

StepReport adaptation_step(const DatasetSample& source,
                           const DatasetSample& target, Detector& detector,
                           Trainer& trainer, const HarnessConfig& config) {
    require_divisible(config.grid, target.image.width(), target.image.height());

    StepReport report;
    report.source_id = source.id;
    report.target_id = target.id;

    const auto source_dets = detector.detect(source.image, source.ground_truth);
    report.loss_source = trainer.source_loss(source.ground_truth, source_dets);

    const auto target_dets = detector.detect(target.image, target.ground_truth);
    const auto confident = filter_confidence(target_dets, config.conf_threshold);
    if (confident.empty()) {
        report.skipped = true;
        report.loss_total = report.loss_source;
        trainer.update({report.loss_source, 0.0, report.loss_total});
        return report;
    }

    const auto selection = select_region(target.image, confident, config.grid,
                                         config.min_visibility);
    report.cell = selection.cell;
    report.mean_confidence = selection.mean_confidence;
    report.pseudo_labels_pre_trim = static_cast<int>(confident.size());
    report.pseudo_labels_post_trim =
        static_cast<int>(selection.pseudo_labels.size());

    const auto composite =
        compose(selection.crop, selection.pseudo_labels, config.grid, config.ops,
                config.seed, target.id, config.augmented_regions);
    report.composite_labels = static_cast<int>(composite.pseudo_labels.size());

    std::vector<GroundTruth> composite_reference;
    composite_reference.reserve(composite.pseudo_labels.size());
    for (const auto& det : composite.pseudo_labels) {
        composite_reference.push_back(to_ground_truth(det));
    }
    const auto composite_dets =
        detector.detect(composite.image, composite_reference);
    report.loss_target =
        trainer.target_loss(composite.pseudo_labels, composite_dets);
    report.loss_total = report.loss_source + report.loss_target;
    trainer.update({report.loss_source, report.loss_target, report.loss_total});
    return report;
}

AdaptationReport run_adaptation(const std::vector<DatasetSample>& sources,
                                const std::vector<DatasetSample>& targets,
                                Detector& detector, Trainer& trainer,
                                const HarnessConfig& config) {
    if (sources.empty() || targets.empty()) {
        throw EmptyDataset("source and target sets must be non-empty");
    }
    AdaptationReport report;
    for (int it = 0; it < config.n_iterations; ++it) {
        auto step = adaptation_step(sources[it % sources.size()],
                                    targets[it % targets.size()], detector,
                                    trainer, config);
        if (step.skipped) ++report.skipped_count;
        report.steps.push_back(std::move(step));
    }
    return report;
}

}  // namespace daca
