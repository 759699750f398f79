#pragma once

#include <memory>
#include <string>
#include <vector>

#include "daca/augment.hpp"
#include "daca/compose.hpp"
#include "daca/image.hpp"
#include "daca/rng.hpp"
#include "daca/selection.hpp"
#include "daca/types.hpp"

namespace daca {

struct DatasetSample {
    std::string id;  // file stem
    Image image;
    std::vector<GroundTruth> ground_truth;  // empty for unlabeled targets
};

/// Detector contract: image -> detections within image bounds, confidences
/// in [0,1]. `reference_labels` carries the labels a synthetic detector may
/// perturb; a real detector ignores it.
class Detector {
public:
    virtual ~Detector() = default;
    virtual std::vector<Detection> detect(
        const Image& image,
        const std::vector<GroundTruth>& reference_labels) = 0;
};

struct LossReport {
    double source_loss = 0.0;
    double target_loss = 0.0;
    double combined = 0.0;
};

/// Trainer contract: reported combined loss must equal source + target.
class Trainer {
public:
    virtual ~Trainer() = default;
    virtual double source_loss(const std::vector<GroundTruth>& gt,
                               const std::vector<Detection>& dets) = 0;
    virtual double target_loss(const std::vector<Detection>& pseudo_labels,
                               const std::vector<Detection>& dets) = 0;
    virtual void update(const LossReport& report) = 0;
};

struct MockDetectorConfig {
    double corner_jitter_sigma = 0.0;   // pixels
    double drop_probability = 0.0;
    double false_positives_per_image = 0.0;  // Poisson rate
    double confidence_base = 1.0;
    double confidence_decay = 0.0;      // per unit jitter/diagonal
    double confidence_noise_sigma = 0.0;

    void validate() const;
};

/// Perturbs ground truth into detections: random drops, Gaussian corner
/// jitter (redrawn when it inverts a box), Poisson false positives, and
/// conf = clamp(base - decay * jitter/diagonal + noise, 0, 1).
std::vector<Detection> mock_detect(const std::vector<GroundTruth>& ground_truth,
                                   int width, int height,
                                   const MockDetectorConfig& config, Rng& rng);

/// Deterministic per call sequence given the construction seed.
class MockDetector : public Detector {
public:
    MockDetector(MockDetectorConfig config, std::uint64_t seed);
    std::vector<Detection> detect(
        const Image& image,
        const std::vector<GroundTruth>& reference_labels) override;

private:
    MockDetectorConfig config_;
    Rng rng_;
};

/// Greedy-matching detection loss: sum of (1 - IoU) over matched pairs plus
/// 1 per unmatched prediction or target, normalized by max(1, |targets|).
/// Zero exactly when the sets match perfectly.
double surrogate_loss(const std::vector<Detection>& predictions,
                      const std::vector<Detection>& targets);

/// Reference trainer: computes surrogate losses, records reports, performs
/// no parameter update.
class RecordingTrainer : public Trainer {
public:
    double source_loss(const std::vector<GroundTruth>& gt,
                       const std::vector<Detection>& dets) override;
    double target_loss(const std::vector<Detection>& pseudo_labels,
                       const std::vector<Detection>& dets) override;
    void update(const LossReport& report) override;

    const std::vector<LossReport>& history() const { return history_; }

private:
    std::vector<LossReport> history_;
};

struct HarnessConfig {
    GridLayout grid{2, 2};
    double conf_threshold = 0.25;
    double min_visibility = 0.0;
    std::vector<AugOp> ops = default_ops();
    int augmented_regions = -1;  // -1: all cells
    std::uint64_t seed = 0;
    int n_iterations = 50;
};

struct StepReport {
    std::string source_id;
    std::string target_id;
    bool skipped = false;
    CellIndex cell;
    double mean_confidence = 0.0;
    int pseudo_labels_pre_trim = 0;
    int pseudo_labels_post_trim = 0;
    int composite_labels = 0;
    double loss_source = 0.0;
    double loss_target = 0.0;
    double loss_total = 0.0;
};

struct AdaptationReport {
    std::vector<StepReport> steps;
    int skipped_count = 0;
};

/// One adaptation iteration: source pass, target detect/select/compose,
/// target pass, combined loss, one trainer update. Throws nothing on an
/// empty target detection set; the step is reported as skipped with
/// loss = source loss.
StepReport adaptation_step(const DatasetSample& source,
                           const DatasetSample& target, Detector& detector,
                           Trainer& trainer, const HarnessConfig& config);

/// Cycles both datasets independently, one source + one target per step.
AdaptationReport run_adaptation(const std::vector<DatasetSample>& sources,
                                const std::vector<DatasetSample>& targets,
                                Detector& detector, Trainer& trainer,
                                const HarnessConfig& config);

}  // namespace daca
