#pragma once

#include <map>
#include <utility>
#include <vector>

#include "daca/types.hpp"

namespace daca {

double iou(const BBox& a, const BBox& b);

struct MatchResult {
    std::vector<bool> true_positive;    // confidence-descending order
    std::vector<double> confidences;    // same order
    int false_negatives = 0;
    int gt_count = 0;

    int tp_count() const {
        int n = 0;
        for (const bool flag : true_positive) n += flag;
        return n;
    }
};

/// Greedy matching for one class on one image: detections sorted by
/// confidence descending (stable), each takes the highest-IoU unmatched
/// ground truth at or above the threshold.
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruth>& gts,
                             double iou_threshold, int class_id);

struct ApResult {
    std::vector<std::pair<double, double>> pr_points;  // (recall, precision)
    double ap = 0.0;
    double precision = 0.0;  // endpoint TP/(TP+FP); 0 when no detections
    double recall = 0.0;     // endpoint TP/GT
};

ApResult average_precision(const std::vector<Detection>& dets,
                           const std::vector<GroundTruth>& gts,
                           int class_id, double iou_threshold);

double mean_ap(const std::vector<Detection>& dets,
               const std::vector<GroundTruth>& gts, double iou_threshold);

/// Multi-image evaluation: matching is per image, the PR curve is built
/// over all detections globally sorted by confidence.
struct ImageLabels {
    std::vector<Detection> dets;
    std::vector<GroundTruth> gts;
};

ApResult average_precision(const std::vector<ImageLabels>& images,
                           int class_id, double iou_threshold);

struct EvalReport {
    std::map<int, ApResult> per_class;  // classes with >= 1 ground truth
    double map = 0.0;
};

EvalReport evaluate(const std::vector<ImageLabels>& images, double iou_threshold);

}  // namespace daca
