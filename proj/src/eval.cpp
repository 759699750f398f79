#include "daca/eval.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace daca {

double iou(const BBox& a, const BBox& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruth>& gts,
                             double iou_threshold, int class_id) {
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
        throw InvalidThreshold("IoU threshold must be in (0,1]");
    }
    std::vector<std::size_t> det_order;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dets[i].class_id == class_id) det_order.push_back(i);
    }
    std::stable_sort(det_order.begin(), det_order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return dets[a].confidence > dets[b].confidence;
                     });
    std::vector<std::size_t> gt_indices;
    for (std::size_t i = 0; i < gts.size(); ++i) {
        if (gts[i].class_id == class_id) gt_indices.push_back(i);
    }

    MatchResult result;
    result.gt_count = static_cast<int>(gt_indices.size());
    std::vector<bool> gt_used(gt_indices.size(), false);
    for (const std::size_t di : det_order) {
        double best_iou = 0.0;
        std::size_t best_gt = gt_indices.size();
        for (std::size_t gi = 0; gi < gt_indices.size(); ++gi) {
            if (gt_used[gi]) continue;
            const double v = iou(dets[di].bbox, gts[gt_indices[gi]].bbox);
            if (v >= iou_threshold && v > best_iou) {
                best_iou = v;
                best_gt = gi;
            }
        }
        const bool matched = best_gt < gt_indices.size();
        if (matched) gt_used[best_gt] = true;
        result.true_positive.push_back(matched);
        result.confidences.push_back(dets[di].confidence);
    }
    result.false_negatives =
        result.gt_count - result.tp_count();
    return result;
}

namespace {

/// All-point interpolation: AP = sum over recall steps of
/// delta_recall * (max precision at recall >= r).
ApResult ap_from_flags(const std::vector<bool>& flags, int gt_count) {
    ApResult result;
    if (gt_count <= 0) {
        throw NoGroundTruth("AP undefined without ground truth");
    }
    int tp = 0, fp = 0;
    std::vector<double> recalls, precisions;
    for (const bool flag : flags) {
        flag ? ++tp : ++fp;
        recalls.push_back(static_cast<double>(tp) / gt_count);
        precisions.push_back(static_cast<double>(tp) / (tp + fp));
        result.pr_points.emplace_back(recalls.back(), precisions.back());
    }
    if (flags.empty()) {
        result.ap = 0.0;
        result.precision = 0.0;  // zero-detection convention
        result.recall = 0.0;
        return result;
    }
    // Precision envelope, computed right to left.
    std::vector<double> envelope(precisions.size());
    double running = 0.0;
    for (std::size_t i = precisions.size(); i-- > 0;) {
        running = std::max(running, precisions[i]);
        envelope[i] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < recalls.size(); ++i) {
        ap += (recalls[i] - prev_recall) * envelope[i];
        prev_recall = recalls[i];
    }
    result.ap = ap;
    result.precision = precisions.back();
    result.recall = recalls.back();
    return result;
}

ApResult ap_over_images(const std::vector<ImageLabels>& images, int class_id,
                        double iou_threshold) {
    struct Flagged {
        double confidence;
        bool tp;
    };
    std::vector<Flagged> flagged;
    int gt_count = 0;
    for (const auto& img : images) {
        const auto match = match_detections(img.dets, img.gts, iou_threshold,
                                            class_id);
        gt_count += match.gt_count;
        for (std::size_t i = 0; i < match.true_positive.size(); ++i) {
            flagged.push_back({match.confidences[i], match.true_positive[i]});
        }
    }
    std::stable_sort(flagged.begin(), flagged.end(),
                     [](const Flagged& a, const Flagged& b) {
                         return a.confidence > b.confidence;
                     });
    std::vector<bool> flags;
    flags.reserve(flagged.size());
    for (const auto& f : flagged) flags.push_back(f.tp);
    return ap_from_flags(flags, gt_count);
}

}  // namespace

ApResult average_precision(const std::vector<Detection>& dets,
                           const std::vector<GroundTruth>& gts,
                           int class_id, double iou_threshold) {
    const auto match = match_detections(dets, gts, iou_threshold, class_id);
    return ap_from_flags(match.true_positive, match.gt_count);
}

double mean_ap(const std::vector<Detection>& dets,
               const std::vector<GroundTruth>& gts, double iou_threshold) {
    return evaluate({{dets, gts}}, iou_threshold).map;
}

ApResult average_precision(const std::vector<ImageLabels>& images,
                           int class_id, double iou_threshold) {
    return ap_over_images(images, class_id, iou_threshold);
}

EvalReport evaluate(const std::vector<ImageLabels>& images,
                    double iou_threshold) {
    std::set<int> classes;
    for (const auto& img : images) {
        for (const auto& gt : img.gts) classes.insert(gt.class_id);
    }
    if (classes.empty()) {
        throw NoGroundTruth("no ground truth in any image");
    }
    EvalReport report;
    double sum = 0.0;
    for (const int c : classes) {
        auto ap = ap_over_images(images, c, iou_threshold);
        sum += ap.ap;
        report.per_class.emplace(c, std::move(ap));
    }
    report.map = sum / static_cast<double>(classes.size());
    return report;
}

}  // namespace daca
