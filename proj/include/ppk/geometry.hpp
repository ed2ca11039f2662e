#pragma once

#include "ppk/box.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

inline constexpr std::size_t kNumKeypoints = 17;

/// COCO keypoint order.
inline constexpr std::array<std::string_view, kNumKeypoints> kKeypointNames = {
    "nose",           "left_eye",       "right_eye",  "left_ear",    "right_ear",
    "left_shoulder",  "right_shoulder", "left_elbow", "right_elbow", "left_wrist",
    "right_wrist",    "left_hip",       "right_hip",  "left_knee",   "right_knee",
    "left_ankle",     "right_ankle",
};

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double confidence = 0.0;

    bool operator==(const Keypoint&) const = default;
};

/// The 17 keypoints of one person, indexed in kKeypointNames order.
struct PoseKeypoints {
    std::array<Keypoint, kNumKeypoints> points{};

    bool operator==(const PoseKeypoints&) const = default;
};

/// Intersection over union of two continuous boxes. Zero-area boxes score 0
/// against everything, themselves included.
double iou(const BoundingBox& a, const BoundingBox& b);

struct MatchPair {
    std::size_t pred = 0;
    std::size_t gt = 0;
    double iou = 0.0;

    bool operator==(const MatchPair&) const = default;
};

struct MatchResult {
    std::vector<MatchPair> pairs;  // non-increasing iou
    std::vector<std::size_t> unmatched_pred;
    std::vector<std::size_t> unmatched_gt;

    bool operator==(const MatchResult&) const = default;
};

struct ScoredBox {
    BoundingBox box;
    double score = 1.0;
};

/// Row-major pred x gt matrix of overlaps.
struct IouMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

IouMatrix iou_matrix(std::span<const ScoredBox> preds, std::span<const BoundingBox> gts);

/// Greedy one-to-one assignment over a precomputed overlap matrix.
///
/// Repeatedly takes the best remaining (pred, gt) pair with overlap >= thresh and
/// retires both. Ordering: higher overlap, then higher pred score, then lower
/// pred index, then lower gt index. `pred_scores` has one entry per row.
MatchResult greedy_assign(const IouMatrix& overlaps, std::span<const double> pred_scores, double thresh);

MatchResult greedy_match(std::span<const ScoredBox> preds, std::span<const BoundingBox> gts, double thresh);

/// Smallest box containing `box` and every keypoint with confidence >= conf_thresh,
/// clamped to `image_bounds` when given.
BoundingBox refine_person_box(const BoundingBox& box, const PoseKeypoints& kp, double conf_thresh,
                              const std::optional<BoundingBox>& image_bounds = std::nullopt);

}  // namespace ppk
