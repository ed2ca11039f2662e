#pragma once

#include "ppk/annotation.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ppk {

struct ScoringConfig {
    double human_iou_thresh = 0.5;
    double part_iou_thresh = 0.3;
    std::size_t k_person = 10;
    std::size_t k_part_per_class = 1;
    /// Average accuracy per raw part class before averaging over the video.
    bool per_part_macro = false;

    /// Throws ConfigError when a threshold leaves (0, 1] or a count is zero.
    void check() const;

    bool operator==(const ScoringConfig&) const = default;
};

struct PartTally {
    std::uint64_t correct = 0;
    std::uint64_t matched = 0;
    std::uint64_t total = 0;

    bool operator==(const PartTally&) const = default;
};

struct VideoScore {
    std::string video_id;
    bool video_correct = false;
    double part_state_accuracy = 1.0;  // vacuously 1.0 without ground-truth parts
    std::uint64_t correct_parts = 0;
    std::uint64_t matched_parts = 0;
    std::uint64_t total_gt_parts = 0;
    std::map<std::string, PartTally> per_part;  // raw part -> tally

    bool operator==(const VideoScore&) const = default;
};

struct ScoreReport {
    ScoringConfig config;
    std::vector<VideoScore> per_video;  // sorted by video_id
    double video_accuracy = 0.0;
    double final_score = 0.0;

    bool operator==(const ScoreReport&) const = default;
};

/// Scores one prediction against its ground truth.
///
/// Predictions are first reduced with apply_topk. Frames pair up by frame_id.
/// Persons are matched greedily at human_iou_thresh; inside each matched pair,
/// parts of the same raw class are matched at part_iou_thresh. A ground-truth
/// part is correct when it is matched and the predicted state equals its state.
/// Parts of unmatched persons and of frames missing from the prediction count
/// as wrong. Throws IdMismatchError when the video ids differ.
VideoScore score_video(const VideoAnnotation& gt, const VideoAnnotation& pred, const ScoringConfig& cfg);

/// Mean over videos of (video correct ? part accuracy : 0), plus plain video accuracy.
/// Both lists must hold the same video ids (order is free); otherwise MissingVideoError.
/// `jobs` > 1 scores videos on worker threads; the result does not depend on it.
ScoreReport score_dataset(const std::vector<VideoAnnotation>& gts, const std::vector<VideoAnnotation>& preds,
                          const ScoringConfig& cfg, std::size_t jobs = 1);

/// Accuracy a video contributes under `cfg` (micro or per-part macro), before gating.
double video_part_accuracy(const VideoScore& v, const ScoringConfig& cfg);

std::string serialize_score_report(const ScoreReport& report);

}  // namespace ppk
