#pragma once

#include "ppk/annotation.hpp"
#include "ppk/taxonomy.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppk {

/// One video-level label per part group: "{video_action}_{Group}_{state}".
struct PartLevelLabel {
    std::string video_action;
    std::string group;
    std::string state;

    std::string label_string() const { return video_action + "_" + group + "_" + state; }

    bool operator==(const PartLevelLabel&) const = default;
};

/// Splits a label string back into its fields. Action names may contain
/// underscores, so the split is anchored on a taxonomy group name.
/// Throws TaxonomyError when no split resolves against the taxonomy.
PartLevelLabel parse_label_string(std::string_view label, const Taxonomy& taxonomy);

/// Part-state counts indexed by taxonomy state order.
class StateHistogram {
public:
    explicit StateHistogram(std::size_t num_states = 0) : counts_(num_states, 0) {}

    void add(std::size_t state_index, std::uint64_t n = 1)
    {
        counts_[state_index] += n;
        total_ += n;
    }
    void merge(const StateHistogram& other);

    std::uint64_t count(std::size_t state_index) const { return counts_[state_index]; }
    std::uint64_t total() const { return total_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    /// Most frequent state; ties go to the earlier taxonomy state. Empty -> `fallback`.
    std::size_t modal(std::size_t fallback) const;

    bool operator==(const StateHistogram&) const = default;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Per-group histograms of one video, counting every part instance once.
std::vector<StateHistogram> group_histograms(const VideoAnnotation& video, const Taxonomy& taxonomy);

/// Exactly one label per taxonomy group, in group order. Groups without any
/// instance get state "none".
std::vector<PartLevelLabel> derive_video_labels(const VideoAnnotation& video, const Taxonomy& taxonomy);

struct LongTailRow {
    std::string video_action;
    std::string group;
    std::string modal_state;
    std::uint64_t modal_count = 0;
    std::uint64_t total = 0;
    double share = 1.0;  // modal_count / total; 1.0 when total is 0
};

struct LongTailReport {
    std::vector<LongTailRow> rows;  // action-major, taxonomy order

    const LongTailRow* find(std::string_view action, std::string_view group) const;
};

/// Pools all videos of each action present in `videos`.
LongTailReport long_tail_report(const std::vector<VideoAnnotation>& videos, const Taxonomy& taxonomy);

/// Delimiter-separated table with a header row.
std::string format_long_tail(const LongTailReport& report, char delimiter = '\t');

/// Most-frequent-state predictor fitted on a training corpus.
///
/// Lookup order for (action, group): the action's own histogram, then the
/// group's histogram pooled over every action, then "none".
class BaselineModel {
public:
    BaselineModel(const std::vector<VideoAnnotation>& train, const Taxonomy& taxonomy);

    const std::string& state_for(std::string_view action, std::string_view group) const;

    /// Copy of `target` with every part state replaced by the fitted modal state.
    VideoAnnotation predict(const VideoAnnotation& target) const;

private:
    const Taxonomy* taxonomy_;
    std::map<std::pair<std::string, std::string>, std::string, std::less<>> per_action_;
    std::vector<std::string> per_group_;
};

VideoAnnotation baseline_predict(const std::vector<VideoAnnotation>& gt_train, const VideoAnnotation& target,
                                 const Taxonomy& taxonomy);

/// Stamps each group's label state onto every part instance of that group.
/// Throws MissingGroupError when `target` has a group with no label.
VideoAnnotation invert_labels(const std::vector<PartLevelLabel>& labels, const VideoAnnotation& target,
                              const Taxonomy& taxonomy);

/// Labels of one video as written by `transform-labels`.
struct VideoLabels {
    std::string video_id;
    std::vector<PartLevelLabel> labels;

    bool operator==(const VideoLabels&) const = default;
};

/// {"labels": [{"video_id", "video_action", "group", "state", "label"}]}, one record
/// per (video, group), sorted by video_id then group order.
std::string serialize_video_labels(const std::vector<VideoLabels>& videos);
std::vector<VideoLabels> parse_video_labels(std::string_view text, const Taxonomy& taxonomy);

}  // namespace ppk
