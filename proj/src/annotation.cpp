#include "ppk/annotation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ppk {

std::string_view to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::duplicate_video: return "duplicate_video";
    case ViolationKind::no_frames: return "no_frames";
    case ViolationKind::duplicate_frame: return "duplicate_frame";
    case ViolationKind::unordered_frame: return "unordered_frame";
    case ViolationKind::score_out_of_range: return "score_out_of_range";
    case ViolationKind::inverted_box: return "inverted_box";
    case ViolationKind::degenerate_box: return "degenerate_box";
    case ViolationKind::unknown_action: return "unknown_action";
    case ViolationKind::unknown_part: return "unknown_part";
    case ViolationKind::unknown_state: return "unknown_state";
    case ViolationKind::duplicate_part: return "duplicate_part";
    }
    return "unknown";
}

namespace {

class Validator {
public:
    Validator(const Taxonomy& taxonomy, AnnotationRole role) : taxonomy_(taxonomy), role_(role) {}

    void video(const VideoAnnotation& v, const std::string& locus)
    {
        if (!taxonomy_.has_action(v.action))
            add(ViolationKind::unknown_action, locus + ".action", "unknown action '" + v.action + "'");
        if (v.frames.empty())
            add(ViolationKind::no_frames, locus + ".frames", "video has no frames");

        std::set<std::uint64_t> seen;
        for (std::size_t f = 0; f < v.frames.size(); ++f) {
            const auto& frame = v.frames[f];
            const std::string floc = locus + ".frames[" + std::to_string(f) + "]";
            if (!seen.insert(frame.frame_id).second) {
                add(ViolationKind::duplicate_frame, floc + ".frame_id",
                    "duplicate frame_id " + std::to_string(frame.frame_id));
            } else if (f > 0 && frame.frame_id < v.frames[f - 1].frame_id) {
                add(ViolationKind::unordered_frame, floc + ".frame_id",
                    "frame_id " + std::to_string(frame.frame_id) + " is not increasing");
            }
            for (std::size_t p = 0; p < frame.persons.size(); ++p)
                person(frame.persons[p], floc + ".persons[" + std::to_string(p) + "]");
        }
    }

    std::vector<Violation> take() { return std::move(out_); }

private:
    void person(const PersonInstance& person, const std::string& locus)
    {
        score(person.score, locus + ".score");
        box(person.box, locus + ".box");
        std::set<std::string_view> parts_seen;
        for (std::size_t i = 0; i < person.parts.size(); ++i) {
            const auto& part = person.parts[i];
            const std::string ploc = locus + ".parts[" + std::to_string(i) + "]";
            if (!taxonomy_.has_part(part.part))
                add(ViolationKind::unknown_part, ploc + ".part", "unknown part '" + part.part + "'");
            if (!taxonomy_.has_state(part.state))
                add(ViolationKind::unknown_state, ploc + ".state", "unknown state '" + part.state + "'");
            if (role_ == AnnotationRole::ground_truth && !parts_seen.insert(part.part).second)
                add(ViolationKind::duplicate_part, ploc + ".part",
                    "part '" + part.part + "' repeated within one person");
            score(part.score, ploc + ".score");
            box(part.box, ploc + ".box");
        }
    }

    void score(double s, const std::string& locus)
    {
        if (!(s >= 0.0 && s <= 1.0))
            add(ViolationKind::score_out_of_range, locus, "score " + std::to_string(s) + " outside [0,1]");
    }

    void box(const BoundingBox& b, const std::string& locus)
    {
        if (!b.well_formed())
            add(ViolationKind::inverted_box, locus, "box corners inverted (x2 < x1 or y2 < y1)");
        else if (role_ == AnnotationRole::ground_truth && b.degenerate())
            add(ViolationKind::degenerate_box, locus, "box has zero area");
    }

    void add(ViolationKind kind, std::string locus, std::string message)
    {
        out_.push_back({kind, std::move(locus), std::move(message)});
    }

    const Taxonomy& taxonomy_;
    AnnotationRole role_;
    std::vector<Violation> out_;
};

/// Indices of the k best scores, returned in ascending index order.
template <typename T>
std::vector<std::size_t> top_indices(const std::vector<T>& items, std::size_t k)
{
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (items.size() <= k)
        return order;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return items[a].score > items[b].score; });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

ValidationReport validate(const std::vector<VideoAnnotation>& videos, const Taxonomy& taxonomy,
                          AnnotationRole role)
{
    Validator v(taxonomy, role);
    std::set<std::string_view> ids;
    ValidationReport report;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const std::string locus = "videos[" + std::to_string(i) + "]";
        if (!ids.insert(videos[i].video_id).second)
            report.violations.push_back({ViolationKind::duplicate_video, locus + ".video_id",
                                         "duplicate video_id '" + videos[i].video_id + "'"});
        v.video(videos[i], locus);
    }
    for (auto& violation : v.take())
        report.violations.push_back(std::move(violation));
    return report;
}

VideoAnnotation apply_topk(const VideoAnnotation& pred, std::size_t k_person,
                           std::size_t k_part_per_class)
{
    VideoAnnotation out;
    out.video_id = pred.video_id;
    out.action = pred.action;
    out.frames.reserve(pred.frames.size());
    for (const auto& frame : pred.frames) {
        FrameAnnotation kept_frame;
        kept_frame.frame_id = frame.frame_id;
        for (std::size_t pi : top_indices(frame.persons, k_person)) {
            const auto& person = frame.persons[pi];
            PersonInstance kept = person;
            kept.parts.clear();

            // Rank each raw part class separately; survivors keep list order.
            std::vector<bool> keep(person.parts.size(), false);
            std::set<std::string_view> classes;
            for (const auto& part : person.parts)
                classes.insert(part.part);
            for (std::string_view cls : classes) {
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < person.parts.size(); ++i) {
                    if (person.parts[i].part == cls)
                        members.push_back(i);
                }
                std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
                    return person.parts[a].score > person.parts[b].score;
                });
                for (std::size_t r = 0; r < members.size() && r < k_part_per_class; ++r)
                    keep[members[r]] = true;
            }
            for (std::size_t i = 0; i < person.parts.size(); ++i) {
                if (keep[i])
                    kept.parts.push_back(person.parts[i]);
            }
            kept_frame.persons.push_back(std::move(kept));
        }
        out.frames.push_back(std::move(kept_frame));
    }
    return out;
}

}  // namespace ppk
