#include "ppk/scorer.hpp"

#include "ppk/errors.hpp"
#include "ppk/geometry.hpp"
#include "ppk/parallel.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ppk {

void ScoringConfig::check() const
{
    if (!(human_iou_thresh > 0.0 && human_iou_thresh <= 1.0))
        throw ConfigError("scoring.human_iou_thresh", "must lie in (0, 1]");
    if (!(part_iou_thresh > 0.0 && part_iou_thresh <= 1.0))
        throw ConfigError("scoring.part_iou_thresh", "must lie in (0, 1]");
    if (k_person < 1)
        throw ConfigError("scoring.k_person", "must be >= 1");
    if (k_part_per_class < 1)
        throw ConfigError("scoring.k_part_per_class", "must be >= 1");
}

namespace {

void score_person_pair(const PersonInstance& gt, const PersonInstance& pred, const ScoringConfig& cfg,
                       VideoScore& out)
{
    std::set<std::string_view> classes;
    for (const auto& p : gt.parts)
        classes.insert(p.part);
    for (std::string_view cls : classes) {
        std::vector<const PartInstance*> gt_parts;
        std::vector<BoundingBox> gt_boxes;
        for (const auto& p : gt.parts) {
            if (p.part == cls) {
                gt_parts.push_back(&p);
                gt_boxes.push_back(p.box);
            }
        }
        std::vector<const PartInstance*> pred_parts;
        std::vector<ScoredBox> pred_boxes;
        for (const auto& p : pred.parts) {
            if (p.part == cls) {
                pred_parts.push_back(&p);
                pred_boxes.push_back({p.box, p.score});
            }
        }
        PartTally& tally = out.per_part[std::string(cls)];
        for (const auto& pair : greedy_match(pred_boxes, gt_boxes, cfg.part_iou_thresh).pairs) {
            ++tally.matched;
            if (pred_parts[pair.pred]->state == gt_parts[pair.gt]->state)
                ++tally.correct;
        }
    }
}

}  // namespace

double video_part_accuracy(const VideoScore& v, const ScoringConfig& cfg)
{
    if (!cfg.per_part_macro) {
        if (v.total_gt_parts == 0)
            return 1.0;
        return static_cast<double>(v.correct_parts) / static_cast<double>(v.total_gt_parts);
    }
    double sum = 0.0;
    std::size_t classes = 0;
    for (const auto& [part, tally] : v.per_part) {
        if (tally.total == 0)
            continue;
        sum += static_cast<double>(tally.correct) / static_cast<double>(tally.total);
        ++classes;
    }
    return classes == 0 ? 1.0 : sum / static_cast<double>(classes);
}

VideoScore score_video(const VideoAnnotation& gt, const VideoAnnotation& pred_in, const ScoringConfig& cfg)
{
    if (gt.video_id != pred_in.video_id)
        throw IdMismatchError("ground truth '" + gt.video_id + "' scored against prediction '" +
                              pred_in.video_id + "'");
    const VideoAnnotation pred = apply_topk(pred_in, cfg.k_person, cfg.k_part_per_class);

    std::map<std::uint64_t, const FrameAnnotation*> pred_frames;
    for (const auto& f : pred.frames)
        pred_frames.emplace(f.frame_id, &f);

    VideoScore out;
    out.video_id = gt.video_id;
    out.video_correct = pred.action == gt.action;

    for (const auto& gt_frame : gt.frames) {
        for (const auto& person : gt_frame.persons) {
            for (const auto& part : person.parts)
                ++out.per_part[part.part].total;
        }
        const auto it = pred_frames.find(gt_frame.frame_id);
        if (it == pred_frames.end())
            continue;
        const FrameAnnotation& pred_frame = *it->second;

        std::vector<ScoredBox> pred_boxes;
        pred_boxes.reserve(pred_frame.persons.size());
        for (const auto& p : pred_frame.persons)
            pred_boxes.push_back({p.box, p.score});
        std::vector<BoundingBox> gt_boxes;
        gt_boxes.reserve(gt_frame.persons.size());
        for (const auto& p : gt_frame.persons)
            gt_boxes.push_back(p.box);

        for (const auto& pair : greedy_match(pred_boxes, gt_boxes, cfg.human_iou_thresh).pairs)
            score_person_pair(gt_frame.persons[pair.gt], pred_frame.persons[pair.pred], cfg, out);
    }

    for (const auto& [part, tally] : out.per_part) {
        out.correct_parts += tally.correct;
        out.matched_parts += tally.matched;
        out.total_gt_parts += tally.total;
    }
    out.part_state_accuracy = video_part_accuracy(out, cfg);
    return out;
}

ScoreReport score_dataset(const std::vector<VideoAnnotation>& gts, const std::vector<VideoAnnotation>& preds,
                          const ScoringConfig& cfg, std::size_t jobs)
{
    cfg.check();
    std::map<std::string_view, const VideoAnnotation*> pred_by_id;
    for (const auto& p : preds) {
        if (!pred_by_id.emplace(p.video_id, &p).second)
            throw MissingVideoError("prediction for video '" + p.video_id + "' appears twice");
    }
    std::map<std::string_view, const VideoAnnotation*> gt_by_id;
    for (const auto& g : gts) {
        if (!gt_by_id.emplace(g.video_id, &g).second)
            throw MissingVideoError("ground truth for video '" + g.video_id + "' appears twice");
        if (!pred_by_id.contains(g.video_id))
            throw MissingVideoError("no prediction for video '" + g.video_id + "'");
    }
    for (const auto& [id, p] : pred_by_id) {
        if (!gt_by_id.contains(id))
            throw MissingVideoError("prediction for unknown video '" + std::string(id) + "'");
    }

    std::vector<std::pair<const VideoAnnotation*, const VideoAnnotation*>> work;
    work.reserve(gt_by_id.size());
    for (const auto& [id, g] : gt_by_id)
        work.emplace_back(g, pred_by_id.at(id));

    ScoreReport report;
    report.config = cfg;
    report.per_video.resize(work.size());
    parallel_for(work.size(), jobs,
                 [&](std::size_t i) { report.per_video[i] = score_video(*work[i].first, *work[i].second, cfg); });

    if (report.per_video.empty())
        return report;
    double correct = 0.0;
    double gated = 0.0;
    for (const auto& v : report.per_video) {
        if (v.video_correct) {
            correct += 1.0;
            gated += v.part_state_accuracy;
        }
    }
    const auto n = static_cast<double>(report.per_video.size());
    report.video_accuracy = correct / n;
    report.final_score = gated / n;
    return report;
}

std::string serialize_score_report(const ScoreReport& report)
{
    using detail::json;
    json per_video = json::object();
    for (const auto& v : report.per_video) {
        json parts = json::object();
        for (const auto& [part, t] : v.per_part)
            parts[part] = {{"correct", t.correct}, {"matched", t.matched}, {"total", t.total}};
        per_video[v.video_id] = {{"video_correct", v.video_correct},
                                 {"part_state_accuracy", v.part_state_accuracy},
                                 {"correct_parts", v.correct_parts},
                                 {"matched_parts", v.matched_parts},
                                 {"total_gt_parts", v.total_gt_parts},
                                 {"per_part", std::move(parts)}};
    }
    const ScoringConfig& c = report.config;
    json doc = {{"config",
                 {{"human_iou_thresh", c.human_iou_thresh},
                  {"part_iou_thresh", c.part_iou_thresh},
                  {"k_person", c.k_person},
                  {"k_part_per_class", c.k_part_per_class},
                  {"per_part_macro", c.per_part_macro}}},
                {"num_videos", report.per_video.size()},
                {"video_accuracy", report.video_accuracy},
                {"final_score", report.final_score},
                {"per_video", std::move(per_video)}};
    return detail::dump_canonical(doc);
}

}  // namespace ppk
