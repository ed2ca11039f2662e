#include "ppk/geometry.hpp"

#include <algorithm>
#include <tuple>

namespace ppk {

double iou(const BoundingBox& a, const BoundingBox& b)
{
    if (a.degenerate() || b.degenerate())
        return 0.0;
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iw <= 0.0 || ih <= 0.0)
        return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0)
        return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

IouMatrix iou_matrix(std::span<const ScoredBox> preds, std::span<const BoundingBox> gts)
{
    IouMatrix m;
    m.rows = preds.size();
    m.cols = gts.size();
    m.values.resize(m.rows * m.cols);
    for (std::size_t p = 0; p < m.rows; ++p) {
        for (std::size_t g = 0; g < m.cols; ++g)
            m.values[p * m.cols + g] = iou(preds[p].box, gts[g]);
    }
    return m;
}

MatchResult greedy_assign(const IouMatrix& overlaps, std::span<const double> pred_scores, double thresh)
{
    struct Candidate {
        double iou;
        double score;
        std::size_t pred;
        std::size_t gt;
    };
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < overlaps.rows; ++p) {
        for (std::size_t g = 0; g < overlaps.cols; ++g) {
            const double v = overlaps.at(p, g);
            if (v >= thresh && v > 0.0)
                candidates.push_back({v, pred_scores[p], p, g});
        }
    }
    // Sorting once is equivalent to re-selecting the best live pair each round:
    // retiring a pair never reorders the survivors.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tuple(-a.iou, -a.score, a.pred, a.gt) < std::tuple(-b.iou, -b.score, b.pred, b.gt);
    });

    MatchResult r;
    std::vector<bool> pred_used(overlaps.rows, false);
    std::vector<bool> gt_used(overlaps.cols, false);
    for (const auto& c : candidates) {
        if (pred_used[c.pred] || gt_used[c.gt])
            continue;
        pred_used[c.pred] = true;
        gt_used[c.gt] = true;
        r.pairs.push_back({c.pred, c.gt, c.iou});
    }
    for (std::size_t p = 0; p < overlaps.rows; ++p) {
        if (!pred_used[p])
            r.unmatched_pred.push_back(p);
    }
    for (std::size_t g = 0; g < overlaps.cols; ++g) {
        if (!gt_used[g])
            r.unmatched_gt.push_back(g);
    }
    return r;
}

MatchResult greedy_match(std::span<const ScoredBox> preds, std::span<const BoundingBox> gts, double thresh)
{
    std::vector<double> scores;
    scores.reserve(preds.size());
    for (const auto& p : preds)
        scores.push_back(p.score);
    return greedy_assign(iou_matrix(preds, gts), scores, thresh);
}

BoundingBox refine_person_box(const BoundingBox& box, const PoseKeypoints& kp, double conf_thresh,
                              const std::optional<BoundingBox>& image_bounds)
{
    BoundingBox out = box;
    for (const auto& k : kp.points) {
        if (!(k.confidence >= conf_thresh))
            continue;
        out.x1 = std::min(out.x1, k.x);
        out.y1 = std::min(out.y1, k.y);
        out.x2 = std::max(out.x2, k.x);
        out.y2 = std::max(out.y2, k.y);
    }
    if (image_bounds) {
        out.x1 = std::clamp(out.x1, image_bounds->x1, image_bounds->x2);
        out.y1 = std::clamp(out.y1, image_bounds->y1, image_bounds->y2);
        out.x2 = std::clamp(out.x2, image_bounds->x1, image_bounds->x2);
        out.y2 = std::clamp(out.y2, image_bounds->y1, image_bounds->y2);
    }
    return out;
}

}  // namespace ppk
