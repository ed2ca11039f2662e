#include "ppk/labels.hpp"

#include "ppk/errors.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace ppk {

PartLevelLabel parse_label_string(std::string_view label, const Taxonomy& taxonomy)
{
    for (const auto& group : taxonomy.part_groups) {
        const std::string needle = "_" + group + "_";
        for (std::size_t pos = label.find(needle); pos != std::string_view::npos;
             pos = label.find(needle, pos + 1)) {
            const std::string_view action = label.substr(0, pos);
            const std::string_view state = label.substr(pos + needle.size());
            if (taxonomy.has_action(action) && taxonomy.has_state(state))
                return {std::string(action), group, std::string(state)};
        }
    }
    throw TaxonomyError("label", "cannot resolve '" + std::string(label) + "' against the taxonomy");
}

void StateHistogram::merge(const StateHistogram& other)
{
    if (counts_.size() < other.counts_.size())
        counts_.resize(other.counts_.size(), 0);
    for (std::size_t i = 0; i < other.counts_.size(); ++i)
        counts_[i] += other.counts_[i];
    total_ += other.total_;
}

std::size_t StateHistogram::modal(std::size_t fallback) const
{
    if (total_ == 0)
        return fallback;
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts_.size(); ++i) {
        if (counts_[i] > counts_[best])
            best = i;
    }
    return best;
}

std::vector<StateHistogram> group_histograms(const VideoAnnotation& video, const Taxonomy& taxonomy)
{
    std::vector<StateHistogram> hist(taxonomy.part_groups.size(), StateHistogram(taxonomy.part_states.size()));
    for (const auto& frame : video.frames) {
        for (const auto& person : frame.persons) {
            for (const auto& part : person.parts) {
                const auto state = taxonomy.state_index(part.state);
                if (!state)
                    throw TaxonomyError("state", "unknown part state '" + part.state + "'");
                hist[taxonomy.group_index_of(part.part)].add(*state);
            }
        }
    }
    return hist;
}

std::vector<PartLevelLabel> derive_video_labels(const VideoAnnotation& video, const Taxonomy& taxonomy)
{
    const std::size_t none = *taxonomy.state_index(kNoneState);
    const auto hist = group_histograms(video, taxonomy);
    std::vector<PartLevelLabel> labels;
    labels.reserve(taxonomy.part_groups.size());
    for (std::size_t g = 0; g < taxonomy.part_groups.size(); ++g)
        labels.push_back({video.action, taxonomy.part_groups[g], taxonomy.part_states[hist[g].modal(none)]});
    return labels;
}

const LongTailRow* LongTailReport::find(std::string_view action, std::string_view group) const
{
    for (const auto& row : rows) {
        if (row.video_action == action && row.group == group)
            return &row;
    }
    return nullptr;
}

LongTailReport long_tail_report(const std::vector<VideoAnnotation>& videos, const Taxonomy& taxonomy)
{
    const std::size_t num_actions = taxonomy.video_actions.size();
    const std::size_t num_groups = taxonomy.part_groups.size();
    const std::size_t none = *taxonomy.state_index(kNoneState);

    std::vector<bool> present(num_actions, false);
    std::vector<StateHistogram> pooled(num_actions * num_groups, StateHistogram(taxonomy.part_states.size()));
    for (const auto& video : videos) {
        const auto a = taxonomy.action_index(video.action);
        if (!a)
            throw TaxonomyError("action", "unknown video action '" + video.action + "'");
        present[*a] = true;
        const auto hist = group_histograms(video, taxonomy);
        for (std::size_t g = 0; g < num_groups; ++g)
            pooled[*a * num_groups + g].merge(hist[g]);
    }

    LongTailReport report;
    for (std::size_t a = 0; a < num_actions; ++a) {
        if (!present[a])
            continue;
        for (std::size_t g = 0; g < num_groups; ++g) {
            const StateHistogram& h = pooled[a * num_groups + g];
            const std::size_t modal = h.modal(none);
            LongTailRow row;
            row.video_action = taxonomy.video_actions[a];
            row.group = taxonomy.part_groups[g];
            row.modal_state = taxonomy.part_states[modal];
            row.total = h.total();
            row.modal_count = h.count(modal);
            row.share = row.total == 0 ? 1.0 : static_cast<double>(row.modal_count) / static_cast<double>(row.total);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

namespace {

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string format_long_tail(const LongTailReport& report, char d)
{
    std::string out;
    out += "video_action";
    out += d;
    out += "group";
    out += d;
    out += "modal_state";
    out += d;
    out += "modal_count";
    out += d;
    out += "total";
    out += d;
    out += "share\n";
    for (const auto& r : report.rows) {
        out += r.video_action + d + r.group + d + r.modal_state + d + std::to_string(r.modal_count) + d +
               std::to_string(r.total) + d + shortest(r.share) + "\n";
    }
    return out;
}

BaselineModel::BaselineModel(const std::vector<VideoAnnotation>& train, const Taxonomy& taxonomy)
    : taxonomy_(&taxonomy)
{
    const std::size_t num_groups = taxonomy.part_groups.size();
    const std::size_t none = *taxonomy.state_index(kNoneState);
    std::map<std::string, std::vector<StateHistogram>, std::less<>> by_action;
    std::vector<StateHistogram> global(num_groups, StateHistogram(taxonomy.part_states.size()));
    for (const auto& video : train) {
        auto [it, inserted] = by_action.try_emplace(video.action);
        if (inserted)
            it->second.assign(num_groups, StateHistogram(taxonomy.part_states.size()));
        const auto hist = group_histograms(video, taxonomy);
        for (std::size_t g = 0; g < num_groups; ++g) {
            it->second[g].merge(hist[g]);
            global[g].merge(hist[g]);
        }
    }
    for (std::size_t g = 0; g < num_groups; ++g)
        per_group_.push_back(taxonomy.part_states[global[g].modal(none)]);
    for (const auto& [action, hists] : by_action) {
        for (std::size_t g = 0; g < num_groups; ++g) {
            if (hists[g].total() > 0)
                per_action_[{action, taxonomy.part_groups[g]}] = taxonomy.part_states[hists[g].modal(none)];
        }
    }
}

const std::string& BaselineModel::state_for(std::string_view action, std::string_view group) const
{
    const auto it = per_action_.find(std::pair<std::string, std::string>(action, group));
    if (it != per_action_.end())
        return it->second;
    const auto g = taxonomy_->group_index(group);
    if (!g)
        throw TaxonomyError("group", "unknown part group '" + std::string(group) + "'");
    return per_group_[*g];
}

VideoAnnotation BaselineModel::predict(const VideoAnnotation& target) const
{
    VideoAnnotation out = target;
    for (auto& frame : out.frames) {
        for (auto& person : frame.persons) {
            for (auto& part : person.parts)
                part.state = state_for(out.action, taxonomy_->group_of(part.part));
        }
    }
    return out;
}

VideoAnnotation baseline_predict(const std::vector<VideoAnnotation>& gt_train, const VideoAnnotation& target,
                                 const Taxonomy& taxonomy)
{
    return BaselineModel(gt_train, taxonomy).predict(target);
}

VideoAnnotation invert_labels(const std::vector<PartLevelLabel>& labels, const VideoAnnotation& target,
                              const Taxonomy& taxonomy)
{
    std::map<std::string_view, std::string_view> state_by_group;
    for (const auto& l : labels)
        state_by_group.emplace(l.group, l.state);

    VideoAnnotation out = target;
    for (auto& frame : out.frames) {
        for (auto& person : frame.persons) {
            for (auto& part : person.parts) {
                const std::string& group = taxonomy.group_of(part.part);
                const auto it = state_by_group.find(group);
                if (it == state_by_group.end())
                    throw MissingGroupError("video '" + target.video_id + "' has no label for group '" + group + "'");
                part.state = std::string(it->second);
            }
        }
    }
    return out;
}

using detail::json;

std::string serialize_video_labels(const std::vector<VideoLabels>& videos)
{
    std::vector<const VideoLabels*> order;
    for (const auto& v : videos)
        order.push_back(&v);
    std::stable_sort(order.begin(), order.end(),
                     [](const VideoLabels* a, const VideoLabels* b) { return a->video_id < b->video_id; });
    json records = json::array();
    for (const VideoLabels* v : order) {
        for (const auto& l : v->labels) {
            records.push_back({{"video_id", v->video_id},
                               {"video_action", l.video_action},
                               {"group", l.group},
                               {"state", l.state},
                               {"label", l.label_string()}});
        }
    }
    return detail::dump_canonical({{"labels", std::move(records)}});
}

std::vector<VideoLabels> parse_video_labels(std::string_view text, const Taxonomy& taxonomy)
{
    using namespace detail;
    const json doc = parse_json(text);
    expect_object(doc, "");
    reject_unknown(doc, {"labels"}, "");
    const auto& records = expect_array(require(doc, "labels", ""), "labels");
    std::vector<VideoLabels> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string loc = index_locus("labels", i);
        const auto& r = expect_object(records[i], loc);
        reject_unknown(r, {"video_id", "video_action", "group", "state", "label"}, loc);
        const std::string video_id = get_string(require(r, "video_id", loc), field_locus(loc, "video_id"));
        PartLevelLabel l{get_string(require(r, "video_action", loc), field_locus(loc, "video_action")),
                         get_string(require(r, "group", loc), field_locus(loc, "group")),
                         get_string(require(r, "state", loc), field_locus(loc, "state"))};
        if (!taxonomy.has_action(l.video_action))
            throw TaxonomyError(field_locus(loc, "video_action"), "unknown video action '" + l.video_action + "'");
        if (!taxonomy.group_index(l.group))
            throw TaxonomyError(field_locus(loc, "group"), "unknown part group '" + l.group + "'");
        if (!taxonomy.has_state(l.state))
            throw TaxonomyError(field_locus(loc, "state"), "unknown part state '" + l.state + "'");
        if (const auto it = r.find("label"); it != r.end()) {
            if (get_string(*it, field_locus(loc, "label")) != l.label_string())
                throw IntegrityError(field_locus(loc, "label"), "label does not match its fields");
        }
        if (out.empty() || out.back().video_id != video_id)
            out.push_back({video_id, {}});
        out.back().labels.push_back(std::move(l));
    }
    return out;
}

}  // namespace ppk
