#include "ppk/ensemble.hpp"

#include "ppk/errors.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ppk {

void ScoreVector::check() const
{
    if (class_names.size() != scores.size())
        throw ClassMismatchError("score vector has " + std::to_string(class_names.size()) + " classes but " +
                                 std::to_string(scores.size()) + " scores");
    for (double s : scores) {
        if (!std::isfinite(s))
            throw ClassMismatchError("score vector contains a non-finite score");
    }
}

void FusionSpec::check() const
{
    if (model_ids.empty())
        throw ConfigError("fusion", "no models listed");
    if (model_ids.size() != weights.size())
        throw ConfigError("fusion", "model and weight counts differ");
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < model_ids.size(); ++i) {
        if (!seen.insert(model_ids[i]).second)
            throw ConfigError("fusion", "duplicate model '" + model_ids[i] + "'");
        if (!(std::isfinite(weights[i]) && weights[i] > 0.0))
            throw ConfigError("fusion", "weight of '" + model_ids[i] + "' must be finite and > 0");
    }
}

FusionSpec uniform_fusion(std::vector<std::string> model_ids)
{
    FusionSpec spec;
    spec.weights.assign(model_ids.size(), 1.0);
    spec.model_ids = std::move(model_ids);
    return spec;
}

ScoreVector fuse(const ModelScores& vectors, const FusionSpec& spec)
{
    spec.check();
    std::vector<std::size_t> order(spec.model_ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return spec.model_ids[a] < spec.model_ids[b]; });

    const ScoreVector* reference = nullptr;
    for (const auto& id : spec.model_ids) {
        const auto it = vectors.find(id);
        if (it == vectors.end())
            throw MissingModelError("no scores for model '" + id + "'");
        it->second.check();
        if (reference == nullptr)
            reference = &it->second;
        else if (it->second.class_names != reference->class_names)
            throw ClassMismatchError("model '" + id + "' lists classes in a different order");
    }

    ScoreVector fused;
    fused.class_names = reference->class_names;
    fused.scores.assign(fused.class_names.size(), 0.0);
    for (std::size_t m : order) {
        const ScoreVector& v = vectors.find(spec.model_ids[m])->second;
        const double w = spec.weights[m];
        for (std::size_t c = 0; c < fused.scores.size(); ++c)
            fused.scores[c] += w * v.scores[c];
    }
    return fused;
}

std::size_t argmax(const ScoreVector& v)
{
    if (v.scores.empty())
        throw ClassMismatchError("cannot decide on an empty score vector");
    std::size_t best = 0;
    for (std::size_t c = 1; c < v.scores.size(); ++c) {
        if (v.scores[c] > v.scores[best])
            best = c;
    }
    return best;
}

const std::string& decide(const ScoreVector& v)
{
    v.check();
    return v.class_names[argmax(v)];
}

std::map<std::string, std::string> fuse_part_models(const std::map<std::string, ModelScores>& per_group_vectors,
                                                    const std::map<std::string, FusionSpec>& per_group_specs)
{
    std::map<std::string, std::string> out;
    for (const auto& [group, spec] : per_group_specs) {
        const auto it = per_group_vectors.find(group);
        if (it == per_group_vectors.end())
            throw MissingModelError("no score vectors for group '" + group + "'");
        out[group] = decide(fuse(it->second, spec));
    }
    return out;
}

using namespace detail;

ScoreTable parse_score_table(std::string_view text)
{
    const json doc = parse_json(text);
    expect_object(doc, "");
    reject_unknown(doc, {"records"}, "");
    const auto& records = expect_array(require(doc, "records", ""), "records");
    ScoreTable table;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string loc = index_locus("records", i);
        const auto& r = expect_object(records[i], loc);
        reject_unknown(r, {"video_id", "model_id", "head", "classes", "scores"}, loc);
        const std::string video_id = get_string(require(r, "video_id", loc), field_locus(loc, "video_id"));
        const std::string model_id = get_string(require(r, "model_id", loc), field_locus(loc, "model_id"));
        const std::string head = get_string(require(r, "head", loc), field_locus(loc, "head"));
        ScoreVector v;
        const std::string cloc = field_locus(loc, "classes");
        const auto& classes = expect_array(require(r, "classes", loc), cloc);
        for (std::size_t c = 0; c < classes.size(); ++c)
            v.class_names.push_back(get_string(classes[c], index_locus(cloc, c)));
        const std::string sloc = field_locus(loc, "scores");
        const auto& scores = expect_array(require(r, "scores", loc), sloc);
        for (std::size_t c = 0; c < scores.size(); ++c)
            v.scores.push_back(get_number(scores[c], index_locus(sloc, c)));
        if (v.class_names.size() != v.scores.size())
            throw SchemaError(loc, "classes and scores differ in length");
        auto [it, inserted] = table[video_id][head].emplace(model_id, std::move(v));
        if (!inserted)
            throw IntegrityError(loc, "duplicate record for (" + video_id + ", " + model_id + ", " + head + ")");
    }
    return table;
}

std::string serialize_score_table(const ScoreTable& table)
{
    json records = json::array();
    for (const auto& [video_id, heads] : table) {
        for (const auto& [head, models] : heads) {
            for (const auto& [model_id, v] : models) {
                records.push_back({{"video_id", video_id},
                                   {"model_id", model_id},
                                   {"head", head},
                                   {"classes", v.class_names},
                                   {"scores", v.scores}});
            }
        }
    }
    return dump_canonical({{"records", std::move(records)}});
}

std::map<std::string, FusionSpec> parse_fusion_weights(std::string_view text)
{
    const json doc = parse_json(text);
    expect_object(doc, "");
    std::map<std::string, FusionSpec> specs;
    for (const auto& [head, entries] : doc.items()) {
        const std::string hloc = field_locus("", head);
        expect_array(entries, hloc);
        FusionSpec spec;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string loc = index_locus(hloc, i);
            const auto& e = expect_object(entries[i], loc);
            reject_unknown(e, {"model", "weight"}, loc);
            spec.model_ids.push_back(get_string(require(e, "model", loc), field_locus(loc, "model")));
            spec.weights.push_back(get_number(require(e, "weight", loc), field_locus(loc, "weight")));
        }
        try {
            spec.check();
        } catch (const ConfigError& e) {
            throw IntegrityError(hloc, e.what());
        }
        specs.emplace(head, std::move(spec));
    }
    return specs;
}

std::string serialize_fusion_weights(const std::map<std::string, FusionSpec>& specs)
{
    json doc = json::object();
    for (const auto& [head, spec] : specs) {
        json entries = json::array();
        for (std::size_t i = 0; i < spec.model_ids.size(); ++i)
            entries.push_back({{"model", spec.model_ids[i]}, {"weight", spec.weights[i]}});
        doc[head] = std::move(entries);
    }
    return dump_canonical(doc);
}

std::vector<FusedDecision> fuse_table(const ScoreTable& table, const std::map<std::string, FusionSpec>& specs)
{
    std::vector<FusedDecision> out;
    for (const auto& [video_id, heads] : table) {
        for (const auto& [head, models] : heads) {
            FusionSpec spec;
            if (const auto it = specs.find(head); it != specs.end()) {
                spec = it->second;
            } else {
                std::vector<std::string> ids;
                for (const auto& [model_id, v] : models)
                    ids.push_back(model_id);
                spec = uniform_fusion(std::move(ids));
            }
            const ScoreVector fused = fuse(models, spec);
            const std::size_t best = argmax(fused);
            out.push_back({video_id, head, fused.class_names[best], fused.scores[best]});
        }
    }
    return out;
}

std::string serialize_decisions(const std::vector<FusedDecision>& decisions)
{
    json records = json::array();
    for (const auto& d : decisions)
        records.push_back({{"video_id", d.video_id}, {"head", d.head}, {"label", d.label}, {"score", d.score}});
    return dump_canonical({{"decisions", std::move(records)}});
}

}  // namespace ppk
