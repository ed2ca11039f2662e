#include "ppk/annotation.hpp"
#include "ppk/errors.hpp"
#include "ppk/fsutil.hpp"

#include "json_util.hpp"
#include "taxonomy_json.hpp"

namespace ppk {

namespace detail {

namespace {

std::vector<std::string> name_list(const json& j, const std::string& locus)
{
    expect_array(j, locus);
    std::vector<std::string> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_string(j[i], index_locus(locus, i)));
    return out;
}

}  // namespace

Taxonomy taxonomy_from_json(const json& j, const std::string& locus, std::string name)
{
    expect_object(j, locus);
    reject_unknown(j, {"name", "video_actions", "raw_parts", "part_groups", "group_map", "part_states"},
                   locus);
    Taxonomy t;
    t.name = std::move(name);
    if (const auto it = j.find("name"); it != j.end())
        t.name = get_string(*it, field_locus(locus, "name"));
    t.video_actions = name_list(require(j, "video_actions", locus), field_locus(locus, "video_actions"));
    t.raw_parts = name_list(require(j, "raw_parts", locus), field_locus(locus, "raw_parts"));
    t.part_groups = name_list(require(j, "part_groups", locus), field_locus(locus, "part_groups"));
    t.part_states = name_list(require(j, "part_states", locus), field_locus(locus, "part_states"));
    const std::string gloc = field_locus(locus, "group_map");
    const auto& gm = expect_object(require(j, "group_map", locus), gloc);
    for (const auto& [part, group] : gm.items())
        t.group_map[part] = get_string(group, field_locus(gloc, part));
    t.check();
    return t;
}

json taxonomy_to_json(const Taxonomy& t)
{
    json j = json::object();
    j["name"] = t.name;
    j["video_actions"] = t.video_actions;
    j["raw_parts"] = t.raw_parts;
    j["part_groups"] = t.part_groups;
    j["part_states"] = t.part_states;
    j["group_map"] = t.group_map;
    return j;
}

}  // namespace detail

using detail::json;

Taxonomy parse_taxonomy(std::string_view text, std::string name)
{
    return detail::taxonomy_from_json(detail::parse_json(text), "", std::move(name));
}

Taxonomy load_taxonomy(const std::filesystem::path& path)
{
    return parse_taxonomy(read_file(path), path.stem().string());
}

std::string serialize_taxonomy(const Taxonomy& taxonomy)
{
    return detail::dump_canonical(detail::taxonomy_to_json(taxonomy));
}

namespace {

using namespace detail;

BoundingBox box_from_json(const json& j, const std::string& locus)
{
    if (!j.is_array() || j.size() != 4)
        throw SchemaError(locus, "expected [x1, y1, x2, y2]");
    return BoundingBox{get_number(j[0], index_locus(locus, 0)), get_number(j[1], index_locus(locus, 1)),
                       get_number(j[2], index_locus(locus, 2)), get_number(j[3], index_locus(locus, 3))};
}

json box_to_json(const BoundingBox& b)
{
    return json::array({b.x1, b.y1, b.x2, b.y2});
}

double optional_score(const json& obj, const std::string& locus)
{
    const auto it = obj.find("score");
    return it == obj.end() ? 1.0 : get_number(*it, field_locus(locus, "score"));
}

PartInstance part_from_json(const json& j, const std::string& locus, const Taxonomy& taxonomy)
{
    expect_object(j, locus);
    reject_unknown(j, {"part", "box", "state", "score"}, locus);
    PartInstance p;
    p.part = get_string(require(j, "part", locus), field_locus(locus, "part"));
    if (!taxonomy.has_part(p.part))
        throw TaxonomyError(field_locus(locus, "part"), "unknown raw part '" + p.part + "'");
    p.box = box_from_json(require(j, "box", locus), field_locus(locus, "box"));
    p.state = get_string(require(j, "state", locus), field_locus(locus, "state"));
    if (!taxonomy.has_state(p.state))
        throw TaxonomyError(field_locus(locus, "state"), "unknown part state '" + p.state + "'");
    p.score = optional_score(j, locus);
    return p;
}

PersonInstance person_from_json(const json& j, const std::string& locus, const Taxonomy& taxonomy)
{
    expect_object(j, locus);
    reject_unknown(j, {"box", "score", "parts"}, locus);
    PersonInstance p;
    p.box = box_from_json(require(j, "box", locus), field_locus(locus, "box"));
    p.score = optional_score(j, locus);
    if (const auto it = j.find("parts"); it != j.end()) {
        const std::string ploc = field_locus(locus, "parts");
        expect_array(*it, ploc);
        p.parts.reserve(it->size());
        for (std::size_t i = 0; i < it->size(); ++i)
            p.parts.push_back(part_from_json((*it)[i], index_locus(ploc, i), taxonomy));
    }
    return p;
}

FrameAnnotation frame_from_json(const json& j, const std::string& locus, const Taxonomy& taxonomy)
{
    expect_object(j, locus);
    reject_unknown(j, {"frame_id", "persons"}, locus);
    FrameAnnotation f;
    f.frame_id = get_uint(require(j, "frame_id", locus), field_locus(locus, "frame_id"));
    if (const auto it = j.find("persons"); it != j.end()) {
        const std::string ploc = field_locus(locus, "persons");
        expect_array(*it, ploc);
        f.persons.reserve(it->size());
        for (std::size_t i = 0; i < it->size(); ++i)
            f.persons.push_back(person_from_json((*it)[i], index_locus(ploc, i), taxonomy));
    }
    return f;
}

VideoAnnotation video_from_json(const json& j, const std::string& locus, const Taxonomy& taxonomy)
{
    expect_object(j, locus);
    reject_unknown(j, {"video_id", "action", "frames"}, locus);
    VideoAnnotation v;
    v.video_id = get_string(require(j, "video_id", locus), field_locus(locus, "video_id"));
    v.action = get_string(require(j, "action", locus), field_locus(locus, "action"));
    if (!taxonomy.has_action(v.action))
        throw TaxonomyError(field_locus(locus, "action"), "unknown video action '" + v.action + "'");
    const std::string floc = field_locus(locus, "frames");
    const auto& frames = expect_array(require(j, "frames", locus), floc);
    v.frames.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i)
        v.frames.push_back(frame_from_json(frames[i], index_locus(floc, i), taxonomy));
    return v;
}

json video_to_json(const VideoAnnotation& v)
{
    json frames = json::array();
    for (const auto& f : v.frames) {
        json persons = json::array();
        for (const auto& p : f.persons) {
            json parts = json::array();
            for (const auto& part : p.parts) {
                parts.push_back({{"part", part.part},
                                 {"box", box_to_json(part.box)},
                                 {"state", part.state},
                                 {"score", part.score}});
            }
            persons.push_back({{"box", box_to_json(p.box)}, {"score", p.score}, {"parts", std::move(parts)}});
        }
        frames.push_back({{"frame_id", f.frame_id}, {"persons", std::move(persons)}});
    }
    return {{"video_id", v.video_id}, {"action", v.action}, {"frames", std::move(frames)}};
}

}  // namespace

AnnotationSet parse_annotation_set(std::string_view text, const Taxonomy& taxonomy)
{
    const json doc = parse_json(text);
    expect_object(doc, "");
    reject_unknown(doc, {"taxonomy_ref", "videos"}, "");
    AnnotationSet set;
    set.taxonomy_ref = get_string(require(doc, "taxonomy_ref", ""), "taxonomy_ref");
    const auto& videos = expect_array(require(doc, "videos", ""), "videos");
    set.videos.reserve(videos.size());
    for (std::size_t i = 0; i < videos.size(); ++i)
        set.videos.push_back(video_from_json(videos[i], index_locus("videos", i), taxonomy));
    return set;
}

AnnotationSet load_annotation_set(const std::filesystem::path& path, const Taxonomy& taxonomy,
                                  AnnotationRole role)
{
    AnnotationSet set = parse_annotation_set(read_file(path), taxonomy);
    const ValidationReport report = validate(set.videos, taxonomy, role);
    if (!report.ok()) {
        const Violation& first = report.violations.front();
        throw IntegrityError(first.locus, first.message);
    }
    return set;
}

std::vector<VideoAnnotation> load_annotations(const std::filesystem::path& path,
                                              const Taxonomy& taxonomy, AnnotationRole role)
{
    return load_annotation_set(path, taxonomy, role).videos;
}

std::string serialize_annotation_set(const AnnotationSet& set)
{
    json videos = json::array();
    for (const auto& v : set.videos)
        videos.push_back(video_to_json(v));
    return dump_canonical({{"taxonomy_ref", set.taxonomy_ref}, {"videos", std::move(videos)}});
}

void save_annotation_set(const std::filesystem::path& path, const AnnotationSet& set)
{
    write_file_atomic(path, serialize_annotation_set(set));
}

}  // namespace ppk
