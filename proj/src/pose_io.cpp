#include "ppk/pose_io.hpp"

#include "ppk/fsutil.hpp"

#include "json_util.hpp"

namespace ppk {

using namespace detail;

namespace {

PoseKeypoints keypoints_from_json(const json& j, const std::string& locus)
{
    expect_array(j, locus);
    if (j.size() != kNumKeypoints)
        throw SchemaError(locus, "expected exactly 17 keypoints, got " + std::to_string(j.size()));
    PoseKeypoints kp;
    for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        const std::string loc = index_locus(locus, i);
        const auto& e = expect_object(j[i], loc);
        reject_unknown(e, {"name", "x", "y", "confidence"}, loc);
        const std::string name = get_string(require(e, "name", loc), field_locus(loc, "name"));
        if (name != kKeypointNames[i])
            throw SchemaError(field_locus(loc, "name"),
                              "expected '" + std::string(kKeypointNames[i]) + "', got '" + name + "'");
        Keypoint& k = kp.points[i];
        k.x = get_number(require(e, "x", loc), field_locus(loc, "x"));
        k.y = get_number(require(e, "y", loc), field_locus(loc, "y"));
        k.confidence = get_number(require(e, "confidence", loc), field_locus(loc, "confidence"));
        if (k.confidence < 0.0 || k.confidence > 1.0)
            throw IntegrityError(field_locus(loc, "confidence"), "confidence outside [0,1]");
    }
    return kp;
}

json keypoints_to_json(const PoseKeypoints& kp)
{
    json arr = json::array();
    for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        const Keypoint& k = kp.points[i];
        arr.push_back({{"name", kKeypointNames[i]}, {"x", k.x}, {"y", k.y}, {"confidence", k.confidence}});
    }
    return arr;
}

}  // namespace

PoseKeypoints parse_keypoints(std::string_view text)
{
    const json doc = parse_json(text);
    expect_object(doc, "");
    reject_unknown(doc, {"keypoints"}, "");
    return keypoints_from_json(require(doc, "keypoints", ""), "keypoints");
}

PoseKeypoints load_keypoints(const std::filesystem::path& path)
{
    return parse_keypoints(read_file(path));
}

std::string serialize_keypoints(const PoseKeypoints& kp)
{
    return dump_canonical({{"keypoints", keypoints_to_json(kp)}});
}

std::vector<PersonPose> parse_pose_table(std::string_view text)
{
    const json doc = parse_json(text);
    expect_object(doc, "");
    reject_unknown(doc, {"poses"}, "");
    const auto& poses = expect_array(require(doc, "poses", ""), "poses");
    std::vector<PersonPose> out;
    out.reserve(poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) {
        const std::string loc = index_locus("poses", i);
        const auto& e = expect_object(poses[i], loc);
        reject_unknown(e, {"video_id", "frame_id", "person", "keypoints"}, loc);
        PersonPose p;
        p.video_id = get_string(require(e, "video_id", loc), field_locus(loc, "video_id"));
        p.frame_id = get_uint(require(e, "frame_id", loc), field_locus(loc, "frame_id"));
        p.person = static_cast<std::size_t>(get_uint(require(e, "person", loc), field_locus(loc, "person")));
        p.keypoints = keypoints_from_json(require(e, "keypoints", loc), field_locus(loc, "keypoints"));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PersonPose> load_pose_table(const std::filesystem::path& path)
{
    return parse_pose_table(read_file(path));
}

std::string serialize_pose_table(const std::vector<PersonPose>& poses)
{
    json arr = json::array();
    for (const auto& p : poses) {
        arr.push_back({{"video_id", p.video_id},
                       {"frame_id", p.frame_id},
                       {"person", p.person},
                       {"keypoints", keypoints_to_json(p.keypoints)}});
    }
    return dump_canonical({{"poses", std::move(arr)}});
}

}  // namespace ppk
