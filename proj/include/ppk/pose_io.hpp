#pragma once

#include "ppk/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

/// Document form: {"keypoints": [{"name", "x", "y", "confidence"} x 17]} in
/// kKeypointNames order. Names are checked against the fixed order.
PoseKeypoints parse_keypoints(std::string_view text);
PoseKeypoints load_keypoints(const std::filesystem::path& path);
std::string serialize_keypoints(const PoseKeypoints& kp);

/// Keypoints for one person of an annotation file, addressed by list position.
struct PersonPose {
    std::string video_id;
    std::uint64_t frame_id = 0;
    std::size_t person = 0;
    PoseKeypoints keypoints;

    bool operator==(const PersonPose&) const = default;
};

/// Document form: {"poses": [{"video_id", "frame_id", "person", "keypoints": [...]}]}.
std::vector<PersonPose> parse_pose_table(std::string_view text);
std::vector<PersonPose> load_pose_table(const std::filesystem::path& path);
std::string serialize_pose_table(const std::vector<PersonPose>& poses);

}  // namespace ppk
