#include "ppk/taxonomy.hpp"

#include "ppk/errors.hpp"

#include <algorithm>
#include <set>

namespace ppk {

namespace {

std::optional<std::size_t> find_index(const std::vector<std::string>& names, std::string_view n)
{
    const auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

void check_unique(const std::vector<std::string>& names, const char* field)
{
    std::set<std::string_view> seen;
    for (const auto& n : names) {
        if (n.empty())
            throw TaxonomyError(field, "empty name");
        if (!seen.insert(n).second)
            throw TaxonomyError(field, "duplicate name '" + n + "'");
    }
}

Taxonomy build_default()
{
    Taxonomy t;
    t.name = "default";
    t.video_actions = {
        "belly_dancing",       "capoeira",         "clean_and_jerk", "deadlifting",
        "dribbling_basketball", "dunking_basketball", "front_raises", "golf_driving",
        "high_kick",           "hurdling",         "javelin_throw",  "jumping_jacks",
        "long_jump",           "lunge",            "playing_tennis", "pull_ups",
        "push_up",             "shooting_basketball", "situp",       "skipping_rope",
        "squat",               "tai_chi",          "throwing_discus", "triple_jump",
    };
    t.raw_parts = {
        "head",     "left_hand", "right_hand", "left_arm",  "right_arm",
        "hip",      "left_leg",  "right_leg",  "left_foot", "right_foot",
    };
    t.part_groups = {"Head", "Hand", "Arm", "Hip", "Leg", "Foot"};
    t.group_map = {
        {"head", "Head"},     {"left_hand", "Hand"}, {"right_hand", "Hand"},
        {"left_arm", "Arm"},  {"right_arm", "Arm"},  {"hip", "Hip"},
        {"left_leg", "Leg"},  {"right_leg", "Leg"},  {"left_foot", "Foot"},
        {"right_foot", "Foot"},
    };
    t.part_states = {
        "none",    "bend",    "bounce",  "bow",     "carry",   "catch",   "clap",
        "close",   "cross",   "crouch",  "dribble", "drop",    "extend",  "flex",
        "fold",    "grab",    "grip",    "hang",    "hit",     "hold",    "hop",
        "jump",    "kick",    "kneel",   "land",    "lean",    "lift",    "lower",
        "lunge",   "nod",     "open",    "paddle",  "point",   "pull",    "punch",
        "push",    "raise",   "reach",   "rest",    "rock",    "roll",    "rotate",
        "run",     "shake",   "shoot",   "shrug",   "sit",     "skip",    "slide",
        "spin",    "split",   "squat",   "stamp",   "stand",   "step",    "stretch",
        "swing",   "tap",     "throw",   "tilt",    "toss",    "touch",   "turn",
        "twist",   "walk",    "wave",    "wiggle",  "wrap",    "lock",    "press",
        "pump",    "shuffle", "sway",    "thrust",
    };
    return t;
}

}  // namespace

std::optional<std::size_t> Taxonomy::action_index(std::string_view a) const
{
    return find_index(video_actions, a);
}

std::optional<std::size_t> Taxonomy::part_index(std::string_view p) const
{
    return find_index(raw_parts, p);
}

std::optional<std::size_t> Taxonomy::group_index(std::string_view g) const
{
    return find_index(part_groups, g);
}

std::optional<std::size_t> Taxonomy::state_index(std::string_view s) const
{
    return find_index(part_states, s);
}

const std::string& Taxonomy::group_of(std::string_view part) const
{
    const auto it = group_map.find(std::string(part));
    if (it == group_map.end())
        throw TaxonomyError("part", "unknown raw part '" + std::string(part) + "'");
    return it->second;
}

std::size_t Taxonomy::group_index_of(std::string_view part) const
{
    return *group_index(group_of(part));
}

void Taxonomy::check() const
{
    check_unique(video_actions, "video_actions");
    check_unique(raw_parts, "raw_parts");
    check_unique(part_groups, "part_groups");
    check_unique(part_states, "part_states");
    if (!has_state(kNoneState))
        throw TaxonomyError("part_states", "must contain \"none\"");
    if (video_actions.empty())
        throw TaxonomyError("video_actions", "must not be empty");
    if (raw_parts.empty())
        throw TaxonomyError("raw_parts", "must not be empty");

    std::vector<int> members(part_groups.size(), 0);
    for (const auto& part : raw_parts) {
        const auto it = group_map.find(part);
        if (it == group_map.end())
            throw TaxonomyError("group_map", "raw part '" + part + "' has no group");
        const auto g = group_index(it->second);
        if (!g)
            throw TaxonomyError("group_map", "unknown group '" + it->second + "'");
        ++members[*g];
    }
    for (const auto& [part, group] : group_map) {
        if (!has_part(part))
            throw TaxonomyError("group_map", "unknown raw part '" + part + "'");
    }
    for (std::size_t g = 0; g < part_groups.size(); ++g) {
        if (members[g] == 0)
            throw TaxonomyError("part_groups", "group '" + part_groups[g] + "' has no raw part");
    }
}

const Taxonomy& default_taxonomy()
{
    static const Taxonomy t = build_default();
    return t;
}

}  // namespace ppk
