#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

inline constexpr std::string_view kNoneState = "none";

/// Name sets for video actions, body parts, part groups and part states.
///
/// Every raw part belongs to exactly one group; the group is the unit of a
/// part-level video label. All lookups go through the index helpers so that
/// taxonomy order (used for tie-breaking) stays authoritative.
struct Taxonomy {
    std::string name = "default";
    std::vector<std::string> video_actions;
    std::vector<std::string> raw_parts;
    std::vector<std::string> part_groups;
    std::map<std::string, std::string> group_map;  // raw part -> group
    std::vector<std::string> part_states;

    std::optional<std::size_t> action_index(std::string_view action) const;
    std::optional<std::size_t> part_index(std::string_view part) const;
    std::optional<std::size_t> group_index(std::string_view group) const;
    std::optional<std::size_t> state_index(std::string_view state) const;

    bool has_action(std::string_view a) const { return action_index(a).has_value(); }
    bool has_part(std::string_view p) const { return part_index(p).has_value(); }
    bool has_state(std::string_view s) const { return state_index(s).has_value(); }

    /// Group of a raw part. Throws TaxonomyError for unknown parts.
    const std::string& group_of(std::string_view part) const;
    /// Index into part_groups of the group owning `part`.
    std::size_t group_index_of(std::string_view part) const;

    /// Throws TaxonomyError when an invariant fails.
    void check() const;

    bool operator==(const Taxonomy&) const = default;
};

/// 24 actions, 10 raw parts, 6 groups (Head, Hand, Arm, Hip, Leg, Foot), 74 part states.
const Taxonomy& default_taxonomy();

/// Reads a taxonomy document; the taxonomy is named after the file stem.
Taxonomy load_taxonomy(const std::filesystem::path& path);
Taxonomy parse_taxonomy(std::string_view text, std::string name);
std::string serialize_taxonomy(const Taxonomy& taxonomy);

}  // namespace ppk
