#pragma once

#include "ppk/ensemble.hpp"
#include "ppk/render.hpp"
#include "ppk/scorer.hpp"
#include "ppk/taxonomy.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

inline constexpr std::string_view kVideoHead = "video";
inline constexpr const char* kConfigEnvVar = "PPK_CONFIG";

/// Every tunable of the toolkit in one place.
///
/// Defaults: person IoU 0.5, part IoU 0.3, top-10 persons, top-1 part per class,
/// keypoint confidence 0.3, the built-in taxonomy and palette, and uniform fusion
/// weights for any head without an explicit spec.
struct PipelineConfig {
    Taxonomy taxonomy = default_taxonomy();
    ScoringConfig scoring;
    RenderStyle render = default_render_style();
    std::map<std::string, FusionSpec> fusion;  // head ("video" or a part group) -> spec
    double conf_thresh_keypoints = 0.3;

    /// Configured spec for `head`, else weight 1.0 for each of `available_models`.
    FusionSpec fusion_for(std::string_view head, const std::vector<std::string>& available_models) const;

    /// Throws ConfigError with a field locus.
    void check() const;

    bool operator==(const PipelineConfig&) const = default;
};

/// Parses a config document. An empty or whitespace-only text yields the defaults.
/// A string-valued "taxonomy" is a path resolved against `base_dir`.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// The config named by `explicit_path`, else by $PPK_CONFIG, else the defaults.
PipelineConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path);

/// Full canonical form; the taxonomy is written inline unless it is the default.
std::string serialize_config(const PipelineConfig& config);
void save_config(const std::filesystem::path& path, const PipelineConfig& config);

}  // namespace ppk
