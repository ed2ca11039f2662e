#include "ppk/config.hpp"

#include "ppk/errors.hpp"
#include "ppk/fsutil.hpp"

#include "json_util.hpp"
#include "taxonomy_json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace ppk {

using namespace detail;

FusionSpec PipelineConfig::fusion_for(std::string_view head, const std::vector<std::string>& available_models) const
{
    const auto it = fusion.find(std::string(head));
    if (it != fusion.end())
        return it->second;
    return uniform_fusion(available_models);
}

void PipelineConfig::check() const
{
    try {
        taxonomy.check();
    } catch (const TaxonomyError& e) {
        throw ConfigError("taxonomy." + e.locus(), e.what());
    }
    if (!(conf_thresh_keypoints >= 0.0 && conf_thresh_keypoints <= 1.0))
        throw ConfigError("conf_thresh_keypoints", "must lie in [0, 1]");
    scoring.check();
    render.check();
    for (const auto& [head, spec] : fusion) {
        if (head != kVideoHead && !taxonomy.group_index(head))
            throw ConfigError("fusion." + head, "head must be \"video\" or a part group");
        try {
            spec.check();
        } catch (const ConfigError& e) {
            throw ConfigError("fusion." + head, e.what());
        }
    }
}

namespace {

std::size_t get_count(const json& j, const std::string& locus)
{
    return static_cast<std::size_t>(get_uint<ConfigError>(j, locus));
}

void read_scoring(const json& j, ScoringConfig& s)
{
    const std::string loc = "scoring";
    expect_object<ConfigError>(j, loc);
    reject_unknown<ConfigError>(j, {"human_iou_thresh", "part_iou_thresh", "k_person", "k_part_per_class",
                                    "per_part_macro"},
                                loc);
    if (auto it = j.find("human_iou_thresh"); it != j.end())
        s.human_iou_thresh = get_number<ConfigError>(*it, loc + ".human_iou_thresh");
    if (auto it = j.find("part_iou_thresh"); it != j.end())
        s.part_iou_thresh = get_number<ConfigError>(*it, loc + ".part_iou_thresh");
    if (auto it = j.find("k_person"); it != j.end())
        s.k_person = get_count(*it, loc + ".k_person");
    if (auto it = j.find("k_part_per_class"); it != j.end())
        s.k_part_per_class = get_count(*it, loc + ".k_part_per_class");
    if (auto it = j.find("per_part_macro"); it != j.end())
        s.per_part_macro = get_bool<ConfigError>(*it, loc + ".per_part_macro");
}

std::uint8_t channel(const json& j, const std::string& locus)
{
    const std::uint64_t v = get_uint<ConfigError>(j, locus);
    if (v > 255)
        throw ConfigError(locus, "channel value above 255");
    return static_cast<std::uint8_t>(v);
}

bool read_render(const json& j, RenderStyle& r)
{
    const std::string loc = "render";
    expect_object<ConfigError>(j, loc);
    reject_unknown<ConfigError>(j, {"palette", "min_px", "fraction_of_long_side", "conf_thresh"}, loc);
    if (auto it = j.find("palette"); it != j.end()) {
        const std::string ploc = loc + ".palette";
        expect_array<ConfigError>(*it, ploc);
        if (it->size() != kNumKeypoints)
            throw ConfigError(ploc, "expected 17 colors");
        for (std::size_t i = 0; i < kNumKeypoints; ++i) {
            const std::string cloc = index_locus(ploc, i);
            const json& c = (*it)[i];
            if (!c.is_array() || c.size() != 3)
                throw ConfigError(cloc, "expected [r, g, b]");
            r.palette[i] = {channel(c[0], cloc), channel(c[1], cloc), channel(c[2], cloc)};
        }
    }
    if (auto it = j.find("min_px"); it != j.end()) {
        const std::uint64_t v = get_uint<ConfigError>(*it, loc + ".min_px");
        if (v > 4096)
            throw ConfigError(loc + ".min_px", "too large");
        r.min_px = static_cast<int>(v);
    }
    if (auto it = j.find("fraction_of_long_side"); it != j.end())
        r.fraction_of_long_side = get_number<ConfigError>(*it, loc + ".fraction_of_long_side");
    bool has_conf = false;
    if (auto it = j.find("conf_thresh"); it != j.end()) {
        r.conf_thresh = get_number<ConfigError>(*it, loc + ".conf_thresh");
        has_conf = true;
    }
    return has_conf;
}

void read_fusion(const json& j, std::map<std::string, FusionSpec>& fusion)
{
    const std::string loc = "fusion";
    expect_object<ConfigError>(j, loc);
    for (const auto& [head, entries] : j.items()) {
        const std::string hloc = field_locus(loc, head);
        expect_array<ConfigError>(entries, hloc);
        FusionSpec spec;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string eloc = index_locus(hloc, i);
            expect_object<ConfigError>(entries[i], eloc);
            reject_unknown<ConfigError>(entries[i], {"model", "weight"}, eloc);
            spec.model_ids.push_back(get_string<ConfigError>(require<ConfigError>(entries[i], "model", eloc),
                                                             eloc + ".model"));
            spec.weights.push_back(get_number<ConfigError>(require<ConfigError>(entries[i], "weight", eloc),
                                                           eloc + ".weight"));
        }
        fusion[head] = std::move(spec);
    }
}

Taxonomy read_taxonomy(const json& j, const std::filesystem::path& base_dir)
{
    try {
        if (j.is_string()) {
            std::filesystem::path p = j.get<std::string>();
            if (p.is_relative() && !base_dir.empty())
                p = base_dir / p;
            return load_taxonomy(p);
        }
        return taxonomy_from_json(j, "", "inline");
    } catch (const SchemaError& e) {
        throw ConfigError("taxonomy" + (e.locus().empty() ? std::string() : "." + e.locus()), e.what());
    } catch (const Error& e) {
        throw ConfigError("taxonomy", e.what());
    }
}

}  // namespace

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    PipelineConfig cfg;
    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank)
        return cfg;

    const json doc = parse_json<ConfigError>(text);
    expect_object<ConfigError>(doc, "");
    reject_unknown<ConfigError>(doc, {"taxonomy", "scoring", "render", "fusion", "conf_thresh_keypoints"}, "");
    if (auto it = doc.find("taxonomy"); it != doc.end())
        cfg.taxonomy = read_taxonomy(*it, base_dir);
    if (auto it = doc.find("scoring"); it != doc.end())
        read_scoring(*it, cfg.scoring);
    if (auto it = doc.find("conf_thresh_keypoints"); it != doc.end())
        cfg.conf_thresh_keypoints = get_number<ConfigError>(*it, "conf_thresh_keypoints");
    bool render_conf_given = false;
    if (auto it = doc.find("render"); it != doc.end())
        render_conf_given = read_render(*it, cfg.render);
    if (!render_conf_given)
        cfg.render.conf_thresh = cfg.conf_thresh_keypoints;
    if (auto it = doc.find("fusion"); it != doc.end())
        read_fusion(*it, cfg.fusion);
    cfg.check();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw ConfigError("", e.what());
    }
    return parse_config(text, path.parent_path());
}

PipelineConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path)
{
    if (explicit_path)
        return load_config(*explicit_path);
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0')
        return load_config(env);
    return PipelineConfig{};
}

std::string serialize_config(const PipelineConfig& cfg)
{
    json doc = json::object();
    if (!(cfg.taxonomy == default_taxonomy()))
        doc["taxonomy"] = taxonomy_to_json(cfg.taxonomy);
    const ScoringConfig& s = cfg.scoring;
    doc["scoring"] = {{"human_iou_thresh", s.human_iou_thresh},
                      {"part_iou_thresh", s.part_iou_thresh},
                      {"k_person", s.k_person},
                      {"k_part_per_class", s.k_part_per_class},
                      {"per_part_macro", s.per_part_macro}};
    json palette = json::array();
    for (const Rgb& c : cfg.render.palette)
        palette.push_back({c.r, c.g, c.b});
    doc["render"] = {{"palette", std::move(palette)},
                     {"min_px", cfg.render.min_px},
                     {"fraction_of_long_side", cfg.render.fraction_of_long_side},
                     {"conf_thresh", cfg.render.conf_thresh}};
    json fusion = json::object();
    for (const auto& [head, spec] : cfg.fusion) {
        json entries = json::array();
        for (std::size_t i = 0; i < spec.model_ids.size(); ++i)
            entries.push_back({{"model", spec.model_ids[i]}, {"weight", spec.weights[i]}});
        fusion[head] = std::move(entries);
    }
    doc["fusion"] = std::move(fusion);
    doc["conf_thresh_keypoints"] = cfg.conf_thresh_keypoints;
    return dump_canonical(doc);
}

void save_config(const std::filesystem::path& path, const PipelineConfig& config)
{
    write_file_atomic(path, serialize_config(config));
}

}  // namespace ppk
