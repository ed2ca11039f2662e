#include "ppk/synthgen.hpp"

#include "ppk/errors.hpp"
#include "ppk/parallel.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace ppk {

namespace {

// Dominant-state table stream; video streams use indices below this.
constexpr std::uint64_t kTableStream = 1ULL << 63;

// Coordinates snap to 1/16 px so that they print short and round-trip exactly.
double snap(double v)
{
    return std::round(v * 16.0) / 16.0;
}

struct PartTemplate {
    double cx, cy, w, h;  // fractions of the person box
};

// Indexed by raw-part position; taxonomies with more parts wrap around.
constexpr std::array<PartTemplate, 10> kLayout = {{
    {0.50, 0.10, 0.25, 0.15},  // head
    {0.15, 0.55, 0.12, 0.08},  // left_hand
    {0.85, 0.55, 0.12, 0.08},  // right_hand
    {0.25, 0.35, 0.15, 0.25},  // left_arm
    {0.75, 0.35, 0.15, 0.25},  // right_arm
    {0.50, 0.50, 0.35, 0.12},  // hip
    {0.38, 0.72, 0.15, 0.30},  // left_leg
    {0.62, 0.72, 0.15, 0.30},  // right_leg
    {0.38, 0.95, 0.12, 0.06},  // left_foot
    {0.62, 0.95, 0.12, 0.06},  // right_foot
}};

void enforce_min_side(double& lo, double& hi)
{
    if (hi - lo < 2.0) {
        const double mid = (lo + hi) / 2.0;
        lo = mid - 1.0;
        hi = mid + 1.0;
    }
}

BoundingBox part_box(const BoundingBox& person, std::size_t part_index, Lcg64& rng)
{
    const PartTemplate& t = kLayout[part_index % kLayout.size()];
    const double pw = person.width();
    const double ph = person.height();
    const double cx = person.x1 + pw * (t.cx + rng.uniform(-0.03, 0.03));
    const double cy = person.y1 + ph * (t.cy + rng.uniform(-0.03, 0.03));
    const double w = pw * t.w;
    const double h = ph * t.h;
    BoundingBox b{snap(std::max(person.x1, cx - w / 2)), snap(std::max(person.y1, cy - h / 2)),
                  snap(std::min(person.x2, cx + w / 2)), snap(std::min(person.y2, cy + h / 2))};
    enforce_min_side(b.x1, b.x2);
    enforce_min_side(b.y1, b.y2);
    return b;
}

std::string video_id_for(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "vid_%06zu", i);
    return buf;
}

std::size_t other_index(std::size_t current, std::size_t n, Lcg64& rng)
{
    std::size_t i = rng.index(n - 1);
    return i >= current ? i + 1 : i;
}

BoundingBox jitter(const BoundingBox& b, double magnitude, Lcg64& rng)
{
    if (magnitude <= 0.0)
        return b;
    BoundingBox out{snap(b.x1 + rng.uniform(-magnitude, magnitude)), snap(b.y1 + rng.uniform(-magnitude, magnitude)),
                    snap(b.x2 + rng.uniform(-magnitude, magnitude)), snap(b.y2 + rng.uniform(-magnitude, magnitude))};
    if (out.x1 > out.x2)
        std::swap(out.x1, out.x2);
    if (out.y1 > out.y2)
        std::swap(out.y1, out.y2);
    enforce_min_side(out.x1, out.x2);
    enforce_min_side(out.y1, out.y2);
    return out;
}

}  // namespace

void GenShape::check() const
{
    if (frames_per_video < 1)
        throw ConfigError("shape.frames_per_video", "must be >= 1");
    if (persons_per_frame < 1)
        throw ConfigError("shape.persons_per_frame", "must be >= 1");
    if (!(state_skew >= 0.0 && state_skew <= 1.0))
        throw ConfigError("shape.state_skew", "must lie in [0, 1]");
    if (!(canvas_height >= 64.0))
        throw ConfigError("shape.canvas_height", "must be >= 64");
    if (!(canvas_width >= 64.0 * static_cast<double>(persons_per_frame)))
        throw ConfigError("shape.canvas_width", "must leave at least 64 px per person");
}

std::vector<VideoAnnotation> generate(std::uint64_t seed, std::size_t n_videos, const Taxonomy& taxonomy,
                                      const GenShape& shape, std::size_t jobs)
{
    shape.check();
    const std::size_t num_states = taxonomy.part_states.size();
    const std::size_t num_groups = taxonomy.part_groups.size();

    std::vector<std::size_t> dominant(taxonomy.video_actions.size() * num_groups);
    Lcg64 table_rng = substream(seed, kTableStream);
    for (auto& d : dominant)
        d = table_rng.index(num_states);

    std::vector<std::size_t> group_of_part;
    for (const auto& part : taxonomy.raw_parts)
        group_of_part.push_back(taxonomy.group_index_of(part));

    std::vector<VideoAnnotation> videos(n_videos);
    parallel_for(n_videos, jobs, [&](std::size_t vi) {
        Lcg64 rng = substream(seed, vi);
        VideoAnnotation& v = videos[vi];
        v.video_id = video_id_for(vi);
        const std::size_t action = rng.index(taxonomy.video_actions.size());
        v.action = taxonomy.video_actions[action];

        const double strip = shape.canvas_width / static_cast<double>(shape.persons_per_frame);
        for (std::size_t f = 0; f < shape.frames_per_video; ++f) {
            FrameAnnotation frame;
            frame.frame_id = 10 * f;
            for (std::size_t p = 0; p < shape.persons_per_frame; ++p) {
                PersonInstance person;
                const double w = strip * rng.uniform(0.5, 0.9);
                const double h = shape.canvas_height * rng.uniform(0.5, 0.9);
                const double x1 = strip * static_cast<double>(p) + rng.uniform(0.0, strip - w);
                const double y1 = rng.uniform(0.0, shape.canvas_height - h);
                person.box = {snap(x1), snap(y1), snap(x1 + w), snap(y1 + h)};
                for (std::size_t r = 0; r < taxonomy.raw_parts.size(); ++r) {
                    PartInstance part;
                    part.part = taxonomy.raw_parts[r];
                    part.box = part_box(person.box, r, rng);
                    const std::size_t dom = dominant[action * num_groups + group_of_part[r]];
                    const std::size_t state =
                        (num_states == 1 || rng.bernoulli(shape.state_skew)) ? dom : other_index(dom, num_states, rng);
                    part.state = taxonomy.part_states[state];
                    person.parts.push_back(std::move(part));
                }
                frame.persons.push_back(std::move(person));
            }
            v.frames.push_back(std::move(frame));
        }
    });
    return videos;
}

void CorruptionSpec::check() const
{
    const auto rate = [](double r, const char* field) {
        if (!(r >= 0.0 && r <= 1.0))
            throw ConfigError(field, "must lie in [0, 1]");
    };
    rate(state_flip_rate, "state_flip_rate");
    rate(video_label_error_rate, "video_label_error_rate");
    rate(drop_person_rate, "drop_person_rate");
    if (!(box_jitter >= 0.0 && std::isfinite(box_jitter)))
        throw ConfigError("box_jitter", "must be finite and >= 0");
}

std::vector<VideoAnnotation> corrupt(const std::vector<VideoAnnotation>& gt, const CorruptionSpec& spec,
                                     const Taxonomy& taxonomy, std::size_t jobs)
{
    spec.check();
    const std::size_t num_actions = taxonomy.video_actions.size();
    const std::size_t num_states = taxonomy.part_states.size();

    std::vector<VideoAnnotation> out(gt.size());
    parallel_for(gt.size(), jobs, [&](std::size_t vi) {
        Lcg64 rng = substream(spec.seed, vi);
        const VideoAnnotation& src = gt[vi];
        VideoAnnotation& v = out[vi];
        v.video_id = src.video_id;
        v.action = src.action;
        if (rng.bernoulli(spec.video_label_error_rate) && num_actions > 1) {
            const std::size_t a = *taxonomy.action_index(src.action);
            v.action = taxonomy.video_actions[other_index(a, num_actions, rng)];
        }
        for (const auto& frame : src.frames) {
            FrameAnnotation f;
            f.frame_id = frame.frame_id;
            for (const auto& person : frame.persons) {
                if (rng.bernoulli(spec.drop_person_rate))
                    continue;
                PersonInstance p;
                p.score = person.score;
                p.box = jitter(person.box, spec.box_jitter, rng);
                for (const auto& part : person.parts) {
                    PartInstance q = part;
                    if (rng.bernoulli(spec.state_flip_rate) && num_states > 1) {
                        const std::size_t s = *taxonomy.state_index(part.state);
                        q.state = taxonomy.part_states[other_index(s, num_states, rng)];
                    }
                    q.box = jitter(part.box, spec.box_jitter, rng);
                    p.parts.push_back(std::move(q));
                }
                f.persons.push_back(std::move(p));
            }
            v.frames.push_back(std::move(f));
        }
    });
    return out;
}

CorruptionSpec parse_corruption_spec(std::string_view text, std::uint64_t default_seed)
{
    using namespace detail;
    const json doc = parse_json<ConfigError>(text);
    expect_object<ConfigError>(doc, "");
    reject_unknown<ConfigError>(
        doc, {"seed", "state_flip_rate", "box_jitter", "video_label_error_rate", "drop_person_rate"}, "");
    CorruptionSpec spec;
    spec.seed = default_seed;
    const auto number = [&](const char* key, double& field) {
        if (const auto it = doc.find(key); it != doc.end())
            field = get_number<ConfigError>(*it, key);
    };
    if (const auto it = doc.find("seed"); it != doc.end())
        spec.seed = get_uint<ConfigError>(*it, "seed");
    number("state_flip_rate", spec.state_flip_rate);
    number("box_jitter", spec.box_jitter);
    number("video_label_error_rate", spec.video_label_error_rate);
    number("drop_person_rate", spec.drop_person_rate);
    spec.check();
    return spec;
}

std::string serialize_corruption_spec(const CorruptionSpec& spec)
{
    return detail::dump_canonical({{"seed", spec.seed},
                                   {"state_flip_rate", spec.state_flip_rate},
                                   {"box_jitter", spec.box_jitter},
                                   {"video_label_error_rate", spec.video_label_error_rate},
                                   {"drop_person_rate", spec.drop_person_rate}});
}

}  // namespace ppk
