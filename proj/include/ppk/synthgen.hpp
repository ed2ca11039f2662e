#pragma once

#include "ppk/annotation.hpp"
#include "ppk/taxonomy.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

/// Portable 64-bit linear congruential stream.
///
///   state' = 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
///
/// The initial state is the SplitMix64 finalizer applied to the seed. Doubles
/// take the top 53 bits of the new state, so every platform sees the same sequence.
class Lcg64 {
public:
    static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
    static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

    explicit Lcg64(std::uint64_t seed) : state_(mix(seed)) {}

    std::uint64_t next()
    {
        state_ = kMultiplier * state_ + kIncrement;
        return state_;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, n); n must be > 0.
    std::size_t index(std::size_t n)
    {
        const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    bool bernoulli(double p) { return uniform() < p; }

    static std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Independent stream for one unit of work (seed XOR index), so videos can be
/// generated in any order or in parallel with unchanged output.
inline Lcg64 substream(std::uint64_t seed, std::uint64_t index)
{
    return Lcg64(seed ^ index);
}

struct GenShape {
    std::size_t frames_per_video = 4;
    std::size_t persons_per_frame = 2;
    /// Probability that a part instance takes its cell's dominant state.
    double state_skew = 0.8;
    double canvas_width = 1280.0;
    double canvas_height = 720.0;

    /// Throws ConfigError on out-of-range fields.
    void check() const;
};

/// Ground-truth corpus. Persons occupy disjoint vertical strips of the canvas and
/// carry one instance of every raw part. Each (action, group) cell has a dominant
/// state drawn once per seed; an instance takes it with probability state_skew and
/// otherwise a uniformly chosen different state.
std::vector<VideoAnnotation> generate(std::uint64_t seed, std::size_t n_videos, const Taxonomy& taxonomy,
                                      const GenShape& shape = {}, std::size_t jobs = 1);

struct CorruptionSpec {
    std::uint64_t seed = 0;
    double state_flip_rate = 0.0;
    double box_jitter = 0.0;  // px, uniform +/- per corner
    double video_label_error_rate = 0.0;
    double drop_person_rate = 0.0;

    /// Throws ConfigError unless rates lie in [0, 1] and jitter >= 0.
    void check() const;

    bool operator==(const CorruptionSpec&) const = default;
};

/// Predictions derived from ground truth: actions replaced with a wrong one,
/// persons dropped, boxes jittered (never below 2 px per side), states flipped to
/// a different state, each at its configured rate.
std::vector<VideoAnnotation> corrupt(const std::vector<VideoAnnotation>& gt, const CorruptionSpec& spec,
                                     const Taxonomy& taxonomy, std::size_t jobs = 1);

/// {"seed", "state_flip_rate", "box_jitter", "video_label_error_rate", "drop_person_rate"};
/// omitted rates default to 0. A missing seed falls back to `default_seed`.
CorruptionSpec parse_corruption_spec(std::string_view text, std::uint64_t default_seed);
std::string serialize_corruption_spec(const CorruptionSpec& spec);

}  // namespace ppk
