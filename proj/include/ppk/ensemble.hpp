#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

/// Per-class scores from one model for one head. Scores are used as given
/// (logits or probabilities); nothing is renormalised.
struct ScoreVector {
    std::vector<std::string> class_names;
    std::vector<double> scores;

    /// Throws ClassMismatchError on length mismatch or non-finite scores.
    void check() const;

    bool operator==(const ScoreVector&) const = default;
};

/// Ordered model weights for one head. A model that should not contribute is
/// left out rather than given weight zero.
struct FusionSpec {
    std::vector<std::string> model_ids;
    std::vector<double> weights;

    /// Throws ConfigError unless ids are unique and non-empty and weights are finite and > 0.
    void check() const;

    bool operator==(const FusionSpec&) const = default;
};

/// Weight 1.0 for every listed model.
FusionSpec uniform_fusion(std::vector<std::string> model_ids);

using ModelScores = std::map<std::string, ScoreVector, std::less<>>;  // model_id -> scores

/// fused[c] = sum over spec models of weight * scores[c]. Terms are added in
/// model_id order so the result does not depend on how the spec lists them.
/// Models in `vectors` but absent from `spec` are ignored.
/// Throws MissingModelError or ClassMismatchError.
ScoreVector fuse(const ModelScores& vectors, const FusionSpec& spec);

/// Index of the highest score; ties go to the earliest class.
std::size_t argmax(const ScoreVector& v);

/// Name of the highest-scoring class. Throws ClassMismatchError on an empty vector.
const std::string& decide(const ScoreVector& v);

/// Independent fuse + decide per group.
std::map<std::string, std::string> fuse_part_models(const std::map<std::string, ModelScores>& per_group_vectors,
                                                    const std::map<std::string, FusionSpec>& per_group_specs);

// ---------------------------------------------------------------------------
// Score and weight files

/// video_id -> head -> model_id -> scores
using ScoreTable = std::map<std::string, std::map<std::string, ModelScores>>;

/// {"records": [{"video_id", "model_id", "head", "classes": [...], "scores": [...]}]}
ScoreTable parse_score_table(std::string_view text);
std::string serialize_score_table(const ScoreTable& table);

/// {"<head>": [{"model": id, "weight": w}, ...], ...}
std::map<std::string, FusionSpec> parse_fusion_weights(std::string_view text);
std::string serialize_fusion_weights(const std::map<std::string, FusionSpec>& specs);

struct FusedDecision {
    std::string video_id;
    std::string head;
    std::string label;
    double score = 0.0;

    bool operator==(const FusedDecision&) const = default;
};

/// Fuses every (video, head) in the table. Heads without a configured spec use
/// uniform weights over the models present. Output sorted by video_id, head.
std::vector<FusedDecision> fuse_table(const ScoreTable& table, const std::map<std::string, FusionSpec>& specs);

/// {"decisions": [{"video_id", "head", "label", "score"}]}
std::string serialize_decisions(const std::vector<FusedDecision>& decisions);

}  // namespace ppk
