#pragma once

#include "ppk/box.hpp"
#include "ppk/taxonomy.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

struct PartInstance {
    std::string part;
    BoundingBox box;
    std::string state;
    double score = 1.0;

    bool operator==(const PartInstance&) const = default;
};

struct PersonInstance {
    BoundingBox box;
    double score = 1.0;
    std::vector<PartInstance> parts;

    bool operator==(const PersonInstance&) const = default;
};

struct FrameAnnotation {
    std::uint64_t frame_id = 0;
    std::vector<PersonInstance> persons;

    bool operator==(const FrameAnnotation&) const = default;
};

struct VideoAnnotation {
    std::string video_id;
    std::string action;
    std::vector<FrameAnnotation> frames;

    bool operator==(const VideoAnnotation&) const = default;
};

/// One annotation document: the taxonomy it was written against plus its videos.
struct AnnotationSet {
    std::string taxonomy_ref = "default";
    std::vector<VideoAnnotation> videos;

    bool operator==(const AnnotationSet&) const = default;
};

/// Ground truth forbids repeated raw parts per person and degenerate boxes;
/// predictions may carry both.
enum class AnnotationRole { ground_truth, prediction };

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    duplicate_video,
    no_frames,
    duplicate_frame,
    unordered_frame,
    score_out_of_range,
    inverted_box,
    degenerate_box,
    unknown_action,
    unknown_part,
    unknown_state,
    duplicate_part,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string locus;  // e.g. "videos[2].frames[0].persons[1]"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const std::vector<VideoAnnotation>& videos, const Taxonomy& taxonomy,
                          AnnotationRole role = AnnotationRole::ground_truth);

// ---------------------------------------------------------------------------
// Top-k filtering

/// Keeps the `k_person` highest-scoring persons per frame and, within each kept
/// person, the `k_part_per_class` highest-scoring instances per raw part. Equal
/// scores favour the earlier index. Survivors keep their original relative order.
VideoAnnotation apply_topk(const VideoAnnotation& pred, std::size_t k_person,
                           std::size_t k_part_per_class);

// ---------------------------------------------------------------------------
// Canonical document I/O

/// Parses an annotation document. Syntax and shape problems raise SchemaError,
/// names missing from the taxonomy raise TaxonomyError. No invariant checks.
AnnotationSet parse_annotation_set(std::string_view text, const Taxonomy& taxonomy);

/// Parses and then validates; the first violation is raised as IntegrityError.
AnnotationSet load_annotation_set(const std::filesystem::path& path, const Taxonomy& taxonomy,
                                  AnnotationRole role = AnnotationRole::ground_truth);

std::vector<VideoAnnotation> load_annotations(const std::filesystem::path& path,
                                              const Taxonomy& taxonomy,
                                              AnnotationRole role = AnnotationRole::ground_truth);

/// Canonical serialization: sorted keys, shortest round-trip numbers, two-space indent,
/// trailing newline.
std::string serialize_annotation_set(const AnnotationSet& set);

void save_annotation_set(const std::filesystem::path& path, const AnnotationSet& set);

}  // namespace ppk
