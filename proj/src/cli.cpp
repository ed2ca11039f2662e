#include "ppk/cli.hpp"

#include "ppk/annotation.hpp"
#include "ppk/config.hpp"
#include "ppk/ensemble.hpp"
#include "ppk/errors.hpp"
#include "ppk/fsutil.hpp"
#include "ppk/geometry.hpp"
#include "ppk/labels.hpp"
#include "ppk/parallel.hpp"
#include "ppk/pose_io.hpp"
#include "ppk/render.hpp"
#include "ppk/scorer.hpp"
#include "ppk/synthgen.hpp"

#include "json_util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <ostream>

namespace ppk::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
    PipelineConfig config;
    std::size_t jobs = 1;
    std::ostream& out;
    std::ostream& err;
};

std::string fixed4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

double parse_double(std::string_view s, const char* what)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw Error(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
    return v;
}

BoundingBox parse_box(const std::string& text)
{
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        v.push_back(parse_double(std::string_view(text).substr(start, comma - start), "--box"));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (v.size() != 4)
        throw Error("--box expects x1,y1,x2,y2");
    const BoundingBox b{v[0], v[1], v[2], v[3]};
    if (!b.well_formed())
        throw IntegrityError("--box", "corners inverted");
    return b;
}

BoundingBox parse_image_size(const std::string& text)
{
    const std::size_t x = text.find('x');
    if (x == std::string::npos)
        throw Error("--image-size expects WxH");
    const double w = parse_double(std::string_view(text).substr(0, x), "--image-size");
    const double h = parse_double(std::string_view(text).substr(x + 1), "--image-size");
    if (!(w > 0.0 && h > 0.0))
        throw Error("--image-size must be positive");
    return {0.0, 0.0, w, h};
}

char parse_delimiter(const std::string& d)
{
    if (d == "tab" || d == "\\t" || d == "\t")
        return '\t';
    if (d.size() == 1)
        return d[0];
    throw Error("--delimiter must be a single character or 'tab'");
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string annotations;
    std::string role = "gt";
    std::string report;
};

int cmd_validate(const ValidateArgs& a, Context& ctx, CommandOutcome& outcome)
{
    const AnnotationRole role = a.role == "pred" ? AnnotationRole::prediction : AnnotationRole::ground_truth;
    const AnnotationSet set = parse_annotation_set(read_file(a.annotations), ctx.config.taxonomy);
    const ValidationReport report = validate(set.videos, ctx.config.taxonomy, role);
    for (const auto& v : report.violations)
        ctx.err << to_string(v.kind) << " at " << v.locus << ": " << v.message << "\n";
    if (!a.report.empty()) {
        detail::json arr = detail::json::array();
        for (const auto& v : report.violations)
            arr.push_back({{"kind", to_string(v.kind)}, {"locus", v.locus}, {"message", v.message}});
        write_file_atomic(a.report, detail::dump_canonical({{"violations", std::move(arr)}}));
        outcome.report_path = a.report;
    }
    ctx.out << "videos=" << set.videos.size() << " violations=" << report.violations.size() << "\n";
    return report.ok() ? kOk : kInputError;
}

struct StatsArgs {
    std::string annotations;
    std::string out;
    std::string delimiter = "tab";
};

int cmd_stats(const StatsArgs& a, Context& ctx, CommandOutcome& outcome)
{
    const char delim = parse_delimiter(a.delimiter);
    const auto videos = load_annotations(a.annotations, ctx.config.taxonomy);
    const LongTailReport report = long_tail_report(videos, ctx.config.taxonomy);
    const std::string table = format_long_tail(report, delim);
    if (a.out.empty()) {
        ctx.out << table;
        return kOk;
    }
    write_file_atomic(a.out, table);
    outcome.report_path = a.out;
    ctx.out << "videos=" << videos.size() << " rows=" << report.rows.size() << "\n";
    return kOk;
}

struct TransformArgs {
    std::string annotations;
    std::string out_labels;
};

int cmd_transform_labels(const TransformArgs& a, Context& ctx, CommandOutcome& outcome)
{
    const auto videos = load_annotations(a.annotations, ctx.config.taxonomy);
    std::vector<VideoLabels> labels(videos.size());
    parallel_for(videos.size(), ctx.jobs, [&](std::size_t i) {
        labels[i] = {videos[i].video_id, derive_video_labels(videos[i], ctx.config.taxonomy)};
    });
    write_file_atomic(a.out_labels, serialize_video_labels(labels));
    outcome.report_path = a.out_labels;
    ctx.out << "videos=" << videos.size() << " labels=" << videos.size() * ctx.config.taxonomy.part_groups.size()
            << "\n";
    return kOk;
}

struct RefineArgs {
    std::string annotations;
    std::string poses;
    std::string out;
    std::optional<double> conf_thresh;
    std::string image_size;
};

int cmd_refine_boxes(const RefineArgs& a, Context& ctx, CommandOutcome& outcome)
{
    AnnotationSet set = load_annotation_set(a.annotations, ctx.config.taxonomy, AnnotationRole::prediction);
    const auto poses = load_pose_table(a.poses);
    const double conf = a.conf_thresh.value_or(ctx.config.conf_thresh_keypoints);
    if (!(conf >= 0.0 && conf <= 1.0))
        throw Error("--conf-thresh must lie in [0, 1]");
    std::optional<BoundingBox> bounds;
    if (!a.image_size.empty())
        bounds = parse_image_size(a.image_size);

    std::map<std::string_view, VideoAnnotation*> by_id;
    for (auto& v : set.videos)
        by_id.emplace(v.video_id, &v);

    std::size_t changed = 0;
    for (std::size_t i = 0; i < poses.size(); ++i) {
        const PersonPose& pose = poses[i];
        const std::string where = "poses[" + std::to_string(i) + "]";
        const auto vit = by_id.find(pose.video_id);
        if (vit == by_id.end())
            throw IntegrityError(where, "unknown video '" + pose.video_id + "'");
        auto& frames = vit->second->frames;
        const auto fit = std::find_if(frames.begin(), frames.end(),
                                      [&](const FrameAnnotation& f) { return f.frame_id == pose.frame_id; });
        if (fit == frames.end())
            throw IntegrityError(where, "unknown frame " + std::to_string(pose.frame_id));
        if (pose.person >= fit->persons.size())
            throw IntegrityError(where, "person index " + std::to_string(pose.person) + " out of range");
        BoundingBox& box = fit->persons[pose.person].box;
        const BoundingBox refined = refine_person_box(box, pose.keypoints, conf, bounds);
        if (!(refined == box))
            ++changed;
        box = refined;
    }
    write_file_atomic(a.out, serialize_annotation_set(set));
    outcome.report_path = a.out;
    ctx.out << "poses=" << poses.size() << " changed=" << changed << "\n";
    return kOk;
}

struct RenderArgs {
    std::string image;
    std::string keypoints;
    std::string box;
    std::string out;
};

int cmd_render_pose(const RenderArgs& a, Context& ctx, CommandOutcome& outcome)
{
    const RasterImage image = read_ppm(a.image);
    PoseKeypoints kp = load_keypoints(a.keypoints);
    const BoundingBox box = parse_box(a.box);
    const PixelRect win = crop_window(image.width, image.height, box);
    const RasterImage person = crop(image, box);
    for (auto& k : kp.points) {
        k.x -= static_cast<double>(win.x0);
        k.y -= static_cast<double>(win.y0);
    }
    const RasterImage augmented = render_keypoints(person, kp, ctx.config.render);
    write_ppm(a.out, augmented);
    outcome.report_path = a.out;
    ctx.out << "crop=" << person.width << "x" << person.height << " radius=" << dot_radius(person, ctx.config.render)
            << "\n";
    return kOk;
}

struct FuseArgs {
    std::string scores;
    std::string weights;
    std::string out_labels;
};

int cmd_fuse(const FuseArgs& a, Context& ctx, CommandOutcome& outcome)
{
    const ScoreTable table = parse_score_table(read_file(a.scores));
    std::map<std::string, FusionSpec> specs = ctx.config.fusion;
    if (!a.weights.empty())
        specs = parse_fusion_weights(read_file(a.weights));
    const auto decisions = fuse_table(table, specs);
    write_file_atomic(a.out_labels, serialize_decisions(decisions));
    outcome.report_path = a.out_labels;
    ctx.out << "videos=" << table.size() << " decisions=" << decisions.size() << "\n";
    return kOk;
}

struct ScoreArgs {
    std::string gt;
    std::string pred;
    std::optional<double> human_iou;
    std::optional<double> part_iou;
    bool per_part_macro = false;
    std::string report;
};

int cmd_score(const ScoreArgs& a, Context& ctx, CommandOutcome& outcome)
{
    ScoringConfig cfg = ctx.config.scoring;
    if (a.human_iou)
        cfg.human_iou_thresh = *a.human_iou;
    if (a.part_iou)
        cfg.part_iou_thresh = *a.part_iou;
    if (a.per_part_macro)
        cfg.per_part_macro = true;
    cfg.check();
    const auto gts = load_annotations(a.gt, ctx.config.taxonomy, AnnotationRole::ground_truth);
    const auto preds = load_annotations(a.pred, ctx.config.taxonomy, AnnotationRole::prediction);
    const ScoreReport report = score_dataset(gts, preds, cfg, ctx.jobs);
    if (!a.report.empty()) {
        write_file_atomic(a.report, serialize_score_report(report));
        outcome.report_path = a.report;
    }
    ctx.out << "final_score=" << fixed4(report.final_score) << " video_accuracy=" << fixed4(report.video_accuracy)
            << " videos=" << report.per_video.size() << "\n";
    return kOk;
}

struct GenArgs {
    std::optional<std::uint64_t> seed;
    std::size_t videos = 0;
    std::string out;
    GenShape shape;
    std::string corrupt;
    std::string out_pred;
};

int cmd_gen_synth(const GenArgs& a, Context& ctx, CommandOutcome& outcome)
{
    if (!a.seed)
        throw Error("gen-synth requires --seed");
    if (a.corrupt.empty() != a.out_pred.empty())
        throw Error("--corrupt and --out-pred must be given together");
    if (a.videos < 1)
        throw Error("--videos must be >= 1");

    const Taxonomy& taxonomy = ctx.config.taxonomy;
    AnnotationSet gt;
    gt.taxonomy_ref = taxonomy.name;
    gt.videos = generate(*a.seed, a.videos, taxonomy, a.shape, ctx.jobs);

    std::optional<AnnotationSet> pred;
    if (!a.corrupt.empty()) {
        const CorruptionSpec spec = parse_corruption_spec(read_file(a.corrupt), *a.seed);
        pred = AnnotationSet{taxonomy.name, corrupt(gt.videos, spec, taxonomy, ctx.jobs)};
    }
    write_file_atomic(a.out, serialize_annotation_set(gt));
    outcome.report_path = a.out;
    if (pred)
        write_file_atomic(a.out_pred, serialize_annotation_set(*pred));
    ctx.out << "videos=" << gt.videos.size() << " seed=" << *a.seed << (pred ? " predictions=yes" : "") << "\n";
    return kOk;
}

}  // namespace

CommandOutcome run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Part-level action parsing toolkit", "ppk"};
    app.fallthrough();

    std::string config_path;
    std::size_t jobs = 0;
    std::string format = "canonical";
    bool show_version = false;
    app.add_option("--config", config_path, "Pipeline config file (falls back to $PPK_CONFIG)");
    app.add_option("--jobs", jobs, "Worker threads for per-video work (default: all cores)");
    app.add_option("--format", format, "Annotation file format")->check(CLI::IsMember({"canonical"}));
    app.add_flag("--version", show_version, "Print the version and exit");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Check an annotation file against the schema and taxonomy");
    validate->add_option("--annotations", validate_args.annotations)->required();
    validate->add_option("--role", validate_args.role, "gt or pred")->check(CLI::IsMember({"gt", "pred"}));
    validate->add_option("--report", validate_args.report, "Write violations as a JSON document");

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Dominant part-state share per (action, group)");
    stats->add_option("--annotations", stats_args.annotations)->required();
    stats->add_option("--out", stats_args.out, "Write the table here instead of standard output");
    stats->add_option("--delimiter", stats_args.delimiter, "Column delimiter (default: tab)");

    TransformArgs transform_args;
    auto* transform = app.add_subcommand("transform-labels", "Derive one part-level label per video and group");
    transform->add_option("--annotations", transform_args.annotations)->required();
    transform->add_option("--out-labels", transform_args.out_labels)->required();

    RefineArgs refine_args;
    auto* refine = app.add_subcommand("refine-boxes", "Grow person boxes to cover confident keypoints");
    refine->add_option("--annotations", refine_args.annotations)->required();
    refine->add_option("--poses", refine_args.poses)->required();
    refine->add_option("--out", refine_args.out)->required();
    refine->add_option("--conf-thresh", refine_args.conf_thresh);
    refine->add_option("--image-size", refine_args.image_size, "Clamp to a WxH image");

    RenderArgs render_args;
    auto* render = app.add_subcommand("render-pose", "Crop a person and draw keypoint dots");
    render->add_option("--image", render_args.image)->required();
    render->add_option("--keypoints", render_args.keypoints, "Keypoints in full-image coordinates")->required();
    render->add_option("--box", render_args.box, "x1,y1,x2,y2")->required();
    render->add_option("--out", render_args.out)->required();

    FuseArgs fuse_args;
    auto* fuse_cmd = app.add_subcommand("fuse", "Weighted late fusion of per-model class scores");
    fuse_cmd->add_option("--scores", fuse_args.scores)->required();
    fuse_cmd->add_option("--weights", fuse_args.weights, "Fusion weights (default: from config)");
    fuse_cmd->add_option("--out-labels", fuse_args.out_labels)->required();

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "Challenge score of predictions against ground truth");
    score->add_option("--gt", score_args.gt)->required();
    score->add_option("--pred", score_args.pred)->required();
    score->add_option("--human-iou", score_args.human_iou);
    score->add_option("--part-iou", score_args.part_iou);
    score->add_flag("--per-part-macro", score_args.per_part_macro);
    score->add_option("--report", score_args.report);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen-synth", "Generate a seeded synthetic corpus");
    gen->add_option("--seed", gen_args.seed)->required();
    gen->add_option("--videos", gen_args.videos)->required();
    gen->add_option("--out", gen_args.out)->required();
    gen->add_option("--frames", gen_args.shape.frames_per_video);
    gen->add_option("--persons", gen_args.shape.persons_per_frame);
    gen->add_option("--skew", gen_args.shape.state_skew);
    gen->add_option("--corrupt", gen_args.corrupt, "Corruption spec; writes predictions to --out-pred");
    gen->add_option("--out-pred", gen_args.out_pred);

    CommandOutcome outcome;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return outcome;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return outcome;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        outcome.exit_code = kInputError;
        return outcome;
    }

    if (show_version) {
        out << "ppk " << kVersion << "\n";
        return outcome;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        outcome.exit_code = kInputError;
        return outcome;
    }

    try {
        std::optional<fs::path> cfg_path;
        if (!config_path.empty())
            cfg_path = config_path;
        Context ctx{resolve_config(cfg_path), jobs == 0 ? default_jobs() : jobs, out, err};
        if (validate->parsed())
            outcome.exit_code = cmd_validate(validate_args, ctx, outcome);
        else if (stats->parsed())
            outcome.exit_code = cmd_stats(stats_args, ctx, outcome);
        else if (transform->parsed())
            outcome.exit_code = cmd_transform_labels(transform_args, ctx, outcome);
        else if (refine->parsed())
            outcome.exit_code = cmd_refine_boxes(refine_args, ctx, outcome);
        else if (render->parsed())
            outcome.exit_code = cmd_render_pose(render_args, ctx, outcome);
        else if (fuse_cmd->parsed())
            outcome.exit_code = cmd_fuse(fuse_args, ctx, outcome);
        else if (score->parsed())
            outcome.exit_code = cmd_score(score_args, ctx, outcome);
        else if (gen->parsed())
            outcome.exit_code = cmd_gen_synth(gen_args, ctx, outcome);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        outcome.exit_code = kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        outcome.exit_code = kInternalError;
    }
    return outcome;
}

}  // namespace ppk::cli
