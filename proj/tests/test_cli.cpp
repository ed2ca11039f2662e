#include "doctest.h"

#include "ppk/annotation.hpp"
#include "ppk/cli.hpp"
#include "ppk/ensemble.hpp"
#include "ppk/labels.hpp"
#include "ppk/pose_io.hpp"
#include "ppk/render.hpp"

#include "test_support.hpp"

#include <cstdlib>
#include <sstream>

using namespace ppk;
using testutil::TempDir;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const auto outcome = cli::run(args, out, err);
    return {outcome.exit_code, out.str(), err.str()};
}

std::string p(const TempDir& d, const char* name)
{
    return (d / name).string();
}

}  // namespace

TEST_CASE("version, usage and unknown commands")
{
    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == std::string("ppk ") + cli::kVersion + "\n");
    CHECK(run({}).code == 2);
    const auto bad = run({"explode"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("Usage") != std::string::npos);
    CHECK(run({"score", "--gt", "x.json"}).code == 2);
}

TEST_CASE("gen-synth then validate then self-score")
{
    TempDir d;
    const auto g = run({"gen-synth", "--seed", "7", "--videos", "12", "--out", p(d, "g.json")});
    REQUIRE(g.code == 0);
    CHECK(g.out == "videos=12 seed=7\n");

    const auto v = run({"validate", "--annotations", p(d, "g.json"), "--report", p(d, "r.json")});
    CHECK(v.code == 0);
    CHECK(v.out == "videos=12 violations=0\n");
    CHECK(testutil::slurp(d / "r.json").find("\"violations\": []") != std::string::npos);

    const auto s = run({"score", "--gt", p(d, "g.json"), "--pred", p(d, "g.json")});
    CHECK(s.code == 0);
    CHECK(s.out.rfind("final_score=1.0000 ", 0) == 0);
}

TEST_CASE("seed is mandatory for generation")
{
    TempDir d;
    CHECK(run({"gen-synth", "--videos", "3", "--out", p(d, "g.json")}).code == 2);
    CHECK(!std::filesystem::exists(d / "g.json"));
}

TEST_CASE("full pipeline with state flips")
{
    TempDir d;
    testutil::spit(d / "c.json", R"({"state_flip_rate": 0.25})");
    REQUIRE(run({"gen-synth", "--seed", "3", "--videos", "200", "--frames", "4", "--persons", "2", "--out",
                 p(d, "g.json"), "--corrupt", p(d, "c.json"), "--out-pred", p(d, "p.json")})
                .code == 0);
    const auto s = run({"score", "--gt", p(d, "g.json"), "--pred", p(d, "p.json"), "--report", p(d, "s.json")});
    REQUIRE(s.code == 0);
    const double final_score = std::stod(s.out.substr(s.out.find('=') + 1));
    CHECK(std::abs(final_score - 0.75) <= 0.02);
    CHECK(std::filesystem::exists(d / "s.json"));
}

TEST_CASE("validate reports violations with exit 2")
{
    TempDir d;
    auto v = testutil::minimal_video();
    v.frames[0].persons[0].score = 1.5;
    save_annotation_set(d / "a.json", {"default", {v}});
    const auto r = run({"validate", "--annotations", p(d, "a.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("score_out_of_range") != std::string::npos);

    testutil::spit(d / "broken.json", "{\"videos\": [");
    CHECK(run({"validate", "--annotations", p(d, "broken.json")}).code == 2);
    CHECK(run({"score", "--gt", p(d, "missing.json"), "--pred", p(d, "missing.json")}).code == 2);
}

TEST_CASE("stats and transform-labels")
{
    TempDir d;
    REQUIRE(run({"gen-synth", "--seed", "5", "--videos", "10", "--out", p(d, "g.json")}).code == 0);
    const auto s = run({"stats", "--annotations", p(d, "g.json"), "--delimiter", ","});
    CHECK(s.code == 0);
    CHECK(s.out.rfind("video_action,group,modal_state,modal_count,total,share\n", 0) == 0);

    REQUIRE(run({"stats", "--annotations", p(d, "g.json"), "--out", p(d, "t.tsv")}).code == 0);
    CHECK(testutil::slurp(d / "t.tsv").rfind("video_action\tgroup\t", 0) == 0);

    const auto t = run({"transform-labels", "--annotations", p(d, "g.json"), "--out-labels", p(d, "l.json")});
    CHECK(t.code == 0);
    CHECK(t.out == "videos=10 labels=60\n");
    const auto labels = parse_video_labels(testutil::slurp(d / "l.json"), default_taxonomy());
    CHECK(labels.size() == 10);
}

TEST_CASE("refine-boxes grows boxes to the confident keypoints")
{
    TempDir d;
    save_annotation_set(d / "a.json", {"default", {testutil::minimal_video()}});
    PoseKeypoints kp;
    for (auto& k : kp.points)
        k = {50, 50, 0.9};
    kp.points[0] = {-30, 40, 0.9};
    kp.points[1] = {300, 40, 0.1};
    testutil::spit(d / "poses.json", serialize_pose_table({{"v0", 0, 0, kp}}));
    const std::string before = testutil::slurp(d / "a.json");
    const auto r = run({"refine-boxes", "--annotations", p(d, "a.json"), "--poses", p(d, "poses.json"), "--out",
                        p(d, "o.json"), "--image-size", "640x480"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "poses=1 changed=1\n");
    CHECK(testutil::slurp(d / "a.json") == before);
    const auto out = load_annotations(d / "o.json", default_taxonomy(), AnnotationRole::prediction);
    CHECK(out[0].frames[0].persons[0].box == BoundingBox{0, 10, 110, 210});

    testutil::spit(d / "bad_poses.json", serialize_pose_table({{"nope", 0, 0, kp}}));
    CHECK(run({"refine-boxes", "--annotations", p(d, "a.json"), "--poses", p(d, "bad_poses.json"), "--out",
               p(d, "o2.json")})
              .code == 2);
}

TEST_CASE("render-pose crops and draws in crop coordinates")
{
    TempDir d;
    RasterImage img(40, 30, {9, 9, 9});
    write_ppm(d / "frame.ppm", img);
    PoseKeypoints kp;
    kp.points[0] = {15, 12, 1.0};  // full-image coordinates
    testutil::spit(d / "kp.json", serialize_keypoints(kp));
    const auto r = run({"render-pose", "--image", p(d, "frame.ppm"), "--keypoints", p(d, "kp.json"), "--box",
                        "10.5,10,30,25", "--out", p(d, "o.ppm")});
    REQUIRE(r.code == 0);
    CHECK(r.out == "crop=20x15 radius=2\n");
    const auto out = read_ppm(d / "o.ppm");
    CHECK(out.at(5, 2) == default_palette()[0]);
    CHECK(out.at(0, 0) == Rgb{9, 9, 9});

    CHECK(run({"render-pose", "--image", p(d, "frame.ppm"), "--keypoints", p(d, "kp.json"), "--box", "50,50,60,60",
               "--out", p(d, "o2.ppm")})
              .code == 2);
}

TEST_CASE("fuse with explicit weights and with config weights")
{
    TempDir d;
    ScoreTable table;
    table["v0"]["video"]["ip_csn"] = {{"a", "b"}, {0.6, 0.4}};
    table["v0"]["video"]["ir_csn"] = {{"a", "b"}, {0.1, 0.9}};
    testutil::spit(d / "s.json", serialize_score_table(table));
    testutil::spit(d / "w.json", serialize_fusion_weights({{"video", {{"ip_csn", "ir_csn"}, {7.0, 1.0}}}}));
    REQUIRE(run({"fuse", "--scores", p(d, "s.json"), "--weights", p(d, "w.json"), "--out-labels", p(d, "o.json")})
                .code == 0);
    CHECK(testutil::slurp(d / "o.json").find("\"label\": \"a\"") != std::string::npos);

    // uniform weights: a sums to 0.7, b to 1.3
    REQUIRE(run({"fuse", "--scores", p(d, "s.json"), "--out-labels", p(d, "u.json")}).code == 0);
    CHECK(testutil::slurp(d / "u.json").find("\"label\": \"b\"") != std::string::npos);

    testutil::spit(d / "cfg.json", R"({"fusion": {"video": [{"model": "ip_csn", "weight": 7}, {"model": "ir_csn", "weight": 1}]}})");
    REQUIRE(run({"--config", p(d, "cfg.json"), "fuse", "--scores", p(d, "s.json"), "--out-labels", p(d, "c.json")})
                .code == 0);
    CHECK(testutil::slurp(d / "c.json") == testutil::slurp(d / "o.json"));

    testutil::spit(d / "w2.json", serialize_fusion_weights({{"video", {{"ip_csn", "other"}, {1.0, 1.0}}}}));
    CHECK(run({"fuse", "--scores", p(d, "s.json"), "--weights", p(d, "w2.json"), "--out-labels", p(d, "x.json")})
              .code == 2);
}

TEST_CASE("bad config is an input error")
{
    TempDir d;
    testutil::spit(d / "cfg.json", R"({"scoring": {"human_iou_thresh": 1.5}})");
    const auto r = run({"--config", p(d, "cfg.json"), "gen-synth", "--seed", "1", "--videos", "1", "--out",
                        p(d, "g.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("scoring.human_iou_thresh") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across reruns and job counts")
{
    TempDir d;
    testutil::spit(d / "c.json", R"({"state_flip_rate": 0.2, "box_jitter": 3, "drop_person_rate": 0.1})");
    for (const std::string run_id : {"1", "2"}) {
        const std::string jobs = run_id == "1" ? "1" : "3";
        const auto file = [&](const char* stem) { return (d / (stem + run_id + ".json")).string(); };
        REQUIRE(run({"--jobs", jobs, "gen-synth", "--seed", "42", "--videos", "25", "--out", file("g"), "--corrupt",
                     p(d, "c.json"), "--out-pred", file("p")})
                    .code == 0);
        REQUIRE(run({"--jobs", jobs, "score", "--gt", file("g"), "--pred", file("p"), "--report", file("s")}).code == 0);
    }
    CHECK(testutil::slurp(d / "g1.json") == testutil::slurp(d / "g2.json"));
    CHECK(testutil::slurp(d / "p1.json") == testutil::slurp(d / "p2.json"));
    CHECK(testutil::slurp(d / "s1.json") == testutil::slurp(d / "s2.json"));
    // no temp files left behind
    for (const auto& e : std::filesystem::directory_iterator(d.path()))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
}
