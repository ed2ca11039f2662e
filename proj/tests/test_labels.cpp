#include "doctest.h"

#include "ppk/errors.hpp"
#include "ppk/labels.hpp"
#include "ppk/synthgen.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace ppk;
using testutil::part;

namespace {

/// One person per frame carrying the given (raw part, state) pairs.
VideoAnnotation video_of(std::string id, std::string action,
                         const std::vector<std::vector<std::pair<std::string, std::string>>>& frames)
{
    VideoAnnotation v{std::move(id), std::move(action), {}};
    std::uint64_t fid = 0;
    for (const auto& f : frames) {
        PersonInstance p{{0, 0, 100, 100}, 1.0, {}};
        for (const auto& [name, state] : f)
            p.parts.push_back(part(name, {0, 0, 10, 10}, state));
        v.frames.push_back({fid++, {p}});
    }
    return v;
}

/// `n_major` heads in `major` and the rest in `minor`, one head per frame.
VideoAnnotation head_corpus(std::string id, std::size_t n_major, std::size_t n_total, std::string major,
                            std::string minor)
{
    std::vector<std::vector<std::pair<std::string, std::string>>> frames;
    for (std::size_t i = 0; i < n_total; ++i)
        frames.push_back({{"head", i < n_major ? major : minor}});
    return video_of(std::move(id), "capoeira", frames);
}

}  // namespace

TEST_CASE("label string for the belly dancing scenario")
{
    const auto v = video_of("v", "belly_dancing", {{{"head", "none"}}, {{"head", "none"}}, {{"head", "shake"}}});
    const auto labels = derive_video_labels(v, default_taxonomy());
    REQUIRE(labels.size() == 6);
    CHECK(labels[0].label_string() == "belly_dancing_Head_none");
    CHECK(labels[3].label_string() == "belly_dancing_Hip_none");
}

TEST_CASE("label strings parse back despite underscores in action names")
{
    const Taxonomy& t = default_taxonomy();
    const PartLevelLabel l{"belly_dancing", "Head", "none"};
    CHECK(parse_label_string(l.label_string(), t) == l);
    const PartLevelLabel m{"dribbling_basketball", "Hand", "press"};
    CHECK(parse_label_string(m.label_string(), t) == m);
    CHECK_THROWS_AS(parse_label_string("belly_dancing_Wing_none", t), TaxonomyError);
}

TEST_CASE("one label per group, stable under instance order")
{
    const Taxonomy& t = default_taxonomy();
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<std::pair<std::string, std::string>>> frames;
        std::vector<std::string> head_states;
        std::uniform_int_distribution<std::size_t> st(0, 3);
        for (int f = 0; f < 200; ++f) {
            const std::string s = t.part_states[st(rng)];
            head_states.push_back(s);
            frames.push_back({{"head", s}});
        }
        auto v = video_of("v", "capoeira", frames);
        const auto labels = derive_video_labels(v, t);
        REQUIRE(labels.size() == t.part_groups.size());
        CHECK(labels[0].state == oracle::modal_name(head_states, t.part_states, "none"));
        std::shuffle(v.frames.begin(), v.frames.end(), rng);
        CHECK(derive_video_labels(v, t) == labels);
    }
}

TEST_CASE("histogram modal ties go to the earlier state")
{
    StateHistogram h(5);
    CHECK(h.modal(4) == 4);
    h.add(3, 2);
    h.add(1, 2);
    CHECK(h.modal(0) == 1);
    StateHistogram g(5);
    g.add(3);
    h.merge(g);
    CHECK(h.modal(0) == 3);
    CHECK(h.total() == 5);
}

TEST_CASE("long-tail shares")
{
    const Taxonomy& t = default_taxonomy();
    SUBCASE("193 of 200")
    {
        const auto r = long_tail_report({head_corpus("a", 193, 200, "none", "shake")}, t);
        const auto* row = r.find("capoeira", "Head");
        REQUIRE(row != nullptr);
        CHECK(row->modal_state == "none");
        CHECK(row->modal_count == 193);
        CHECK(row->total == 200);
        CHECK(row->share == doctest::Approx(0.965).epsilon(1e-12));
        const auto* hip = r.find("capoeira", "Hip");
        REQUIRE(hip != nullptr);
        CHECK(hip->total == 0);
        CHECK(hip->share == 1.0);
    }
    SUBCASE("single state")
    {
        const auto r = long_tail_report({head_corpus("a", 10, 10, "nod", "nod")}, t);
        CHECK(r.find("capoeira", "Head")->share == 1.0);
    }
    SUBCASE("even split")
    {
        const auto r = long_tail_report({head_corpus("a", 4, 8, "nod", "shake")}, t);
        CHECK(r.find("capoeira", "Head")->share == 0.5);
    }
    SUBCASE("pooled over videos of the same action, actions absent from the corpus omitted")
    {
        const auto r = long_tail_report({head_corpus("a", 3, 4, "nod", "shake"), head_corpus("b", 0, 4, "nod", "shake")}, t);
        CHECK(r.find("capoeira", "Head")->modal_state == "shake");
        CHECK(r.find("capoeira", "Head")->share == doctest::Approx(5.0 / 8.0));
        CHECK(r.find("belly_dancing", "Head") == nullptr);
    }
}

TEST_CASE("long-tail table text")
{
    const auto r = long_tail_report({head_corpus("a", 193, 200, "none", "shake")}, default_taxonomy());
    const std::string text = format_long_tail(r, ',');
    CHECK(text.rfind("video_action,group,modal_state,modal_count,total,share\n", 0) == 0);
    CHECK(text.find("capoeira,Head,none,193,200,0.965\n") != std::string::npos);
}

TEST_CASE("baseline predicts the per-action modal hip state")
{
    Taxonomy t = default_taxonomy();
    t.name = "custom";
    t.video_actions.push_back("belly_dance");
    REQUIRE_NOTHROW(t.check());
    REQUIRE(t.has_state("turn"));

    std::vector<VideoAnnotation> train;
    train.push_back(video_of("a", "belly_dance", {{{"hip", "turn"}}, {{"hip", "turn"}}, {{"hip", "none"}}}));
    train.push_back(video_of("b", "belly_dance", {{{"hip", "turn"}, {"head", "none"}}}));
    train.push_back(video_of("c", "capoeira", {{{"hip", "none"}}, {{"hip", "none"}}, {{"hip", "none"}}, {{"hip", "none"}}}));

    auto target = video_of("t", "belly_dance", {{{"hip", "none"}, {"head", "shake"}}, {{"hip", "none"}}});
    const auto pred = baseline_predict(train, target, t);
    for (const auto& f : pred.frames)
        for (const auto& p : f.persons)
            for (const auto& pi : p.parts)
                if (pi.part == "hip")
                    CHECK(pi.state == "turn");
    CHECK(pred.frames[0].persons[0].parts[1].state == "none");

    // unseen action falls back to the group's pooled mode
    const BaselineModel model(train, t);
    CHECK(model.state_for("skiing", "Hip") == "none");
    CHECK(model.state_for("belly_dance", "Foot") == "none");
}

TEST_CASE("baseline on its own training data scores the long-tail share per cell")
{
    const Taxonomy& t = default_taxonomy();
    const auto corpus = generate(4, 60, t, {3, 2, 0.7});
    const BaselineModel model(corpus, t);
    const auto report = long_tail_report(corpus, t);
    std::map<std::pair<std::string, std::string>, std::pair<std::uint64_t, std::uint64_t>> hits;
    for (const auto& v : corpus) {
        const auto pred = model.predict(v);
        for (std::size_t f = 0; f < v.frames.size(); ++f)
            for (std::size_t p = 0; p < v.frames[f].persons.size(); ++p)
                for (std::size_t k = 0; k < v.frames[f].persons[p].parts.size(); ++k) {
                    const auto& gt = v.frames[f].persons[p].parts[k];
                    auto& h = hits[{v.action, t.group_of(gt.part)}];
                    h.first += pred.frames[f].persons[p].parts[k].state == gt.state;
                    ++h.second;
                }
    }
    for (const auto& [key, h] : hits) {
        const auto* row = report.find(key.first, key.second);
        REQUIRE(row != nullptr);
        CHECK(static_cast<double>(h.first) / static_cast<double>(h.second) == row->share);
    }
}

TEST_CASE("invert labels")
{
    const Taxonomy& t = default_taxonomy();
    auto v = video_of("v", "capoeira", {{{"head", "nod"}, {"left_hand", "wave"}}, {{"hip", "turn"}}});
    SUBCASE("constant stamp")
    {
        std::vector<PartLevelLabel> labels;
        for (const auto& g : t.part_groups)
            labels.push_back({"capoeira", g, "none"});
        const auto out = invert_labels(labels, v, t);
        for (const auto& f : out.frames)
            for (const auto& p : f.persons)
                for (const auto& pi : p.parts)
                    CHECK(pi.state == "none");
    }
    SUBCASE("fixed point on single-state groups")
    {
        CHECK(invert_labels(derive_video_labels(v, t), v, t) == v);
    }
    SUBCASE("missing group")
    {
        std::vector<PartLevelLabel> labels{{"capoeira", "Head", "none"}, {"capoeira", "Hand", "none"}};
        CHECK_THROWS_AS(invert_labels(labels, v, t), MissingGroupError);
    }
}

TEST_CASE("video label records round-trip")
{
    const Taxonomy& t = default_taxonomy();
    const auto v = video_of("v9", "belly_dancing", {{{"head", "none"}}});
    const std::vector<VideoLabels> recs{{"v9", derive_video_labels(v, t)}};
    const std::string text = serialize_video_labels(recs);
    CHECK(text.find("\"label\": \"belly_dancing_Head_none\"") != std::string::npos);
    CHECK(parse_video_labels(text, t) == recs);
}
