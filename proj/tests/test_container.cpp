#include "semsig/container.hpp"

#include "oracles.hpp"
#include "semsig/adjacency.hpp"
#include "semsig/formats.hpp"
#include "semsig/tcq.hpp"

#include <doctest.h>

#include <sstream>

using namespace semsig;
using namespace semsig::testing;

namespace {

AttributeSet sample_attributes(const InstanceGraph& g, Rng& rng, int feature_dim) {
    AttributeSet attrs;
    for (const auto& c : g.components) {
        std::vector<AttributeLevel> levels;
        RealVector state;
        for (int i = 0; i < 8; ++i) state.values.push_back(rng.uniform(-200.0, 200.0));
        levels.push_back(std::move(state));
        if (rng.uniform() < 0.7) {
            RealVector feat;
            for (int i = 0; i < feature_dim; ++i) feat.values.push_back(rng.uniform(-1.0, 1.0));
            levels.push_back(std::move(feat));
        }
        if (rng.uniform() < 0.5) {
            Blob b;
            int n = 1 + static_cast<int>(rng.integer(32));
            for (int i = 0; i < n; ++i)
                b.bytes.push_back(static_cast<std::uint8_t>(rng.integer(256)));
            levels.push_back(std::move(b));
        }
        attrs[component_key(c)] = std::move(levels);
    }
    for (const auto& p : g.predicates) {
        if (p.class_id == 0) continue;
        if (rng.uniform() < 0.5)
            attrs[predicate_key(p)] = {TimeAmplitude{static_cast<std::int64_t>(rng.integer(1000)),
                                                     rng.uniform(-3.0, 3.0)}};
    }
    return attrs;
}

} // namespace

TEST_CASE("adjacency codec: empty and minimal graphs round-trip") {
    auto reg = goal_test_registry();
    GraphCodec codec(reg);

    InstanceGraph empty;
    BitString bits = adjacency_encode(empty, codec);
    CHECK(adjacency_decode_instance(bits, codec) == empty);

    InstanceGraph minimal;
    minimal.t = 3;
    minimal.add_edge({{1, 1}, {0, 1}, std::nullopt});
    bits = adjacency_encode(minimal, codec);
    CHECK(adjacency_decode_instance(bits, codec) == minimal);

    // bit-exact determinism
    CHECK(adjacency_encode(minimal, codec) == bits);
}

TEST_CASE("adjacency codec: random graphs round-trip bit-exactly") {
    auto reg = goal_test_registry();
    GraphCodec codec(reg);
    Rng rng(55);
    for (int trial = 0; trial < 400; ++trial) {
        InstanceGraph g = random_instance_graph(rng, 12);
        g.t = static_cast<std::int64_t>(rng.integer(100000));
        BitString bits = adjacency_encode(g, codec);
        InstanceGraph back = adjacency_decode_instance(bits, codec);
        CHECK(back == g);
        CHECK(adjacency_encode(back, codec) == bits);

        ClassGraph s = abstract_graph(g);
        BitString sbits = adjacency_encode(s, codec);
        CHECK(adjacency_decode_class(sbits, codec) == s);
    }
}

TEST_CASE("adjacency codec: truncated stream raises") {
    auto reg = goal_test_registry();
    GraphCodec codec(reg);
    InstanceGraph g;
    g.add_edge({{1, 1}, {1, 1}, InstanceRef{2, 1}});
    BitString bits = adjacency_encode(g, codec);
    bits.bit_count /= 2;
    CHECK_THROWS_AS(adjacency_decode_instance(bits, codec), std::runtime_error);
}

TEST_CASE("sgx1 container round-trips graphs exactly and attributes to the encoder reproduction") {
    auto reg = goal_test_registry();
    Rng rng(808);
    CodecConfig cfg;
    cfg.tcq_bits = 2;
    cfg.tcq_min_dim = 16;

    std::vector<SemanticDescription> frames;
    for (int f = 0; f < 5; ++f) {
        InstanceGraph g = random_instance_graph(rng, 8);
        g.t = f;
        AttributeSet attrs = sample_attributes(g, rng, 24);
        SemanticDescription y = make_description(g, attrs);
        y.t = f;
        frames.push_back(y);
    }

    auto bytes = sgx1_encode(frames, reg, cfg);
    auto back = sgx1_decode(bytes, reg);
    REQUIRE(back.size() == frames.size());

    TrellisSpec spec = TrellisSpec::preset(cfg.tcq_bits);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        CHECK(back[f].t == frames[f].t);
        REQUIRE(back[f].atom_count() == frames[f].atom_count());
        for (std::size_t a = 0; a < frames[f].atom_count(); ++a) {
            CHECK(back[f].instance_graphs[a] == frames[f].instance_graphs[a]);
            CHECK(back[f].class_graphs[a] == frames[f].class_graphs[a]);
            // attribute levels: raw levels identical, TCQ levels equal the
            // encoder-side reproduction
            REQUIRE(back[f].attributes[a].size() == frames[f].attributes[a].size());
            for (const auto& [key, levels] : frames[f].attributes[a]) {
                const auto& got = back[f].attributes[a].at(key);
                REQUIRE(got.size() == levels.size());
                for (std::size_t l = 0; l < levels.size(); ++l) {
                    const auto* vec = std::get_if<RealVector>(&levels[l]);
                    if (vec && vec->values.size() >= cfg.tcq_min_dim) {
                        std::vector<double> unit(vec->values.size());
                        for (std::size_t i = 0; i < unit.size(); ++i)
                            unit[i] = (vec->values[i] + 1.0) * 0.5;
                        auto repro = tcq_reproduce(unit, spec, cfg.metric);
                        const auto& got_vec = std::get<RealVector>(got[l]);
                        REQUIRE(got_vec.values.size() == repro.size());
                        for (std::size_t i = 0; i < repro.size(); ++i)
                            CHECK(got_vec.values[i] == 2.0 * repro[i] - 1.0);
                    } else {
                        CHECK(got[l] == levels[l]);
                    }
                }
            }
        }
    }

    // determinism
    CHECK(sgx1_encode(frames, reg, cfg) == bytes);
}

TEST_CASE("sgx1 rejects foreign registries and corrupt headers") {
    auto reg = goal_test_registry();
    std::vector<SemanticDescription> frames(1);
    auto bytes = sgx1_encode(frames, reg, {});

    auto other = default_video_registry();
    CHECK_THROWS_AS(sgx1_decode(bytes, other), std::runtime_error);

    auto corrupt = bytes;
    corrupt[0] = 'X';
    CHECK_THROWS_AS(sgx1_decode(corrupt, reg), std::runtime_error);
    corrupt = bytes;
    corrupt[4] = 9;
    CHECK_THROWS_AS(sgx1_decode(corrupt, reg), std::runtime_error);
    corrupt = bytes;
    corrupt.resize(10);
    CHECK_THROWS_AS(sgx1_decode(corrupt, reg), std::runtime_error);
}

TEST_CASE("graphs-only container drops attribute payloads") {
    auto reg = goal_test_registry();
    Rng rng(99);
    InstanceGraph g = random_instance_graph(rng, 8);
    AttributeSet attrs = sample_attributes(g, rng, 64);
    SemanticDescription y = make_description(g, attrs);

    CodecConfig with;
    CodecConfig without;
    without.include_attributes = false;
    std::uint64_t bits_with = sgx1_frame_bits(y, reg, with);
    std::uint64_t bits_without = sgx1_frame_bits(y, reg, without);
    CHECK(bits_without < bits_with);

    auto back = sgx1_decode(sgx1_encode({y}, reg, without), reg);
    REQUIRE(back.size() == 1);
    CHECK(back[0].instance_graphs == y.instance_graphs);
    for (const auto& a : back[0].attributes) CHECK(a.empty());
}

TEST_CASE("base64 round-trip") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> bytes;
        int n = static_cast<int>(rng.integer(40));
        for (int i = 0; i < n; ++i)
            bytes.push_back(static_cast<std::uint8_t>(rng.integer(256)));
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
    CHECK_THROWS_AS(base64_decode("a!"), std::runtime_error);
}

TEST_CASE("registry json round-trip with frequencies") {
    auto reg = default_video_registry();
    std::string text = registry_to_json(reg);
    std::istringstream in(text);
    ClassRegistry back = read_registry_json(in);
    CHECK(back.digest() == reg.digest());
    CHECK(back.component_count() == reg.component_count());
    CHECK(*back.component_id("remote") == 6);

    std::istringstream freq_in(R"({
        "components": [{"id": 1, "name": "person"}],
        "predicates": [{"id": 0, "name": "null", "kind": "state"}],
        "frequencies": {"components": {"person": 9.5}}
    })");
    ClassRegistry with_freq = read_registry_json(freq_in);
    CHECK(with_freq.component_frequencies().at(1) == doctest::Approx(9.5));

    std::istringstream bad(R"({"components": [], "predicates": []})");
    CHECK_THROWS(read_registry_json(bad));
}

TEST_CASE("goal json round-trip") {
    auto reg = goal_test_registry();
    std::istringstream in(R"({
        "class_pattern": {"components": [2], "predicates": [1], "edges": [[2, 1, null]]},
        "instance_pattern": {
            "components": [{"class": 1, "k": 2}, {"class": 3}],
            "predicates": [{"class": 1}],
            "edges": [[0, 0, 1]]
        },
        "l_g": [0, 1],
        "l_a": [2, null]
    })");
    GoalQuery q = read_goal_json(in, reg);
    REQUIRE(q.class_pattern);
    REQUIRE(q.instance_pattern);
    CHECK(q.instance_pattern->components[0].pinned_index == 2);
    CHECK(!q.instance_pattern->components[1].pinned_index);
    CHECK(q.attribute_complexity[1] == GoalQuery::unlimited);

    std::istringstream back(goal_to_json(q));
    GoalQuery q2 = read_goal_json(back, reg);
    CHECK(q2.class_pattern == q.class_pattern);
    CHECK(q2.instance_pattern == q.instance_pattern);
    CHECK(q2.graph_complexity == q.graph_complexity);
    CHECK(q2.attribute_complexity == q.attribute_complexity);

    std::istringstream invalid(R"({"l_g": [], "l_a": []})");
    CHECK_THROWS(read_goal_json(invalid, reg));
}

TEST_CASE("detection stream jsonl round-trip") {
    auto reg = default_video_registry();
    std::vector<Detection> dets;
    Detection d;
    d.frame = 0;
    d.track_id = 3;
    d.class_id = 1;
    d.bbox = {10.5, 20.25, 30.0, 40.0};
    d.velocity = std::array<double, 4>{1.0, -2.0, 0.0, 0.0};
    d.feature = std::vector<double>{0.6, 0.8};
    d.crop = std::vector<std::uint8_t>{9, 8, 7};
    dets.push_back(d);
    Detection e;
    e.frame = 1;
    e.track_id = 4;
    e.class_id = 6;
    e.bbox = {1, 2, 3, 4};
    dets.push_back(e);

    std::ostringstream out;
    write_detections_jsonl(out, dets, reg);
    std::istringstream in(out.str());
    auto back = read_detections_jsonl(in, reg);
    REQUIRE(back.size() == 2);
    CHECK(back[0].bbox == dets[0].bbox);
    CHECK(back[0].feature == dets[0].feature);
    CHECK(back[0].crop == dets[0].crop);
    CHECK(back[1].class_id == 6);
    CHECK(!back[1].feature);

    std::istringstream unknown(R"({"frame":0,"id":1,"class":"alien","bbox":[1,2,3,4]})");
    CHECK_THROWS(read_detections_jsonl(unknown, reg));

    std::istringstream regress(
        "{\"frame\":5,\"id\":1,\"class\":\"person\",\"bbox\":[1,2,3,4]}\n"
        "{\"frame\":4,\"id\":1,\"class\":\"person\",\"bbox\":[1,2,3,4]}\n");
    CHECK_THROWS(read_detections_jsonl(regress, reg));
}

TEST_CASE("description json round-trip") {
    auto reg = goal_test_registry();
    Rng rng(42);
    std::vector<SemanticDescription> frames;
    for (int f = 0; f < 3; ++f) {
        InstanceGraph g = random_instance_graph(rng, 6);
        g.t = f;
        AttributeSet attrs = sample_attributes(g, rng, 8);
        SemanticDescription y = make_description(g, attrs);
        y.t = f;
        frames.push_back(y);
    }
    std::string text = descriptions_to_json(frames);
    std::istringstream in(text);
    auto back = read_descriptions_json(in);
    REQUIRE(back.size() == frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) CHECK(back[i] == frames[i]);
}
