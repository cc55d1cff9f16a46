#include <doctest.h>

#include <json.hpp>

#include "uoan/error.hpp"
#include "uoan/experiment.hpp"
#include "uoan/graph_io.hpp"

using namespace uoan;

TEST_CASE("graph json: round trip reproduces widest paths") {
    ExperimentConfig cfg;
    cfg.water_type = WaterType::pure_sea;
    cfg.routing.mode = RoutingMode::hybrid;
    const std::string text = trial_graph_json(cfg, 3);
    const NetworkGraph g = graph_from_json(text);

    const auto dep = sample_deployment(cfg.geometry, cfg.seed, 3);
    const auto ref = build_graph(dep, cfg.face_set(), cfg.optical, cfg.water(), cfg.acoustic, cfg.routing.mode);
    REQUIRE(g.node_count() == ref.node_count());
    REQUIRE(g.edges().size() == ref.edges().size());
    CHECK(g.sink() == ref.sink());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto a = widest_path(g, v, g.sink());
        const auto b = widest_path(ref, v, ref.sink());
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            CHECK(a->path == b->path);
            CHECK(a->bottleneck_rate == b->bottleneck_rate);
        }
    }
    // Re-export is byte-identical.
    CHECK(trial_graph_json(cfg, 3) == text);
}

TEST_CASE("graph json: schema, tech tags and positions") {
    ExperimentConfig cfg;
    cfg.water_type = WaterType::pure_sea;
    cfg.routing.mode = RoutingMode::hybrid;
    const auto j = nlohmann::json::parse(trial_graph_json(cfg, 0));
    CHECK(j.at("meta").at("trial") == 0);
    CHECK(j.at("nodes").size() == cfg.geometry.node_count + 1);
    CHECK(j.at("sink") == cfg.geometry.node_count);
    const auto dep = sample_deployment(cfg.geometry, cfg.seed, 0);
    CHECK(j.at("nodes")[0].at("position")[0].get<double>() == dep.nodes[0].x);
    CHECK(j.at("nodes")[cfg.geometry.node_count].at("role") == "sink");
    bool saw_optical = false, saw_acoustic = false;
    for (const auto& e : j.at("edges")) {
        const auto tech = e.at("tech").get<std::string>();
        CHECK((tech == "optical" || tech == "acoustic"));
        saw_optical |= tech == "optical";
        saw_acoustic |= tech == "acoustic";
        CHECK(e.at("capacity_bps").get<double>() > 0.0);
        CHECK(e.contains("ber"));
    }
    CHECK(saw_optical);
    CHECK(saw_acoustic);
}

TEST_CASE("graph json: sparse harbor deployment has zero optical edges") {
    ExperimentConfig cfg;
    cfg.water_type = WaterType::harbor;
    cfg.geometry.node_count = 5;
    const auto j = nlohmann::json::parse(trial_graph_json(cfg, 0));
    CHECK(j.at("edges").is_array());
    CHECK(j.at("edges").empty());
    const NetworkGraph g = graph_from_json(j.dump());
    CHECK(g.edges().empty());
    CHECK(e2e_rates(g, g.sink()).at(0) == 0.0);
}

TEST_CASE("graph json: schema violations") {
    CHECK_THROWS_AS(graph_from_json("not json"), DomainError);
    CHECK_THROWS_AS(graph_from_json(R"({"sink": 0})"), DomainError);
    CHECK_THROWS_AS(graph_from_json(
                        R"({"sink": 1, "nodes": [{"id": 0, "position": [0,0,0]}, {"id": 1, "position": [1,0,0]}],
                            "edges": [{"src": 0, "dst": 0, "capacity_bps": 1, "ber": 0, "tech": "optical"}]})"),
                    DomainError);
    CHECK_THROWS_AS(graph_from_json(
                        R"({"sink": 1, "nodes": [{"id": 0, "position": [0,0,0]}, {"id": 1, "position": [1,0,0]}],
                            "edges": [{"src": 0, "dst": 1, "capacity_bps": 1, "ber": 0, "tech": "radio"}]})"),
                    DomainError);
}
