#include "uoan/graph_io.hpp"

#include <json.hpp>

#include "uoan/error.hpp"

namespace uoan {

using nlohmann::json;

std::string graph_to_json(const NetworkGraph& g, const GraphMeta& meta) {
    json doc;
    doc["meta"] = {{"seed", meta.seed},
                   {"trial", meta.trial},
                   {"mode", meta.mode},
                   {"water_type", meta.water_type},
                   {"n_faces", meta.n_faces},
                   {"divergence_rad", meta.divergence_rad}};
    doc["sink"] = g.sink();
    json nodes = json::array();
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& p = g.positions()[v];
        nodes.push_back({{"id", v}, {"role", v == g.sink() ? "sink" : "node"}, {"position", {p.x, p.y, p.z}}});
    }
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& e : g.edges()) {
        edges.push_back({{"src", e.src},
                         {"dst", e.dst},
                         {"capacity_bps", e.capacity_bps},
                         {"ber", e.ber},
                         {"tech", std::string(to_string(e.tech))}});
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

NetworkGraph graph_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        const auto& nodes = doc.at("nodes");
        std::vector<Vec3> positions(nodes.size());
        std::vector<bool> seen(nodes.size(), false);
        for (const auto& n : nodes) {
            const auto id = n.at("id").get<NodeId>();
            if (id >= positions.size() || seen[id]) throw DomainError("graph JSON: node ids must be 0..n-1, unique");
            const auto& p = n.at("position");
            positions[id] = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
            seen[id] = true;
        }
        NetworkGraph g(std::move(positions), doc.at("sink").get<NodeId>());
        for (const auto& e : doc.at("edges")) {
            const auto tech = parse_tech(e.at("tech").get<std::string>());
            if (!tech) throw DomainError("graph JSON: unknown tech tag");
            g.add_edge({e.at("src").get<NodeId>(), e.at("dst").get<NodeId>(), e.at("capacity_bps").get<double>(),
                        e.at("ber").get<double>(), *tech});
        }
        return g;
    } catch (const json::exception& ex) {
        throw DomainError(std::string("graph JSON: ") + ex.what());
    }
}

}  // namespace uoan
