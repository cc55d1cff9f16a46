#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "uoan/routing.hpp"

namespace uoan {

/// Context echoed into exported graphs; informational only.
struct GraphMeta {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::string mode;
    std::string water_type;
    std::size_t n_faces = 0;
    double divergence_rad = 0.0;
};

/// {"meta": {...}, "sink": id, "nodes": [{"id", "role", "position": [x,y,z]}],
///  "edges": [{"src", "dst", "capacity_bps", "ber", "tech"}]}
std::string graph_to_json(const NetworkGraph& g, const GraphMeta& meta);

/// Inverse of graph_to_json (meta is ignored). Throws DomainError on schema violations.
NetworkGraph graph_from_json(std::string_view text);

}  // namespace uoan
