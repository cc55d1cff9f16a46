#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uoan/acoustic.hpp"
#include "uoan/geometry.hpp"
#include "uoan/optical.hpp"

namespace uoan {

enum class Tech { optical, acoustic };
enum class RoutingMode { optical, acoustic, hybrid };

std::string_view to_string(Tech t);
std::string_view to_string(RoutingMode m);
std::optional<Tech> parse_tech(std::string_view s);
std::optional<RoutingMode> parse_routing_mode(std::string_view s);

using NodeId = std::size_t;

struct Edge {
    NodeId src;
    NodeId dst;
    double capacity_bps;
    double ber;
    Tech tech;
};

/// Directed multigraph of feasible links. Optical and acoustic edges between the same pair may
/// coexist in hybrid mode.
class NetworkGraph {
public:
    NetworkGraph(std::vector<Vec3> positions, NodeId sink);

    /// Throws DomainError for self-loops, unknown ids, or non-positive capacity.
    void add_edge(const Edge& e);

    std::size_t node_count() const { return positions_.size(); }
    NodeId sink() const { return sink_; }
    std::span<const Vec3> positions() const { return positions_; }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const std::size_t> out_edges(NodeId v) const { return out_[v]; }
    std::span<const std::size_t> in_edges(NodeId v) const { return in_[v]; }

private:
    std::vector<Vec3> positions_;
    NodeId sink_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

/// Node ids 0..n-1 are the deployment's nodes; the sink is id n. Anchors are not part of the
/// routing graph. Throws ConfigError when `mode` needs acoustic parameters that are absent.
NetworkGraph build_graph(const Deployment& dep, const FaceSet& faces, const OpticalParams& opt, const Water& water,
                         const std::optional<AcousticParams>& aco, RoutingMode mode);

struct PathResult {
    std::vector<NodeId> path;
    double bottleneck_rate;
};

/// Maximum-bottleneck path. Ties go to fewer hops, then the lexicographically smallest id
/// sequence. nullopt when dst is unreachable; throws DomainError for unknown ids.
std::optional<PathResult> widest_path(const NetworkGraph& g, NodeId src, NodeId dst);

/// Bottleneck rate from every non-sink node to `sink` (one reverse max-min Dijkstra pass).
/// Unreachable nodes map to 0.
std::map<NodeId, double> e2e_rates(const NetworkGraph& g, NodeId sink);

/// True iff every rate is >= threshold (closed inequality).
bool is_connected(const std::map<NodeId, double>& rates, double threshold_bps);

}  // namespace uoan
