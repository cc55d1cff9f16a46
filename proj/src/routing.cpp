#include "uoan/routing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <string>

#include "uoan/error.hpp"

namespace uoan {

std::string_view to_string(Tech t) { return t == Tech::optical ? "optical" : "acoustic"; }

std::string_view to_string(RoutingMode m) {
    switch (m) {
        case RoutingMode::optical:
            return "optical";
        case RoutingMode::acoustic:
            return "acoustic";
        case RoutingMode::hybrid:
            return "hybrid";
    }
    return "unknown";
}

std::optional<Tech> parse_tech(std::string_view s) {
    if (s == "optical") return Tech::optical;
    if (s == "acoustic") return Tech::acoustic;
    return std::nullopt;
}

std::optional<RoutingMode> parse_routing_mode(std::string_view s) {
    for (auto m : {RoutingMode::optical, RoutingMode::acoustic, RoutingMode::hybrid}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

NetworkGraph::NetworkGraph(std::vector<Vec3> positions, NodeId sink)
    : positions_(std::move(positions)), sink_(sink), out_(positions_.size()), in_(positions_.size()) {
    if (sink_ >= positions_.size()) throw DomainError("NetworkGraph: sink id out of range");
}

void NetworkGraph::add_edge(const Edge& e) {
    if (e.src >= node_count() || e.dst >= node_count()) throw DomainError("add_edge: unknown node id");
    if (e.src == e.dst) throw DomainError("add_edge: self-loop");
    if (!(e.capacity_bps > 0.0)) throw DomainError("add_edge: capacity must be positive");
    out_[e.src].push_back(edges_.size());
    in_[e.dst].push_back(edges_.size());
    edges_.push_back(e);
}

NetworkGraph build_graph(const Deployment& dep, const FaceSet& faces, const OpticalParams& opt, const Water& water,
                         const std::optional<AcousticParams>& aco, RoutingMode mode) {
    const bool want_optical = mode != RoutingMode::acoustic;
    const bool want_acoustic = mode != RoutingMode::optical;
    if (want_acoustic && !aco) throw ConfigError("routing.mode: '" + std::string(to_string(mode)) +
                                                 "' requires the [acoustic] section");
    if (want_optical) opt.validate();
    if (want_acoustic) aco->validate();

    std::vector<Vec3> positions = dep.nodes;
    positions.push_back(dep.sink);
    const NodeId sink = dep.nodes.size();
    NetworkGraph g(positions, sink);

    const simd::Soa3 soa(positions);
    std::vector<double> dist(positions.size());
    for (NodeId u = 0; u < positions.size(); ++u) {
        simd::distance_batch(soa.view(), positions[u], dist);
        for (NodeId v = 0; v < positions.size(); ++v) {
            if (u == v) continue;
            if (want_optical) {
                const auto geom = link_geometry(positions[u], faces, positions[v], faces);
                if (geom.in_beam) {
                    const double pr = optical::received_power(geom, faces, opt, water);
                    const double cap = optical::capacity(pr, opt);
                    if (cap > 0.0) g.add_edge({u, v, cap, optical::ber(pr, opt), Tech::optical});
                }
            }
            if (want_acoustic && dist[v] >= 1.0) {
                const double cap = acoustic::capacity(dist[v], *aco);
                if (cap > 0.0) g.add_edge({u, v, cap, acoustic::ber(dist[v], *aco), Tech::acoustic});
            }
        }
    }
    return g;
}

namespace {

void check_id(const NetworkGraph& g, NodeId v) {
    if (v >= g.node_count()) throw DomainError("unknown node id " + std::to_string(v));
}

// best[v] = max over paths of the min edge capacity, searching forward from `root` along out-edges
// or backward along in-edges.
std::vector<double> max_min_dijkstra(const NetworkGraph& g, NodeId root, bool reverse) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(g.node_count(), 0.0);
    std::vector<bool> done(g.node_count(), false);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item> heap;
    best[root] = inf;
    heap.push({inf, root});
    while (!heap.empty()) {
        const auto [b, v] = heap.top();
        heap.pop();
        if (done[v]) continue;
        done[v] = true;
        const auto incident = reverse ? g.in_edges(v) : g.out_edges(v);
        for (const auto idx : incident) {
            const Edge& e = g.edges()[idx];
            const NodeId w = reverse ? e.src : e.dst;
            const double nb = std::min(b, e.capacity_bps);
            if (nb > best[w]) {
                best[w] = nb;
                heap.push({nb, w});
            }
        }
    }
    return best;
}

}  // namespace

std::optional<PathResult> widest_path(const NetworkGraph& g, NodeId src, NodeId dst) {
    check_id(g, src);
    check_id(g, dst);
    if (src == dst) return PathResult{{src}, std::numeric_limits<double>::infinity()};

    const auto best = max_min_dijkstra(g, src, false);
    const double bottleneck = best[dst];
    if (!(bottleneck > 0.0)) return std::nullopt;

    // Every path using only edges >= bottleneck is optimal; pick the fewest hops, then the
    // lexicographically smallest sequence, via BFS distances to dst and a greedy walk from src.
    constexpr std::size_t unreached = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> hops(g.node_count(), unreached);
    std::deque<NodeId> queue{dst};
    hops[dst] = 0;
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        for (const auto idx : g.in_edges(v)) {
            const Edge& e = g.edges()[idx];
            if (e.capacity_bps >= bottleneck && hops[e.src] == unreached) {
                hops[e.src] = hops[v] + 1;
                queue.push_back(e.src);
            }
        }
    }

    PathResult result{{src}, bottleneck};
    NodeId v = src;
    while (v != dst) {
        NodeId next = unreached;
        for (const auto idx : g.out_edges(v)) {
            const Edge& e = g.edges()[idx];
            if (e.capacity_bps >= bottleneck && hops[e.dst] != unreached && hops[e.dst] + 1 == hops[v]) next = std::min(next, e.dst);
        }
        v = next;
        result.path.push_back(v);
    }
    return result;
}

std::map<NodeId, double> e2e_rates(const NetworkGraph& g, NodeId sink) {
    check_id(g, sink);
    const auto best = max_min_dijkstra(g, sink, true);
    std::map<NodeId, double> rates;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v != sink) rates.emplace(v, best[v]);
    }
    return rates;
}

bool is_connected(const std::map<NodeId, double>& rates, double threshold_bps) {
    return std::all_of(rates.begin(), rates.end(), [&](const auto& kv) { return kv.second >= threshold_bps; });
}

}  // namespace uoan
