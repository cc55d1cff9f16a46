#include "uoan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uoan/error.hpp"
#include "uoan/rng.hpp"

namespace uoan {

Box Box::from_edges(const Vec3& e) { return Box{{-e.x / 2.0, -e.y / 2.0, -e.z}, {e.x / 2.0, e.y / 2.0, 0.0}}; }

bool Box::contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
}

Deployment sample_deployment(const GeometryConfig& cfg, std::uint64_t seed, std::uint64_t trial) {
    const auto& e = cfg.volume_edges;
    if (!(e.x > 0.0 && e.y > 0.0 && e.z > 0.0) || !is_finite(e))
        throw ConfigError("geometry.volume: every edge must be positive and finite");
    if (cfg.node_count < 1) throw ConfigError("geometry.node_count: must be >= 1");

    Deployment dep;
    dep.volume = cfg.volume();
    dep.sink = cfg.sink;
    if (!dep.volume.contains(dep.sink)) throw ConfigError("geometry.sink: must lie inside the volume");

    const auto draw = [&](SeededRng& rng) {
        const double x = rng.uniform(dep.volume.lo.x, dep.volume.hi.x);
        const double y = rng.uniform(dep.volume.lo.y, dep.volume.hi.y);
        const double z = rng.uniform(dep.volume.lo.z, dep.volume.hi.z);
        return Vec3{x, y, z};
    };

    auto node_rng = SeededRng::substream(seed, trial, Stream::nodes);
    dep.nodes.reserve(cfg.node_count);
    for (std::size_t i = 0; i < cfg.node_count; ++i) dep.nodes.push_back(draw(node_rng));

    auto anchor_rng = SeededRng::substream(seed, trial, Stream::anchors);
    dep.anchors.reserve(cfg.anchor_count);
    for (std::size_t i = 0; i < cfg.anchor_count; ++i) {
        Vec3 p = draw(anchor_rng);
        if (cfg.anchors_on_surface) p.z = dep.volume.hi.z;
        dep.anchors.push_back(p);
    }
    return dep;
}

FaceSet::FaceSet(std::vector<Vec3> boresights, double divergence_half_angle, double fov_half_angle)
    : boresights_(std::move(boresights)), soa_(boresights_), divergence_(divergence_half_angle), fov_(fov_half_angle) {
    const auto valid = [](double a) { return a > 0.0 && a <= std::numbers::pi / 2.0; };
    if (boresights_.empty()) throw DomainError("FaceSet: at least one face required");
    if (!valid(divergence_) || !valid(fov_)) throw DomainError("FaceSet: half-angles must lie in (0, pi/2]");
    for (const auto& b : boresights_) {
        if (std::abs(norm(b) - 1.0) > 1e-9) throw DomainError("FaceSet: boresights must be unit vectors");
    }
}

double equal_solid_angle_half_angle(std::size_t n_faces) {
    if (n_faces == 0) throw DomainError("n_faces must be >= 1");
    return std::acos(1.0 - 2.0 / static_cast<double>(n_faces));
}

namespace {

std::vector<Vec3> fibonacci_lattice(std::size_t n) {
    if (n == 1) return {{0.0, 0.0, 1.0}};
    if (n == 2) return {{0.0, 0.0, 1.0}, {0.0, 0.0, -1.0}};
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden_angle * static_cast<double>(i);
        out.push_back(normalized(Vec3{r * std::cos(phi), r * std::sin(phi), z}));
    }
    return out;
}

}  // namespace

FaceSet make_face_set(std::size_t n_faces, std::optional<double> override_angle) {
    if (n_faces == 0) throw DomainError("n_faces must be >= 1");
    double angle = 0.0;
    if (override_angle) {
        angle = *override_angle;
    } else {
        if (n_faces == 1)
            throw DomainError("n_faces = 1 needs an explicit half-angle (equal-solid-angle rule gives pi)");
        angle = equal_solid_angle_half_angle(n_faces);
    }
    if (!(angle > 0.0 && angle <= std::numbers::pi / 2.0))
        throw DomainError("face half-angle must lie in (0, pi/2], got " + std::to_string(angle));
    return FaceSet(fibonacci_lattice(n_faces), angle, angle);
}

LinkGeometry link_geometry(const Vec3& tx_pos, const FaceSet& tx_faces, const Vec3& rx_pos, const FaceSet& rx_faces) {
    LinkGeometry g;
    g.distance = distance(tx_pos, rx_pos);
    if (!(g.distance > 0.0)) throw DomainError("link_geometry: coincident endpoints");
    const Vec3 los = (rx_pos - tx_pos) / g.distance;

    thread_local std::vector<double> cosines;
    const auto angle_of = [](double c) { return std::acos(std::clamp(c, -1.0, 1.0)); };

    cosines.resize(std::max(tx_faces.size(), rx_faces.size()));
    simd::dot_batch(tx_faces.boresights_soa(), los, cosines);
    const auto best_tx = std::max_element(cosines.begin(), cosines.begin() + tx_faces.size());
    g.tx_face = static_cast<std::size_t>(best_tx - cosines.begin());
    g.tx_offaxis = angle_of(*best_tx);

    simd::dot_batch(rx_faces.boresights_soa(), -los, cosines);
    double best_rx = -2.0;
    for (std::size_t k = 0; k < rx_faces.size(); ++k) {
        best_rx = std::max(best_rx, cosines[k]);
        const double incidence = angle_of(cosines[k]);
        if (incidence <= rx_faces.fov_half_angle()) g.rx_faces_in_fov.push_back({k, incidence});
    }
    g.rx_incidence = angle_of(best_rx);
    g.in_beam = g.tx_offaxis <= tx_faces.divergence_half_angle() && !g.rx_faces_in_fov.empty();
    return g;
}

}  // namespace uoan
