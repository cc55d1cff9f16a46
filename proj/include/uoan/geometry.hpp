#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uoan/simd.hpp"
#include "uoan/vec3.hpp"

namespace uoan {

/// Axis-aligned box in meters.
struct Box {
    Vec3 lo;
    Vec3 hi;

    /// Box with horizontal extent centered on the origin and depth running from the surface
    /// (z = 0) down to -edges.z.
    static Box from_edges(const Vec3& edges);

    Vec3 center() const { return (lo + hi) * 0.5; }
    Vec3 extent() const { return hi - lo; }
    bool contains(const Vec3& p) const;
};

struct GeometryConfig {
    std::size_t node_count = 50;
    std::size_t anchor_count = 8;
    Vec3 volume_edges{500.0, 500.0, 500.0};
    Vec3 sink{0.0, 0.0, 0.0};
    bool anchors_on_surface = false;
    std::size_t n_faces = 8;
    /// Overrides the equal-solid-angle divergence/FoV half-angle when set (radians).
    std::optional<double> divergence_override;

    Box volume() const { return Box::from_edges(volume_edges); }
};

/// Ground truth for one Monte Carlo trial.
struct Deployment {
    std::vector<Vec3> nodes;
    std::vector<Vec3> anchors;
    Vec3 sink;
    Box volume;
};

/// Nodes and anchors i.i.d. uniform in the configured box. Nodes and anchors draw from separate
/// substreams of (seed, trial), so changing one count leaves the other population unchanged and
/// the first k nodes are shared between node counts >= k.
Deployment sample_deployment(const GeometryConfig& cfg, std::uint64_t seed, std::uint64_t trial);

/// Multifaceted transceiver: `n` faces, each with the same divergence (tx) and FoV (rx) half-angle.
class FaceSet {
public:
    FaceSet(std::vector<Vec3> boresights, double divergence_half_angle, double fov_half_angle);

    std::size_t size() const { return boresights_.size(); }
    std::span<const Vec3> boresights() const { return boresights_; }
    simd::Soa3View boresights_soa() const { return soa_.view(); }
    double divergence_half_angle() const { return divergence_; }
    double fov_half_angle() const { return fov_; }

private:
    std::vector<Vec3> boresights_;
    simd::Soa3 soa_;
    double divergence_;
    double fov_;
};

/// Equal-solid-angle half-angle arccos(1 - 2/n).
double equal_solid_angle_half_angle(std::size_t n_faces);

/// Deterministic near-uniform face layout (Fibonacci lattice; n = 2 is the antipodal pole pair).
/// Throws DomainError for n = 0, for n = 1 without an override, and for overrides outside (0, pi/2].
FaceSet make_face_set(std::size_t n_faces, std::optional<double> override_angle = std::nullopt);

struct FaceHit {
    std::size_t face;
    double incidence;  ///< radians
};

struct LinkGeometry {
    double distance = 0.0;
    std::size_t tx_face = 0;
    double tx_offaxis = 0.0;    ///< best tx boresight vs line of sight
    double rx_incidence = 0.0;  ///< best rx boresight vs reversed line of sight
    std::vector<FaceHit> rx_faces_in_fov;
    bool in_beam = false;
};

/// Pointing and incidence of the tx -> rx link. Throws DomainError for coincident endpoints.
LinkGeometry link_geometry(const Vec3& tx_pos, const FaceSet& tx_faces, const Vec3& rx_pos, const FaceSet& rx_faces);

}  // namespace uoan
