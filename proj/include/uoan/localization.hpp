#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uoan/acoustic.hpp"
#include "uoan/geometry.hpp"
#include "uoan/optical.hpp"
#include "uoan/rng.hpp"
#include "uoan/routing.hpp"

namespace uoan {

enum class LocalizationMode { acoustic, optical, hybrid };

/// How multilateration weights each range.
///  - uniform: all ranges equal.
///  - range_variance: inverse RSS-ranging variance; promoted references treated as exact.
///  - full_variance: additionally adds the promoted reference's position variance.
enum class Weighting { uniform, range_variance, full_variance };

std::string_view to_string(LocalizationMode m);
std::string_view to_string(Weighting w);
std::optional<LocalizationMode> parse_localization_mode(std::string_view s);
std::optional<Weighting> parse_weighting(std::string_view s);

struct LocalizationConfig {
    std::vector<LocalizationMode> modes{LocalizationMode::acoustic, LocalizationMode::optical,
                                        LocalizationMode::hybrid};
    double noise_sigma_db_optical = 1.0;
    double noise_sigma_db_acoustic = 1.0;
    Weighting weighting = Weighting::range_variance;

    void validate() const;
};

/// Channel models shared by routing and ranging.
struct Channels {
    OpticalParams optical;
    Water water;
    AcousticParams acoustic;
};

/// What a receiver knows about one tx -> rx ranging link.
struct RangingLink {
    Tech tech = Tech::acoustic;
    double distance = 0.0;      ///< ground truth, meters
    double optical_gain = 0.0;  ///< angular gain (optical only)
    bool feasible = false;
};

/// Optical: feasible iff in beam and the BER passes the FEC gate. Acoustic: feasible iff d >= 1 m.
RangingLink make_ranging_link(Tech tech, const Vec3& tx, const Vec3& rx, const FaceSet& faces, const Channels& ch);

/// Noiseless received level: optical in dBW, acoustic in dB re uPa.
double rss_level_db(Tech tech, double distance, double optical_gain, const Channels& ch);

/// Noiseless level plus sigma_db * z. nullopt for an infeasible link.
std::optional<double> measure_rss(const RangingLink& link, double sigma_db, double z, const Channels& ch);
std::optional<double> measure_rss(const RangingLink& link, double sigma_db, SeededRng& rng, const Channels& ch);

struct RangeEstimate {
    double distance;
    bool clamped;  ///< level outside the invertible range; distance pinned to the bracket end
};

/// Distance whose noiseless level equals `rss_db`, by bisection on the monotone level curve.
RangeEstimate invert_range(double rss_db, Tech tech, double optical_gain, const Channels& ch);

/// Standard deviation of the inverted range for a level noise of sigma_db at distance d.
double range_sigma(Tech tech, double distance, double sigma_db, const Channels& ch);

struct RangeMeasurement {
    std::size_t observer;
    std::size_t reference;
    double estimated_distance;
    Tech tech;
    double noise_sigma_db;
    double range_variance;
    bool clamped;
};

struct RangeRef {
    Vec3 position;
    double distance;
    double weight = 1.0;
};

struct MultilaterationResult {
    Vec3 position;
    bool converged = false;
    std::size_t iterations = 0;
    /// trace((J^T W J)^-1) at the solution; a position variance when weights are inverse variances.
    double position_variance = 0.0;
};

/// Weighted least squares: weighted-mean-differenced linear solve, then up to 20 Gauss-Newton
/// steps on the range residuals (converged once a step is below 1e-6 m). Throws
/// DegenerateGeometry for fewer than 4 references or a rank-deficient (e.g. coplanar) layout.
MultilaterationResult multilaterate(std::span<const RangeRef> refs);

struct LocalizationResult {
    std::vector<std::optional<Vec3>> estimates;  ///< per node id
    double localized_fraction = 0.0;
    double rmse = 0.0;      ///< over localized nodes; NaN when none localized
    double rmse_all = 0.0;  ///< unlocalized nodes scored at the volume centroid
    std::size_t rounds = 0;
    std::size_t measurements = 0;
};

struct LocalizationContext {
    const Channels& channels;
    const LocalizationConfig& config;
    std::uint64_t seed;
    std::uint64_t trial;
};

/// Iterative multilateration with promotion of localized nodes to references. Hybrid mode first
/// admits nodes that see >= 4 optical references (solved on pooled optical and acoustic ranges),
/// then nodes with >= 4 references of either technology. Measurement noise is a counter-based
/// draw per (seed, trial, tech, reference, observer), so every mode sees identical draws.
LocalizationResult network_localize(const Deployment& dep, const FaceSet& faces, LocalizationMode mode,
                                    const LocalizationContext& ctx);

}  // namespace uoan
