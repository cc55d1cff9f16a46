#pragma once

#include <optional>
#include <string_view>

#include "uoan/geometry.hpp"

namespace uoan {

enum class WaterType { pure_sea, clear_ocean, coastal, harbor };

std::string_view to_string(WaterType w);
std::optional<WaterType> parse_water_type(std::string_view name);

/// Extinction coefficient c (1/m) per water type at the operating blue-green wavelength.
struct ExtinctionTable {
    double pure_sea = 0.056;
    double clear_ocean = 0.151;
    double coastal = 0.305;
    double harbor = 2.17;

    double operator[](WaterType w) const;
};

struct Water {
    WaterType type = WaterType::clear_ocean;
    double extinction = 0.151;  ///< 1/m
};

struct OpticalParams {
    double tx_power = 0.03;          ///< W
    double tx_efficiency = 0.9;
    double rx_efficiency = 0.9;
    double rx_aperture_area = 1e-3;  ///< m^2
    double responsivity = 0.5;       ///< A/W
    double noise_variance = 1e-31;   ///< A^2
    double bandwidth = 10e6;         ///< Hz
    double fec_ber_threshold = 1e-3;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

namespace optical {

/// Beer-Lambert transmittance exp(-c d).
double transmittance(double extinction, double distance);

/// Distance-independent part of the link budget: sum over receiving faces of
/// A cos(incidence) / (2 pi (1 - cos divergence)). Zero when the link is out of beam.
double angular_gain(const LinkGeometry& geom, const FaceSet& tx_faces, const OpticalParams& params);

/// P_t eta_t eta_r exp(-c d) gain / d^2 for a known angular gain.
double received_power_at(double distance, double angular_gain, const OpticalParams& params, const Water& water);

/// Received optical power in watts; 0 when the link is not in beam.
double received_power(const LinkGeometry& geom, const FaceSet& tx_faces, const OpticalParams& params,
                      const Water& water);

/// Electrical SNR (R P_r)^2 / sigma^2.
double snr(double received_power, const OpticalParams& params);

/// OOK bit error rate Q(R P_r / sigma).
double ber(double received_power, const OpticalParams& params);

/// Shannon capacity in bit/s, zero when the BER exceeds the FEC threshold.
double capacity(double received_power, const OpticalParams& params);

}  // namespace optical
}  // namespace uoan
