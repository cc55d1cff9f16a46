#include "uoan/optical.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "uoan/error.hpp"

namespace uoan {

std::string_view to_string(WaterType w) {
    switch (w) {
        case WaterType::pure_sea:
            return "pure_sea";
        case WaterType::clear_ocean:
            return "clear_ocean";
        case WaterType::coastal:
            return "coastal";
        case WaterType::harbor:
            return "harbor";
    }
    return "unknown";
}

std::optional<WaterType> parse_water_type(std::string_view name) {
    for (auto w : {WaterType::pure_sea, WaterType::clear_ocean, WaterType::coastal, WaterType::harbor}) {
        if (name == to_string(w)) return w;
    }
    return std::nullopt;
}

double ExtinctionTable::operator[](WaterType w) const {
    switch (w) {
        case WaterType::pure_sea:
            return pure_sea;
        case WaterType::clear_ocean:
            return clear_ocean;
        case WaterType::coastal:
            return coastal;
        case WaterType::harbor:
            return harbor;
    }
    return clear_ocean;
}

void OpticalParams::validate() const {
    const auto positive = [](double v, const char* key) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("optical.") + key + ": must be positive");
    };
    positive(tx_power, "tx_power");
    positive(tx_efficiency, "tx_efficiency");
    positive(rx_efficiency, "rx_efficiency");
    if (tx_efficiency > 1.0) throw ConfigError("optical.tx_efficiency: must be <= 1");
    if (rx_efficiency > 1.0) throw ConfigError("optical.rx_efficiency: must be <= 1");
    positive(rx_aperture_area, "rx_aperture_area");
    positive(responsivity, "responsivity");
    positive(noise_variance, "noise_variance");
    positive(bandwidth, "bandwidth");
    if (!(fec_ber_threshold > 0.0 && fec_ber_threshold < 0.5))
        throw ConfigError("optical.fec_ber_threshold: must lie in (0, 0.5)");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace optical {

double transmittance(double extinction, double d) { return std::exp(-extinction * d); }

double angular_gain(const LinkGeometry& geom, const FaceSet& tx_faces, const OpticalParams& params) {
    if (!geom.in_beam) return 0.0;
    double cos_sum = 0.0;
    for (const auto& hit : geom.rx_faces_in_fov) cos_sum += std::cos(hit.incidence);
    const double beam_solid_angle = 2.0 * std::numbers::pi * (1.0 - std::cos(tx_faces.divergence_half_angle()));
    return params.rx_aperture_area * cos_sum / beam_solid_angle;
}

double received_power_at(double d, double gain, const OpticalParams& p, const Water& water) {
    return p.tx_power * p.tx_efficiency * p.rx_efficiency * transmittance(water.extinction, d) * gain / (d * d);
}

double received_power(const LinkGeometry& geom, const FaceSet& tx_faces, const OpticalParams& params,
                      const Water& water) {
    if (!(geom.distance > 0.0)) throw DomainError("received_power: distance must be positive");
    if (!geom.in_beam) return 0.0;
    return received_power_at(geom.distance, angular_gain(geom, tx_faces, params), params, water);
}

double snr(double pr, const OpticalParams& p) {
    const double current = p.responsivity * pr;
    return current * current / p.noise_variance;
}

double ber(double pr, const OpticalParams& p) {
    if (pr <= 0.0) return 0.5;
    return q_function(p.responsivity * pr / std::sqrt(p.noise_variance));
}

double capacity(double pr, const OpticalParams& p) {
    if (pr <= 0.0 || ber(pr, p) > p.fec_ber_threshold) return 0.0;
    return p.bandwidth * std::log2(1.0 + snr(pr, p));
}

}  // namespace optical
}  // namespace uoan
