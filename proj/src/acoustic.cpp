#include "uoan/acoustic.hpp"

#include <cmath>
#include <string>

#include "uoan/error.hpp"
#include "uoan/optical.hpp"

namespace uoan {

void AcousticParams::validate() const {
    if (!std::isfinite(source_level)) throw ConfigError("acoustic.source_level: must be finite");
    if (!(frequency_khz > 0.0)) throw ConfigError("acoustic.frequency_khz: must be positive");
    if (!(spreading_exponent >= 1.0 && spreading_exponent <= 2.0))
        throw ConfigError("acoustic.spreading_exponent: must lie in [1, 2]");
    if (!(bandwidth > 0.0)) throw ConfigError("acoustic.bandwidth: must be positive");
    if (!(shipping >= 0.0 && shipping <= 1.0)) throw ConfigError("acoustic.shipping: must lie in [0, 1]");
    if (!(wind_speed >= 0.0)) throw ConfigError("acoustic.wind_speed: must be >= 0");
    if (!(fec_ber_threshold > 0.0 && fec_ber_threshold < 0.5))
        throw ConfigError("acoustic.fec_ber_threshold: must lie in (0, 0.5)");
}

namespace acoustic {

double thorp_absorption(double f) {
    const double f2 = f * f;
    return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double path_loss(double d, const AcousticParams& p) {
    if (!(d >= 1.0)) throw DomainError("acoustic path_loss: distance below the 1 m reference");
    return 10.0 * p.spreading_exponent * std::log10(d) + (d / 1000.0) * thorp_absorption(p.frequency_khz);
}

NoiseComponents noise_components(double f, double s, double w) {
    const double lf = std::log10(f);
    return {
        17.0 - 30.0 * lf,
        40.0 + 20.0 * (s - 0.5) + 26.0 * lf - 60.0 * std::log10(f + 0.03),
        50.0 + 7.5 * std::sqrt(w) + 20.0 * lf - 40.0 * std::log10(f + 0.4),
        -15.0 + 20.0 * lf,
    };
}

double noise_psd(double f, const AcousticParams& p) {
    if (!(f > 0.0)) throw DomainError("noise_psd: frequency must be positive");
    const auto n = noise_components(f, p.shipping, p.wind_speed);
    const auto lin = [](double db) { return std::pow(10.0, db / 10.0); };
    return 10.0 * std::log10(lin(n.turbulence) + lin(n.shipping) + lin(n.wind) + lin(n.thermal));
}

double received_level(double d, const AcousticParams& p) { return p.source_level - path_loss(d, p); }

double snr_db(double d, const AcousticParams& p) {
    return received_level(d, p) - (noise_psd(p.frequency_khz, p) + 10.0 * std::log10(p.bandwidth));
}

double ber(double d, const AcousticParams& p) {
    const double snr = std::pow(10.0, snr_db(d, p) / 10.0);
    return q_function(std::sqrt(snr));
}

double capacity(double d, const AcousticParams& p) {
    const double snr = std::pow(10.0, snr_db(d, p) / 10.0);
    if (q_function(std::sqrt(snr)) > p.fec_ber_threshold) return 0.0;
    return p.bandwidth * std::log2(1.0 + snr);
}

}  // namespace acoustic
}  // namespace uoan
