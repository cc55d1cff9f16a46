#pragma once

namespace uoan {

struct AcousticParams {
    double source_level = 135.0;     ///< dB re uPa @ 1 m
    double frequency_khz = 20.0;
    double spreading_exponent = 1.5;  ///< 1 cylindrical .. 2 spherical
    double bandwidth = 10e3;          ///< Hz
    double shipping = 0.5;            ///< shipping activity factor in [0, 1]
    double wind_speed = 5.0;          ///< m/s
    double fec_ber_threshold = 1e-3;

    void validate() const;
};

namespace acoustic {

/// Thorp absorption in dB/km, f in kHz.
double thorp_absorption(double f_khz);

/// Transmission loss 10 k log10(d) + (d / 1000) a(f). Throws DomainError for d < 1 m.
double path_loss(double d, const AcousticParams& params);

struct NoiseComponents {
    double turbulence;  ///< dB re uPa^2/Hz
    double shipping;
    double wind;
    double thermal;
};

NoiseComponents noise_components(double f_khz, double shipping, double wind_speed);

/// Ambient noise power spectral density (dB re uPa^2/Hz): power sum of the four components.
double noise_psd(double f_khz, const AcousticParams& params);

/// Received level SL - TL(d) in dB re uPa.
double received_level(double d, const AcousticParams& params);

/// Narrowband SNR at the carrier in dB.
double snr_db(double d, const AcousticParams& params);

/// Q(sqrt(snr_linear)), the same detector model as the optical link.
double ber(double d, const AcousticParams& params);

/// B log2(1 + snr), zero when the BER exceeds the FEC threshold.
double capacity(double d, const AcousticParams& params);

}  // namespace acoustic
}  // namespace uoan
