#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uoan/acoustic.hpp"
#include "uoan/geometry.hpp"
#include "uoan/localization.hpp"
#include "uoan/optical.hpp"
#include "uoan/routing.hpp"

namespace uoan {

struct RoutingConfig {
    RoutingMode mode = RoutingMode::optical;
    double threshold_bps = 1e5;
    /// Unreachable nodes enter the per-trial mean E2E rate as 0 bps (else they are skipped).
    bool average_unreachable_as_zero = true;
};

/// One swept value; `number` is NaN for textual values such as water types.
struct SweepValue {
    std::string text;
    double number;
};

inline constexpr std::string_view kSweepParameters[] = {"n_faces", "divergence_half_angle", "water_type",
                                                        "node_count", "noise_sigma_db"};

struct ExperimentConfig {
    GeometryConfig geometry;
    OpticalParams optical;
    ExtinctionTable extinction;
    WaterType water_type = WaterType::clear_ocean;
    AcousticParams acoustic;
    RoutingConfig routing;
    LocalizationConfig localization;

    std::uint64_t seed = 42;
    std::size_t trials = 200;
    std::size_t threads = 0;  ///< 0 = UOAN_SIM_THREADS or machine parallelism
    std::string sweep_parameter = "n_faces";
    std::vector<SweepValue> sweep_values{{"2", 2}, {"4", 4}, {"8", 8}, {"16", 16}, {"32", 32}};

    Water water() const { return {water_type, extinction[water_type]}; }
    Channels channels() const { return {optical, water(), acoustic}; }
    FaceSet face_set() const { return make_face_set(geometry.n_faces, geometry.divergence_override); }

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Copy of `cfg` with the sweep parameter set to `value`.
ExperimentConfig with_sweep_value(const ExperimentConfig& cfg, const SweepValue& value);

/// Parses TOML text on top of the defaults, then applies dotted `key=value` overrides.
/// Unknown keys (in the text or the overrides) raise ConfigError naming the key path.
/// A top-level [manifest] table is ignored so run manifests load back as configs.
ExperimentConfig parse_config(std::string_view toml_text, std::span<const std::string> overrides = {});

/// Reads a config file; IoError when unreadable.
ExperimentConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Full config in the file format, every key present.
std::string config_to_toml(const ExperimentConfig& cfg);

}  // namespace uoan
