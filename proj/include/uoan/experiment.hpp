#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uoan/config.hpp"

namespace uoan {

struct ModeOutcome {
    LocalizationMode mode;
    double rmse;      ///< NaN when nothing localized
    double rmse_all;  ///< unlocalized nodes scored at the volume centroid
    double localized_fraction;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    double mean_e2e_bps = 0.0;  ///< follows routing.average_unreachable_as_zero
    double mean_e2e_reachable_bps = 0.0;  ///< NaN when no node reaches the sink
    std::size_t reachable_nodes = 0;
    bool connected = false;
    std::vector<ModeOutcome> localization;  ///< in config mode order

    const ModeOutcome* find(LocalizationMode m) const;
};

/// Deterministic in (cfg, trial); the sweep list is ignored, the base scenario is simulated.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial);

/// Worker count: cfg.threads, else machine parallelism; UOAN_SIM_THREADS caps either.
std::size_t resolve_thread_count(const ExperimentConfig& cfg);

/// Trials 0..cfg.trials-1 of the base scenario, ordered by index for any worker count.
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, std::size_t workers);

struct Stat {
    double mean = 0.0;
    double stderr_mean = 0.0;  ///< sample sd / sqrt(n); 0 when n < 2
    std::size_t count = 0;     ///< finite samples used
};

/// NaN samples are skipped; mean is NaN when none remain. Summation order is sorted, so the
/// result does not depend on trial order.
Stat summarize(std::span<const double> samples);

struct ModeSummary {
    LocalizationMode mode;
    Stat rmse;
    Stat rmse_all;
    Stat localized_fraction;
};

struct SweepPoint {
    SweepValue value;
    WaterType water_type = WaterType::clear_ocean;
    std::size_t n_faces = 0;
    double divergence_rad = 0.0;
    std::size_t trials = 0;
    Stat e2e;
    Stat e2e_reachable;
    std::size_t connected_trials = 0;
    double conn_prob = 0.0;
    std::vector<ModeSummary> localization;

    const ModeSummary* find(LocalizationMode m) const;
};

struct SweepResult {
    std::string sweep_parameter;
    std::vector<SweepPoint> points;
};

SweepPoint aggregate(const ExperimentConfig& point_cfg, const SweepValue& value, std::span<const TrialRecord> records);

/// Every sweep point over the same trial indices (common random numbers).
SweepResult run_sweep(const ExperimentConfig& cfg, std::optional<std::size_t> workers = std::nullopt);

std::string sweep_csv(const SweepResult& result);
std::string manifest_toml(const ExperimentConfig& cfg);
std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

/// Opens both outputs first (IoError before any trial runs), then sweeps and writes.
SweepResult run_sweep_to_file(const ExperimentConfig& cfg, const std::filesystem::path& csv_path,
                              std::optional<std::size_t> workers = std::nullopt);

std::string trial_record_json(const ExperimentConfig& cfg, const TrialRecord& rec);

/// Ground truth, per-mode estimates and errors for one trial.
std::string localization_json(const ExperimentConfig& cfg, std::uint64_t trial);

/// Routing graph of one trial, with ground-truth positions.
std::string trial_graph_json(const ExperimentConfig& cfg, std::uint64_t trial);

}  // namespace uoan
