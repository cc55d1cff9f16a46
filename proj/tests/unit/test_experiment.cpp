#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>

#include "support.hpp"
#include "uoan/error.hpp"
#include "uoan/experiment.hpp"
#include "uoan/version.hpp"

using namespace uoan;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.geometry.node_count = 25;
    cfg.trials = 12;
    cfg.water_type = WaterType::pure_sea;
    cfg.sweep_values = {{"4", 4}, {"16", 16}};
    return cfg;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("trial: deterministic record with the expected schema") {
    const auto cfg = small_config();
    const auto a = run_trial(cfg, 5);
    const auto b = run_trial(cfg, 5);
    CHECK(a.trial == 5);
    CHECK(same_bits(a.mean_e2e_bps, b.mean_e2e_bps));
    CHECK(a.connected == b.connected);
    REQUIRE(a.localization.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.localization[i].mode == cfg.localization.modes[i]);
        CHECK(same_bits(a.localization[i].rmse_all, b.localization[i].rmse_all));
        CHECK(a.localization[i].localized_fraction >= 0.0);
        CHECK(a.localization[i].localized_fraction <= 1.0);
    }
    CHECK(a.reachable_nodes <= cfg.geometry.node_count);
    CHECK(a.find(LocalizationMode::hybrid) != nullptr);
}

TEST_CASE("trial: unreachable averaging switch") {
    auto cfg = small_config();
    cfg.localization.modes.clear();
    // First trial where only part of the network reaches the sink.
    std::uint64_t trial = 0;
    while (true) {
        const auto r = run_trial(cfg, trial);
        if (r.reachable_nodes > 0 && r.reachable_nodes < cfg.geometry.node_count) break;
        REQUIRE(++trial < 200);
    }
    const auto with_zeros = run_trial(cfg, trial);
    cfg.routing.average_unreachable_as_zero = false;
    const auto reachable_only = run_trial(cfg, trial);
    CHECK(reachable_only.mean_e2e_bps == with_zeros.mean_e2e_reachable_bps);
    CHECK(with_zeros.mean_e2e_bps < with_zeros.mean_e2e_reachable_bps);
    CHECK(with_zeros.mean_e2e_bps ==
          doctest::Approx(with_zeros.mean_e2e_reachable_bps * with_zeros.reachable_nodes / cfg.geometry.node_count));
}

TEST_CASE("trials: serial and parallel runs are identical") {
    const auto cfg = small_config();
    const auto serial = run_trials(cfg, 1);
    const auto parallel = run_trials(cfg, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].trial == i);
        CHECK(same_bits(serial[i].mean_e2e_bps, parallel[i].mean_e2e_bps));
        CHECK(same_bits(serial[i].localization[2].rmse_all, parallel[i].localization[2].rmse_all));
    }
    CHECK(sweep_csv(run_sweep(cfg, 1)) == sweep_csv(run_sweep(cfg, 3)));
}

TEST_CASE("summary statistics") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> v = {1.0, 2.0, nan, 3.0, 4.0};
    const auto s = summarize(v);
    CHECK(s.count == 4);
    CHECK(s.mean == 2.5);
    CHECK(s.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    const std::vector<double> one = {7.0};
    CHECK(summarize(one).stderr_mean == 0.0);
    const std::vector<double> none = {nan};
    CHECK(std::isnan(summarize(none).mean));
    CHECK(summarize(none).count == 0);
}

TEST_CASE("aggregate: permutation invariant, exact connectivity ratio") {
    auto cfg = small_config();
    cfg.trials = 20;
    auto records = run_trials(cfg, 1);
    const auto p = aggregate(cfg, {"x", 1}, records);
    std::size_t connected = 0;
    for (const auto& r : records) connected += r.connected;
    CHECK(p.connected_trials == connected);
    CHECK(p.conn_prob == static_cast<double>(connected) / 20.0);
    CHECK(p.conn_prob >= 0.0);
    CHECK(p.conn_prob <= 1.0);
    CHECK(p.e2e.stderr_mean >= 0.0);

    std::mt19937 shuffle_rng(3);
    std::shuffle(records.begin(), records.end(), shuffle_rng);
    const auto q = aggregate(cfg, {"x", 1}, records);
    CHECK(same_bits(p.e2e.mean, q.e2e.mean));
    CHECK(same_bits(p.e2e.stderr_mean, q.e2e.stderr_mean));
    for (std::size_t m = 0; m < p.localization.size(); ++m) {
        CHECK(same_bits(p.localization[m].rmse_all.mean, q.localization[m].rmse_all.mean));
        CHECK(same_bits(p.localization[m].localized_fraction.mean, q.localization[m].localized_fraction.mean));
    }
}

TEST_CASE("sweep: one trial gives zero standard errors") {
    auto cfg = small_config();
    cfg.trials = 1;
    const auto r = run_sweep(cfg, 1);
    for (const auto& p : r.points) {
        CHECK(p.e2e.stderr_mean == 0.0);
        for (const auto& m : p.localization) {
            CHECK(m.rmse_all.stderr_mean == 0.0);
            CHECK(m.rmse.stderr_mean == 0.0);
        }
    }
}

TEST_CASE("sweep: matched deployments across sweep points") {
    auto cfg = small_config();
    const auto a = with_sweep_value(cfg, cfg.sweep_values[0]);
    const auto b = with_sweep_value(cfg, cfg.sweep_values[1]);
    const auto da = sample_deployment(a.geometry, a.seed, 3);
    const auto db = sample_deployment(b.geometry, b.seed, 3);
    for (std::size_t i = 0; i < da.nodes.size(); ++i) CHECK(std::memcmp(&da.nodes[i], &db.nodes[i], sizeof(Vec3)) == 0);
}

TEST_CASE("csv: header and row layout") {
    auto cfg = small_config();
    cfg.trials = 2;
    cfg.localization.modes = {LocalizationMode::acoustic};
    const std::string csv = sweep_csv(run_sweep(cfg, 1));
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header.rfind("sweep_param,sweep_value,water_type,n_faces,divergence_rad,trials,mean_e2e_bps,stderr_e2e_bps,"
                       "conn_prob,rmse_acoustic_m,rmse_optical_m,rmse_hybrid_m,localized_frac_acoustic,"
                       "localized_frac_optical,localized_frac_hybrid",
                       0) == 0);
    std::size_t lines = 0;
    std::size_t pos = 0;
    while ((pos = csv.find('\n', pos)) != std::string::npos) ++lines, ++pos;
    CHECK(lines == 3);
    const std::string row = csv.substr(header.size() + 1, csv.find('\n', header.size() + 1) - header.size() - 1);
    CHECK(row.rfind("n_faces,4,pure_sea,4,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
    CHECK(row.find(",,") != std::string::npos);  // optical and hybrid cells stay empty
}

TEST_CASE("sweep to file: csv, manifest, and early I/O failure") {
    const auto dir = testing::scratch_dir("sweep_files");
    auto cfg = small_config();
    cfg.trials = 3;
    const auto csv_path = dir / "out.csv";
    const auto r = run_sweep_to_file(cfg, csv_path, 2);
    CHECK(testing::read_file(csv_path) == sweep_csv(r));
    const std::string manifest = testing::read_file(manifest_path(csv_path));
    CHECK(manifest.find(std::string("tool_version = \"") + std::string(kToolVersion) + "\"") != std::string::npos);
    CHECK(config_to_toml(parse_config(manifest)) == config_to_toml(cfg));

    cfg.trials = 100000;  // would take hours if the I/O check came after the trials
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(run_sweep_to_file(cfg, dir / "missing" / "out.csv"), IoError);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
}

TEST_CASE("thread count resolution") {
    auto cfg = small_config();
    cfg.threads = 6;
    ::unsetenv("UOAN_SIM_THREADS");
    CHECK(resolve_thread_count(cfg) == 6);
    ::setenv("UOAN_SIM_THREADS", "2", 1);
    CHECK(resolve_thread_count(cfg) == 2);
    cfg.threads = 0;
    CHECK(resolve_thread_count(cfg) <= 2);
    CHECK(resolve_thread_count(cfg) >= 1);
    ::unsetenv("UOAN_SIM_THREADS");
    CHECK(resolve_thread_count(cfg) >= 1);
}

TEST_CASE("invalid configs fail before any trial") {
    auto cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
}
