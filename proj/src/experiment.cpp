#include "uoan/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "uoan/error.hpp"
#include "uoan/graph_io.hpp"
#include "uoan/version.hpp"

namespace uoan {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-scenario state that does not depend on the trial.
struct Scenario {
    const ExperimentConfig& cfg;
    FaceSet faces;
    Channels channels;

    explicit Scenario(const ExperimentConfig& c) : cfg(c), faces(c.face_set()), channels(c.channels()) {}

    NetworkGraph graph(const Deployment& dep) const {
        return build_graph(dep, faces, cfg.optical, cfg.water(), cfg.acoustic, cfg.routing.mode);
    }

    TrialRecord run(std::uint64_t trial) const {
        TrialRecord rec;
        rec.trial = trial;
        const Deployment dep = sample_deployment(cfg.geometry, cfg.seed, trial);
        const NetworkGraph g = graph(dep);
        const auto rates = e2e_rates(g, dep.nodes.size());

        double sum_all = 0.0;
        double sum_reach = 0.0;
        for (const auto& [id, rate] : rates) {
            sum_all += rate;
            if (rate > 0.0) {
                sum_reach += rate;
                ++rec.reachable_nodes;
            }
        }
        rec.mean_e2e_reachable_bps = rec.reachable_nodes ? sum_reach / static_cast<double>(rec.reachable_nodes) : kNaN;
        if (cfg.routing.average_unreachable_as_zero)
            rec.mean_e2e_bps = rates.empty() ? 0.0 : sum_all / static_cast<double>(rates.size());
        else
            rec.mean_e2e_bps = rec.reachable_nodes ? rec.mean_e2e_reachable_bps : 0.0;
        rec.connected = is_connected(rates, cfg.routing.threshold_bps);

        const LocalizationContext ctx{channels, cfg.localization, cfg.seed, trial};
        for (auto mode : cfg.localization.modes) {
            const auto res = network_localize(dep, faces, mode, ctx);
            rec.localization.push_back({mode, res.rmse, res.rmse_all, res.localized_fraction});
        }
        return rec;
    }
};

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

std::ofstream open_output(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::string& text, const std::filesystem::path& p) {
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + p.string() + "' failed");
}

}  // namespace

const ModeOutcome* TrialRecord::find(LocalizationMode m) const {
    for (const auto& o : localization)
        if (o.mode == m) return &o;
    return nullptr;
}

const ModeSummary* SweepPoint::find(LocalizationMode m) const {
    for (const auto& s : localization)
        if (s.mode == m) return &s;
    return nullptr;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial) { return Scenario(cfg).run(trial); }

std::size_t resolve_thread_count(const ExperimentConfig& cfg) {
    std::size_t n = cfg.threads;
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("UOAN_SIM_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long cap = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && cap > 0) n = std::min<std::size_t>(n, cap);
    }
    return n;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, std::size_t workers) {
    const Scenario scenario(cfg);
    std::vector<TrialRecord> out(cfg.trials);
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(cfg.trials, 1));

    if (workers == 1) {
        for (std::size_t i = 0; i < cfg.trials; ++i) out[i] = scenario.run(i);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.trials) return;
            try {
                out[i] = scenario.run(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(cfg.trials);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

Stat summarize(std::span<const double> samples) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (double s : samples)
        if (!std::isnan(s)) v.push_back(s);
    Stat st;
    st.count = v.size();
    if (v.empty()) {
        st.mean = kNaN;
        return st;
    }
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double s : v) sum += s;
    st.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double s : v) ss += (s - st.mean) * (s - st.mean);
        st.stderr_mean = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
    }
    return st;
}

SweepPoint aggregate(const ExperimentConfig& point_cfg, const SweepValue& value, std::span<const TrialRecord> records) {
    SweepPoint p;
    p.value = value;
    p.water_type = point_cfg.water_type;
    p.n_faces = point_cfg.geometry.n_faces;
    p.divergence_rad = point_cfg.face_set().divergence_half_angle();
    p.trials = records.size();

    std::vector<double> e2e, reach;
    for (const auto& r : records) {
        e2e.push_back(r.mean_e2e_bps);
        reach.push_back(r.mean_e2e_reachable_bps);
        if (r.connected) ++p.connected_trials;
    }
    p.e2e = summarize(e2e);
    p.e2e_reachable = summarize(reach);
    p.conn_prob = p.trials ? static_cast<double>(p.connected_trials) / static_cast<double>(p.trials) : 0.0;

    for (auto mode : point_cfg.localization.modes) {
        std::vector<double> rmse, rmse_all, frac;
        for (const auto& r : records) {
            const auto* o = r.find(mode);
            if (o == nullptr) continue;
            rmse.push_back(o->rmse);
            rmse_all.push_back(o->rmse_all);
            frac.push_back(o->localized_fraction);
        }
        p.localization.push_back({mode, summarize(rmse), summarize(rmse_all), summarize(frac)});
    }
    return p;
}

SweepResult run_sweep(const ExperimentConfig& cfg, std::optional<std::size_t> workers) {
    cfg.validate();
    const std::size_t w = workers.value_or(resolve_thread_count(cfg));
    SweepResult result;
    result.sweep_parameter = cfg.sweep_parameter;
    for (const auto& v : cfg.sweep_values) {
        const ExperimentConfig point = with_sweep_value(cfg, v);
        const auto records = run_trials(point, w);
        result.points.push_back(aggregate(point, v, records));
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    static constexpr LocalizationMode kModes[] = {LocalizationMode::acoustic, LocalizationMode::optical,
                                                  LocalizationMode::hybrid};
    std::ostringstream out;
    out << "sweep_param,sweep_value,water_type,n_faces,divergence_rad,trials,mean_e2e_bps,stderr_e2e_bps,conn_prob,"
           "rmse_acoustic_m,rmse_optical_m,rmse_hybrid_m,"
           "localized_frac_acoustic,localized_frac_optical,localized_frac_hybrid,"
           "stderr_rmse_acoustic_m,stderr_rmse_optical_m,stderr_rmse_hybrid_m,"
           "rmse_all_acoustic_m,rmse_all_optical_m,rmse_all_hybrid_m,"
           "stderr_rmse_all_acoustic_m,stderr_rmse_all_optical_m,stderr_rmse_all_hybrid_m,"
           "mean_e2e_reachable_bps,connected_trials\n";

    // Modes that were not requested leave their cells empty.
    auto cells = [&](const SweepPoint& p, auto pick) {
        std::string s;
        for (auto m : kModes) {
            s += ',';
            if (const auto* ms = p.find(m)) s += fmt(pick(*ms));
        }
        return s;
    };

    for (const auto& p : result.points) {
        out << result.sweep_parameter << ',' << p.value.text << ',' << to_string(p.water_type) << ',' << p.n_faces
            << ',' << fmt(p.divergence_rad) << ',' << p.trials << ',' << fmt(p.e2e.mean) << ','
            << fmt(p.e2e.stderr_mean) << ',' << fmt(p.conn_prob)
            << cells(p, [](const ModeSummary& m) { return m.rmse.mean; })
            << cells(p, [](const ModeSummary& m) { return m.localized_fraction.mean; })
            << cells(p, [](const ModeSummary& m) { return m.rmse.stderr_mean; })
            << cells(p, [](const ModeSummary& m) { return m.rmse_all.mean; })
            << cells(p, [](const ModeSummary& m) { return m.rmse_all.stderr_mean; }) << ','
            << fmt(p.e2e_reachable.mean) << ',' << p.connected_trials << '\n';
    }
    return out.str();
}

std::string manifest_toml(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << config_to_toml(cfg) << "\n[manifest]\ntool_version = \"" << kToolVersion << "\"\nseed = " << cfg.seed
        << "\n";
    return out.str();
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p += ".manifest.toml";
    return p;
}

SweepResult run_sweep_to_file(const ExperimentConfig& cfg, const std::filesystem::path& csv_path,
                              std::optional<std::size_t> workers) {
    cfg.validate();
    const auto mpath = manifest_path(csv_path);
    auto csv = open_output(csv_path);
    auto manifest = open_output(mpath);
    SweepResult result = run_sweep(cfg, workers);
    finish_output(csv, sweep_csv(result), csv_path);
    finish_output(manifest, manifest_toml(cfg), mpath);
    return result;
}

std::string trial_record_json(const ExperimentConfig& cfg, const TrialRecord& rec) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["trial"] = rec.trial;
    j["water_type"] = std::string(to_string(cfg.water_type));
    j["n_faces"] = cfg.geometry.n_faces;
    j["divergence_rad"] = cfg.face_set().divergence_half_angle();
    j["mean_e2e_bps"] = rec.mean_e2e_bps;
    j["mean_e2e_reachable_bps"] = number_or_null(rec.mean_e2e_reachable_bps);
    j["reachable_nodes"] = rec.reachable_nodes;
    j["connected"] = rec.connected;
    auto loc = nlohmann::json::object();
    for (const auto& o : rec.localization) {
        loc[std::string(to_string(o.mode))] = {{"rmse_m", number_or_null(o.rmse)},
                                               {"rmse_all_m", o.rmse_all},
                                               {"localized_fraction", o.localized_fraction}};
    }
    j["localization"] = loc;
    return j.dump(2) + "\n";
}

std::string localization_json(const ExperimentConfig& cfg, std::uint64_t trial) {
    const Scenario sc(cfg);
    const Deployment dep = sample_deployment(cfg.geometry, cfg.seed, trial);
    const LocalizationContext ctx{sc.channels, cfg.localization, cfg.seed, trial};

    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["trial"] = trial;
    auto anchors = nlohmann::json::array();
    for (const auto& a : dep.anchors) anchors.push_back(vec_json(a));
    j["anchors"] = anchors;
    auto truth = nlohmann::json::array();
    for (const auto& n : dep.nodes) truth.push_back(vec_json(n));
    j["nodes"] = truth;

    auto modes = nlohmann::json::object();
    for (auto mode : cfg.localization.modes) {
        const auto res = network_localize(dep, sc.faces, mode, ctx);
        auto est = nlohmann::json::array();
        for (const auto& e : res.estimates) est.push_back(e ? vec_json(*e) : nlohmann::json(nullptr));
        modes[std::string(to_string(mode))] = {{"estimates", est},
                                               {"rmse_m", number_or_null(res.rmse)},
                                               {"rmse_all_m", res.rmse_all},
                                               {"localized_fraction", res.localized_fraction},
                                               {"rounds", res.rounds},
                                               {"measurements", res.measurements}};
    }
    j["modes"] = modes;
    return j.dump(2) + "\n";
}

std::string trial_graph_json(const ExperimentConfig& cfg, std::uint64_t trial) {
    const Scenario sc(cfg);
    const Deployment dep = sample_deployment(cfg.geometry, cfg.seed, trial);
    const NetworkGraph g = sc.graph(dep);
    GraphMeta meta;
    meta.seed = cfg.seed;
    meta.trial = trial;
    meta.mode = std::string(to_string(cfg.routing.mode));
    meta.water_type = std::string(to_string(cfg.water_type));
    meta.n_faces = cfg.geometry.n_faces;
    meta.divergence_rad = sc.faces.divergence_half_angle();
    return graph_to_json(g, meta);
}

}  // namespace uoan
