#include "uoan/localization.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uoan/error.hpp"
#include "uoan/simd.hpp"

namespace uoan {

std::string_view to_string(LocalizationMode m) {
    switch (m) {
        case LocalizationMode::acoustic:
            return "acoustic";
        case LocalizationMode::optical:
            return "optical";
        case LocalizationMode::hybrid:
            return "hybrid";
    }
    return "unknown";
}

std::string_view to_string(Weighting w) {
    switch (w) {
        case Weighting::uniform:
            return "uniform";
        case Weighting::range_variance:
            return "range_variance";
        case Weighting::full_variance:
            return "full_variance";
    }
    return "unknown";
}

std::optional<LocalizationMode> parse_localization_mode(std::string_view s) {
    for (auto m : {LocalizationMode::acoustic, LocalizationMode::optical, LocalizationMode::hybrid}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

std::optional<Weighting> parse_weighting(std::string_view s) {
    for (auto w : {Weighting::uniform, Weighting::range_variance, Weighting::full_variance}) {
        if (s == to_string(w)) return w;
    }
    return std::nullopt;
}

void LocalizationConfig::validate() const {
    if (!(noise_sigma_db_optical >= 0.0) || !std::isfinite(noise_sigma_db_optical))
        throw ConfigError("localization.noise_sigma_db_optical: must be >= 0");
    if (!(noise_sigma_db_acoustic >= 0.0) || !std::isfinite(noise_sigma_db_acoustic))
        throw ConfigError("localization.noise_sigma_db_acoustic: must be >= 0");
}

namespace {

constexpr double kTenOverLn10 = 10.0 / std::numbers::ln10;
constexpr double kOpticalMinRange = 1e-3;
constexpr double kOpticalMaxRange = 1e5;
constexpr double kAcousticMinRange = 1.0;
constexpr double kAcousticMaxRange = 1e7;

}  // namespace

RangingLink make_ranging_link(Tech tech, const Vec3& tx, const Vec3& rx, const FaceSet& faces, const Channels& ch) {
    RangingLink link;
    link.tech = tech;
    link.distance = distance(tx, rx);
    if (tech == Tech::acoustic) {
        link.feasible = link.distance >= 1.0;
        return link;
    }
    const auto geom = link_geometry(tx, faces, rx, faces);
    if (!geom.in_beam) return link;
    link.optical_gain = optical::angular_gain(geom, faces, ch.optical);
    const double pr = optical::received_power_at(link.distance, link.optical_gain, ch.optical, ch.water);
    link.feasible = optical::ber(pr, ch.optical) <= ch.optical.fec_ber_threshold;
    return link;
}

double rss_level_db(Tech tech, double d, double optical_gain, const Channels& ch) {
    if (tech == Tech::acoustic) return acoustic::received_level(d, ch.acoustic);
    if (!(optical_gain > 0.0)) throw DomainError("optical RSS needs a positive angular gain");
    if (!(d > 0.0)) throw DomainError("optical RSS needs a positive distance");
    // Log form of the Beer-Lambert budget; stays finite where exp(-c d) would underflow.
    const auto& p = ch.optical;
    return 10.0 * std::log10(p.tx_power * p.tx_efficiency * p.rx_efficiency * optical_gain) -
           kTenOverLn10 * ch.water.extinction * d - 20.0 * std::log10(d);
}

std::optional<double> measure_rss(const RangingLink& link, double sigma_db, double z, const Channels& ch) {
    if (!link.feasible) return std::nullopt;
    return rss_level_db(link.tech, link.distance, link.optical_gain, ch) + sigma_db * z;
}

std::optional<double> measure_rss(const RangingLink& link, double sigma_db, SeededRng& rng, const Channels& ch) {
    if (!link.feasible) return std::nullopt;
    return measure_rss(link, sigma_db, rng.normal(), ch);
}

RangeEstimate invert_range(double rss_db, Tech tech, double optical_gain, const Channels& ch) {
    const bool opt = tech == Tech::optical;
    double lo = std::log(opt ? kOpticalMinRange : kAcousticMinRange);
    double hi = std::log(opt ? kOpticalMaxRange : kAcousticMaxRange);
    const auto level = [&](double log_d) { return rss_level_db(tech, std::exp(log_d), optical_gain, ch); };

    if (rss_db >= level(lo)) return {std::exp(lo), true};
    if (rss_db <= level(hi)) return {std::exp(hi), true};
    // Level is strictly decreasing in d; bisect in log-distance for a relative tolerance.
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (level(mid) > rss_db) lo = mid;
        else hi = mid;
    }
    return {std::exp(0.5 * (lo + hi)), false};
}

double range_sigma(Tech tech, double d, double sigma_db, const Channels& ch) {
    double slope = 0.0;  // |dL/dd| in dB per meter
    if (tech == Tech::optical) {
        slope = kTenOverLn10 * (2.0 / d + ch.water.extinction);
    } else {
        slope = kTenOverLn10 * ch.acoustic.spreading_exponent / d +
                acoustic::thorp_absorption(ch.acoustic.frequency_khz) / 1000.0;
    }
    return sigma_db / slope;
}

MultilaterationResult multilaterate(std::span<const RangeRef> refs) {
    const std::size_t m = refs.size();
    if (m < 4) throw DegenerateGeometry("multilaterate: at least 4 references required");

    double wsum = 0.0;
    for (const auto& r : refs) {
        if (!(r.weight > 0.0) || !std::isfinite(r.weight)) throw DomainError("multilaterate: weights must be positive");
        wsum += r.weight;
    }

    // |x|^2 - 2 r_i.x + |r_i|^2 = d_i^2, differenced against the weighted mean equation.
    Vec3 mean_ref{};
    double mean_q = 0.0;
    for (const auto& r : refs) {
        const double w = r.weight / wsum;
        mean_ref = mean_ref + r.position * w;
        mean_q += w * (dot(r.position, r.position) - r.distance * r.distance);
    }
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sw = std::sqrt(refs[i].weight / wsum);
        const Vec3 dr = refs[i].position - mean_ref;
        a.row(static_cast<Eigen::Index>(i)) << 2.0 * sw * dr.x, 2.0 * sw * dr.y, 2.0 * sw * dr.z;
        const double q = dot(refs[i].position, refs[i].position) - refs[i].distance * refs[i].distance;
        b(static_cast<Eigen::Index>(i)) = sw * (q - mean_q);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv(2) > 1e-9 * sv(0))) throw DegenerateGeometry("multilaterate: references are coplanar or collinear");
    const Eigen::Vector3d x0 = svd.solve(b);

    MultilaterationResult res;
    res.position = {x0(0), x0(1), x0(2)};

    simd::Soa3 soa;
    for (const auto& r : refs) soa.push_back(r.position);
    std::vector<double> ranges(m);
    Eigen::MatrixXd jac(m, 3);
    Eigen::VectorXd resid(m);

    const auto linearize = [&](const Vec3& x) {
        simd::distance_batch(soa.view(), x, ranges);
        for (std::size_t i = 0; i < m; ++i) {
            const double sw = std::sqrt(refs[i].weight);
            const double r = std::max(ranges[i], 1e-12);
            const Vec3 u = (x - refs[i].position) / r;
            jac.row(static_cast<Eigen::Index>(i)) << sw * u.x, sw * u.y, sw * u.z;
            resid(static_cast<Eigen::Index>(i)) = sw * (refs[i].distance - ranges[i]);
        }
    };

    const auto cost_at = [&](const Vec3& x) {
        simd::distance_batch(soa.view(), x, ranges);
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double e = refs[i].distance - ranges[i];
            c += refs[i].weight * e * e;
        }
        return c;
    };

    // Gauss-Newton with step halving so noisy, inconsistent ranges cannot make it oscillate.
    for (std::size_t it = 1; it <= 20; ++it) {
        linearize(res.position);
        const double cost = resid.squaredNorm();
        // Large residuals make plain Gauss-Newton converge only linearly; add the curvature of
        // the ranges when that keeps the system positive definite.
        const Eigen::Vector3d grad = jac.transpose() * resid;
        Eigen::Matrix3d hess = jac.transpose() * jac;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = std::max(ranges[i], 1e-12);
            const Eigen::Vector3d u = jac.row(static_cast<Eigen::Index>(i)).transpose() / std::sqrt(refs[i].weight);
            const double we = refs[i].weight * (refs[i].distance - ranges[i]);
            hess -= (we / r) * (Eigen::Matrix3d::Identity() - u * u.transpose());
        }
        Eigen::Vector3d full;
        const Eigen::LLT<Eigen::Matrix3d> newton(hess);
        if (newton.info() == Eigen::Success) full = newton.solve(grad);
        else full = jac.colPivHouseholderQr().solve(resid);
        if (!full.allFinite()) break;
        Vec3 step{full(0), full(1), full(2)};
        for (int halving = 0; halving < 40 && cost_at(res.position + step) > cost; ++halving) step = step * 0.5;
        res.position = res.position + step;
        res.iterations = it;
        if (norm(step) < 1e-6) {
            res.converged = true;
            break;
        }
    }

    linearize(res.position);
    const Eigen::Matrix3d info = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(info);
    res.position_variance = lu.isInvertible() ? lu.inverse().trace() : std::numeric_limits<double>::infinity();
    if (!std::isfinite(res.position_variance)) res.converged = false;
    return res;
}

namespace {

struct Measured {
    double distance;
    double variance;
    bool clamped;
};

class MeasurementCache {
public:
    MeasurementCache(const Deployment& dep, const FaceSet& faces, const LocalizationContext& ctx)
        : dep_(dep), faces_(faces), ctx_(ctx), n_nodes_(dep.nodes.size()),
          slots_((dep.nodes.size() + dep.anchors.size()) * dep.nodes.size() * 2) {}

    std::size_t station_count() const { return n_nodes_ + dep_.anchors.size(); }
    const Vec3& truth(std::size_t station) const {
        return station < n_nodes_ ? dep_.nodes[station] : dep_.anchors[station - n_nodes_];
    }

    // Range at node `observer` from transmissions of `station`.
    const std::optional<Measured>& get(std::size_t station, std::size_t observer, Tech tech) {
        auto& slot = slots_[(station * n_nodes_ + observer) * 2 + (tech == Tech::optical ? 1 : 0)];
        if (!slot.done) {
            slot.done = true;
            slot.value = measure(station, observer, tech);
            if (slot.value) ++count_;
        }
        return slot.value;
    }

    std::size_t count() const { return count_; }

private:
    struct Slot {
        bool done = false;
        std::optional<Measured> value;
    };

    std::optional<Measured> measure(std::size_t station, std::size_t observer, Tech tech) const {
        const auto& ch = ctx_.channels;
        const auto link = make_ranging_link(tech, truth(station), dep_.nodes[observer], faces_, ch);
        if (!link.feasible) return std::nullopt;
        // Anchors and nodes get disjoint key spaces so adding nodes leaves anchor draws alone.
        const std::uint64_t ref_key = station < n_nodes_ ? station : (std::uint64_t{1} << 32) + (station - n_nodes_);
        const double z = counter_normal(hash_key({ctx_.seed, ctx_.trial, static_cast<std::uint64_t>(Stream::measurement),
                                                  tech == Tech::optical ? 1u : 2u, ref_key, observer}));
        const double sigma =
            tech == Tech::optical ? ctx_.config.noise_sigma_db_optical : ctx_.config.noise_sigma_db_acoustic;
        const double rss = *measure_rss(link, sigma, z, ch);
        const auto est = invert_range(rss, tech, link.optical_gain, ch);
        const double s = range_sigma(tech, est.distance, sigma, ch);
        return Measured{est.distance, s * s, est.clamped};
    }

    const Deployment& dep_;
    const FaceSet& faces_;
    const LocalizationContext& ctx_;
    std::size_t n_nodes_;
    std::vector<Slot> slots_;
    std::size_t count_ = 0;
};

struct Reference {
    std::size_t station;
    Vec3 position;
    double variance;
};

enum class Admission { optical_only, any_reference };

}  // namespace

LocalizationResult network_localize(const Deployment& dep, const FaceSet& faces, LocalizationMode mode,
                                    const LocalizationContext& ctx) {
    if (dep.anchors.size() < 4) throw ConfigError("geometry.anchor_count: localization needs >= 4 anchors");
    ctx.config.validate();

    const std::size_t n = dep.nodes.size();
    MeasurementCache cache(dep, faces, ctx);
    const bool use_optical = mode != LocalizationMode::acoustic;
    const bool use_acoustic = mode != LocalizationMode::optical;
    constexpr double kVarianceFloor = 1e-12;

    std::vector<Reference> refs;
    for (std::size_t a = 0; a < dep.anchors.size(); ++a) refs.push_back({n + a, dep.anchors[a], 0.0});

    LocalizationResult out;
    out.estimates.assign(n, std::nullopt);

    std::vector<Admission> tiers{Admission::any_reference};
    if (mode == LocalizationMode::hybrid) tiers = {Admission::optical_only, Admission::any_reference};

    std::vector<RangeRef> ranges;
    for (const auto tier : tiers) {
        while (true) {
            std::vector<Reference> promoted;
            for (std::size_t j = 0; j < n; ++j) {
                if (out.estimates[j]) continue;
                ranges.clear();
                std::size_t optical_count = 0;
                std::size_t refs_seen = 0;
                for (const auto& ref : refs) {
                    bool seen = false;
                    for (const Tech tech : {Tech::optical, Tech::acoustic}) {
                        if ((tech == Tech::optical && !use_optical) || (tech == Tech::acoustic && !use_acoustic)) continue;
                        const auto& meas = cache.get(ref.station, j, tech);
                        if (!meas) continue;
                        double weight = 1.0;
                        if (ctx.config.weighting != Weighting::uniform) {
                            double var = meas->variance;
                            if (ctx.config.weighting == Weighting::full_variance) var += ref.variance;
                            weight = 1.0 / std::max(var, kVarianceFloor);
                        }
                        ranges.push_back({ref.position, meas->distance, weight});
                        seen = true;
                        if (tech == Tech::optical) ++optical_count;
                    }
                    if (seen) ++refs_seen;
                }
                const std::size_t count = tier == Admission::optical_only ? optical_count : refs_seen;
                if (count < 4) continue;
                try {
                    const auto sol = multilaterate(ranges);
                    if (!sol.converged) continue;
                    const double var = ctx.config.weighting == Weighting::uniform ? 0.0 : sol.position_variance;
                    promoted.push_back({j, sol.position, var});
                } catch (const DegenerateGeometry&) {
                }
            }
            if (promoted.empty()) break;
            ++out.rounds;
            for (const auto& p : promoted) {
                out.estimates[p.station] = p.position;
                refs.push_back(p);
            }
        }
    }

    double se = 0.0;
    double se_all = 0.0;
    std::size_t localized = 0;
    const Vec3 prior = dep.volume.center();
    for (std::size_t j = 0; j < n; ++j) {
        if (out.estimates[j]) {
            const Vec3 d = *out.estimates[j] - dep.nodes[j];
            se += dot(d, d);
            se_all += dot(d, d);
            ++localized;
        } else {
            const Vec3 d = prior - dep.nodes[j];
            se_all += dot(d, d);
        }
    }
    out.localized_fraction = static_cast<double>(localized) / static_cast<double>(n);
    out.rmse = localized > 0 ? std::sqrt(se / static_cast<double>(localized)) : std::numeric_limits<double>::quiet_NaN();
    out.rmse_all = std::sqrt(se_all / static_cast<double>(n));
    out.measurements = cache.count();
    return out;
}

}  // namespace uoan
