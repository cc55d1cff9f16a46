#include "uoan/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <toml.hpp>

#include "uoan/error.hpp"

namespace uoan {

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

toml::array vec_array(const Vec3& v) { return toml::array{v.x, v.y, v.z}; }

toml::table to_table(const ExperimentConfig& c) {
    const auto& g = c.geometry;
    toml::table geometry{
        {"node_count", static_cast<std::int64_t>(g.node_count)},
        {"anchor_count", static_cast<std::int64_t>(g.anchor_count)},
        {"volume", vec_array(g.volume_edges)},
        {"sink", vec_array(g.sink)},
        {"anchors_on_surface", g.anchors_on_surface},
        {"n_faces", static_cast<std::int64_t>(g.n_faces)},
        {"divergence_half_angle", g.divergence_override.value_or(0.0)},
    };

    const auto& o = c.optical;
    toml::table optical{
        {"water_type", std::string(to_string(c.water_type))},
        {"tx_power", o.tx_power},
        {"tx_efficiency", o.tx_efficiency},
        {"rx_efficiency", o.rx_efficiency},
        {"rx_aperture_area", o.rx_aperture_area},
        {"responsivity", o.responsivity},
        {"noise_variance", o.noise_variance},
        {"bandwidth", o.bandwidth},
        {"fec_ber_threshold", o.fec_ber_threshold},
    };
    optical.insert("extinction", toml::table{
                                     {"pure_sea", c.extinction.pure_sea},
                                     {"clear_ocean", c.extinction.clear_ocean},
                                     {"coastal", c.extinction.coastal},
                                     {"harbor", c.extinction.harbor},
                                 });

    const auto& a = c.acoustic;
    toml::table acoustic{
        {"source_level", a.source_level},
        {"frequency_khz", a.frequency_khz},
        {"spreading_exponent", a.spreading_exponent},
        {"bandwidth", a.bandwidth},
        {"shipping", a.shipping},
        {"wind_speed", a.wind_speed},
        {"fec_ber_threshold", a.fec_ber_threshold},
    };

    toml::table routing{
        {"mode", std::string(to_string(c.routing.mode))},
        {"threshold_bps", c.routing.threshold_bps},
        {"average_unreachable_as_zero", c.routing.average_unreachable_as_zero},
    };

    toml::array modes;
    for (auto m : c.localization.modes) modes.push_back(std::string(to_string(m)));
    toml::table localization{
        {"modes", modes},
        {"noise_sigma_db_optical", c.localization.noise_sigma_db_optical},
        {"noise_sigma_db_acoustic", c.localization.noise_sigma_db_acoustic},
        {"weighting", std::string(to_string(c.localization.weighting))},
    };

    toml::array values;
    for (const auto& v : c.sweep_values) {
        if (std::isnan(v.number)) values.push_back(v.text);
        else if (c.sweep_parameter == "n_faces" || c.sweep_parameter == "node_count")
            values.push_back(static_cast<std::int64_t>(v.number));
        else values.push_back(v.number);
    }
    toml::table experiment{
        {"seed", static_cast<std::int64_t>(c.seed)},
        {"trials", static_cast<std::int64_t>(c.trials)},
        {"threads", static_cast<std::int64_t>(c.threads)},
        {"sweep_param", c.sweep_parameter},
        {"sweep_values", values},
    };

    return toml::table{
        {"geometry", geometry}, {"optical", optical},           {"acoustic", acoustic},
        {"routing", routing},   {"localization", localization}, {"experiment", experiment},
    };
}

void merge(toml::table& dst, const toml::table& src, const std::string& prefix) {
    for (const auto& [key, value] : src) {
        const std::string path = prefix.empty() ? std::string(key.str()) : prefix + "." + std::string(key.str());
        if (prefix.empty() && key.str() == "manifest") continue;
        auto* existing = dst.get(key);
        if (existing == nullptr) throw ConfigError("unknown config key '" + path + "'");
        if (existing->is_table()) {
            if (!value.is_table()) throw ConfigError(path + ": expected a table");
            merge(*existing->as_table(), *value.as_table(), path);
        } else {
            if (value.is_table()) throw ConfigError(path + ": expected a value, got a table");
            dst.insert_or_assign(key, value);
        }
    }
}

void apply_override(toml::table& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + spec + "': expected key=value");
    const std::string path = spec.substr(0, eq);
    const std::string text = spec.substr(eq + 1);

    toml::table* table = &root;
    std::string_view rest = path;
    while (true) {
        const auto dot = rest.find('.');
        const std::string part(rest.substr(0, dot));
        auto* node = table->get(part);
        if (node == nullptr) throw ConfigError("unknown config key '" + path + "'");
        if (dot == std::string_view::npos) {
            if (node->is_table()) throw ConfigError("override '" + path + "': names a table, not a value");
            try {
                auto parsed = toml::parse("v = " + text);
                table->insert_or_assign(part, *parsed.get("v"));
            } catch (const toml::parse_error&) {
                table->insert_or_assign(part, text);
            }
            return;
        }
        if (!node->is_table()) throw ConfigError("unknown config key '" + path + "'");
        table = node->as_table();
        rest = rest.substr(dot + 1);
    }
}

class Reader {
public:
    explicit Reader(const toml::table& root) : root_(root) {}

    const toml::node& at(std::string_view path) const {
        const auto* node = root_.at_path(path).node();
        if (node == nullptr) throw ConfigError("missing config key '" + std::string(path) + "'");
        return *node;
    }

    double number(std::string_view path) const {
        const auto& n = at(path);
        if (n.is_floating_point()) return *n.value<double>();
        if (n.is_integer()) return static_cast<double>(*n.value<std::int64_t>());
        throw ConfigError(std::string(path) + ": expected a number");
    }

    std::int64_t integer(std::string_view path) const {
        const auto& n = at(path);
        if (n.is_integer()) return *n.value<std::int64_t>();
        if (n.is_floating_point()) {
            const double v = *n.value<double>();
            if (std::floor(v) == v && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
        }
        throw ConfigError(std::string(path) + ": expected an integer");
    }

    std::size_t count(std::string_view path) const {
        const auto v = integer(path);
        if (v < 0) throw ConfigError(std::string(path) + ": must be >= 0");
        return static_cast<std::size_t>(v);
    }

    bool boolean(std::string_view path) const {
        const auto& n = at(path);
        if (!n.is_boolean()) throw ConfigError(std::string(path) + ": expected true or false");
        return *n.value<bool>();
    }

    std::string string(std::string_view path) const {
        const auto& n = at(path);
        if (!n.is_string()) throw ConfigError(std::string(path) + ": expected a string");
        return *n.value<std::string>();
    }

    Vec3 vec3(std::string_view path) const {
        const auto* arr = at(path).as_array();
        if (arr == nullptr || arr->size() != 3) throw ConfigError(std::string(path) + ": expected [x, y, z]");
        double out[3];
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& e = *arr->get(i);
            if (e.is_floating_point()) out[i] = *e.value<double>();
            else if (e.is_integer()) out[i] = static_cast<double>(*e.value<std::int64_t>());
            else throw ConfigError(std::string(path) + ": expected numbers");
        }
        return {out[0], out[1], out[2]};
    }

    const toml::array& array(std::string_view path) const {
        const auto* arr = at(path).as_array();
        if (arr == nullptr) throw ConfigError(std::string(path) + ": expected an array");
        return *arr;
    }

private:
    const toml::table& root_;
};

ExperimentConfig from_table(const toml::table& root) {
    const Reader r(root);
    ExperimentConfig c;

    c.geometry.node_count = r.count("geometry.node_count");
    c.geometry.anchor_count = r.count("geometry.anchor_count");
    c.geometry.volume_edges = r.vec3("geometry.volume");
    c.geometry.sink = r.vec3("geometry.sink");
    c.geometry.anchors_on_surface = r.boolean("geometry.anchors_on_surface");
    c.geometry.n_faces = r.count("geometry.n_faces");
    const double div = r.number("geometry.divergence_half_angle");
    c.geometry.divergence_override = div == 0.0 ? std::nullopt : std::optional<double>(div);

    const auto water = r.string("optical.water_type");
    const auto wt = parse_water_type(water);
    if (!wt) throw ConfigError("optical.water_type: unknown water type '" + water + "'");
    c.water_type = *wt;
    c.optical.tx_power = r.number("optical.tx_power");
    c.optical.tx_efficiency = r.number("optical.tx_efficiency");
    c.optical.rx_efficiency = r.number("optical.rx_efficiency");
    c.optical.rx_aperture_area = r.number("optical.rx_aperture_area");
    c.optical.responsivity = r.number("optical.responsivity");
    c.optical.noise_variance = r.number("optical.noise_variance");
    c.optical.bandwidth = r.number("optical.bandwidth");
    c.optical.fec_ber_threshold = r.number("optical.fec_ber_threshold");
    c.extinction.pure_sea = r.number("optical.extinction.pure_sea");
    c.extinction.clear_ocean = r.number("optical.extinction.clear_ocean");
    c.extinction.coastal = r.number("optical.extinction.coastal");
    c.extinction.harbor = r.number("optical.extinction.harbor");

    c.acoustic.source_level = r.number("acoustic.source_level");
    c.acoustic.frequency_khz = r.number("acoustic.frequency_khz");
    c.acoustic.spreading_exponent = r.number("acoustic.spreading_exponent");
    c.acoustic.bandwidth = r.number("acoustic.bandwidth");
    c.acoustic.shipping = r.number("acoustic.shipping");
    c.acoustic.wind_speed = r.number("acoustic.wind_speed");
    c.acoustic.fec_ber_threshold = r.number("acoustic.fec_ber_threshold");

    const auto mode = r.string("routing.mode");
    const auto rm = parse_routing_mode(mode);
    if (!rm) throw ConfigError("routing.mode: unknown mode '" + mode + "'");
    c.routing.mode = *rm;
    c.routing.threshold_bps = r.number("routing.threshold_bps");
    c.routing.average_unreachable_as_zero = r.boolean("routing.average_unreachable_as_zero");

    c.localization.modes.clear();
    for (const auto& m : r.array("localization.modes")) {
        const auto* s = m.as_string();
        const auto lm = s ? parse_localization_mode(s->get()) : std::nullopt;
        if (!lm) throw ConfigError("localization.modes: entries must be acoustic, optical or hybrid");
        c.localization.modes.push_back(*lm);
    }
    c.localization.noise_sigma_db_optical = r.number("localization.noise_sigma_db_optical");
    c.localization.noise_sigma_db_acoustic = r.number("localization.noise_sigma_db_acoustic");
    const auto weighting = r.string("localization.weighting");
    const auto w = parse_weighting(weighting);
    if (!w) throw ConfigError("localization.weighting: unknown weighting '" + weighting + "'");
    c.localization.weighting = *w;

    const auto seed = r.integer("experiment.seed");
    if (seed < 0) throw ConfigError("experiment.seed: must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.trials = r.count("experiment.trials");
    c.threads = r.count("experiment.threads");
    c.sweep_parameter = r.string("experiment.sweep_param");
    c.sweep_values.clear();
    for (const auto& v : r.array("experiment.sweep_values")) {
        if (v.is_string()) {
            c.sweep_values.push_back({*v.value<std::string>(), std::numeric_limits<double>::quiet_NaN()});
        } else if (v.is_integer()) {
            const auto i = *v.value<std::int64_t>();
            c.sweep_values.push_back({std::to_string(i), static_cast<double>(i)});
        } else if (v.is_floating_point()) {
            const double d = *v.value<double>();
            c.sweep_values.push_back({format_number(d), d});
        } else {
            throw ConfigError("experiment.sweep_values: entries must be numbers or strings");
        }
    }
    return c;
}

void validate_scenario(const ExperimentConfig& c) {
    const auto& g = c.geometry;
    if (g.node_count < 1) throw ConfigError("geometry.node_count: must be >= 1");
    const auto& e = g.volume_edges;
    if (!(e.x > 0.0 && e.y > 0.0 && e.z > 0.0) || !is_finite(e))
        throw ConfigError("geometry.volume: every edge must be positive and finite");
    if (!g.volume().contains(g.sink)) throw ConfigError("geometry.sink: must lie inside the volume");
    if (!c.localization.modes.empty() && g.anchor_count < 4)
        throw ConfigError("geometry.anchor_count: localization needs >= 4 anchors");
    try {
        (void)c.face_set();
    } catch (const DomainError& ex) {
        throw ConfigError(std::string("geometry.n_faces/divergence_half_angle: ") + ex.what());
    }
    c.optical.validate();
    for (auto w : {WaterType::pure_sea, WaterType::clear_ocean, WaterType::coastal, WaterType::harbor}) {
        if (!(c.extinction[w] > 0.0))
            throw ConfigError("optical.extinction." + std::string(to_string(w)) + ": must be positive");
    }
    c.acoustic.validate();
    if (!(c.routing.threshold_bps > 0.0)) throw ConfigError("routing.threshold_bps: must be positive");
    c.localization.validate();
}

}  // namespace

ExperimentConfig with_sweep_value(const ExperimentConfig& cfg, const SweepValue& v) {
    ExperimentConfig c = cfg;
    const auto& p = cfg.sweep_parameter;
    const auto need_integer = [&](const char* key) {
        if (std::isnan(v.number) || std::floor(v.number) != v.number || v.number < 1.0)
            throw ConfigError(std::string("experiment.sweep_values: ") + key + " values must be integers >= 1, got '" +
                              v.text + "'");
        return static_cast<std::size_t>(v.number);
    };
    const auto need_number = [&]() {
        if (std::isnan(v.number)) throw ConfigError("experiment.sweep_values: expected a number, got '" + v.text + "'");
        return v.number;
    };
    if (p == "n_faces") {
        c.geometry.n_faces = need_integer("n_faces");
    } else if (p == "node_count") {
        c.geometry.node_count = need_integer("node_count");
    } else if (p == "divergence_half_angle") {
        c.geometry.divergence_override = need_number();
    } else if (p == "noise_sigma_db") {
        c.localization.noise_sigma_db_optical = need_number();
        c.localization.noise_sigma_db_acoustic = need_number();
    } else if (p == "water_type") {
        const auto w = parse_water_type(v.text);
        if (!w) throw ConfigError("experiment.sweep_values: unknown water type '" + v.text + "'");
        c.water_type = *w;
    } else {
        throw ConfigError("experiment.sweep_param: unknown parameter '" + p + "'");
    }
    return c;
}

void ExperimentConfig::validate() const {
    validate_scenario(*this);
    if (trials < 1) throw ConfigError("experiment.trials: must be >= 1");
    if (sweep_values.empty()) throw ConfigError("experiment.sweep_values: must not be empty");
    for (const auto& v : sweep_values) validate_scenario(with_sweep_value(*this, v));
}

ExperimentConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
    toml::table merged = to_table(ExperimentConfig{});
    try {
        const toml::table user = toml::parse(text);
        merge(merged, user, "");
    } catch (const toml::parse_error& ex) {
        std::ostringstream msg;
        msg << "config parse error at line " << ex.source().begin.line << ": " << ex.description();
        throw ConfigError(msg.str());
    }
    for (const auto& o : overrides) apply_override(merged, o);
    ExperimentConfig cfg = from_table(merged);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

std::string config_to_toml(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << to_table(cfg) << "\n";
    return out.str();
}

}  // namespace uoan
