#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaussian_tail.hpp"
#include "support.hpp"
#include "uoan/error.hpp"
#include "uoan/geometry.hpp"
#include "uoan/optical.hpp"

using namespace uoan;

namespace {

LinkGeometry single_face_link(double d, double incidence) {
    LinkGeometry g;
    g.distance = d;
    g.in_beam = true;
    g.rx_faces_in_fov = {{0, incidence}};
    return g;
}

// Received power that makes responsivity * pr / sigma equal `ratio`.
double power_for_ratio(double ratio, const OpticalParams& p) { return ratio * std::sqrt(p.noise_variance) / p.responsivity; }

}  // namespace

TEST_CASE("water types and extinction table") {
    const ExtinctionTable t;
    CHECK(t[WaterType::pure_sea] == 0.056);
    CHECK(t[WaterType::clear_ocean] == 0.151);
    CHECK(t[WaterType::coastal] == 0.305);
    CHECK(t[WaterType::harbor] == 2.17);
    for (auto w : {WaterType::pure_sea, WaterType::clear_ocean, WaterType::coastal, WaterType::harbor})
        CHECK(parse_water_type(to_string(w)) == w);
    CHECK_FALSE(parse_water_type("murky").has_value());
}

TEST_CASE("optical params validation") {
    OpticalParams p;
    CHECK_NOTHROW(p.validate());
    p.tx_efficiency = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.fec_ber_threshold = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.noise_variance = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("transmittance: zero path and exponential law") {
    CHECK(optical::transmittance(0.151, 0.0) == 1.0);
    CHECK(optical::transmittance(2.17, 1e-12) == doctest::Approx(1.0));
    for (double c : {0.056, 0.151, 0.305, 2.17}) {
        for (double d : {0.5, 3.0, 17.0, 60.0}) {
            const double t = optical::transmittance(c, d);
            CHECK(testing::relative_error(optical::transmittance(c, 2 * d), t * t) < 1e-12);
        }
    }
}

TEST_CASE("received power: cosine projection of a single face") {
    const auto faces = make_face_set(8);
    const OpticalParams p;
    const Water w{WaterType::clear_ocean, 0.151};
    const double th = faces.fov_half_angle();
    const double on_axis = optical::received_power(single_face_link(20.0, 0.0), faces, p, w);
    const double edge = optical::received_power(single_face_link(20.0, th), faces, p, w);
    CHECK(edge / on_axis == doctest::Approx(std::cos(th)).epsilon(1e-14));
}

TEST_CASE("received power: closed form") {
    const auto faces = make_face_set(8);
    const OpticalParams p;
    const Water w{WaterType::coastal, 0.305};
    const double d = 12.0;
    const double want = p.tx_power * p.tx_efficiency * p.rx_efficiency * std::exp(-0.305 * d) * p.rx_aperture_area *
                        std::cos(0.2) / (2 * std::numbers::pi * d * d * (1 - std::cos(faces.divergence_half_angle())));
    CHECK(testing::relative_error(optical::received_power(single_face_link(d, 0.2), faces, p, w), want) < 1e-13);
}

TEST_CASE("received power: zero out of beam, error at zero distance") {
    const auto faces = make_face_set(8);
    auto g = single_face_link(10.0, 0.1);
    g.in_beam = false;
    CHECK(optical::received_power(g, faces, {}, {}) == 0.0);
    g = single_face_link(0.0, 0.1);
    CHECK_THROWS_AS(optical::received_power(g, faces, {}, {}), DomainError);
}

TEST_CASE("received power: strictly decreasing in distance") {
    const auto faces = make_face_set(8);
    const OpticalParams p;
    const Water w;
    double prev = INFINITY;
    for (double d = 0.5; d < 300.0; d *= 1.1) {
        const double pr = optical::received_power(single_face_link(d, 0.3), faces, p, w);
        CHECK(pr < prev);
        prev = pr;
    }
}

TEST_CASE("received power: non-increasing in divergence half-angle") {
    const OpticalParams p;
    const Water w;
    double prev = INFINITY;
    for (double th = 0.05; th <= std::numbers::pi / 2; th += 0.05) {
        const auto faces = make_face_set(8, th);
        const double pr = optical::received_power(single_face_link(30.0, 0.0), faces, p, w);
        CHECK(pr <= prev);
        prev = pr;
    }
}

TEST_CASE("received power: adding a face never decreases power") {
    const auto faces = make_face_set(8);
    const OpticalParams p;
    const Water w;
    auto g = single_face_link(15.0, 0.4);
    double prev = optical::received_power(g, faces, p, w);
    for (double inc : {0.7, 0.1, 0.72}) {
        g.rx_faces_in_fov.push_back({g.rx_faces_in_fov.size(), inc});
        const double pr = optical::received_power(g, faces, p, w);
        CHECK(pr >= prev);
        prev = pr;
    }
}

TEST_CASE("ber: no signal, Q(3), monotone") {
    const OpticalParams p;
    CHECK(optical::ber(0.0, p) == 0.5);
    const double q3 = optical::ber(power_for_ratio(3.0, p), p);
    CHECK(std::abs(q3 - oracle::gaussian_tail(3.0)) < 1e-6);
    CHECK(q3 == doctest::Approx(1.3499e-3).epsilon(1e-4));
    CHECK(std::abs(q_function(3.0) - oracle::gaussian_tail(3.0)) < 1e-9);
    double prev = 1.0;
    for (double r = 0.0; r < 10.0; r += 0.05) {
        const double b = optical::ber(power_for_ratio(r, p), p);
        CHECK(b <= prev);
        prev = b;
    }
}

TEST_CASE("capacity: zero signal and unit SNR") {
    OpticalParams p;
    CHECK(optical::capacity(0.0, p) == 0.0);
    p.bandwidth = 1e6;
    p.fec_ber_threshold = 0.2;  // Q(1) ~ 0.159 must pass the gate
    CHECK(optical::capacity(power_for_ratio(1.0, p), p) == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(optical::snr(power_for_ratio(1.0, p), p) == doctest::Approx(1.0));
}

TEST_CASE("capacity: zero exactly when the FEC gate fails") {
    const OpticalParams p;
    for (double r = 0.0; r < 8.0; r += 0.01) {
        const double pr = power_for_ratio(r, p);
        CHECK((optical::capacity(pr, p) == 0.0) == (optical::ber(pr, p) > p.fec_ber_threshold));
    }
    auto g = single_face_link(5.0, 0.0);
    g.in_beam = false;
    CHECK(optical::capacity(optical::received_power(g, make_face_set(8), p, {}), p) == 0.0);
}

TEST_CASE("capacity: ordered by water clarity") {
    const auto faces = make_face_set(8);
    const OpticalParams p;
    const ExtinctionTable t;
    for (double d : {5.0, 20.0, 40.0, 80.0, 150.0}) {
        double prev = INFINITY;
        for (auto w : {WaterType::pure_sea, WaterType::clear_ocean, WaterType::coastal, WaterType::harbor}) {
            const double c = optical::capacity(optical::received_power(single_face_link(d, 0.2), faces, p, {w, t[w]}), p);
            CHECK(c <= prev);
            prev = c;
        }
    }
}
