#include "uoan/rng.hpp"

#include <cmath>
#include <numbers>

namespace uoan {

namespace {

// Box-Muller on u1 in (0, 1], u2 in [0, 1).
double box_muller(std::uint64_t a, std::uint64_t b) {
    const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

double SeededRng::normal() {
    const auto a = engine_();
    const auto b = engine_();
    return box_muller(a, b);
}

double counter_normal(std::uint64_t key) {
    const auto a = splitmix64(key);
    const auto b = splitmix64(a ^ 0xd1b54a32d192ed03ULL);
    return box_muller(a, b);
}

}  // namespace uoan
