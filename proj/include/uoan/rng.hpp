#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace uoan {

/// Independent random streams carved out of one master seed.
enum class Stream : std::uint64_t { nodes = 1, anchors = 2, measurement = 3 };

std::uint64_t splitmix64(std::uint64_t x);

/// Order-sensitive hash of a key tuple; used to derive substreams and counter-based draws.
std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts);

/// Seedable generator with platform-independent uniform and normal transforms
/// (the std:: distributions are implementation-defined).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Substream for one trial. Depends only on (master seed, trial, stream), so trials can
    /// run in any order on any number of workers.
    static SeededRng substream(std::uint64_t master_seed, std::uint64_t trial, Stream stream) {
        return SeededRng(hash_key({master_seed, trial, static_cast<std::uint64_t>(stream)}));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Standard normal variate that is a pure function of `key` (counter-based draw).
double counter_normal(std::uint64_t key);

}  // namespace uoan
