#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "uoan/rng.hpp"
#include "uoan/vec3.hpp"

namespace testing {

inline uoan::Vec3 random_point(uoan::SeededRng& rng, double half) {
    return {rng.uniform(-half, half), rng.uniform(-half, half), rng.uniform(-half, half)};
}

inline uoan::Vec3 random_direction(uoan::SeededRng& rng) {
    while (true) {
        const uoan::Vec3 v = random_point(rng, 1.0);
        const double n = uoan::norm(v);
        if (n > 1e-3 && n <= 1.0) return v / n;
    }
}

inline double relative_error(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh scratch directory per call, under the build tree's temp area.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("uoan_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
