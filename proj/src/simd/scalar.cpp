#include <cmath>

#include "uoan/simd.hpp"

namespace uoan::simd::scalar {

void dot_batch(Soa3View p, const Vec3& dir, double* out) {
    for (std::size_t i = 0; i < p.size; ++i) out[i] = (p.x[i] * dir.x + p.y[i] * dir.y) + p.z[i] * dir.z;
}

void distance_batch(Soa3View p, const Vec3& origin, double* out) {
    for (std::size_t i = 0; i < p.size; ++i) {
        const double dx = p.x[i] - origin.x;
        const double dy = p.y[i] - origin.y;
        const double dz = p.z[i] - origin.z;
        out[i] = std::sqrt((dx * dx + dy * dy) + dz * dz);
    }
}

}  // namespace uoan::simd::scalar
