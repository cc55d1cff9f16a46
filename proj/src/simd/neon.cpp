#include <arm_neon.h>

#include "uoan/simd.hpp"

namespace uoan::simd::neon {

void dot_batch(Soa3View p, const Vec3& dir, double* out) {
    const float64x2_t dx = vdupq_n_f64(dir.x);
    const float64x2_t dy = vdupq_n_f64(dir.y);
    const float64x2_t dz = vdupq_n_f64(dir.z);
    std::size_t i = 0;
    for (; i + 2 <= p.size; i += 2) {
        const float64x2_t xy = vaddq_f64(vmulq_f64(vld1q_f64(p.x + i), dx), vmulq_f64(vld1q_f64(p.y + i), dy));
        vst1q_f64(out + i, vaddq_f64(xy, vmulq_f64(vld1q_f64(p.z + i), dz)));
    }
    for (; i < p.size; ++i) out[i] = (p.x[i] * dir.x + p.y[i] * dir.y) + p.z[i] * dir.z;
}

void distance_batch(Soa3View p, const Vec3& origin, double* out) {
    const float64x2_t ox = vdupq_n_f64(origin.x);
    const float64x2_t oy = vdupq_n_f64(origin.y);
    const float64x2_t oz = vdupq_n_f64(origin.z);
    std::size_t i = 0;
    for (; i + 2 <= p.size; i += 2) {
        const float64x2_t dx = vsubq_f64(vld1q_f64(p.x + i), ox);
        const float64x2_t dy = vsubq_f64(vld1q_f64(p.y + i), oy);
        const float64x2_t dz = vsubq_f64(vld1q_f64(p.z + i), oz);
        const float64x2_t xy = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
        vst1q_f64(out + i, vsqrtq_f64(vaddq_f64(xy, vmulq_f64(dz, dz))));
    }
    if (i < p.size) {
        Soa3View tail{p.x + i, p.y + i, p.z + i, p.size - i};
        scalar::distance_batch(tail, origin, out + i);
    }
}

}  // namespace uoan::simd::neon
