// Built with -mavx2 only (no -mfma) so the compiler cannot contract mul+add.
#include <immintrin.h>

#include "uoan/simd.hpp"

namespace uoan::simd::avx2 {

void dot_batch(Soa3View p, const Vec3& dir, double* out) {
    const __m256d dx = _mm256_set1_pd(dir.x);
    const __m256d dy = _mm256_set1_pd(dir.y);
    const __m256d dz = _mm256_set1_pd(dir.z);
    std::size_t i = 0;
    for (; i + 4 <= p.size; i += 4) {
        const __m256d x = _mm256_loadu_pd(p.x + i);
        const __m256d y = _mm256_loadu_pd(p.y + i);
        const __m256d z = _mm256_loadu_pd(p.z + i);
        const __m256d xy = _mm256_add_pd(_mm256_mul_pd(x, dx), _mm256_mul_pd(y, dy));
        _mm256_storeu_pd(out + i, _mm256_add_pd(xy, _mm256_mul_pd(z, dz)));
    }
    for (; i < p.size; ++i) out[i] = (p.x[i] * dir.x + p.y[i] * dir.y) + p.z[i] * dir.z;
}

void distance_batch(Soa3View p, const Vec3& origin, double* out) {
    const __m256d ox = _mm256_set1_pd(origin.x);
    const __m256d oy = _mm256_set1_pd(origin.y);
    const __m256d oz = _mm256_set1_pd(origin.z);
    std::size_t i = 0;
    for (; i + 4 <= p.size; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(p.x + i), ox);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(p.y + i), oy);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(p.z + i), oz);
        const __m256d xy = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_add_pd(xy, _mm256_mul_pd(dz, dz))));
    }
    if (i < p.size) {
        Soa3View tail{p.x + i, p.y + i, p.z + i, p.size - i};
        scalar::distance_batch(tail, origin, out + i);
    }
}

}  // namespace uoan::simd::avx2
