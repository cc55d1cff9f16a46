#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "uoan/vec3.hpp"

/// Batched inner-loop kernels. Every backend produces results bit-identical to the scalar
/// reference: no fused multiply-add, same association order, IEEE sqrt.
namespace uoan::simd {

enum class Backend { scalar, avx2, neon };

/// Read-only structure-of-arrays view of 3D points or directions.
struct Soa3View {
    const double* x = nullptr;
    const double* y = nullptr;
    const double* z = nullptr;
    std::size_t size = 0;
};

/// Owning structure-of-arrays point set.
class Soa3 {
public:
    Soa3() = default;
    explicit Soa3(std::span<const Vec3> points);

    void push_back(const Vec3& p);
    void clear();
    std::size_t size() const { return x_.size(); }
    Vec3 operator[](std::size_t i) const { return {x_[i], y_[i], z_[i]}; }
    Soa3View view() const { return {x_.data(), y_.data(), z_.data(), x_.size()}; }

private:
    std::vector<double> x_, y_, z_;
};

/// out[i] = dot(points[i], dir). `out.size()` must be at least `points.size`.
void dot_batch(Soa3View points, const Vec3& dir, std::span<double> out);

/// out[i] = |points[i] - origin|.
void distance_batch(Soa3View points, const Vec3& origin, std::span<double> out);

Backend active_backend();
bool backend_available(Backend b);
std::string_view backend_name(Backend b);

/// Forces a backend (tests, benchmarking). Throws DomainError if the CPU lacks it.
/// Initial selection honours UOAN_SIM_KERNELS=scalar|avx2|neon, else the best available.
void set_backend(Backend b);

namespace scalar {
void dot_batch(Soa3View points, const Vec3& dir, double* out);
void distance_batch(Soa3View points, const Vec3& origin, double* out);
}  // namespace scalar

#if defined(UOAN_HAVE_AVX2)
namespace avx2 {
void dot_batch(Soa3View points, const Vec3& dir, double* out);
void distance_batch(Soa3View points, const Vec3& origin, double* out);
}  // namespace avx2
#endif

#if defined(UOAN_HAVE_NEON)
namespace neon {
void dot_batch(Soa3View points, const Vec3& dir, double* out);
void distance_batch(Soa3View points, const Vec3& origin, double* out);
}  // namespace neon
#endif

}  // namespace uoan::simd
