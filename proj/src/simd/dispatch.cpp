#include <atomic>
#include <cstdlib>
#include <string>

#include "uoan/error.hpp"
#include "uoan/simd.hpp"

namespace uoan::simd {

Soa3::Soa3(std::span<const Vec3> points) {
    x_.reserve(points.size());
    y_.reserve(points.size());
    z_.reserve(points.size());
    for (const auto& p : points) push_back(p);
}

void Soa3::push_back(const Vec3& p) {
    x_.push_back(p.x);
    y_.push_back(p.y);
    z_.push_back(p.z);
}

void Soa3::clear() {
    x_.clear();
    y_.clear();
    z_.clear();
}

namespace {

struct KernelTable {
    Backend backend;
    void (*dot)(Soa3View, const Vec3&, double*);
    void (*distance)(Soa3View, const Vec3&, double*);
};

constexpr KernelTable kScalar{Backend::scalar, &scalar::dot_batch, &scalar::distance_batch};
#if defined(UOAN_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::avx2, &avx2::dot_batch, &avx2::distance_batch};
#endif
#if defined(UOAN_HAVE_NEON)
constexpr KernelTable kNeon{Backend::neon, &neon::dot_batch, &neon::distance_batch};
#endif

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &kScalar;
        case Backend::avx2:
#if defined(UOAN_HAVE_AVX2)
            if (__builtin_cpu_supports("avx2")) return &kAvx2;
#endif
            return nullptr;
        case Backend::neon:
#if defined(UOAN_HAVE_NEON)
            return &kNeon;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("UOAN_SIM_KERNELS")) {
        const std::string want = env;
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
            if (want == backend_name(b)) {
                if (const auto* t = table_for(b)) return t;
            }
        }
    }
    for (Backend b : {Backend::avx2, Backend::neon}) {
        if (const auto* t = table_for(b)) return t;
    }
    return &kScalar;
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

void dot_batch(Soa3View points, const Vec3& dir, std::span<double> out) {
    if (out.size() < points.size) throw DomainError("dot_batch: output span too small");
    current().load(std::memory_order_acquire)->dot(points, dir, out.data());
}

void distance_batch(Soa3View points, const Vec3& origin, std::span<double> out) {
    if (out.size() < points.size) throw DomainError("distance_batch: output span too small");
    current().load(std::memory_order_acquire)->distance(points, origin, out.data());
}

Backend active_backend() { return current().load(std::memory_order_acquire)->backend; }

bool backend_available(Backend b) { return table_for(b) != nullptr; }

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
        case Backend::neon:
            return "neon";
    }
    return "unknown";
}

void set_backend(Backend b) {
    const auto* t = table_for(b);
    if (t == nullptr) throw DomainError("SIMD backend not available: " + std::string(backend_name(b)));
    current().store(t, std::memory_order_release);
}

}  // namespace uoan::simd
