#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "planforge/simd/kernels.hpp"

namespace planforge::simd {

namespace {

constexpr KernelTable kScalarTable{&scalar::degree_hours, &scalar::overlap_areas, &scalar::accumulate_solar_gain};
#ifdef PLANFORGE_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{&avx2::degree_hours, &avx2::overlap_areas, &avx2::accumulate_solar_gain};
#endif

Backend detect() {
    if (const char* env = std::getenv("PLANFORGE_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return Backend::Scalar;
        if (want == "avx2" && backend_supported(Backend::Avx2)) return Backend::Avx2;
    }
    return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

// -1: not yet detected
std::atomic<int> g_backend{-1};

}  // namespace

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) {
    if (b == Backend::Scalar) return true;
#if defined(PLANFORGE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() {
    int b = g_backend.load(std::memory_order_relaxed);
    if (b < 0) {
        b = static_cast<int>(detect());
        g_backend.store(b, std::memory_order_relaxed);
    }
    return static_cast<Backend>(b);
}

void force_backend(Backend b) {
    if (!backend_supported(b)) throw std::runtime_error("SIMD backend '" + std::string(backend_name(b)) + "' not supported");
    g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
}

void reset_backend() { g_backend.store(-1, std::memory_order_relaxed); }

const KernelTable& kernels(Backend b) {
#ifdef PLANFORGE_HAVE_AVX2_KERNELS
    if (b == Backend::Avx2) return kAvx2Table;
#endif
    (void)b;
    return kScalarTable;
}

void RectColumns::clear() {
    x0.clear();
    y0.clear();
    x1.clear();
    y1.clear();
}

void RectColumns::push_back(const Rect& r) {
    x0.push_back(r.min_x());
    y0.push_back(r.min_y());
    x1.push_back(r.max_x());
    y1.push_back(r.max_y());
}

DegreeHourSums degree_hours(std::span<const double> temps, std::span<const double> lower,
                            std::span<const double> upper, std::span<const std::uint8_t> occupied) {
    if (lower.size() != temps.size() || upper.size() != temps.size() || occupied.size() != temps.size())
        throw std::invalid_argument("degree_hours: series lengths differ");
    return kernels(active_backend()).degree_hours(temps.data(), lower.data(), upper.data(), occupied.data(), temps.size());
}

void overlap_areas(const Rect& target, const RectColumns& cols, std::span<double> out) {
    if (out.size() != cols.size()) throw std::invalid_argument("overlap_areas: output size mismatch");
    kernels(active_backend())
        .overlap_areas(target.min_x(), target.min_y(), target.max_x(), target.max_y(), cols.x0.data(), cols.y0.data(),
                       cols.x1.data(), cols.y1.data(), out.data(), out.size());
}

void accumulate_solar_gain(double scale, std::span<const double> direct, std::span<const double> shade,
                           std::span<const double> diffuse, std::span<double> out) {
    if (direct.size() != out.size() || shade.size() != out.size() || diffuse.size() != out.size())
        throw std::invalid_argument("accumulate_solar_gain: series lengths differ");
    kernels(active_backend()).accumulate_solar_gain(scale, direct.data(), shade.data(), diffuse.data(), out.data(), out.size());
}

}  // namespace planforge::simd
