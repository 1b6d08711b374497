#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants selected at runtime. Every variant computes the same
// element-wise values; reductions may differ only by summation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "planforge/geometry.hpp"

namespace planforge::simd {

enum class Backend : unsigned char { Scalar, Avx2 };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);

// Best supported backend, unless overridden by PLANFORGE_SIMD=scalar|avx2
// or force_backend().
Backend active_backend();
void force_backend(Backend b);  // throws std::runtime_error when unsupported
void reset_backend();

struct DegreeHourSums {
    double heating = 0.0;
    double cooling = 0.0;
};

// Structure-of-arrays rectangle set.
struct RectColumns {
    std::vector<double> x0, y0, x1, y1;

    void clear();
    void push_back(const Rect& r);
    std::size_t size() const { return x0.size(); }
};

using DegreeHoursFn = DegreeHourSums (*)(const double* temps, const double* lower, const double* upper,
                                         const std::uint8_t* occupied, std::size_t n);
using OverlapAreasFn = void (*)(double tx0, double ty0, double tx1, double ty1, const double* x0, const double* y0,
                                const double* x1, const double* y1, double* out, std::size_t n);
using SolarGainFn = void (*)(double scale, const double* direct, const double* shade, const double* diffuse,
                             double* out, std::size_t n);

struct KernelTable {
    DegreeHoursFn degree_hours;
    OverlapAreasFn overlap_areas;
    SolarGainFn accumulate_solar_gain;
};

const KernelTable& kernels(Backend b);

// Occupied-hour sums of max(0, lower - T) and max(0, T - upper).
DegreeHourSums degree_hours(std::span<const double> temps, std::span<const double> lower,
                            std::span<const double> upper, std::span<const std::uint8_t> occupied);

// out[i] = overlap area of target with rect i; extents below kGeomEps count as 0.
void overlap_areas(const Rect& target, const RectColumns& cols, std::span<double> out);

// out[h] += scale * ((1 - shade[h]) * direct[h] + diffuse[h])
void accumulate_solar_gain(double scale, std::span<const double> direct, std::span<const double> shade,
                           std::span<const double> diffuse, std::span<double> out);

namespace scalar {
DegreeHourSums degree_hours(const double* temps, const double* lower, const double* upper,
                            const std::uint8_t* occupied, std::size_t n);
void overlap_areas(double tx0, double ty0, double tx1, double ty1, const double* x0, const double* y0,
                   const double* x1, const double* y1, double* out, std::size_t n);
void accumulate_solar_gain(double scale, const double* direct, const double* shade, const double* diffuse,
                           double* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PLANFORGE_HAVE_AVX2_KERNELS 1
namespace avx2 {
DegreeHourSums degree_hours(const double* temps, const double* lower, const double* upper,
                            const std::uint8_t* occupied, std::size_t n);
void overlap_areas(double tx0, double ty0, double tx1, double ty1, const double* x0, const double* y0,
                   const double* x1, const double* y1, double* out, std::size_t n);
void accumulate_solar_gain(double scale, const double* direct, const double* shade, const double* diffuse,
                           double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace planforge::simd
