#include <algorithm>

#include "planforge/simd/kernels.hpp"

namespace planforge::simd::scalar {

DegreeHourSums degree_hours(const double* temps, const double* lower, const double* upper,
                            const std::uint8_t* occupied, std::size_t n) {
    DegreeHourSums s;
    for (std::size_t i = 0; i < n; ++i) {
        if (!occupied[i]) continue;
        s.heating += std::max(0.0, lower[i] - temps[i]);
        s.cooling += std::max(0.0, temps[i] - upper[i]);
    }
    return s;
}

void overlap_areas(double tx0, double ty0, double tx1, double ty1, const double* x0, const double* y0,
                   const double* x1, const double* y1, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double w = std::min(tx1, x1[i]) - std::max(tx0, x0[i]);
        double h = std::min(ty1, y1[i]) - std::max(ty0, y0[i]);
        w = w > kGeomEps ? w : 0.0;
        h = h > kGeomEps ? h : 0.0;
        out[i] = w * h;
    }
}

void accumulate_solar_gain(double scale, const double* direct, const double* shade, const double* diffuse,
                           double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double unshaded = (1.0 - shade[i]) * direct[i];
        out[i] += scale * (unshaded + diffuse[i]);
    }
}

}  // namespace planforge::simd::scalar
