// Compiled with -mavx2 -mfma -ffp-contract=off; only called after a runtime CPU check.
#include <immintrin.h>

#include <cstring>

#include "planforge/simd/kernels.hpp"

namespace planforge::simd::avx2 {

namespace {

inline __m256d load_mask4(const std::uint8_t* p) {
    std::int32_t packed;
    std::memcpy(&packed, p, sizeof packed);
    const __m128i bytes = _mm_cvtsi32_si128(packed);
    const __m256d as_double = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(bytes));
    return _mm256_cmp_pd(as_double, _mm256_setzero_pd(), _CMP_GT_OQ);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

DegreeHourSums degree_hours(const double* temps, const double* lower, const double* upper,
                            const std::uint8_t* occupied, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d heat = zero, cool = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(temps + i);
        const __m256d m = load_mask4(occupied + i);
        const __m256d below = _mm256_max_pd(_mm256_sub_pd(_mm256_loadu_pd(lower + i), t), zero);
        const __m256d above = _mm256_max_pd(_mm256_sub_pd(t, _mm256_loadu_pd(upper + i)), zero);
        heat = _mm256_add_pd(heat, _mm256_and_pd(below, m));
        cool = _mm256_add_pd(cool, _mm256_and_pd(above, m));
    }
    DegreeHourSums s{hsum(heat), hsum(cool)};
    const DegreeHourSums tail = scalar::degree_hours(temps + i, lower + i, upper + i, occupied + i, n - i);
    s.heating += tail.heating;
    s.cooling += tail.cooling;
    return s;
}

void overlap_areas(double tx0, double ty0, double tx1, double ty1, const double* x0, const double* y0,
                   const double* x1, const double* y1, double* out, std::size_t n) {
    const __m256d ax0 = _mm256_set1_pd(tx0), ay0 = _mm256_set1_pd(ty0);
    const __m256d ax1 = _mm256_set1_pd(tx1), ay1 = _mm256_set1_pd(ty1);
    const __m256d eps = _mm256_set1_pd(kGeomEps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d w = _mm256_sub_pd(_mm256_min_pd(ax1, _mm256_loadu_pd(x1 + i)), _mm256_max_pd(ax0, _mm256_loadu_pd(x0 + i)));
        __m256d h = _mm256_sub_pd(_mm256_min_pd(ay1, _mm256_loadu_pd(y1 + i)), _mm256_max_pd(ay0, _mm256_loadu_pd(y0 + i)));
        w = _mm256_and_pd(w, _mm256_cmp_pd(w, eps, _CMP_GT_OQ));
        h = _mm256_and_pd(h, _mm256_cmp_pd(h, eps, _CMP_GT_OQ));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(w, h));
    }
    scalar::overlap_areas(tx0, ty0, tx1, ty1, x0 + i, y0 + i, x1 + i, y1 + i, out + i, n - i);
}

void accumulate_solar_gain(double scale, const double* direct, const double* shade, const double* diffuse,
                           double* out, std::size_t n) {
    const __m256d k = _mm256_set1_pd(scale);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d unshaded = _mm256_mul_pd(_mm256_sub_pd(one, _mm256_loadu_pd(shade + i)), _mm256_loadu_pd(direct + i));
        const __m256d gain = _mm256_mul_pd(k, _mm256_add_pd(unshaded, _mm256_loadu_pd(diffuse + i)));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), gain));
    }
    scalar::accumulate_solar_gain(scale, direct + i, shade + i, diffuse + i, out + i, n - i);
}

}  // namespace planforge::simd::avx2
