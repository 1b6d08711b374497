#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "planforge/simd/kernels.hpp"

using namespace planforge;
using namespace planforge::simd;

namespace {

struct BackendGuard {
    ~BackendGuard() { reset_backend(); }
};

}  // namespace

TEST_CASE("backend selection") {
    CHECK(backend_supported(Backend::Scalar));
    CHECK(backend_name(Backend::Scalar) == "scalar");
    BackendGuard g;
    force_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    if (!backend_supported(Backend::Avx2)) CHECK_THROWS_AS(force_backend(Backend::Avx2), std::runtime_error);
}

TEST_CASE("degree hours: backends agree") {
    if (!backend_supported(Backend::Avx2)) return;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> t(0.0, 40.0), lo(18.0, 23.0);
    const auto& s = kernels(Backend::Scalar);
    const auto& v = kernels(Backend::Avx2);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 17u, 168u, 8760u}) {
        std::vector<double> temps(n), lower(n), upper(n);
        std::vector<std::uint8_t> occ(n);
        for (std::size_t i = 0; i < n; ++i) {
            temps[i] = t(rng);
            lower[i] = lo(rng);
            upper[i] = lower[i] + 5.0;
            occ[i] = rng() & 1;
        }
        const auto a = s.degree_hours(temps.data(), lower.data(), upper.data(), occ.data(), n);
        const auto b = v.degree_hours(temps.data(), lower.data(), upper.data(), occ.data(), n);
        CAPTURE(n);
        CHECK(b.heating == doctest::Approx(a.heating).epsilon(1e-12));
        CHECK(b.cooling == doctest::Approx(a.cooling).epsilon(1e-12));
    }
}

TEST_CASE("rect overlap: backends agree exactly") {
    if (!backend_supported(Backend::Avx2)) return;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> c(-5.0, 15.0), d(0.0, 6.0);
    for (std::size_t n : {1u, 2u, 4u, 6u, 9u, 33u, 200u}) {
        RectColumns cols;
        for (std::size_t i = 0; i < n; ++i) cols.push_back(make_rect(c(rng), c(rng), d(rng), d(rng)));
        cols.push_back(make_rect(0, 0, 4, 4));
        cols.push_back(make_rect(4, 0, 4, 4));
        const Rect tgt = make_rect(0, 0, 4, 4);
        std::vector<double> a(cols.size()), b(cols.size());
        scalar::overlap_areas(tgt.min_x(), tgt.min_y(), tgt.max_x(), tgt.max_y(), cols.x0.data(), cols.y0.data(),
                              cols.x1.data(), cols.y1.data(), a.data(), cols.size());
        avx2::overlap_areas(tgt.min_x(), tgt.min_y(), tgt.max_x(), tgt.max_y(), cols.x0.data(), cols.y0.data(),
                            cols.x1.data(), cols.y1.data(), b.data(), cols.size());
        CHECK(a == b);
        CHECK(a[a.size() - 2] == 16.0);
        CHECK(a.back() == 0.0);
    }
}

TEST_CASE("solar gain: backends agree exactly") {
    if (!backend_supported(Backend::Avx2)) return;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> r(0.0, 900.0), f(0.0, 1.0);
    for (std::size_t n : {1u, 3u, 4u, 11u, 8760u}) {
        std::vector<double> dir(n), sh(n), dif(n), a(n, 5.0), b(n, 5.0);
        for (std::size_t i = 0; i < n; ++i) {
            dir[i] = r(rng);
            sh[i] = f(rng);
            dif[i] = r(rng) * 0.2;
        }
        scalar::accumulate_solar_gain(0.7, dir.data(), sh.data(), dif.data(), a.data(), n);
        avx2::accumulate_solar_gain(0.7, dir.data(), sh.data(), dif.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-15));
        CHECK(a[0] == doctest::Approx(5.0 + 0.7 * ((1.0 - sh[0]) * dir[0] + dif[0])));
    }
}

TEST_CASE("dispatching wrappers follow the forced backend") {
    BackendGuard g;
    std::vector<double> t = {26, 27, 28, 18}, lo(4, 20.0), up(4, 25.0);
    std::vector<std::uint8_t> occ = {1, 1, 1, 1};
    for (Backend be : {Backend::Scalar, Backend::Avx2}) {
        if (!backend_supported(be)) continue;
        force_backend(be);
        const auto d = degree_hours(t, lo, up, occ);
        CHECK(d.cooling == doctest::Approx(6.0));
        CHECK(d.heating == doctest::Approx(2.0));
    }
}
