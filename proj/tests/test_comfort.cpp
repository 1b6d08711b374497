#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "planforge/comfort.hpp"
#include "planforge/thermal.hpp"

using namespace planforge;

namespace {

SimResult series(const std::vector<double>& temps, const std::vector<std::uint8_t>& occ) {
    SimResult r;
    r.outdoor.assign(kHoursPerYear, 10.0);
    SpaceSeries s;
    s.space_id = "z";
    s.temperature = temps;
    s.occupied = occ;
    r.spaces.push_back(s);
    return r;
}

}  // namespace

TEST_CASE("comfort bands") {
    const Band en = comfort_band(ComfortModel::en15251(2), 20.0);
    CHECK(std::abs(en.lower - 22.4) <= 1e-9);
    CHECK(std::abs(en.upper - 28.4) <= 1e-9);
    const Band fx = comfort_band(ComfortModel::fixed(20, 25), 3.0);
    CHECK(fx.lower == 20.0);
    CHECK(fx.upper == 25.0);
    const Band ash = comfort_band(ComfortModel::ashrae55(80), 20.0);
    CHECK(std::abs(ash.lower - 20.5) <= 1e-9);
    CHECK(std::abs(ash.upper - 27.5) <= 1e-9);

    CHECK(comfort_band(ComfortModel::en15251(1), 20.0).upper - comfort_band(ComfortModel::en15251(1), 20.0).lower ==
          doctest::Approx(4.0));
    CHECK(comfort_band(ComfortModel::en15251(3), 40.0).lower == doctest::Approx(0.33 * 30 + 18.8 - 4.0));
    CHECK(comfort_band(ComfortModel::ashrae55(90), 0.0).upper == doctest::Approx(0.31 * 10 + 17.8 + 2.5));
}

TEST_CASE("comfort names") {
    CHECK(comfort_from_string("en15251:II") == ComfortModel::en15251(2));
    CHECK(comfort_from_string("ashrae55:90") == ComfortModel::ashrae55(90));
    CHECK(comfort_from_string("fixed:20:26") == ComfortModel::fixed(20, 26));
    for (const auto& m : {ComfortModel::en15251(3), ComfortModel::ashrae55(80), ComfortModel::fixed(19.5, 25)}) {
        CHECK(comfort_from_string(comfort_to_string(m)) == m);
    }
    CHECK_THROWS_AS(comfort_from_string("pmv"), std::invalid_argument);
    CHECK_THROWS_AS(comfort_from_string("en15251:IV"), std::invalid_argument);
}

TEST_CASE("running mean") {
    const WeatherYear c = constant_weather(Location{}, 15.0);
    for (double t : running_means(c)) CHECK(t == doctest::Approx(15.0));
    CHECK(running_mean(c, 200) == doctest::Approx(15.0));
    CHECK_THROWS(running_mean(c, 0));
    CHECK((1.0 - kRunningMeanAlpha) * 20.0 + kRunningMeanAlpha * 10.0 == doctest::Approx(12.0));

    const WeatherYear w = synthetic_weather(Location{});
    const auto means = daily_means(w);
    const auto trm = running_means(w);
    double seed = 0.0;
    for (std::size_t k = 358; k < 365; ++k) seed += means[k];
    CHECK(trm[0] == doctest::Approx(seed / 7.0));
    for (std::size_t d = 1; d < kDaysPerYear; ++d) CHECK(trm[d] == doctest::Approx(0.2 * means[d - 1] + 0.8 * trm[d - 1]));
}

TEST_CASE("degree hours examples") {
    const WeatherYear w = constant_weather(Location{}, 10.0);
    const auto band = ComfortModel::fixed(20, 25);
    std::vector<double> t(kHoursPerYear, 22.0);
    std::vector<std::uint8_t> occ(kHoursPerYear, 0);
    t[0] = 26;
    t[1] = 27;
    t[2] = 28;
    occ[0] = occ[1] = occ[2] = 1;
    auto d = degree_hours(series(t, occ), band, w);
    CHECK(d.cooling_total == doctest::Approx(6.0));
    CHECK(d.heating_total == 0.0);

    std::fill(occ.begin(), occ.end(), 1);
    std::fill(t.begin(), t.end(), 22.0);
    d = degree_hours(series(t, occ), band, w);
    CHECK(d.cooling_total == 0.0);
    CHECK(d.heating_total == 0.0);

    std::fill(occ.begin(), occ.end(), 0);
    t[5] = t[6] = t[7] = 18.0;
    occ[5] = occ[6] = occ[7] = 1;
    CHECK(degree_hours(series(t, occ), band, w).heating_total == doctest::Approx(6.0));
}

TEST_CASE("degree hours against a brute-force sum") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> temp(5.0, 38.0), mean(-5.0, 30.0);
    const std::vector<ComfortModel> models = {ComfortModel::en15251(2), ComfortModel::ashrae55(80), ComfortModel::fixed(20, 26),
                                              ComfortModel::en15251(1)};
    for (int k = 0; k < 100; ++k) {
        WeatherYear w = constant_weather(Location{}, 0.0);
        for (auto& h : w.hours) h.dry_bulb = mean(rng);
        std::vector<double> t(kHoursPerYear);
        std::vector<std::uint8_t> occ(kHoursPerYear);
        for (std::size_t h = 0; h < kHoursPerYear; ++h) {
            t[h] = temp(rng);
            occ[h] = (rng() & 3) != 0;
        }
        const ComfortModel& m = models[k % models.size()];
        const auto trm = running_means(w);
        double heat = 0.0, cool = 0.0;
        for (std::size_t h = 0; h < kHoursPerYear; ++h) {
            if (!occ[h]) continue;
            const Band b = comfort_band(m, trm[h / 24]);
            heat += std::max(0.0, b.lower - t[h]);
            cool += std::max(0.0, t[h] - b.upper);
        }
        const auto d = degree_hours(series(t, occ), m, w);
        CAPTURE(k);
        CHECK(std::abs(d.heating_total - heat) <= 1e-9 * std::max(1.0, heat));
        CHECK(std::abs(d.cooling_total - cool) <= 1e-9 * std::max(1.0, cool));
    }
}

TEST_CASE("discomfort objective") {
    CHECK(discomfort_objective(DiscomfortResult{}, 1, 1) == 0.0);
    DiscomfortResult d;
    d.spaces.push_back({"z", 10.0, 4.0});
    d.heating_total = 10.0;
    d.cooling_total = 4.0;
    CHECK(discomfort_objective(d, 1, 1) == doctest::Approx(14.0));
    CHECK(discomfort_objective(d, 2, 1) == doctest::Approx(24.0));
}

TEST_CASE("comfort issues") {
    CHECK(comfort_issues(ComfortModel::en15251(2)).empty());
    CHECK_FALSE(comfort_issues(ComfortModel::fixed(26, 20)).empty());
    CHECK_FALSE(comfort_issues(ComfortModel::ashrae55(70)).empty());
}
