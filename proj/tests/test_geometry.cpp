#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "planforge/geometry.hpp"
#include "planforge/model.hpp"
#include "planforge/program.hpp"
#include "support/fixtures.hpp"

using namespace planforge;

namespace {

// L: 10x10 square minus the (5,5)-(10,10) notch.
Boundary l_shape() { return Boundary{{{0, 0}, {10, 0}, {10, 5}, {5, 5}, {5, 10}, {0, 10}}}; }

bool in_l(double x, double y) {
    if (x < 0 || x > 10 || y < 0 || y > 10) return false;
    return !(x > 5 && y > 5);
}

// 1 cm raster of the part of r outside the L.
double raster_outside(const Rect& r) {
    const double cell = 0.01;
    const int nx = static_cast<int>(std::lround(r.width / cell));
    const int ny = static_cast<int>(std::lround(r.height / cell));
    long outside = 0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double x = r.min_x() + (i + 0.5) * cell;
            const double y = r.min_y() + (j + 0.5) * cell;
            if (!in_l(x, y)) ++outside;
        }
    }
    return static_cast<double>(outside) * cell * cell;
}

}  // namespace

TEST_CASE("overlap_area") {
    CHECK(overlap_area(make_rect(0, 0, 4, 3), make_rect(2, 1, 4, 4)) == doctest::Approx(4.0));
    CHECK(overlap_area(make_rect(0, 0, 1, 1), make_rect(5, 5, 1, 1)) == 0.0);
    const Rect a = make_rect(0, 0, 4, 3);
    CHECK(overlap_area(a, a) == doctest::Approx(12.0));
}

TEST_CASE("shared_edge_length") {
    CHECK(shared_edge_length(make_rect(0, 0, 4, 3), make_rect(4, 0, 3, 3)) == doctest::Approx(3.0));
    CHECK(shared_edge_length(make_rect(0, 0, 1, 1), make_rect(2, 0, 1, 1)) == 0.0);
    CHECK(shared_edge_length(make_rect(0, 0, 1, 1), make_rect(1, 1, 1, 1)) == 0.0);
}

TEST_CASE("outside_area: square boundary") {
    const Boundary sq = rectangle_boundary(0, 0, 10, 10);
    CHECK(outside_area(make_rect(1, 1, 2, 2), sq) == doctest::Approx(0.0));
    CHECK(outside_area(make_rect(-1, 0, 2, 2), sq) == doctest::Approx(2.0));
}

TEST_CASE("outside_area: L-shape against a raster") {
    const Boundary l = l_shape();
    REQUIRE(boundary_issues(l).empty());
    CHECK(outside_area(make_rect(4, 4, 4, 4), l) == doctest::Approx(raster_outside(make_rect(4, 4, 4, 4))).epsilon(1e-9));
    CHECK(raster_outside(make_rect(4, 4, 4, 4)) == doctest::Approx(9.0));

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pos(-200, 1100), len(10, 600);
    for (int k = 0; k < 40; ++k) {
        const Rect r = make_rect(pos(rng) / 100.0, pos(rng) / 100.0, len(rng) / 100.0, len(rng) / 100.0);
        CAPTURE(k);
        CHECK(outside_area(r, l) == doctest::Approx(raster_outside(r)).epsilon(1e-6));
        CHECK(inside_area(r, l) + outside_area(r, l) == doctest::Approx(r.area()));
    }
}

TEST_CASE("compactness") {
    CHECK(compactness(make_rect(0, 0, 4, 4)) == doctest::Approx(1.0));
    CHECK(compactness(make_rect(0, 0, 8, 2)) == doctest::Approx(0.64));
    CHECK(compactness(make_rect(0, 0, 16, 1)) == doctest::Approx(256.0 / 1156.0));
}

TEST_CASE("wall_azimuth") {
    CHECK(wall_azimuth(Side::S, 0) == 180.0);
    CHECK(wall_azimuth(Side::S, 90) == 270.0);
    CHECK(wall_azimuth(Side::N, 350) == 350.0);
    CHECK(wall_azimuth(Side::W, 180) == 90.0);
}

TEST_CASE("side helpers") {
    for (Side s : {Side::N, Side::E, Side::S, Side::W}) {
        CHECK(rotate_cw(rotate_cw(rotate_cw(rotate_cw(s)))) == s);
        CHECK(opposite(opposite(s)) == s);
        CHECK(mirror_ew(mirror_ew(s)) == s);
        CHECK(side_from_name(side_name(s)) == s);
    }
    CHECK_THROWS_AS(side_from_name("X"), std::invalid_argument);
}

TEST_CASE("boundary_issues") {
    CHECK(boundary_issues(rectangle_boundary(0, 0, 4, 3)).empty());
    const Boundary diagonal{{{0, 0}, {4, 0}, {4, 3}, {1, 4}}};
    CHECK_FALSE(boundary_issues(diagonal).empty());
    const Boundary cw{{{0, 0}, {0, 3}, {4, 3}, {4, 0}}};
    CHECK_FALSE(boundary_issues(cw).empty());
    CHECK(l_shape().area() == doctest::Approx(75.0));
}

TEST_CASE("union and covered area") {
    const std::vector<Rect> rs = {make_rect(0, 0, 4, 4), make_rect(2, 2, 4, 4)};
    CHECK(union_area(rs) == doctest::Approx(28.0));
    CHECK(covered_area(rs, rectangle_boundary(0, 0, 5, 5)) == doctest::Approx(16.0 + 9.0 - 4.0));
}

TEST_CASE("boundary contact skips excluded edges") {
    const Boundary b = rectangle_boundary(0, 0, 8, 8);
    const Rect r = make_rect(0, 0, 4, 4);
    CHECK(boundary_contact_length(r, Side::S, 0, 4, b, {}) == doctest::Approx(4.0));
    CHECK(boundary_contact_length(r, Side::E, 0, 4, b, {}) == doctest::Approx(0.0));
    const std::vector<int> party = {0};
    CHECK(boundary_contact_length(r, Side::S, 0, 4, b, party) == doctest::Approx(0.0));
}

TEST_CASE("validate_program") {
    CHECK(validate_program(fixtures::toy_one_space()).empty());

    auto p = fixtures::toy_one_space();
    p.adjacency_reqs.push_back({"room", "ghost", AdjacencyKind::DoorConnected});
    const auto issues = validate_program(p);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("ghost") != std::string::npos);

    DesignProgram cap = fixtures::toy_one_space();
    cap.space_reqs.clear();
    for (int i = 0; i < 6; ++i) {
        cap.space_reqs.push_back(fixtures::requirement("r" + std::to_string(i), SpaceFunction::Bedroom, 0, 20, 25, 3));
    }
    const auto cap_issues = validate_program(cap);
    REQUIRE(cap_issues.size() == 1);
    CHECK(cap_issues[0].find("above gross area limit") != std::string::npos);
}

TEST_CASE("building_issues") {
    const auto z = fixtures::zero_fixture();
    CHECK(building_issues(z.building).empty());
    Building b = z.building;
    b.plans[0].spaces[1].id = "a";
    CHECK_FALSE(building_issues(b).empty());
    b = z.building;
    b.plans[0].spaces[0].openings[0].offset = 3.5;
    CHECK_FALSE(building_issues(b).empty());
}

TEST_CASE("assembly heat capacity") {
    Assembly a;
    a.layers.push_back(Layer{0.2, 1.0, 2000.0, 1000.0});
    CHECK(a.heat_capacity_per_area() == doctest::Approx(0.2 * 2000.0 * 1000.0));
    CHECK(assembly_issues(a).empty());
}
