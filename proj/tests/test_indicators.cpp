#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "planforge/indicators.hpp"
#include "support/fixtures.hpp"

using namespace planforge;

namespace {

Space& space(Building& b, const std::string& id) { return *b.find_space(id); }

Space rect_space(const std::string& id, double x, double y, double w, double h) {
    Space s;
    s.id = s.requirement = id;
    s.function = SpaceFunction::Bedroom;
    s.rect = make_rect(x, y, w, h);
    return s;
}

}  // namespace

TEST_CASE("zero fixture scores the zero vector") {
    const auto z = fixtures::zero_fixture();
    REQUIRE(validate_program(z.program).empty());
    REQUIRE(building_issues(z.building).empty());
    const PerformanceVector v = evaluate(z.building, z.program);
    for (Indicator i : all_indicators()) {
        CAPTURE(indicator_name(i));
        CHECK(v[i] == 0.0);
    }
}

TEST_CASE("each single fault raises only its own indicator") {
    const auto faults = fixtures::single_faults();
    REQUIRE(faults.size() == kIndicatorCount);
    std::array<bool, kIndicatorCount> covered{};
    for (const auto& f : faults) {
        auto z = fixtures::zero_fixture();
        f.apply(z);
        const PerformanceVector v = evaluate(z.building, z.program);
        covered[static_cast<std::size_t>(f.raised)] = true;
        for (Indicator i : all_indicators()) {
            CAPTURE(indicator_name(f.raised));
            CAPTURE(indicator_name(i));
            if (i == f.raised) CHECK(v[i] == doctest::Approx(f.expected).epsilon(1e-9));
            else CHECK(v[i] == 0.0);
        }
    }
    for (bool c : covered) CHECK(c);
}

TEST_CASE("floor plan penalties") {
    DesignProgram p = fixtures::toy_one_space();
    p.space_reqs[0].area_max = 120.0;
    p.construction_area_limit = 200.0;
    Building b;
    b.boundary = rectangle_boundary(0, 0, 10, 11);
    b.plans.resize(1);
    b.plans[0].spaces.push_back(rect_space("room", 0, 0, 10, 11));
    p.boundary = b.boundary;
    const auto f = eval_floorplan_penalties(b, p);
    CHECK(f.areas_limits == doctest::Approx(10.0));
    CHECK(f.boundary_usage == doctest::Approx(0.0));

    b.plans[0].spaces[0].rect = make_rect(0, 0, 10, 10);
    Space corridor = rect_space("corr", 0, 10, 6, 1);
    corridor.requirement.clear();
    corridor.function = SpaceFunction::Corridor;
    b.plans[0].spaces.push_back(corridor);
    CHECK(eval_floorplan_penalties(b, p).circulation == doctest::Approx(6.0));
}

TEST_CASE("plan filling its boundary without circulation") {
    const auto z = fixtures::zero_fixture();
    const auto f = eval_floorplan_penalties(z.building, z.program);
    CHECK(f.areas_limits == 0.0);
    CHECK(f.circulation == 0.0);
    CHECK(f.areas_maximization == 0.0);
    CHECK(f.boundary_usage == 0.0);
}

TEST_CASE("connectivity terms") {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 20, 20);
    p.space_reqs = {fixtures::requirement("x", SpaceFunction::Bedroom, 0, 1, 100, 0.5),
                    fixtures::requirement("y", SpaceFunction::Bedroom, 0, 1, 100, 0.5)};
    p.adjacency_reqs.push_back({"x", "y", AdjacencyKind::DoorConnected});
    Building b;
    b.boundary = p.boundary;
    b.plans.resize(1);
    b.plans[0].spaces = {rect_space("x", 0, 0, 4, 4), rect_space("y", 4, 3, 4, 4)};
    CHECK(eval_space_penalties(b, p).connectivity_adjacency == doctest::Approx(0.0));
    b.plans[0].spaces[1].rect = make_rect(6, 0, 4, 4);
    CHECK(eval_space_penalties(b, p).connectivity_adjacency == doctest::Approx(2.0));
}

TEST_CASE("area deviation is normalized by the range bound") {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 10, 10);
    p.space_reqs = {fixtures::requirement("r", SpaceFunction::Bedroom, 0, 10, 14, 2)};
    Building b;
    b.boundary = p.boundary;
    b.plans.resize(1);
    b.plans[0].spaces = {rect_space("r", 0, 0, 4, 4)};
    CHECK(eval_space_penalties(b, p).area_dims == doctest::Approx((16.0 - 14.0) / 14.0));
}

TEST_CASE("opening penalties") {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 5, 4);
    p.space_reqs = {fixtures::requirement("r", SpaceFunction::Living, 0, 10, 30, 2, true)};
    Building b;
    b.boundary = p.boundary;
    b.plans.resize(1);
    b.plans[0].spaces = {rect_space("r", 0, 0, 5, 4)};
    Opening w;
    w.side = Side::S;
    w.offset = 1.0;
    w.width = 2.0;
    w.height = 1.0;
    b.plans[0].spaces[0].openings = {w};
    CHECK(eval_opening_penalties(b, p).width_and_wfr == doctest::Approx(0.0));
    b.plans[0].spaces[0].openings[0].width = 1.0;
    CHECK(eval_opening_penalties(b, p).width_and_wfr == doctest::Approx(0.05));

    Opening d1;
    d1.kind = OpeningKind::Door;
    d1.side = Side::N;
    d1.offset = 0.5;
    d1.width = 1.0;
    d1.height = 2.1;
    d1.sill = 0.0;
    Opening d2 = d1;
    d2.offset = 1.2;
    b.plans[0].spaces[0].openings = {w, d1, d2};
    CHECK(eval_opening_penalties(b, p).overlap == doctest::Approx(0.3));
}

TEST_CASE("two-space plan") {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 8, 4);
    p.gross_area_limit = 32.0;
    p.construction_area_limit = 40.0;
    p.space_reqs = {fixtures::requirement("w", SpaceFunction::Kitchen, 0, 12, 20, 3),
                    fixtures::requirement("e", SpaceFunction::Living, 0, 12, 20, 3)};
    Building b;
    b.boundary = p.boundary;
    b.plans.resize(1);
    b.plans[0].spaces = {rect_space("w", 0, 0, 4, 4), rect_space("e", 4, 0, 4, 4)};
    b.plans[0].spaces[0].function = SpaceFunction::Kitchen;
    b.plans[0].spaces[1].function = SpaceFunction::Living;
    CHECK(evaluate(b, p) == PerformanceVector{});

    b.plans[0].spaces[0].rect = make_rect(0, 0, 4.25, 4);
    b.plans[0].spaces[1].rect = make_rect(3.25, 0, 4.75, 4);
    CHECK(evaluate(b, p)[Indicator::SpaceOverlap] == doctest::Approx(4.0));
}

TEST_CASE("missing space is a structural penalty") {
    const DesignProgram p = fixtures::toy_one_space();
    Building empty;
    empty.boundary = p.boundary;
    empty.plans.resize(1);
    const auto v = evaluate(empty, p);
    CHECK(v[Indicator::AreaDims] == doctest::Approx(kMissingSpaceBase + 16.0));
}

TEST_CASE("aggregate") {
    CHECK(aggregate(PerformanceVector{}, Weights::defaults()) == 0.0);
    PerformanceVector v;
    v.values[0] = 3.0;
    v.values[1] = 4.0;
    Weights w;
    w.values[0] = 1.0;
    w.values[1] = 2.0;
    CHECK(aggregate(v, w) == doctest::Approx(11.0));
}

TEST_CASE("nonconformity_ranking") {
    auto ids = [](const std::vector<ObjectDeviation>& r) {
        std::vector<std::string> out;
        for (const auto& d : r) out.push_back(d.object.space_id);
        return out;
    };
    CHECK(ids(nonconformity_ranking({{{"a"}, 0.0}, {{"b"}, 5.0}})) == std::vector<std::string>{"b", "a"});
    CHECK(ids(nonconformity_ranking({{{"c"}, 0.0}, {{"a"}, 0.0}, {{"b"}, 0.0}})) == std::vector<std::string>{"a", "b", "c"});
    CHECK(ids(nonconformity_ranking({{{"a"}, 2.0}, {{"b"}, 2.0}, {{"c"}, 7.0}})) == std::vector<std::string>{"c", "a", "b"});
}

TEST_CASE("names round-trip") {
    for (Indicator i : all_indicators()) CHECK(indicator_from_name(indicator_name(i)) == i);
    CHECK_FALSE(indicator_from_name("space.bogus").has_value());
}

TEST_CASE("per-object deviations are weighted") {
    auto z = fixtures::zero_fixture();
    space(z.building, "a").openings[0].width = 1.0;
    Weights w = Weights::uniform(1.0);
    w[Indicator::WidthAndWfr] = 4.0;
    const auto e = evaluate_detailed(z.building, z.program, w);
    const auto ranked = nonconformity_ranking(e.deviations);
    CHECK(ranked.front().object == ObjectRef{"a", 0});
    CHECK(ranked.front().deviation == doctest::Approx(0.1));
    CHECK(e.perf[Indicator::WidthAndWfr] == doctest::Approx(0.025));
}
