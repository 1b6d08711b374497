#include "fixtures.hpp"

namespace fixtures {

SpaceRequirement requirement(std::string id, SpaceFunction f, int storey, double amin, double amax, double min_dim,
                             bool window) {
    SpaceRequirement r;
    r.id = std::move(id);
    r.function = f;
    r.storey = storey;
    r.area_min = amin;
    r.area_max = amax;
    r.min_dimension = min_dim;
    r.window_required = window;
    return r;
}

DesignProgram toy_one_space() {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 10, 10);
    p.gross_area_limit = 100.0;
    p.construction_area_limit = 100.0;
    p.space_reqs.push_back(requirement("room", SpaceFunction::Bedroom, 0, 16.0, 16.0, 4.0, true));
    return p;
}

DesignProgram toy_three_spaces() {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 10, 8);
    p.gross_area_limit = 80.0;
    p.construction_area_limit = 80.0;
    p.space_reqs.push_back(requirement("living", SpaceFunction::Living, 0, 16.0, 24.0, 3.0, true));
    p.space_reqs.push_back(requirement("bedroom", SpaceFunction::Bedroom, 0, 9.0, 14.0, 2.7, true));
    p.space_reqs.push_back(requirement("bath", SpaceFunction::Bathroom, 0, 4.0, 8.0, 1.8));
    p.adjacency_reqs.push_back({"bedroom", "living", AdjacencyKind::DoorConnected});
    p.adjacency_reqs.push_back({"bath", "living", AdjacencyKind::DoorConnected});
    return p;
}

Weights toy_weights() {
    Weights w = Weights::defaults();
    w[Indicator::BoundaryUsage] = 0.0;
    w[Indicator::AreasMaximization] = 0.0;
    return w;
}

namespace {

Space square(std::string id, SpaceFunction f, double x, double y) {
    Space s;
    s.id = id;
    s.requirement = std::move(id);
    s.function = f;
    s.rect = make_rect(x, y, 4.0, 4.0);
    return s;
}

Opening window(Side side, double offset, double width) {
    Opening o;
    o.kind = OpeningKind::Window;
    o.side = side;
    o.offset = offset;
    o.width = width;
    o.height = 1.2;
    o.sill = 0.9;
    return o;
}

}  // namespace

ZeroFixture zero_fixture() {
    ZeroFixture z;
    DesignProgram& p = z.program;
    p.boundary = rectangle_boundary(0, 0, 8, 8);
    p.gross_area_limit = 64.0;
    p.construction_area_limit = 70.0;
    auto a = requirement("a", SpaceFunction::Bedroom, 0, 12.0, 20.0, 3.0, true);
    a.orientation_pref = Sector{180.0, 45.0};
    p.space_reqs.push_back(a);
    p.space_reqs.push_back(requirement("b", SpaceFunction::Living, 0, 12.0, 20.0, 3.0));
    p.space_reqs.push_back(requirement("c", SpaceFunction::Kitchen, 0, 12.0, 20.0, 3.0));
    p.space_reqs.push_back(requirement("d", SpaceFunction::Bathroom, 0, 12.0, 20.0, 3.0));
    p.adjacency_reqs.push_back({"a", "b", AdjacencyKind::DoorConnected});
    p.adjacency_reqs.push_back({"b", "d", AdjacencyKind::Adjacent});

    Building& b = z.building;
    b.boundary = p.boundary;
    b.plans.resize(1);
    Space sa = square("a", SpaceFunction::Bedroom, 0, 0);
    sa.openings.push_back(window(Side::S, 1.0, 1.5));
    Opening door;
    door.kind = OpeningKind::Door;
    door.side = Side::E;
    door.offset = 1.5;
    door.width = 1.0;
    door.height = 2.1;
    door.sill = 0.0;
    door.connects_to = "b";
    sa.openings.push_back(door);
    Space sb = square("b", SpaceFunction::Living, 4, 0);
    sb.openings.push_back(window(Side::S, 1.0, 1.5));
    Space sc = square("c", SpaceFunction::Kitchen, 0, 4);
    sc.openings.push_back(window(Side::W, 1.0, 1.5));
    Space sd = square("d", SpaceFunction::Bathroom, 4, 4);
    sd.openings.push_back(window(Side::E, 1.0, 1.5));
    b.plans[0].spaces = {sa, sb, sc, sd};
    return z;
}

DesignProgram four_storey_program() {
    DesignProgram p;
    p.boundary = rectangle_boundary(0, 0, 16, 10);
    p.storey_count = 4;
    p.gross_area_limit = 160.0;
    p.construction_area_limit = 160.0;
    p.neighbor_sides = {1, 3};
    using F = SpaceFunction;
    for (int k = 0; k < 4; ++k) {
        const std::string pre = "s" + std::to_string(k) + "_";
        auto add = [&](const std::string& id, F f, double amin, double amax, double md, bool win) {
            p.space_reqs.push_back(requirement(pre + id, f, k, amin, amax, md, win));
        };
        add("stair", F::Stair, 8.0, 12.0, 2.0, false);
        add("a_living", F::Living, 16.0, 30.0, 3.5, false);
        add("a_bed1", F::Bedroom, 9.0, 14.0, 2.7, true);
        add("a_bed2", F::Bedroom, 9.0, 14.0, 2.7, true);
        add("a_bath", F::Bathroom, 4.0, 8.0, 1.8, false);
        add("b_living", F::Living, 16.0, 30.0, 3.5, false);
        add("b_bed1", F::Bedroom, 9.0, 14.0, 2.7, true);
        add("b_bed2", F::Bedroom, 9.0, 14.0, 2.7, true);
        add("b_bed3", F::Bedroom, 9.0, 14.0, 2.7, true);
        add("b_bath", F::Bathroom, 4.0, 8.0, 1.8, false);
        auto door = [&](const std::string& a, const std::string& b) {
            p.adjacency_reqs.push_back({pre + a, pre + b, AdjacencyKind::DoorConnected});
        };
        door("a_living", "stair");
        door("a_bed1", "a_living");
        door("a_bed2", "a_living");
        door("a_bath", "a_living");
        door("b_living", "stair");
        door("b_bed1", "b_living");
        door("b_bed2", "b_living");
        door("b_bed3", "b_living");
        door("b_bath", "b_living");
    }
    return p;
}

Weights four_storey_weights() {
    Weights w = Weights::defaults();
    w[Indicator::BoundaryUsage] = 0.0;
    w[Indicator::AreasMaximization] = 0.0;
    w[Indicator::Circulation] = 0.0;
    w[Indicator::ConnectivityAdjacency] = 5.0;
    w[Indicator::AreaDims] = 20.0;
    w[Indicator::Compactness] = 0.1;
    w[Indicator::OpeningPosition] = 0.1;
    w[Indicator::OpeningOrientation] = 0.1;
    w[Indicator::OpeningOverlap] = 0.1;
    w[Indicator::WidthAndWfr] = 0.1;
    return w;
}

namespace {

Space& space(Building& b, const std::string& id) { return *b.find_space(id); }

}  // namespace

std::vector<Fault> single_faults() {
    return {
        {Indicator::AreasLimits, 4.0, [](ZeroFixture& z) { z.program.construction_area_limit = 60.0; }},
        {Indicator::Circulation, 16.0, [](ZeroFixture& z) { space(z.building, "d").function = SpaceFunction::Hall; }},
        {Indicator::AreasMaximization, 6.0, [](ZeroFixture& z) { z.program.gross_area_limit = 70.0; }},
        {Indicator::BoundaryUsage, 8.0,
         [](ZeroFixture& z) { z.building.boundary = z.program.boundary = rectangle_boundary(0, 0, 8, 9); }},
        {Indicator::ConnectivityAdjacency, 0.9,
         [](ZeroFixture& z) { z.program.adjacency_reqs.push_back({"a", "d", AdjacencyKind::Adjacent}); }},
        {Indicator::SpaceOverlap, 0.81, [](ZeroFixture& z) { space(z.building, "c").rect = make_rect(0, 3.9, 4.1, 4.1); }},
        {Indicator::SpaceOrientation, 0.5,
         [](ZeroFixture& z) { z.program.space_reqs[0].orientation_pref = Sector{0.0, 45.0}; }},
        {Indicator::Overflow, 0.8,
         [](ZeroFixture& z) { z.building.boundary = z.program.boundary = rectangle_boundary(0, 0, 8, 7.9); }},
        {Indicator::Compactness, (1.0 - 224.0 / 225.0) + (1.0 - 288.0 / 289.0),
         [](ZeroFixture& z) {
             space(z.building, "a").rect = make_rect(0, 0, 3.5, 4);
             space(z.building, "b").rect = make_rect(3.5, 0, 4.5, 4);
         }},
        {Indicator::AreaDims, 2.0 / 14.0, [](ZeroFixture& z) { z.program.space_reqs[0].area_max = 14.0; }},
        {Indicator::SpacePosition, 1.0, [](ZeroFixture& z) { z.program.space_reqs[0].position_pref = Point2{1.0, 2.0}; }},
        {Indicator::OpeningPosition, 3.25, [](ZeroFixture& z) { space(z.building, "b").openings[0].side = Side::W; }},
        {Indicator::OpeningOrientation, 0.5,
         [](ZeroFixture& z) { z.program.space_reqs[1].window_orientation_pref = Sector{90.0, 45.0}; }},
        {Indicator::OpeningOverlap, 0.5,
         [](ZeroFixture& z) {
             Opening extra = space(z.building, "b").openings[0];
             extra.offset = 2.0;
             space(z.building, "b").openings.push_back(extra);
         }},
        {Indicator::WidthAndWfr, 0.025, [](ZeroFixture& z) { space(z.building, "a").openings[0].width = 1.0; }},
    };
}

}  // namespace fixtures
