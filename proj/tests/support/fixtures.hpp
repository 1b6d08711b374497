#pragma once

#include <functional>
#include <string>
#include <vector>

#include "planforge/indicators.hpp"
#include "planforge/model.hpp"
#include "planforge/program.hpp"

namespace fixtures {

using namespace planforge;

SpaceRequirement requirement(std::string id, SpaceFunction f, int storey, double amin, double amax, double min_dim,
                             bool window = false);

// One 4x4 m space with a window, 10x10 m boundary.
DesignProgram toy_one_space();
// Three spaces, two door adjacencies, 10x8 m boundary.
DesignProgram toy_three_spaces();
// Weights for the toy programs: footprint filling is not asked for.
Weights toy_weights();

// Four 4x4 m squares filling an 8x8 m boundary, scoring zero on every indicator.
struct ZeroFixture {
    DesignProgram program;
    Building building;
};
ZeroFixture zero_fixture();

// One perturbation of the zero fixture per indicator, with the value it should raise.
struct Fault {
    Indicator raised;
    double expected;
    std::function<void(ZeroFixture&)> apply;
};
std::vector<Fault> single_faults();

// Four storeys, a two-bedroom and a three-bedroom apartment each, one stair.
DesignProgram four_storey_program();
Weights four_storey_weights();

}  // namespace fixtures
