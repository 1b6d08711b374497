#include "planforge/seqopt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "planforge/indicators.hpp"

namespace planforge {

namespace {

constexpr std::array<std::string_view, kVariableKindCount> kKindNames = {
    "building_orientation", "opening_position", "opening_width", "opening_side",
    "wall_position",        "reflect_plan",     "overhang_depth", "fin_depth",
};

constexpr double kCoordEps = 1e-9;

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

// Objectives closer than this relative margin count as ties.
bool improves(double candidate, double current) {
    return candidate < current - 1e-9 * std::max(1.0, std::abs(current));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Space* space_of(Building& b, const DesignVariable& v) { return b.find_space(v.space_id); }

Opening* window_of(Building& b, const DesignVariable& v) {
    Space* s = space_of(b, v);
    if (!s || v.opening_index < 0 || static_cast<std::size_t>(v.opening_index) >= s->openings.size()) return nullptr;
    return &s->openings[static_cast<std::size_t>(v.opening_index)];
}

const Opening* window_of(const Building& b, const DesignVariable& v) {
    return window_of(const_cast<Building&>(b), v);
}

double min_dimension(const DesignProgram& p, const Space& s) {
    const SpaceRequirement* r = p.find_requirement(s.requirement.empty() ? s.id : s.requirement);
    return r ? r->min_dimension : 0.5;
}

struct WallSide {
    std::vector<Space*> low;   // spaces whose max edge lies on the wall
    std::vector<Space*> high;  // spaces whose min edge lies on the wall
};

WallSide wall_sides(Building& b, int storey, WallAxis axis, double c) {
    WallSide w;
    if (storey < 0 || static_cast<std::size_t>(storey) >= b.plans.size()) return w;
    for (auto& s : b.plans[static_cast<std::size_t>(storey)].spaces) {
        const double lo = axis == WallAxis::X ? s.rect.min_x() : s.rect.min_y();
        const double hi = axis == WallAxis::X ? s.rect.max_x() : s.rect.max_y();
        if (std::abs(hi - c) <= kCoordEps) w.low.push_back(&s);
        if (std::abs(lo - c) <= kCoordEps) w.high.push_back(&s);
    }
    return w;
}

bool wall_exists(const Building& b, int storey, WallAxis axis, double c) {
    Building& mb = const_cast<Building&>(b);
    const WallSide w = wall_sides(mb, storey, axis, c);
    for (const Space* a : w.low) {
        for (const Space* h : w.high) {
            if (shared_edge_length(a->rect, h->rect) > kCoordEps) return true;
        }
    }
    return false;
}

// Keeps openings at their absolute place after the reference (west or south) end of a wall moved by d.
bool shift_openings(Space& s, Side moved_end_of, double d) {
    for (auto& o : s.openings) {
        const bool affected = (moved_end_of == Side::W && (o.side == Side::N || o.side == Side::S)) ||
                              (moved_end_of == Side::S && (o.side == Side::E || o.side == Side::W));
        if (affected) o.offset -= d;
    }
    for (auto& o : s.openings) {
        const double len = wall_length(s.rect, o.side);
        if (o.width > len + 1e-9) return false;
        o.offset = std::clamp(o.offset, 0.0, std::max(0.0, len - o.width));
    }
    return true;
}

bool move_wall(Building& b, int storey, WallAxis axis, double from, double to) {
    const WallSide w = wall_sides(b, storey, axis, from);
    const double d = to - from;
    for (Space* s : w.low) {
        if (axis == WallAxis::X) s->rect.width += d;
        else s->rect.height += d;
        if ((axis == WallAxis::X ? s->rect.width : s->rect.height) <= kCoordEps) return false;
        if (!shift_openings(*s, axis == WallAxis::X ? Side::E : Side::N, 0.0)) return false;
    }
    for (Space* s : w.high) {
        if (axis == WallAxis::X) {
            s->rect.min_corner.x += d;
            s->rect.width -= d;
        } else {
            s->rect.min_corner.y += d;
            s->rect.height -= d;
        }
        if ((axis == WallAxis::X ? s->rect.width : s->rect.height) <= kCoordEps) return false;
        if (!shift_openings(*s, axis == WallAxis::X ? Side::W : Side::S, d)) return false;
    }
    return true;
}

void mirror_plan(Building& b) {
    const Rect bb = b.boundary.bounding_box();
    const double sum = bb.min_x() + bb.max_x();
    for (auto& plan : b.plans) {
        for (auto& s : plan.spaces) {
            const Rect old = s.rect;
            s.rect.min_corner.x = sum - old.max_x();
            for (auto& o : s.openings) {
                if (o.side == Side::N || o.side == Side::S) o.offset = wall_length(old, o.side) - o.offset - o.width;
                o.side = mirror_ew(o.side);
                std::swap(o.fin_depth_left, o.fin_depth_right);
            }
        }
    }
}

std::vector<double> grid(double lo, double hi, int steps) {
    std::vector<double> out;
    if (steps < 2 || hi <= lo) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    return out;
}

double penalty_of(const Building& b, const DesignProgram& p) { return feasibility_penalty(evaluate(b, p)); }

}  // namespace

std::string_view variable_kind_name(VariableKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<VariableKind> variable_kind_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<VariableKind>(i);
    }
    return std::nullopt;
}

const std::vector<VariableKind>& default_variable_order() {
    static const std::vector<VariableKind> order = {
        VariableKind::BuildingOrientation, VariableKind::OpeningPosition, VariableKind::OpeningWidth,
        VariableKind::OpeningSide,         VariableKind::WallPosition,    VariableKind::ReflectPlan,
        VariableKind::OverhangDepth,       VariableKind::FinDepth,
    };
    return order;
}

std::string DesignVariable::to_string() const {
    std::string out(variable_kind_name(kind));
    switch (kind) {
        case VariableKind::BuildingOrientation:
        case VariableKind::ReflectPlan: return out;
        case VariableKind::WallPosition:
            return out + "(" + std::to_string(storey) + "," + (axis == WallAxis::X ? "x=" : "y=") + fmt(coordinate) + ")";
        case VariableKind::FinDepth:
            return out + "(" + space_id + "," + std::to_string(opening_index) + "," + (right_fin ? "right" : "left") + ")";
        default: return out + "(" + space_id + "," + std::to_string(opening_index) + ")";
    }
}

std::vector<std::string> strategy_issues(const Strategy& s) {
    std::vector<std::string> out;
    if (s.steps_per_variable < 2) out.emplace_back("steps_per_variable must be >= 2");
    if (s.max_passes < 1) out.emplace_back("max_passes must be >= 1");
    if (!(s.feasibility_tolerance >= 0.0) || !std::isfinite(s.feasibility_tolerance)) {
        out.emplace_back("feasibility_tolerance must be >= 0");
    }
    if (s.order.empty()) out.emplace_back("order must name at least one variable kind");
    return out;
}

std::string_view step_status_name(StepStatus s) {
    switch (s) {
        case StepStatus::Kept: return "kept";
        case StepStatus::Changed: return "changed";
        case StepStatus::Infeasible: return "infeasible";
    }
    return "kept";
}

std::vector<DesignVariable> enumerate_variables(const Building& b, const Strategy& s) {
    struct WindowRef {
        int storey;
        std::string space;
        int index;
    };
    std::vector<WindowRef> windows;
    for (const auto& plan : b.plans) {
        for (const auto& sp : plan.spaces) {
            for (std::size_t i = 0; i < sp.openings.size(); ++i) {
                if (sp.openings[i].kind == OpeningKind::Window) windows.push_back({sp.storey, sp.id, static_cast<int>(i)});
            }
        }
    }
    std::sort(windows.begin(), windows.end(), [](const WindowRef& a, const WindowRef& c) {
        return std::tie(a.storey, a.space, a.index) < std::tie(c.storey, c.space, c.index);
    });

    struct WallRef {
        int storey;
        WallAxis axis;
        double c;
    };
    std::vector<WallRef> walls;
    for (const auto& plan : b.plans) {
        const auto& sp = plan.spaces;
        for (std::size_t i = 0; i < sp.size(); ++i) {
            for (std::size_t j = 0; j < sp.size(); ++j) {
                if (i == j || shared_edge_length(sp[i].rect, sp[j].rect) <= kCoordEps) continue;
                if (std::abs(sp[i].rect.max_x() - sp[j].rect.min_x()) <= kCoordEps) walls.push_back({plan.storey, WallAxis::X, sp[i].rect.max_x()});
                if (std::abs(sp[i].rect.max_y() - sp[j].rect.min_y()) <= kCoordEps) walls.push_back({plan.storey, WallAxis::Y, sp[i].rect.max_y()});
            }
        }
    }
    std::sort(walls.begin(), walls.end(), [](const WallRef& a, const WallRef& c) {
        return std::tie(a.storey, a.axis, a.c) < std::tie(c.storey, c.axis, c.c);
    });
    walls.erase(std::unique(walls.begin(), walls.end(),
                            [](const WallRef& a, const WallRef& c) {
                                return a.storey == c.storey && a.axis == c.axis && std::abs(a.c - c.c) <= kCoordEps;
                            }),
                walls.end());

    std::vector<DesignVariable> out;
    for (VariableKind k : s.order) {
        switch (k) {
            case VariableKind::BuildingOrientation:
            case VariableKind::ReflectPlan: {
                DesignVariable v;
                v.kind = k;
                out.push_back(v);
                break;
            }
            case VariableKind::WallPosition:
                for (const auto& w : walls) {
                    DesignVariable v;
                    v.kind = k;
                    v.storey = w.storey;
                    v.axis = w.axis;
                    v.coordinate = w.c;
                    out.push_back(v);
                }
                break;
            case VariableKind::FinDepth:
                for (const auto& w : windows) {
                    for (bool right : {false, true}) {
                        DesignVariable v;
                        v.kind = k;
                        v.storey = w.storey;
                        v.space_id = w.space;
                        v.opening_index = w.index;
                        v.right_fin = right;
                        out.push_back(v);
                    }
                }
                break;
            default:
                for (const auto& w : windows) {
                    DesignVariable v;
                    v.kind = k;
                    v.storey = w.storey;
                    v.space_id = w.space;
                    v.opening_index = w.index;
                    out.push_back(v);
                }
                break;
        }
    }
    return out;
}

std::optional<double> variable_value(const Building& b, const DesignVariable& v) {
    switch (v.kind) {
        case VariableKind::BuildingOrientation: return b.orientation;
        case VariableKind::ReflectPlan: return 0.0;
        case VariableKind::WallPosition:
            if (!wall_exists(b, v.storey, v.axis, v.coordinate)) return std::nullopt;
            return v.coordinate;
        default: break;
    }
    const Opening* o = window_of(b, v);
    if (!o) return std::nullopt;
    switch (v.kind) {
        case VariableKind::OpeningPosition: return o->offset;
        case VariableKind::OpeningWidth: return o->width;
        case VariableKind::OpeningSide: return static_cast<double>(static_cast<int>(o->side));
        case VariableKind::OverhangDepth: return o->overhang_depth;
        case VariableKind::FinDepth: return v.right_fin ? o->fin_depth_right : o->fin_depth_left;
        default: return std::nullopt;
    }
}

std::vector<double> domain_of(const DesignVariable& v, const Building& b, const DesignProgram& p, const Strategy& s) {
    const auto current = variable_value(b, v);
    if (!current) return {};
    const int n = s.steps_per_variable;
    std::vector<double> out;
    switch (v.kind) {
        case VariableKind::BuildingOrientation:
            for (int i = 0; i < n; ++i) out.push_back(360.0 * static_cast<double>(i) / static_cast<double>(n));
            break;
        case VariableKind::ReflectPlan: out = {0.0, 1.0}; break;
        case VariableKind::OverhangDepth:
        case VariableKind::FinDepth: out = grid(0.0, kMaxShadingDepth, n); break;
        case VariableKind::WallPosition: {
            Building& mb = const_cast<Building&>(b);
            const WallSide w = wall_sides(mb, v.storey, v.axis, v.coordinate);
            double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
            double narrowest = std::numeric_limits<double>::infinity();
            for (const Space* sp : w.low) {
                const double start = v.axis == WallAxis::X ? sp->rect.min_x() : sp->rect.min_y();
                lo = std::max(lo, start + min_dimension(p, *sp));
                narrowest = std::min(narrowest, v.coordinate - start);
            }
            for (const Space* sp : w.high) {
                const double end = v.axis == WallAxis::X ? sp->rect.max_x() : sp->rect.max_y();
                hi = std::min(hi, end - min_dimension(p, *sp));
                narrowest = std::min(narrowest, end - v.coordinate);
            }
            const double span = 0.25 * narrowest;
            lo = std::max(lo, v.coordinate - span);
            hi = std::min(hi, v.coordinate + span);
            if (lo <= hi) out = grid(lo, hi, n);
            break;
        }
        default: {
            const Space* sp = b.find_space(v.space_id);
            const Opening* o = window_of(b, v);
            const double len = wall_length(sp->rect, o->side);
            if (v.kind == VariableKind::OpeningPosition) {
                out = grid(0.0, std::max(0.0, len - o->width), n);
            } else if (v.kind == VariableKind::OpeningWidth) {
                const double lo = p.openings.min_window_width, hi = len - o->offset;
                if (lo <= hi) out = grid(lo, hi, n);
            } else {
                for (Side side : {Side::N, Side::E, Side::S, Side::W}) {
                    if (wall_length(sp->rect, side) + 1e-9 >= o->width) out.push_back(static_cast<double>(static_cast<int>(side)));
                }
            }
            break;
        }
    }
    if (std::none_of(out.begin(), out.end(), [&](double x) { return same_value(x, *current); })) out.push_back(*current);
    return out;
}

std::optional<Building> apply_variable(const Building& b, const DesignVariable& v, double value, const DesignProgram& p) {
    (void)p;
    Building out = b;
    switch (v.kind) {
        case VariableKind::BuildingOrientation:
            out.orientation = value;
            return out;
        case VariableKind::ReflectPlan:
            if (value > 0.5) mirror_plan(out);
            return out;
        case VariableKind::WallPosition:
            if (!wall_exists(out, v.storey, v.axis, v.coordinate)) return std::nullopt;
            if (!move_wall(out, v.storey, v.axis, v.coordinate, value)) return std::nullopt;
            return out;
        default: break;
    }
    Space* sp = space_of(out, v);
    Opening* o = window_of(out, v);
    if (!sp || !o) return std::nullopt;
    switch (v.kind) {
        case VariableKind::OpeningPosition:
            if (value < -1e-9 || value + o->width > wall_length(sp->rect, o->side) + 1e-9) return std::nullopt;
            o->offset = value;
            break;
        case VariableKind::OpeningWidth:
            if (value <= 0.0 || o->offset + value > wall_length(sp->rect, o->side) + 1e-9) return std::nullopt;
            o->width = value;
            break;
        case VariableKind::OpeningSide: {
            const int idx = static_cast<int>(std::lround(value));
            if (idx < 0 || idx > 3) return std::nullopt;
            const Side side = static_cast<Side>(idx);
            const double len = wall_length(sp->rect, side);
            if (o->width > len + 1e-9) return std::nullopt;
            o->side = side;
            o->offset = std::clamp(o->offset, 0.0, std::max(0.0, len - o->width));
            break;
        }
        case VariableKind::OverhangDepth:
            if (value < 0.0) return std::nullopt;
            o->overhang_depth = value;
            break;
        case VariableKind::FinDepth:
            if (value < 0.0) return std::nullopt;
            (v.right_fin ? o->fin_depth_right : o->fin_depth_left) = value;
            break;
        default: return std::nullopt;
    }
    return out;
}

double discomfort_of(const Building& b, const OptContext& ctx) {
    return assess(b, ctx.uses, *ctx.weather, ctx.comfort, ctx.w_heat, ctx.w_cool).objective;
}

VariableResult optimize_variable(const Building& b, const DesignVariable& v, const OptContext& ctx, const Strategy& s,
                                 std::optional<double> baseline_objective, std::optional<double> baseline_penalty) {
    VariableResult res{b, {}};
    TraceStep& step = res.step;
    step.variable = v;
    const double before = baseline_objective ? *baseline_objective : discomfort_of(b, ctx);
    const double allowed = (baseline_penalty ? *baseline_penalty : penalty_of(b, *ctx.program)) + s.feasibility_tolerance;
    step.objective_before = before;
    step.objective_after = before;
    const auto current = variable_value(b, v);
    if (!current) {
        step.status = StepStatus::Infeasible;
        return res;
    }
    step.current = *current;
    step.chosen = *current;
    step.candidates = domain_of(v, b, *ctx.program, s);

    double best = before;
    std::optional<Building> best_building;
    bool any_feasible = false;
    for (double c : step.candidates) {
        if (same_value(c, *current)) {
            step.objectives.push_back(before);
            continue;
        }
        auto cand = apply_variable(b, v, c, *ctx.program);
        if (!cand || penalty_of(*cand, *ctx.program) > allowed + 1e-12) {
            step.objectives.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        any_feasible = true;
        const double obj = discomfort_of(*cand, ctx);
        step.objectives.push_back(obj);
        if (improves(obj, best)) {
            best = obj;
            best_building = std::move(cand);
            step.chosen = c;
        }
    }
    if (best_building) {
        res.building = std::move(*best_building);
        step.objective_after = best;
        step.status = StepStatus::Changed;
    } else {
        step.status = any_feasible || step.candidates.size() <= 1 ? StepStatus::Kept : StepStatus::Infeasible;
    }
    return res;
}

RunResult run(const Building& b, const OptContext& ctx, const Strategy& s, const StepProgressFn& progress) {
    if (auto issues = strategy_issues(s); !issues.empty()) throw SeqoptError("invalid strategy: " + issues.front());
    if (!ctx.program || !ctx.weather) throw SeqoptError("optimization context needs a program and weather");
    RunResult out{b, {}};
    double objective = 0.0;
    try {
        objective = discomfort_of(b, ctx);
    } catch (const std::exception& e) {
        throw SeqoptError(std::string("initial assessment: ") + e.what());
    }
    const double penalty = penalty_of(b, *ctx.program);
    out.trace.initial_objective = objective;
    const std::size_t bound = enumerate_variables(b, s).size() * static_cast<std::size_t>(s.max_passes);
    for (int pass = 0; pass < s.max_passes; ++pass) {
        ++out.trace.passes;
        bool changed = false;
        for (const auto& v : enumerate_variables(out.building, s)) {
            VariableResult r;
            try {
                r = optimize_variable(out.building, v, ctx, s, objective, penalty);
            } catch (const std::exception& e) {
                throw SeqoptError("step " + std::to_string(out.trace.steps.size() + 1) + " (" + v.to_string() + "): " + e.what());
            }
            if (r.step.status == StepStatus::Changed) {
                out.building = std::move(r.building);
                objective = r.step.objective_after;
                changed = true;
            }
            out.trace.steps.push_back(std::move(r.step));
            if (progress) progress(out.trace.steps.size(), std::max(bound, out.trace.steps.size()));
        }
        if (!changed) break;
    }
    out.trace.final_objective = objective;
    return out;
}

}  // namespace planforge
