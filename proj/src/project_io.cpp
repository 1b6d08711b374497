#include "planforge/project_io.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

namespace planforge {

namespace {

class Obj {
public:
    Obj(const Json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) fail(path_, "expected an object");
        for (const auto& [key, _] : j.items()) {
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
            if (!known) fail(sub(key), "unknown field '" + key + "'");
        }
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& msg) { throw ProjectError(path, msg); }

    std::string sub(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

    const Json* find(const char* key) const {
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const Json& need(const char* key) const {
        const Json* v = find(key);
        if (!v) fail(sub(key), std::string(key) + " required");
        return *v;
    }

    void num(const char* key, double& out, bool required = false) const {
        const Json* v = required ? &need(key) : find(key);
        if (v) out = as_number(*v, sub(key));
    }

    template <typename I>
    void integer(const char* key, I& out) const {
        if (const Json* v = find(key)) out = as_integer<I>(*v, sub(key));
    }

    void boolean(const char* key, bool& out) const {
        if (const Json* v = find(key)) {
            if (!v->is_boolean()) fail(sub(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void str(const char* key, std::string& out, bool required = false) const {
        const Json* v = required ? &need(key) : find(key);
        if (v) out = as_string(*v, sub(key));
    }

    static double as_number(const Json& v, const std::string& path) {
        if (!v.is_number()) fail(path, "expected a number");
        return v.get<double>();
    }

    template <typename I>
    static I as_integer(const Json& v, const std::string& path) {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        if constexpr (std::is_unsigned_v<I>) {
            if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
            return static_cast<I>(v.get<std::uint64_t>());
        } else {
            if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<I>::max())) {
                fail(path, "integer out of range");
            }
            const auto x = v.get<std::int64_t>();
            if (x < std::numeric_limits<I>::min() || x > std::numeric_limits<I>::max()) fail(path, "integer out of range");
            return static_cast<I>(x);
        }
    }

    static std::string as_string(const Json& v, const std::string& path) {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    static const Json& as_array(const Json& v, const std::string& path) {
        if (!v.is_array()) fail(path, "expected an array");
        return v;
    }

private:
    const Json& j_;
    std::string path_;
};

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

template <typename F>
auto enum_from(const Json& v, const std::string& path, F&& parse) {
    const std::string s = Obj::as_string(v, path);
    try {
        return parse(s);
    } catch (const std::invalid_argument& e) {
        Obj::fail(path, e.what());
    }
}

Json point_json(const Point2& p) { return Json::array({p.x, p.y}); }

Point2 point_from(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) Obj::fail(path, "expected [x, y]");
    return {Obj::as_number(v[0], at(path, 0)), Obj::as_number(v[1], at(path, 1))};
}

Json rect_json(const Rect& r) { return {{"x", r.min_x()}, {"y", r.min_y()}, {"width", r.width}, {"height", r.height}}; }

Rect rect_from(const Json& j, const std::string& path) {
    Obj o(j, path, {"x", "y", "width", "height"});
    Rect r;
    o.num("x", r.min_corner.x, true);
    o.num("y", r.min_corner.y, true);
    o.num("width", r.width, true);
    o.num("height", r.height, true);
    return r;
}

Json sector_json(const std::optional<Sector>& s) {
    if (!s) return nullptr;
    return {{"center", s->center}, {"half_width", s->half_width}};
}

std::optional<Sector> sector_from(const Json& j, const std::string& path) {
    if (j.is_null()) return std::nullopt;
    Obj o(j, path, {"center", "half_width"});
    Sector s;
    o.num("center", s.center, true);
    o.num("half_width", s.half_width);
    return s;
}

Json assembly_json(const Assembly& a) {
    if (a.glazing) return {{"glazing", {{"u_value", a.glazing->u_value}, {"shgc", a.glazing->shgc}}}};
    Json layers = Json::array();
    for (const auto& l : a.layers) {
        layers.push_back({{"thickness", l.thickness}, {"conductivity", l.conductivity}, {"density", l.density},
                          {"specific_heat", l.specific_heat}});
    }
    return {{"layers", layers}};
}

Assembly assembly_from(const Json& j, const std::string& path) {
    Obj o(j, path, {"layers", "glazing"});
    Assembly a;
    if (const Json* g = o.find("glazing"); g && !g->is_null()) {
        Obj go(*g, o.sub("glazing"), {"u_value", "shgc"});
        Glazing gl;
        go.num("u_value", gl.u_value, true);
        go.num("shgc", gl.shgc, true);
        a.glazing = gl;
    }
    if (const Json* ls = o.find("layers")) {
        const std::string lp = o.sub("layers");
        Obj::as_array(*ls, lp);
        for (std::size_t i = 0; i < ls->size(); ++i) {
            Obj lo((*ls)[i], at(lp, i), {"thickness", "conductivity", "density", "specific_heat"});
            Layer l;
            lo.num("thickness", l.thickness, true);
            lo.num("conductivity", l.conductivity, true);
            lo.num("density", l.density, true);
            lo.num("specific_heat", l.specific_heat, true);
            a.layers.push_back(l);
        }
    }
    if (a.glazing && !a.layers.empty()) Obj::fail(path, "an assembly has either layers or glazing");
    return a;
}

Json constructions_json(const ConstructionSet& c) {
    Json out = Json::object();
    for (std::size_t k = 0; k < kElementKindCount; ++k) {
        out[std::string(element_name(static_cast<ElementKind>(k)))] = assembly_json(c.by_kind[k]);
    }
    return out;
}

ConstructionSet constructions_from(const Json& j, const std::string& path) {
    if (!j.is_object()) Obj::fail(path, "expected an object");
    ConstructionSet c = default_constructions();
    for (const auto& [key, value] : j.items()) {
        const std::string p = path + "." + key;
        const ElementKind k = enum_from(Json(key), p, element_from_name);
        c[k] = assembly_from(value, p);
    }
    return c;
}

Json location_json(const Location& l) {
    return {{"latitude", l.latitude}, {"longitude", l.longitude}, {"timezone", l.timezone}, {"elevation", l.elevation}};
}

Location location_from(const Json& j, const std::string& path) {
    Obj o(j, path, {"latitude", "longitude", "timezone", "elevation"});
    Location l;
    o.num("latitude", l.latitude);
    o.num("longitude", l.longitude);
    o.num("timezone", l.timezone);
    o.num("elevation", l.elevation);
    return l;
}

Json opening_json(const Opening& o) {
    Json j = {{"kind", o.kind == OpeningKind::Door ? "door" : "window"},
              {"side", std::string(side_name(o.side))},
              {"offset", o.offset},
              {"width", o.width},
              {"height", o.height},
              {"sill", o.sill},
              {"overhang_depth", o.overhang_depth},
              {"fin_depth_left", o.fin_depth_left},
              {"fin_depth_right", o.fin_depth_right}};
    if (!o.connects_to.empty()) j["connects_to"] = o.connects_to;
    return j;
}

Opening opening_from(const Json& j, const std::string& path) {
    Obj o(j, path,
          {"kind", "side", "offset", "width", "height", "sill", "overhang_depth", "fin_depth_left", "fin_depth_right",
           "connects_to"});
    Opening op;
    const std::string kind = Obj::as_string(o.need("kind"), o.sub("kind"));
    if (kind == "door") op.kind = OpeningKind::Door;
    else if (kind == "window") op.kind = OpeningKind::Window;
    else Obj::fail(o.sub("kind"), "expected \"door\" or \"window\"");
    op.side = enum_from(o.need("side"), o.sub("side"), side_from_name);
    o.num("offset", op.offset, true);
    o.num("width", op.width, true);
    o.num("height", op.height);
    o.num("sill", op.sill);
    o.num("overhang_depth", op.overhang_depth);
    o.num("fin_depth_left", op.fin_depth_left);
    o.num("fin_depth_right", op.fin_depth_right);
    o.str("connects_to", op.connects_to);
    return op;
}

Json space_json(const Space& s) {
    Json openings = Json::array();
    for (const auto& o : s.openings) openings.push_back(opening_json(o));
    Json j = {{"id", s.id},
              {"requirement", s.requirement},
              {"function", std::string(function_name(s.function))},
              {"storey", s.storey},
              {"rect", rect_json(s.rect)},
              {"openings", openings}};
    if (!s.function_tag.empty()) j["function_tag"] = s.function_tag;
    if (!s.construction_overrides.empty()) {
        Json ov = Json::object();
        for (const auto& [k, a] : s.construction_overrides) ov[std::string(element_name(k))] = assembly_json(a);
        j["construction_overrides"] = ov;
    }
    return j;
}

Space space_from(const Json& j, const std::string& path) {
    Obj o(j, path, {"id", "requirement", "function", "function_tag", "storey", "rect", "openings", "construction_overrides"});
    Space s;
    o.str("id", s.id, true);
    o.str("requirement", s.requirement);
    s.function = enum_from(o.need("function"), o.sub("function"), function_from_name);
    o.str("function_tag", s.function_tag);
    o.integer("storey", s.storey);
    s.rect = rect_from(o.need("rect"), o.sub("rect"));
    if (const Json* ops = o.find("openings")) {
        const std::string p = o.sub("openings");
        Obj::as_array(*ops, p);
        for (std::size_t i = 0; i < ops->size(); ++i) s.openings.push_back(opening_from((*ops)[i], at(p, i)));
    }
    if (const Json* ov = o.find("construction_overrides")) {
        const std::string p = o.sub("construction_overrides");
        if (!ov->is_object()) Obj::fail(p, "expected an object");
        for (const auto& [key, value] : ov->items()) {
            const ElementKind k = enum_from(Json(key), p + "." + key, element_from_name);
            s.construction_overrides[k] = assembly_from(value, p + "." + key);
        }
    }
    return s;
}

Json int_list(const std::vector<int>& v) { return Json(v); }

std::vector<int> int_list_from(const Json& j, const std::string& path) {
    Obj::as_array(j, path);
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(Obj::as_integer<int>(j[i], at(path, i)));
    return out;
}

Json requirement_json(const SpaceRequirement& r) {
    Json j = {{"id", r.id},
              {"function", std::string(function_name(r.function))},
              {"storey", r.storey},
              {"area_min", r.area_min},
              {"area_max", r.area_max},
              {"min_dimension", r.min_dimension},
              {"window_required", r.window_required}};
    if (!r.function_tag.empty()) j["function_tag"] = r.function_tag;
    if (r.orientation_pref) j["orientation_pref"] = sector_json(r.orientation_pref);
    if (r.window_orientation_pref) j["window_orientation_pref"] = sector_json(r.window_orientation_pref);
    if (r.position_pref) j["position_pref"] = point_json(*r.position_pref);
    return j;
}

SpaceRequirement requirement_from(const Json& j, const std::string& path) {
    Obj o(j, path,
          {"id", "function", "function_tag", "storey", "area_min", "area_max", "min_dimension", "orientation_pref",
           "window_orientation_pref", "position_pref", "window_required"});
    SpaceRequirement r;
    o.str("id", r.id, true);
    r.function = enum_from(o.need("function"), o.sub("function"), function_from_name);
    o.str("function_tag", r.function_tag);
    o.integer("storey", r.storey);
    o.num("area_min", r.area_min, true);
    o.num("area_max", r.area_max, true);
    o.num("min_dimension", r.min_dimension);
    if (const Json* s = o.find("orientation_pref")) r.orientation_pref = sector_from(*s, o.sub("orientation_pref"));
    if (const Json* s = o.find("window_orientation_pref")) {
        r.window_orientation_pref = sector_from(*s, o.sub("window_orientation_pref"));
    }
    if (const Json* p = o.find("position_pref"); p && !p->is_null()) r.position_pref = point_from(*p, o.sub("position_pref"));
    o.boolean("window_required", r.window_required);
    return r;
}

Json schedule_json(const Schedule& s) { return Json(std::vector<double>(s.fractions.begin(), s.fractions.end())); }

Schedule schedule_from(const Json& j, const std::string& path) {
    Schedule s;
    if (j.is_number()) return Schedule::constant(j.get<double>());
    if (!j.is_array() || j.size() != s.fractions.size()) Obj::fail(path, "expected a number or 168 hourly fractions");
    for (std::size_t i = 0; i < s.fractions.size(); ++i) s.fractions[i] = Obj::as_number(j[i], at(path, i));
    return s;
}

Json variable_json(const DesignVariable& v) {
    Json j = {{"kind", std::string(variable_kind_name(v.kind))}};
    switch (v.kind) {
        case VariableKind::BuildingOrientation:
        case VariableKind::ReflectPlan: break;
        case VariableKind::WallPosition:
            j["storey"] = v.storey;
            j["axis"] = v.axis == WallAxis::X ? "x" : "y";
            j["coordinate"] = v.coordinate;
            break;
        case VariableKind::FinDepth:
            j["right_fin"] = v.right_fin;
            [[fallthrough]];
        default:
            j["space_id"] = v.space_id;
            j["opening_index"] = v.opening_index;
    }
    return j;
}

DesignVariable variable_from(const Json& j, const std::string& path) {
    Obj o(j, path, {"kind", "space_id", "opening_index", "storey", "axis", "coordinate", "right_fin"});
    DesignVariable v;
    const std::string kind = Obj::as_string(o.need("kind"), o.sub("kind"));
    const auto k = variable_kind_from_name(kind);
    if (!k) Obj::fail(o.sub("kind"), "unknown variable kind '" + kind + "'");
    v.kind = *k;
    o.str("space_id", v.space_id);
    o.integer("opening_index", v.opening_index);
    o.integer("storey", v.storey);
    if (const Json* a = o.find("axis")) {
        const std::string axis = Obj::as_string(*a, o.sub("axis"));
        if (axis == "x") v.axis = WallAxis::X;
        else if (axis == "y") v.axis = WallAxis::Y;
        else Obj::fail(o.sub("axis"), "expected \"x\" or \"y\"");
    }
    o.num("coordinate", v.coordinate);
    o.boolean("right_fin", v.right_fin);
    return v;
}

Json maybe_nan(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

double maybe_nan_from(const Json& j, const std::string& path) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return Obj::as_number(j, path);
}

std::vector<double> numbers_from(const Json& j, const std::string& path, bool allow_null) {
    Obj::as_array(j, path);
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(allow_null ? maybe_nan_from(j[i], at(path, i)) : Obj::as_number(j[i], at(path, i)));
    }
    return out;
}

template <typename Array>
Json indicator_map(const Array& values) {
    Json out = Json::object();
    for (const auto i : all_indicators()) out[std::string(indicator_name(i))] = values[static_cast<std::size_t>(i)];
    return out;
}

template <typename Array>
void indicator_map_from(const Json& j, const std::string& path, Array& values) {
    if (!j.is_object()) Obj::fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        const auto ind = indicator_from_name(key);
        if (!ind) Obj::fail(path + "." + key, "unknown indicator '" + key + "'");
        values[static_cast<std::size_t>(*ind)] = Obj::as_number(value, path + "." + key);
    }
}

}  // namespace

const Solution* Project::find_solution(std::string_view id) const {
    for (const auto& s : solutions) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

Solution* Project::find_solution(std::string_view id) {
    return const_cast<Solution*>(static_cast<const Project*>(this)->find_solution(id));
}

Json to_json(const Boundary& b) {
    Json out = Json::array();
    for (const auto& v : b.vertices) out.push_back(point_json(v));
    return out;
}

Boundary boundary_from_json(const Json& j, const std::string& path) {
    Obj::as_array(j, path);
    Boundary b;
    for (std::size_t i = 0; i < j.size(); ++i) b.vertices.push_back(point_from(j[i], at(path, i)));
    return b;
}

Json to_json(const Building& b) {
    Json plans = Json::array();
    for (const auto& fp : b.plans) {
        Json spaces = Json::array();
        for (const auto& s : fp.spaces) spaces.push_back(space_json(s));
        plans.push_back({{"storey", fp.storey}, {"spaces", spaces}});
    }
    return {{"boundary", to_json(b.boundary)},
            {"storey_count", b.storey_count},
            {"storey_height", b.storey_height},
            {"orientation", b.orientation},
            {"party_edges", int_list(b.party_edges)},
            {"constructions", constructions_json(b.constructions)},
            {"location", location_json(b.location)},
            {"plans", plans}};
}

Building building_from_json(const Json& j, const std::string& path) {
    Obj o(j, path, {"boundary", "storey_count", "storey_height", "orientation", "party_edges", "constructions", "location", "plans"});
    Building b;
    b.boundary = boundary_from_json(o.need("boundary"), o.sub("boundary"));
    o.integer("storey_count", b.storey_count);
    o.num("storey_height", b.storey_height);
    o.num("orientation", b.orientation);
    if (const Json* p = o.find("party_edges")) b.party_edges = int_list_from(*p, o.sub("party_edges"));
    if (const Json* c = o.find("constructions")) b.constructions = constructions_from(*c, o.sub("constructions"));
    if (const Json* l = o.find("location")) b.location = location_from(*l, o.sub("location"));
    const std::string pp = o.sub("plans");
    const Json& plans = Obj::as_array(o.need("plans"), pp);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        Obj po(plans[i], at(pp, i), {"storey", "spaces"});
        FloorPlan fp;
        po.integer("storey", fp.storey);
        const std::string sp = po.sub("spaces");
        const Json& spaces = Obj::as_array(po.need("spaces"), sp);
        for (std::size_t k = 0; k < spaces.size(); ++k) fp.spaces.push_back(space_from(spaces[k], at(sp, k)));
        b.plans.push_back(std::move(fp));
    }
    return b;
}

Json to_json(const DesignProgram& p) {
    Json reqs = Json::array();
    for (const auto& r : p.space_reqs) reqs.push_back(requirement_json(r));
    Json adj = Json::array();
    for (const auto& a : p.adjacency_reqs) {
        adj.push_back({{"a", a.a}, {"b", a.b}, {"kind", a.kind == AdjacencyKind::DoorConnected ? "door" : "adjacent"}});
    }
    return {{"boundary", to_json(p.boundary)},
            {"storey_count", p.storey_count},
            {"storey_height", p.storey_height},
            {"gross_area_limit", p.gross_area_limit},
            {"construction_area_limit", p.construction_area_limit},
            {"space_reqs", reqs},
            {"adjacency_reqs", adj},
            {"neighbor_sides", int_list(p.neighbor_sides)},
            {"openings",
             {{"min_door_width", p.openings.min_door_width},
              {"min_window_width", p.openings.min_window_width},
              {"window_to_floor_ratio_min", p.openings.window_to_floor_ratio_min}}},
            {"site",
             {{"location", location_json(p.site.location)},
              {"orientation", p.site.orientation},
              {"constructions", constructions_json(p.site.constructions)}}}};
}

DesignProgram program_from_json(const Json& j, const std::string& path) {
    Obj o(j, path,
          {"boundary", "storey_count", "storey_height", "gross_area_limit", "construction_area_limit", "space_reqs",
           "adjacency_reqs", "neighbor_sides", "openings", "site"});
    DesignProgram p;
    p.boundary = boundary_from_json(o.need("boundary"), o.sub("boundary"));
    o.integer("storey_count", p.storey_count);
    o.num("storey_height", p.storey_height);
    o.num("gross_area_limit", p.gross_area_limit, true);
    o.num("construction_area_limit", p.construction_area_limit, true);
    const std::string rp = o.sub("space_reqs");
    const Json& reqs = Obj::as_array(o.need("space_reqs"), rp);
    for (std::size_t i = 0; i < reqs.size(); ++i) p.space_reqs.push_back(requirement_from(reqs[i], at(rp, i)));
    if (const Json* adj = o.find("adjacency_reqs")) {
        const std::string ap = o.sub("adjacency_reqs");
        Obj::as_array(*adj, ap);
        for (std::size_t i = 0; i < adj->size(); ++i) {
            Obj ao((*adj)[i], at(ap, i), {"a", "b", "kind"});
            AdjacencyRequirement a;
            ao.str("a", a.a, true);
            ao.str("b", a.b, true);
            std::string kind = "door";
            ao.str("kind", kind);
            if (kind == "door") a.kind = AdjacencyKind::DoorConnected;
            else if (kind == "adjacent") a.kind = AdjacencyKind::Adjacent;
            else Obj::fail(ao.sub("kind"), "expected \"door\" or \"adjacent\"");
            p.adjacency_reqs.push_back(std::move(a));
        }
    }
    if (const Json* n = o.find("neighbor_sides")) p.neighbor_sides = int_list_from(*n, o.sub("neighbor_sides"));
    if (const Json* op = o.find("openings")) {
        Obj oo(*op, o.sub("openings"), {"min_door_width", "min_window_width", "window_to_floor_ratio_min"});
        oo.num("min_door_width", p.openings.min_door_width);
        oo.num("min_window_width", p.openings.min_window_width);
        oo.num("window_to_floor_ratio_min", p.openings.window_to_floor_ratio_min);
    }
    if (const Json* s = o.find("site")) {
        Obj so(*s, o.sub("site"), {"location", "orientation", "constructions"});
        if (const Json* l = so.find("location")) p.site.location = location_from(*l, so.sub("location"));
        so.num("orientation", p.site.orientation);
        if (const Json* c = so.find("constructions")) p.site.constructions = constructions_from(*c, so.sub("constructions"));
    }
    return p;
}

Json to_json(const GeneratorConfig& c) {
    return {{"lambda", c.lambda},
            {"max_evaluations", c.max_evaluations},
            {"transforms_min", c.transforms_min},
            {"transforms_max", c.transforms_max},
            {"greediness", c.greediness},
            {"ema_rate", c.ema_rate},
            {"weight_floor", c.weight_floor},
            {"stagnation_restart", c.stagnation_restart},
            {"seed", c.seed},
            {"grid", c.grid},
            {"snap_distance", c.snap_distance},
            {"workers", c.workers}};
}

GeneratorConfig generator_from_json(const Json& j, const std::string& path) {
    Obj o(j, path,
          {"lambda", "max_evaluations", "transforms_min", "transforms_max", "greediness", "ema_rate", "weight_floor",
           "stagnation_restart", "seed", "grid", "snap_distance", "workers"});
    GeneratorConfig c;
    o.integer("lambda", c.lambda);
    o.integer("max_evaluations", c.max_evaluations);
    o.integer("transforms_min", c.transforms_min);
    o.integer("transforms_max", c.transforms_max);
    o.num("greediness", c.greediness);
    o.num("ema_rate", c.ema_rate);
    o.num("weight_floor", c.weight_floor);
    o.integer("stagnation_restart", c.stagnation_restart);
    o.integer("seed", c.seed);
    o.num("grid", c.grid);
    o.num("snap_distance", c.snap_distance);
    o.integer("workers", c.workers);
    return c;
}

Json to_json(const Weights& w) { return indicator_map(w.values); }

Weights weights_from_json(const Json& j, const std::string& path) {
    Weights w = Weights::defaults();
    indicator_map_from(j, path, w.values);
    return w;
}

Json to_json(const PerformanceVector& v) { return indicator_map(v.values); }

PerformanceVector performance_from_json(const Json& j, const std::string& path) {
    PerformanceVector v;
    indicator_map_from(j, path, v.values);
    return v;
}

Json to_json(const Strategy& s) {
    Json order = Json::array();
    for (const auto k : s.order) order.push_back(std::string(variable_kind_name(k)));
    return {{"order", order},
            {"steps_per_variable", s.steps_per_variable},
            {"max_passes", s.max_passes},
            {"feasibility_tolerance", s.feasibility_tolerance}};
}

Strategy strategy_from_json(const Json& j, const std::string& path) {
    Obj o(j, path, {"order", "steps_per_variable", "max_passes", "feasibility_tolerance"});
    Strategy s;
    if (const Json* ord = o.find("order")) {
        const std::string op = o.sub("order");
        Obj::as_array(*ord, op);
        s.order.clear();
        for (std::size_t i = 0; i < ord->size(); ++i) {
            const std::string name = Obj::as_string((*ord)[i], at(op, i));
            const auto k = variable_kind_from_name(name);
            if (!k) Obj::fail(at(op, i), "unknown variable kind '" + name + "'");
            s.order.push_back(*k);
        }
    }
    o.integer("steps_per_variable", s.steps_per_variable);
    o.integer("max_passes", s.max_passes);
    o.num("feasibility_tolerance", s.feasibility_tolerance);
    return s;
}

Json to_json(const ZoneUse& u) {
    return {{"occupants", u.occupants},
            {"activity_gain", u.activity_gain},
            {"equipment", u.equipment},
            {"lighting", u.lighting},
            {"occupancy", schedule_json(u.occupancy)},
            {"equipment_schedule", schedule_json(u.equipment_schedule)},
            {"lighting_schedule", schedule_json(u.lighting_schedule)},
            {"infiltration_ach", u.infiltration_ach},
            {"vent_ach", u.vent_ach}};
}

ZoneUse zone_use_from_json(const Json& j, const std::string& path) {
    Obj o(j, path,
          {"occupants", "activity_gain", "equipment", "lighting", "occupancy", "equipment_schedule", "lighting_schedule",
           "infiltration_ach", "vent_ach"});
    ZoneUse u;
    o.num("occupants", u.occupants);
    o.num("activity_gain", u.activity_gain);
    o.num("equipment", u.equipment);
    o.num("lighting", u.lighting);
    if (const Json* s = o.find("occupancy")) u.occupancy = schedule_from(*s, o.sub("occupancy"));
    if (const Json* s = o.find("equipment_schedule")) u.equipment_schedule = schedule_from(*s, o.sub("equipment_schedule"));
    if (const Json* s = o.find("lighting_schedule")) u.lighting_schedule = schedule_from(*s, o.sub("lighting_schedule"));
    o.num("infiltration_ach", u.infiltration_ach);
    o.num("vent_ach", u.vent_ach);
    return u;
}

ComfortModel comfort_from_json(const Json& j, const std::string& path) {
    const std::string s = Obj::as_string(j, path);
    try {
        return comfort_from_string(s);
    } catch (const std::invalid_argument& e) {
        Obj::fail(path, e.what());
    }
}

Json to_json(const DiscomfortResult& d) {
    Json spaces = Json::array();
    for (const auto& s : d.spaces) {
        spaces.push_back({{"space_id", s.space_id}, {"heating_dh", s.heating_dh}, {"cooling_dh", s.cooling_dh}});
    }
    return {{"spaces", spaces}, {"heating_total", d.heating_total}, {"cooling_total", d.cooling_total}};
}

DiscomfortResult discomfort_from_json(const Json& j, const std::string& path) {
    Obj o(j, path, {"spaces", "heating_total", "cooling_total"});
    DiscomfortResult d;
    const std::string sp = o.sub("spaces");
    const Json& spaces = Obj::as_array(o.need("spaces"), sp);
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        Obj so(spaces[i], at(sp, i), {"space_id", "heating_dh", "cooling_dh"});
        SpaceDiscomfort s;
        so.str("space_id", s.space_id, true);
        so.num("heating_dh", s.heating_dh, true);
        so.num("cooling_dh", s.cooling_dh, true);
        d.spaces.push_back(std::move(s));
    }
    o.num("heating_total", d.heating_total, true);
    o.num("cooling_total", d.cooling_total, true);
    return d;
}

Json to_json(const OptTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
        Json objectives = Json::array();
        for (double v : s.objectives) objectives.push_back(maybe_nan(v));
        steps.push_back({{"variable", variable_json(s.variable)},
                         {"candidates", s.candidates},
                         {"objectives", objectives},
                         {"current", s.current},
                         {"chosen", s.chosen},
                         {"objective_before", s.objective_before},
                         {"objective_after", s.objective_after},
                         {"status", std::string(step_status_name(s.status))}});
    }
    return {{"steps", steps},
            {"initial_objective", t.initial_objective},
            {"final_objective", t.final_objective},
            {"passes", t.passes}};
}

OptTrace trace_from_json(const Json& j, const std::string& path) {
    Obj o(j, path, {"steps", "initial_objective", "final_objective", "passes"});
    OptTrace t;
    const std::string sp = o.sub("steps");
    const Json& steps = Obj::as_array(o.need("steps"), sp);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        Obj so(steps[i], at(sp, i),
               {"variable", "candidates", "objectives", "current", "chosen", "objective_before", "objective_after", "status"});
        TraceStep s;
        s.variable = variable_from(so.need("variable"), so.sub("variable"));
        s.candidates = numbers_from(so.need("candidates"), so.sub("candidates"), false);
        s.objectives = numbers_from(so.need("objectives"), so.sub("objectives"), true);
        so.num("current", s.current, true);
        so.num("chosen", s.chosen, true);
        so.num("objective_before", s.objective_before, true);
        so.num("objective_after", s.objective_after, true);
        const std::string status = Obj::as_string(so.need("status"), so.sub("status"));
        if (status == "kept") s.status = StepStatus::Kept;
        else if (status == "changed") s.status = StepStatus::Changed;
        else if (status == "infeasible") s.status = StepStatus::Infeasible;
        else Obj::fail(so.sub("status"), "unknown step status '" + status + "'");
        t.steps.push_back(std::move(s));
    }
    o.num("initial_objective", t.initial_objective, true);
    o.num("final_objective", t.final_objective, true);
    o.integer("passes", t.passes);
    return t;
}

Json to_json(const Solution& s) {
    Json j = {{"id", s.id}, {"building", to_json(s.building)}};
    if (s.performance) j["performance"] = to_json(*s.performance);
    if (s.objective) j["objective"] = *s.objective;
    if (s.discomfort) j["discomfort"] = to_json(*s.discomfort);
    if (s.assessed_with) {
        j["assessed_with"] = {{"weather", s.assessed_with->weather}, {"comfort", comfort_to_string(s.assessed_with->comfort)}};
    }
    if (s.trace) j["trace"] = to_json(*s.trace);
    if (!s.source.empty()) j["source"] = s.source;
    return j;
}

Solution solution_from_json(const Json& j, const std::string& path) {
    Obj o(j, path, {"id", "building", "performance", "objective", "discomfort", "assessed_with", "trace", "source"});
    Solution s;
    o.str("id", s.id, true);
    s.building = building_from_json(o.need("building"), o.sub("building"));
    if (const Json* v = o.find("performance")) s.performance = performance_from_json(*v, o.sub("performance"));
    if (const Json* v = o.find("objective")) s.objective = Obj::as_number(*v, o.sub("objective"));
    if (const Json* v = o.find("discomfort")) s.discomfort = discomfort_from_json(*v, o.sub("discomfort"));
    if (const Json* v = o.find("assessed_with")) {
        Obj ao(*v, o.sub("assessed_with"), {"weather", "comfort"});
        AssessmentRef a;
        ao.str("weather", a.weather, true);
        a.comfort = comfort_from_json(ao.need("comfort"), ao.sub("comfort"));
        s.assessed_with = a;
    }
    if (const Json* v = o.find("trace")) s.trace = trace_from_json(*v, o.sub("trace"));
    o.str("source", s.source);
    return s;
}

Json to_json(const Project& p) {
    Json uses = Json::object();
    for (const auto& [id, u] : p.zone_uses) uses[id] = to_json(u);
    Json solutions = Json::array();
    for (const auto& s : p.solutions) solutions.push_back(to_json(s));
    return {{"format", kProjectFormat},
            {"version", kProjectVersion},
            {"id", p.id},
            {"name", p.name},
            {"created", p.created},
            {"updated", p.updated},
            {"program", to_json(p.program)},
            {"generator", to_json(p.generator)},
            {"weights", to_json(p.weights)},
            {"strategy", to_json(p.strategy)},
            {"zone_uses", uses},
            {"comfort", comfort_to_string(p.comfort)},
            {"heating_weight", p.heating_weight},
            {"cooling_weight", p.cooling_weight},
            {"weather", p.weather},
            {"solutions", solutions}};
}

Project project_from_json(const Json& j) {
    Obj o(j, "",
          {"format", "version", "id", "name", "created", "updated", "program", "generator", "weights", "strategy",
           "zone_uses", "comfort", "heating_weight", "cooling_weight", "weather", "solutions"});
    if (const Json* f = o.find("format"); f && Obj::as_string(*f, "format") != kProjectFormat) {
        Obj::fail("format", std::string("expected \"") + kProjectFormat + "\"");
    }
    if (const Json* v = o.find("version"); v && Obj::as_integer<int>(*v, "version") != kProjectVersion) {
        Obj::fail("version", "unsupported version " + v->dump());
    }
    Project p;
    o.str("id", p.id);
    o.str("name", p.name);
    o.str("created", p.created);
    o.str("updated", p.updated);
    p.program = program_from_json(o.need("program"), "program");
    if (const Json* v = o.find("generator")) p.generator = generator_from_json(*v, "generator");
    if (const Json* v = o.find("weights")) p.weights = weights_from_json(*v, "weights");
    if (const Json* v = o.find("strategy")) p.strategy = strategy_from_json(*v, "strategy");
    if (const Json* v = o.find("zone_uses")) {
        if (!v->is_object()) Obj::fail("zone_uses", "expected an object");
        for (const auto& [id, u] : v->items()) p.zone_uses[id] = zone_use_from_json(u, "zone_uses." + id);
    }
    if (const Json* v = o.find("comfort")) p.comfort = comfort_from_json(*v, "comfort");
    o.num("heating_weight", p.heating_weight);
    o.num("cooling_weight", p.cooling_weight);
    o.str("weather", p.weather);
    if (const Json* v = o.find("solutions")) {
        Obj::as_array(*v, "solutions");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < v->size(); ++i) {
            Solution s = solution_from_json((*v)[i], at("solutions", i));
            if (!ids.insert(s.id).second) Obj::fail(at("solutions", i) + ".id", "duplicate solution id '" + s.id + "'");
            p.solutions.push_back(std::move(s));
        }
    }
    return p;
}

std::string serialize_project(const Project& p) { return to_json(p).dump(2) + "\n"; }

Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ProjectError("", std::string("malformed JSON: ") + e.what());
    }
}

Project parse_project(std::string_view text) { return project_from_json(parse_json_text(text)); }

std::vector<std::string> project_issues(const Project& p) {
    std::vector<std::string> out;
    for (auto& i : validate_program(p.program)) out.push_back("program: " + i);
    for (auto& i : config_issues(p.generator)) out.push_back("generator: " + i);
    for (auto& i : strategy_issues(p.strategy)) out.push_back("strategy: " + i);
    for (auto& i : comfort_issues(p.comfort)) out.push_back("comfort: " + i);
    for (const auto& [id, u] : p.zone_uses) {
        for (auto& i : zone_use_issues(u)) out.push_back("zone_uses." + id + ": " + i);
    }
    for (std::size_t i = 0; i < kIndicatorCount; ++i) {
        if (!(p.weights.values[i] >= 0.0) || !std::isfinite(p.weights.values[i])) {
            out.push_back("weights." + std::string(indicator_name(static_cast<Indicator>(i))) + " must be finite and >= 0");
        }
    }
    if (!(p.heating_weight >= 0.0) || !(p.cooling_weight >= 0.0)) out.emplace_back("heating/cooling weights must be >= 0");
    std::set<std::string> ids;
    for (const auto& s : p.solutions) {
        if (!ids.insert(s.id).second) out.push_back("duplicate solution id '" + s.id + "'");
    }
    return out;
}

}  // namespace planforge
