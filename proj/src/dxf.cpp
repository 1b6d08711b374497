#include "planforge/dxf.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace planforge {

namespace {

std::string coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos) return "0.000000000";
    return s;
}

struct Writer {
    DxfDocument doc;

    void put(int code, std::string value) { doc.pairs.push_back({code, std::move(value)}); }
    void put(int code, int value) { put(code, std::to_string(value)); }

    void section(const char* name) {
        put(0, "SECTION");
        put(2, name);
    }
    void endsec() { put(0, "ENDSEC"); }

    void layer(const char* name, int color) {
        put(0, "LAYER");
        put(2, name);
        put(70, 0);
        put(62, color);
        put(6, "CONTINUOUS");
    }

    void polyline(const char* layer, const std::vector<Point2>& pts) {
        put(0, "LWPOLYLINE");
        put(100, "AcDbEntity");
        put(8, layer);
        put(100, "AcDbPolyline");
        put(90, static_cast<int>(pts.size()));
        put(70, 1);
        for (const auto& p : pts) {
            put(10, coord(p.x));
            put(20, coord(p.y));
        }
    }

    void line(const char* layer, Point3 a, Point3 b) {
        put(0, "LINE");
        put(100, "AcDbEntity");
        put(8, layer);
        put(100, "AcDbLine");
        put(10, coord(a.x));
        put(20, coord(a.y));
        put(30, coord(a.z));
        put(11, coord(b.x));
        put(21, coord(b.y));
        put(31, coord(b.z));
    }
};

std::vector<const Space*> sorted_spaces(const Building& b, int storey, bool all) {
    std::vector<const Space*> out;
    for (const auto& plan : b.plans) {
        for (const auto& s : plan.spaces) {
            if (all || s.storey == storey) out.push_back(&s);
        }
    }
    std::sort(out.begin(), out.end(), [](const Space* x, const Space* y) {
        return x->storey != y->storey ? x->storey < y->storey : x->id < y->id;
    });
    return out;
}

double parse_number(const DxfPair& p) {
    double v = 0.0;
    const auto* first = p.value.data();
    const auto* last = first + p.value.size();
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw DxfError("group " + std::to_string(p.code) + ": bad number '" + p.value + "'");
    }
    return v;
}

}  // namespace

std::string DxfDocument::to_text() const {
    std::string out;
    out.reserve(pairs.size() * 16);
    for (const auto& p : pairs) {
        out += std::to_string(p.code);
        out += '\n';
        out += p.value;
        out += '\n';
    }
    return out;
}

DxfDocument dxf_document(const Building& b, const DxfMode& mode) {
    Writer w;
    w.section("HEADER");
    w.put(9, "$ACADVER");
    w.put(1, "AC1015");
    w.put(9, "$INSUNITS");
    w.put(70, 6);
    w.endsec();

    w.section("TABLES");
    w.put(0, "TABLE");
    w.put(2, "LAYER");
    w.put(70, 3);
    w.layer(kBoundaryLayer, 7);
    w.layer(kSpacesLayer, 5);
    w.layer(kOpeningsLayer, 1);
    w.put(0, "ENDTAB");
    w.endsec();

    w.section("ENTITIES");
    if (mode.view == DxfView::Plan2d) {
        w.polyline(kBoundaryLayer, b.boundary.vertices);
        for (const Space* s : sorted_spaces(b, mode.storey, false)) {
            const Rect& r = s->rect;
            w.polyline(kSpacesLayer, {{r.min_x(), r.min_y()}, {r.max_x(), r.min_y()}, {r.max_x(), r.max_y()}, {r.min_x(), r.max_y()}});
            for (const auto& o : s->openings) {
                const Segment seg = wall_segment(r, o.side);
                const double len = seg.length();
                const double dx = len > 0.0 ? (seg.b.x - seg.a.x) / len : 0.0;
                const double dy = len > 0.0 ? (seg.b.y - seg.a.y) / len : 0.0;
                const double t0 = o.offset;
                const double t1 = opening_end(o);
                w.line(kOpeningsLayer, {seg.a.x + dx * t0, seg.a.y + dy * t0, 0.0}, {seg.a.x + dx * t1, seg.a.y + dy * t1, 0.0});
            }
        }
    } else {
        for (const Space* s : sorted_spaces(b, 0, true)) {
            const Rect& r = s->rect;
            const double z0 = s->storey * b.storey_height;
            const double z1 = z0 + b.storey_height;
            const Point2 c[4] = {{r.min_x(), r.min_y()}, {r.max_x(), r.min_y()}, {r.max_x(), r.max_y()}, {r.min_x(), r.max_y()}};
            for (int i = 0; i < 4; ++i) {
                const Point2 p = c[i];
                const Point2 q = c[(i + 1) % 4];
                w.line(kSpacesLayer, {p.x, p.y, z0}, {q.x, q.y, z0});
            }
            for (int i = 0; i < 4; ++i) {
                const Point2 p = c[i];
                const Point2 q = c[(i + 1) % 4];
                w.line(kSpacesLayer, {p.x, p.y, z1}, {q.x, q.y, z1});
            }
            for (const auto& p : c) w.line(kSpacesLayer, {p.x, p.y, z0}, {p.x, p.y, z1});
        }
    }
    w.endsec();
    w.put(0, "EOF");
    return std::move(w.doc);
}

std::string to_dxf(const Building& b, const DxfMode& mode) { return dxf_document(b, mode).to_text(); }

DxfDocument parse_dxf(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    if (lines.size() % 2 != 0) {
        throw DxfError("line " + std::to_string(lines.size()) + ": group code without a value");
    }
    DxfDocument d;
    d.pairs.reserve(lines.size() / 2);
    for (std::size_t i = 0; i < lines.size(); i += 2) {
        std::string_view c = lines[i];
        while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
        while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
        int code = 0;
        const auto res = std::from_chars(c.data(), c.data() + c.size(), code);
        if (c.empty() || res.ec != std::errc() || res.ptr != c.data() + c.size()) {
            throw DxfError("line " + std::to_string(i + 1) + ": bad group code '" + std::string(lines[i]) + "'");
        }
        d.pairs.push_back({code, std::string(lines[i + 1])});
    }
    return d;
}

std::vector<std::string> dxf_issues(const DxfDocument& d) {
    std::vector<std::string> out;
    const auto& p = d.pairs;
    if (p.size() < 2 || p[0] != DxfPair{0, "SECTION"} || p[1] != DxfPair{2, "HEADER"}) {
        out.push_back("document does not start with a HEADER section");
    }
    int entities = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i] == DxfPair{0, "SECTION"} && p[i + 1] == DxfPair{2, "ENTITIES"}) ++entities;
    }
    if (entities != 1) out.push_back("expected one ENTITIES section, found " + std::to_string(entities));
    if (p.empty() || p.back() != DxfPair{0, "EOF"}) out.push_back("document does not end with 0/EOF");
    int depth = 0;
    for (const auto& q : p) {
        if (q.code != 0) continue;
        if (q.value == "SECTION") {
            if (++depth > 1) out.push_back("nested SECTION");
        } else if (q.value == "ENDSEC") {
            if (--depth < 0) out.push_back("ENDSEC without SECTION");
        }
    }
    if (depth > 0) out.push_back("unterminated SECTION");
    return out;
}

DxfGeometry read_dxf_geometry(const DxfDocument& d) {
    DxfGeometry g;
    const auto& p = d.pairs;
    std::size_t i = 0;
    while (i + 1 < p.size() && !(p[i] == DxfPair{0, "SECTION"} && p[i + 1] == DxfPair{2, "ENTITIES"})) ++i;
    if (i + 1 >= p.size()) throw DxfError("no ENTITIES section");
    i += 2;
    while (i < p.size() && p[i] != DxfPair{0, "ENDSEC"}) {
        if (p[i].code != 0) throw DxfError("pair " + std::to_string(i) + ": expected an entity start");
        const std::string kind = p[i].value;
        std::size_t j = i + 1;
        while (j < p.size() && p[j].code != 0) ++j;
        if (kind == "LWPOLYLINE") {
            DxfPolyline pl;
            for (std::size_t k = i + 1; k < j; ++k) {
                switch (p[k].code) {
                    case 8: pl.layer = p[k].value; break;
                    case 70: pl.closed = (static_cast<int>(parse_number(p[k])) & 1) != 0; break;
                    case 10: pl.points.push_back({parse_number(p[k]), 0.0}); break;
                    case 20:
                        if (pl.points.empty()) throw DxfError("LWPOLYLINE: y before x");
                        pl.points.back().y = parse_number(p[k]);
                        break;
                    default: break;
                }
            }
            g.polylines.push_back(std::move(pl));
        } else if (kind == "LINE") {
            DxfLine ln;
            for (std::size_t k = i + 1; k < j; ++k) {
                switch (p[k].code) {
                    case 8: ln.layer = p[k].value; break;
                    case 10: ln.a.x = parse_number(p[k]); break;
                    case 20: ln.a.y = parse_number(p[k]); break;
                    case 30: ln.a.z = parse_number(p[k]); break;
                    case 11: ln.b.x = parse_number(p[k]); break;
                    case 21: ln.b.y = parse_number(p[k]); break;
                    case 31: ln.b.z = parse_number(p[k]); break;
                    default: break;
                }
            }
            g.lines.push_back(std::move(ln));
        }
        i = j;
    }
    if (i >= p.size()) throw DxfError("unterminated ENTITIES section");
    return g;
}

}  // namespace planforge
