#include "planforge/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace planforge {

namespace {

constexpr double kMargin = 1.0;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string to_svg(const FloorPlan& plan, const Boundary& boundary) {
    const Rect bb = boundary.bounding_box();
    const double flip = bb.min_y() + bb.max_y();
    const auto fy = [flip](double y) { return flip - y; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + num(bb.min_x() - kMargin) + ' ' +
           num(bb.min_y() - kMargin) + ' ' + num(bb.width + 2 * kMargin) + ' ' + num(bb.height + 2 * kMargin) +
           "\" data-storey=\"" + std::to_string(plan.storey) + "\">\n";

    out += "<polygon class=\"boundary\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.08\" points=\"";
    for (std::size_t i = 0; i < boundary.vertices.size(); ++i) {
        if (i) out += ' ';
        out += num(boundary.vertices[i].x) + ',' + num(fy(boundary.vertices[i].y));
    }
    out += "\"/>\n";

    std::vector<const Space*> spaces;
    for (const auto& s : plan.spaces) spaces.push_back(&s);
    std::sort(spaces.begin(), spaces.end(), [](const Space* a, const Space* b) { return a->id < b->id; });

    for (const Space* s : spaces) {
        const Rect& r = s->rect;
        const std::string label =
            s->function == SpaceFunction::Other && !s->function_tag.empty() ? s->function_tag : std::string(function_name(s->function));
        out += "<g class=\"space\" data-id=\"" + escape(s->id) + "\">\n";
        out += "<rect x=\"" + num(r.min_x()) + "\" y=\"" + num(fy(r.max_y())) + "\" width=\"" + num(r.width) +
               "\" height=\"" + num(r.height) + "\" fill=\"#eef\" stroke=\"#336\" stroke-width=\"0.04\"/>\n";
        const Point2 c = r.centroid();
        out += "<text x=\"" + num(c.x) + "\" y=\"" + num(fy(c.y)) +
               "\" font-size=\"0.4\" text-anchor=\"middle\" dominant-baseline=\"middle\">" + escape(label) + "</text>\n";
        for (const auto& o : s->openings) {
            const Segment seg = wall_segment(r, o.side);
            const double len = seg.length();
            const double dx = len > 0.0 ? (seg.b.x - seg.a.x) / len : 0.0;
            const double dy = len > 0.0 ? (seg.b.y - seg.a.y) / len : 0.0;
            const double t1 = opening_end(o);
            out += std::string("<line class=\"opening ") + (o.kind == OpeningKind::Door ? "door" : "window") + "\" x1=\"" +
                   num(seg.a.x + dx * o.offset) + "\" y1=\"" + num(fy(seg.a.y + dy * o.offset)) + "\" x2=\"" +
                   num(seg.a.x + dx * t1) + "\" y2=\"" + num(fy(seg.a.y + dy * t1)) + "\" stroke=\"" +
                   (o.kind == OpeningKind::Door ? "#a60" : "#06c") + "\" stroke-width=\"0.12\"/>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace planforge
