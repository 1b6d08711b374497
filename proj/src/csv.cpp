#include "planforge/csv.hpp"

#include <cstdio>

namespace planforge {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

}  // namespace

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_record(const CsvRow& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false;
    bool any = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw CsvError("line " + std::to_string(line) + ": quote inside an unquoted field");
                quoted = true;
                any = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                field += c;
                break;
            case '\n':
                row.push_back(std::move(field));
                field.clear();
                rows.push_back(std::move(row));
                row.clear();
                any = false;
                ++line;
                break;
            default:
                field += c;
                any = true;
        }
    }
    if (quoted) throw CsvError("line " + std::to_string(line) + ": unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string results_csv(const SimResult& r, const WeatherYear& w) {
    CsvRow header{"hour", "outdoor"};
    for (const auto& s : r.spaces) header.push_back(s.space_id);
    std::string out = csv_record(header);
    out.reserve(kHoursPerYear * (12 + 9 * r.spaces.size()));
    CsvRow row;
    for (std::size_t h = 0; h < w.hours.size(); ++h) {
        row.clear();
        row.push_back(std::to_string(h));
        row.push_back(fixed(w.hours[h].dry_bulb, 3));
        for (const auto& s : r.spaces) row.push_back(h < s.temperature.size() ? fixed(s.temperature[h], 3) : "");
        out += csv_record(row);
    }
    return out;
}

std::string trace_csv(const OptTrace& t) {
    std::string out = csv_record({"step", "variable", "status", "current", "chosen", "objective_before", "objective_after"});
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& s = t.steps[i];
        out += csv_record({std::to_string(i), s.variable.to_string(), std::string(step_status_name(s.status)),
                           fixed(s.current, 6), fixed(s.chosen, 6), fixed(s.objective_before, 6),
                           fixed(s.objective_after, 6)});
    }
    return out;
}

std::string discomfort_csv(const DiscomfortResult& d) {
    std::string out = csv_record({"space", "heating_dh", "cooling_dh"});
    for (const auto& s : d.spaces) out += csv_record({s.space_id, fixed(s.heating_dh, 3), fixed(s.cooling_dh, 3)});
    out += csv_record({"total", fixed(d.heating_total, 3), fixed(d.cooling_total, 3)});
    return out;
}

}  // namespace planforge
