#include "planforge/weather.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "planforge/solar.hpp"

namespace planforge {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw WeatherError("line " + std::to_string(line) + ": " + what);
}

int weekday_from_name(std::string_view s) {
    static constexpr std::string_view names[] = {"monday", "tuesday", "wednesday", "thursday",
                                                 "friday", "saturday", "sunday"};
    std::string lower;
    for (char c : trim(s)) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (int i = 0; i < 7; ++i) {
        if (lower == names[i]) return i;
    }
    return -1;
}

std::string fmt(double v, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

}  // namespace

WeatherYear parse_epw(std::string_view text) {
    WeatherYear w;
    std::vector<std::string_view> lines;
    {
        std::size_t start = 0;
        while (start < text.size()) {
            auto nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }
    if (lines.size() < 8) throw WeatherError("line " + std::to_string(lines.size()) + ": EPW header needs 8 lines");

    const auto loc = split_fields(lines[0]);
    if (trim(loc[0]) != "LOCATION") fail(1, "expected LOCATION header");
    if (loc.size() < 10) fail(1, "LOCATION header needs 10 fields");
    w.name = std::string(trim(loc[1]));
    double v = 0.0;
    if (!parse_double(loc[6], v)) fail(1, "unparsable latitude");
    w.location.latitude = v;
    if (!parse_double(loc[7], v)) fail(1, "unparsable longitude");
    w.location.longitude = v;
    if (!parse_double(loc[8], v)) fail(1, "unparsable time zone");
    w.location.timezone = v;
    if (!parse_double(loc[9], v)) fail(1, "unparsable elevation");
    w.location.elevation = v;

    const auto periods = split_fields(lines[7]);
    if (trim(periods[0]) == "DATA PERIODS" && periods.size() > 4) {
        if (int d = weekday_from_name(periods[4]); d >= 0) w.jan1_weekday = d;
    }

    w.hours.reserve(kHoursPerYear);
    for (std::size_t i = 8; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const std::size_t lineno = i + 1;
        const auto f = split_fields(lines[i]);
        if (f.size() < 16) fail(lineno, "record has " + std::to_string(f.size()) + " fields, need at least 16");
        WeatherHour h;
        if (!parse_double(f[6], h.dry_bulb)) fail(lineno, "unparsable dry-bulb (field 7)");
        if (h.dry_bulb >= 99.9 - 1e-9) fail(lineno, "missing dry-bulb value 99.9");
        if (!parse_double(f[14], h.dni)) fail(lineno, "unparsable direct normal radiation (field 15)");
        if (!parse_double(f[15], h.dhi)) fail(lineno, "unparsable diffuse horizontal radiation (field 16)");
        if (h.dni >= 9999.0 || h.dhi >= 9999.0) fail(lineno, "missing radiation value 9999");
        if (h.dni < 0.0 || h.dhi < 0.0) fail(lineno, "negative radiation");
        w.hours.push_back(h);
    }
    if (w.hours.size() != kHoursPerYear) {
        throw WeatherError("expected 8760 hourly records, found " + std::to_string(w.hours.size()));
    }
    return w;
}

WeatherYear load_epw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WeatherError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_epw(ss.str());
}

std::string format_epw(const WeatherYear& w) {
    static constexpr std::string_view days[] = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                                "Friday", "Saturday", "Sunday"};
    static constexpr int month_days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    std::ostringstream os;
    os << "LOCATION," << (w.name.empty() ? "Site" : w.name) << ",-,-,synthetic,000000," << fmt(w.location.latitude, 4) << ','
       << fmt(w.location.longitude, 4) << ',' << fmt(w.location.timezone, 1) << ',' << fmt(w.location.elevation, 1) << '\n';
    os << "DESIGN CONDITIONS,0\n";
    os << "TYPICAL/EXTREME PERIODS,0\n";
    os << "GROUND TEMPERATURES,0\n";
    os << "HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0\n";
    os << "COMMENTS 1,\n";
    os << "COMMENTS 2,\n";
    os << "DATA PERIODS,1,1,Data," << days[((w.jan1_weekday % 7) + 7) % 7] << ", 1/ 1,12/31\n";
    std::size_t h = 0;
    for (int m = 0; m < 12; ++m) {
        for (int d = 1; d <= month_days[m]; ++d) {
            for (int hr = 1; hr <= 24 && h < w.hours.size(); ++hr, ++h) {
                const WeatherHour& x = w.hours[h];
                os << "2001," << (m + 1) << ',' << d << ',' << hr << ",0,?9?9?9?9E0?9?9?9?9?9?9?9?9?9?9?9?9?9?9?9*9*9?9?9?9,"
                   << fmt(x.dry_bulb, 1) << ",99.9,999,999999,9999,9999,9999,9999," << fmt(x.dni, 0) << ','
                   << fmt(x.dhi, 0) << ",999999,999999,999999,9999,999,999.0,99,99,9999,99999,9,999999999,999,0.999,999,99,999,999,99\n";
            }
        }
    }
    return os.str();
}

std::vector<std::string> weather_issues(const WeatherYear& w) {
    std::vector<std::string> out;
    if (w.hours.size() != kHoursPerYear) out.push_back("expected 8760 hourly records, found " + std::to_string(w.hours.size()));
    for (std::size_t i = 0; i < w.hours.size(); ++i) {
        const auto& h = w.hours[i];
        if (!std::isfinite(h.dry_bulb) || !std::isfinite(h.dni) || !std::isfinite(h.dhi) || h.dni < 0.0 || h.dhi < 0.0) {
            out.push_back("hour " + std::to_string(i) + ": invalid record");
            break;
        }
    }
    return out;
}

std::vector<double> daily_means(const WeatherYear& w) {
    std::vector<double> out(kDaysPerYear, 0.0);
    for (std::size_t d = 0; d < kDaysPerYear; ++d) {
        double s = 0.0;
        for (std::size_t h = 0; h < 24; ++h) s += w.hours[d * 24 + h].dry_bulb;
        out[d] = s / 24.0;
    }
    return out;
}

WeatherYear synthetic_weather(const Location& loc, const SyntheticClimate& c) {
    WeatherYear w;
    w.name = "Synthetic";
    w.location = loc;
    w.hours.resize(kHoursPerYear);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t h = 0; h < kHoursPerYear; ++h) {
        const double day = static_cast<double>(h / 24) + 1.0;
        const double hour = static_cast<double>(h % 24);
        WeatherHour& x = w.hours[h];
        x.dry_bulb = c.annual_mean + c.annual_amplitude * std::cos(two_pi * (day - 200.0) / 365.0) +
                     c.daily_amplitude * std::cos(two_pi * (hour - 15.0) / 24.0);
        const SunPosition sun = sun_position(loc.latitude, loc.longitude, loc.timezone, static_cast<int>(day), hour + 0.5);
        const double s = std::sin(sun.altitude * std::numbers::pi / 180.0);
        if (s > 0.0) {
            x.dni = std::round(c.peak_dni * std::pow(s, 0.3));
            x.dhi = std::round(c.peak_dhi * s);
        }
    }
    return w;
}

WeatherYear constant_weather(const Location& loc, double dry_bulb) {
    WeatherYear w;
    w.name = "Constant";
    w.location = loc;
    w.hours.assign(kHoursPerYear, WeatherHour{dry_bulb, 0.0, 0.0});
    return w;
}

}  // namespace planforge
