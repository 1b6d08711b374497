#include "planforge/comfort.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "planforge/simd/kernels.hpp"
#include "planforge/thermal.hpp"

namespace planforge {

namespace {

double half_width(const ComfortModel& m) {
    switch (m.kind) {
        case ComfortKind::EN15251: return m.category == 1 ? 2.0 : m.category == 2 ? 3.0 : 4.0;
        case ComfortKind::ASHRAE55: return m.acceptability == 90 ? 2.5 : 3.5;
        case ComfortKind::Fixed: break;
    }
    return 0.5 * (m.upper - m.lower);
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

double to_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("comfort model: bad " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::vector<std::string> comfort_issues(const ComfortModel& m) {
    std::vector<std::string> out;
    switch (m.kind) {
        case ComfortKind::Fixed:
            if (!std::isfinite(m.lower) || !std::isfinite(m.upper) || !(m.lower < m.upper)) {
                out.push_back("fixed comfort band needs lower < upper");
            }
            break;
        case ComfortKind::EN15251:
            if (m.category < 1 || m.category > 3) out.push_back("EN15251 category must be I, II or III");
            break;
        case ComfortKind::ASHRAE55:
            if (m.acceptability != 80 && m.acceptability != 90) out.push_back("ASHRAE55 acceptability must be 80 or 90");
            break;
    }
    return out;
}

ComfortModel comfort_from_string(std::string_view s) {
    const std::string t = lower_ascii(s);
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.empty()) throw std::invalid_argument("comfort model: empty name");
    ComfortModel m;
    if (parts[0] == "fixed" && parts.size() == 3) {
        m = ComfortModel::fixed(to_double(parts[1], "lower limit"), to_double(parts[2], "upper limit"));
    } else if (parts[0] == "en15251" && parts.size() <= 2) {
        const std::string cat = parts.size() == 2 ? parts[1] : "ii";
        if (cat == "i" || cat == "1") m = ComfortModel::en15251(1);
        else if (cat == "ii" || cat == "2") m = ComfortModel::en15251(2);
        else if (cat == "iii" || cat == "3") m = ComfortModel::en15251(3);
        else throw std::invalid_argument("comfort model: unknown EN15251 category '" + cat + "'");
    } else if (parts[0] == "ashrae55" && parts.size() <= 2) {
        const std::string band = parts.size() == 2 ? parts[1] : "80";
        if (band == "80") m = ComfortModel::ashrae55(80);
        else if (band == "90") m = ComfortModel::ashrae55(90);
        else throw std::invalid_argument("comfort model: unknown ASHRAE55 band '" + band + "'");
    } else {
        throw std::invalid_argument("comfort model: unknown model '" + std::string(s) + "'");
    }
    if (auto issues = comfort_issues(m); !issues.empty()) throw std::invalid_argument("comfort model: " + issues.front());
    return m;
}

std::string comfort_to_string(const ComfortModel& m) {
    switch (m.kind) {
        case ComfortKind::Fixed: {
            std::ostringstream os;
            os.precision(17);
            os << "fixed:" << m.lower << ':' << m.upper;
            return os.str();
        }
        case ComfortKind::EN15251: return m.category == 1 ? "en15251:I" : m.category == 2 ? "en15251:II" : "en15251:III";
        case ComfortKind::ASHRAE55: return m.acceptability == 90 ? "ashrae55:90" : "ashrae55:80";
    }
    return "en15251:II";
}

Band comfort_band(const ComfortModel& m, double trm) {
    switch (m.kind) {
        case ComfortKind::Fixed: return {m.lower, m.upper};
        case ComfortKind::EN15251: {
            const double c = 0.33 * std::clamp(trm, 10.0, 30.0) + 18.8;
            const double h = half_width(m);
            return {c - h, c + h};
        }
        case ComfortKind::ASHRAE55: {
            const double c = 0.31 * std::clamp(trm, 10.0, 33.5) + 17.8;
            const double h = half_width(m);
            return {c - h, c + h};
        }
    }
    return {m.lower, m.upper};
}

std::vector<double> running_means(const WeatherYear& w) {
    const auto means = daily_means(w);
    std::vector<double> out(kDaysPerYear, 0.0);
    double seed = 0.0;
    for (std::size_t k = kDaysPerYear - 7; k < kDaysPerYear; ++k) seed += means[k];
    out[0] = seed / 7.0;
    for (std::size_t d = 1; d < kDaysPerYear; ++d) {
        out[d] = (1.0 - kRunningMeanAlpha) * means[d - 1] + kRunningMeanAlpha * out[d - 1];
    }
    return out;
}

double running_mean(const WeatherYear& w, int day) {
    if (day < 1 || day > static_cast<int>(kDaysPerYear)) throw std::out_of_range("day must be in 1..365");
    return running_means(w)[static_cast<std::size_t>(day - 1)];
}

void hourly_bands(const ComfortModel& m, const WeatherYear& w, std::vector<double>& lower, std::vector<double>& upper) {
    lower.assign(kHoursPerYear, m.lower);
    upper.assign(kHoursPerYear, m.upper);
    if (m.kind == ComfortKind::Fixed) return;
    const auto trm = running_means(w);
    for (std::size_t d = 0; d < kDaysPerYear; ++d) {
        const Band b = comfort_band(m, trm[d]);
        std::fill(lower.begin() + static_cast<std::ptrdiff_t>(d * 24), lower.begin() + static_cast<std::ptrdiff_t>(d * 24 + 24), b.lower);
        std::fill(upper.begin() + static_cast<std::ptrdiff_t>(d * 24), upper.begin() + static_cast<std::ptrdiff_t>(d * 24 + 24), b.upper);
    }
}

DiscomfortResult degree_hours(const SimResult& r, const ComfortModel& m, const WeatherYear& w) {
    std::vector<double> lower, upper;
    hourly_bands(m, w, lower, upper);
    DiscomfortResult out;
    for (const auto& s : r.spaces) {
        const auto sums = simd::degree_hours(s.temperature, lower, upper, s.occupied);
        out.spaces.push_back({s.space_id, sums.heating, sums.cooling});
        out.heating_total += sums.heating;
        out.cooling_total += sums.cooling;
    }
    return out;
}

double discomfort_objective(const DiscomfortResult& d, double w_heat, double w_cool) {
    double total = 0.0;
    for (const auto& s : d.spaces) total += w_heat * s.heating_dh + w_cool * s.cooling_dh;
    return total;
}

}  // namespace planforge
