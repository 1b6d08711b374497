#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planforge/seqopt.hpp"
#include "planforge/thermal.hpp"
#include "planforge/weather.hpp"

namespace planforge {

using CsvRow = std::vector<std::string>;

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// RFC 4180: CRLF record separators, fields quoted when they hold a comma, quote or line break.
std::string csv_field(std::string_view s);
std::string csv_record(const CsvRow& fields);
std::vector<CsvRow> parse_csv(std::string_view text);

// hour, outdoor dry-bulb, then one operative temperature column per space, all at 3 decimals.
std::string results_csv(const SimResult& r, const WeatherYear& w);

// One row per step: step, variable, status, current, chosen, objective_before, objective_after.
std::string trace_csv(const OptTrace& t);

// Per-space degree-hours followed by a total row.
std::string discomfort_csv(const DiscomfortResult& d);

}  // namespace planforge
