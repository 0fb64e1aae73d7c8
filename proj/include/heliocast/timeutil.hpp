#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace helio {

// Minutes since 1970-01-01T00:00. Records carry local clock time as stored
// in the data files; no timezone conversion is ever applied.
using Timestamp = std::int64_t;

struct CivilTime {
    int year;
    int month;   // 1..12
    int day;     // 1..31
    int hour;    // 0..23
    int minute;  // 0..59
};

Timestamp from_civil(const CivilTime& c);  // throws InvalidTimestamp
CivilTime to_civil(Timestamp t);

// "YYYY-MM-DDTHH:MM"; parse_date accepts a bare "YYYY-MM-DD" (midnight).
Timestamp parse_timestamp(std::string_view text);
Timestamp parse_date(std::string_view text);
std::string format_timestamp(Timestamp t);

int month_of(Timestamp t);
int hour_of(Timestamp t);
int minute_of(Timestamp t);
int day_of_year(Timestamp t);  // 1..366

}  // namespace helio
