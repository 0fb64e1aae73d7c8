#include "heliocast/timeutil.hpp"

#include <charconv>
#include <chrono>

#include "heliocast/errors.hpp"

namespace helio {

namespace {

namespace chr = std::chrono;

constexpr std::int64_t kMinutesPerDay = 24 * 60;

int parse_number(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) throw InvalidTimestamp(std::string(text));
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) throw InvalidTimestamp(std::string(text));
    return value;
}

}  // namespace

Timestamp from_civil(const CivilTime& c) {
    chr::year_month_day ymd{chr::year{c.year}, chr::month{static_cast<unsigned>(c.month)},
                            chr::day{static_cast<unsigned>(c.day)}};
    if (!ymd.ok()) throw InvalidTimestamp("invalid calendar date");
    if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59)
        throw InvalidTimestamp("invalid time of day");
    const chr::sys_days days{ymd};
    return static_cast<Timestamp>(days.time_since_epoch().count()) * kMinutesPerDay +
           c.hour * 60 + c.minute;
}

CivilTime to_civil(Timestamp t) {
    std::int64_t day_count = t / kMinutesPerDay;
    std::int64_t in_day = t % kMinutesPerDay;
    if (in_day < 0) {
        in_day += kMinutesPerDay;
        day_count -= 1;
    }
    const chr::year_month_day ymd{chr::sys_days{chr::days{day_count}}};
    return CivilTime{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day())),
                     static_cast<int>(in_day / 60), static_cast<int>(in_day % 60)};
}

Timestamp parse_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM
    if (text.size() != 16 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':')
        throw InvalidTimestamp(std::string(text));
    return from_civil(CivilTime{parse_number(text, 0, 4), parse_number(text, 5, 2),
                                parse_number(text, 8, 2), parse_number(text, 11, 2),
                                parse_number(text, 14, 2)});
}

Timestamp parse_date(std::string_view text) {
    if (text.size() == 10) {
        if (text[4] != '-' || text[7] != '-') throw InvalidTimestamp(std::string(text));
        return from_civil(CivilTime{parse_number(text, 0, 4), parse_number(text, 5, 2),
                                    parse_number(text, 8, 2), 0, 0});
    }
    return parse_timestamp(text);
}

std::string format_timestamp(Timestamp t) {
    const CivilTime c = to_civil(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d", c.year, c.month, c.day, c.hour,
                  c.minute);
    return std::string(buf);
}

int month_of(Timestamp t) { return to_civil(t).month; }
int hour_of(Timestamp t) { return to_civil(t).hour; }
int minute_of(Timestamp t) { return to_civil(t).minute; }

int day_of_year(Timestamp t) {
    const CivilTime c = to_civil(t);
    const chr::year_month_day ymd{chr::year{c.year}, chr::month{static_cast<unsigned>(c.month)},
                                  chr::day{static_cast<unsigned>(c.day)}};
    const chr::sys_days jan1{chr::year_month_day{chr::year{c.year}, chr::January, chr::day{1}}};
    return static_cast<int>((chr::sys_days{ymd} - jan1).count()) + 1;
}

}  // namespace helio
