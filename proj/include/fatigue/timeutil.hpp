#pragma once

// Wall-clock arithmetic in a single reference timezone. Timestamps are whole
// minutes since 1970-01-01 00:00 local time.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fatigue {

using Minute = std::int64_t;

inline constexpr Minute kMinutesPerHour = 60;
inline constexpr Minute kMinutesPerDay = 1440;

// Half-open [start, end).
struct Interval {
    Minute start = 0;
    Minute end = 0;

    Minute length() const { return end - start; }
    bool empty() const { return end <= start; }
    bool contains(Minute t) const { return t >= start && t < end; }
    bool overlaps(const Interval& o) const { return start < o.end && o.start < end; }
    bool operator==(const Interval&) const = default;
};

Minute overlap_length(const Interval& a, const Interval& b);

// Floor division so that times before the origin land on the right day.
inline Minute day_index(Minute t) {
    Minute d = t / kMinutesPerDay;
    return (t % kMinutesPerDay < 0) ? d - 1 : d;
}

inline Minute clock_of_day(Minute t) {
    Minute c = t % kMinutesPerDay;
    return c < 0 ? c + kMinutesPerDay : c;
}

inline double clock_hours(Minute t) { return static_cast<double>(clock_of_day(t)) / 60.0; }

// True when the clock time of t lies in [from, to) where from/to are minutes
// of day; wraps past midnight when from > to.
bool clock_in(Minute t, Minute from, Minute to);

Minute make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0);

// "YYYY-MM-DDTHH:MM" (a space is accepted in place of 'T').
std::optional<Minute> parse_timestamp(std::string_view text);
std::string format_timestamp(Minute t);

// "HH:MM" -> minutes of day.
std::optional<Minute> parse_clock(std::string_view text);
std::string format_clock(Minute minutes_of_day);

}  // namespace fatigue
