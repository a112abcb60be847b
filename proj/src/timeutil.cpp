#include "fatigue/timeutil.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

#include <fmt/format.h>

namespace fatigue {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Minute overlap_length(const Interval& a, const Interval& b) {
    return std::max<Minute>(0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

bool clock_in(Minute t, Minute from, Minute to) {
    const Minute c = clock_of_day(t);
    if (from <= to) return c >= from && c < to;
    return c >= from || c < to;
}

Minute make_timestamp(int year, unsigned month, unsigned day, int hour, int minute) {
    using namespace std::chrono;
    const sys_days d = year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                      std::chrono::day{day}};
    return static_cast<Minute>(d.time_since_epoch().count()) * kMinutesPerDay +
           hour * kMinutesPerHour + minute;
}

std::optional<Minute> parse_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM
    if (text.size() != 16 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != ' ') || text[13] != ':')
        return std::nullopt;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
        !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
        !parse_int(text.substr(14, 2), mi))
        return std::nullopt;
    if (h < 0 || h > 23 || mi < 0 || mi > 59) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return make_timestamp(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), h, mi);
}

std::string format_timestamp(Minute t) {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{day_index(t)}}};
    const Minute c = clock_of_day(t);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       c / 60, c % 60);
}

std::optional<Minute> parse_clock(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    int h = 0, m = 0;
    if (!parse_int(text.substr(0, colon), h) || !parse_int(text.substr(colon + 1), m))
        return std::nullopt;
    // 24:00 is allowed as an end-of-day marker.
    if (h < 0 || m < 0 || m > 59 || h > 24 || (h == 24 && m != 0)) return std::nullopt;
    return h * kMinutesPerHour + m;
}

std::string format_clock(Minute minutes_of_day) {
    return fmt::format("{:02d}:{:02d}", minutes_of_day / 60, minutes_of_day % 60);
}

}  // namespace fatigue
