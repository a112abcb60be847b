#include "fatigue/kpi.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

#include "fatigue/csv.hpp"

namespace fatigue {

namespace {

std::vector<Interval> merge(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
    });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (iv.empty()) continue;
        if (!out.empty() && iv.start <= out.back().end)
            out.back().end = std::max(out.back().end, iv.end);
        else
            out.push_back(iv);
    }
    return out;
}

template <typename F>
void for_each_window_tick(const EffectivenessSeries& series, std::span<const Interval> windows, F&& f) {
    for (const auto& w : merge({windows.begin(), windows.end()}))
        for (Minute t = w.start; t < w.end; ++t)
            if (const auto* tick = series.minute(t)) f(*tick);
}

bool touches_clock_window(const Interval& iv, Minute from, Minute to) {
    for (Minute d = day_index(iv.start); d <= day_index(iv.end - 1); ++d) {
        const Interval w{d * kMinutesPerDay + from, d * kMinutesPerDay + to};
        if (w.overlaps(iv)) return true;
    }
    return false;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : std::string{}; }

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<Interval> critical_windows(std::span<const Interval> flights) {
    std::vector<Interval> out;
    for (const auto& f : flights) {
        if (f.length() < 2 * kCriticalPhaseMinutes) {
            out.push_back(f);
        } else {
            out.push_back({f.start, f.start + kCriticalPhaseMinutes});
            out.push_back({f.end - kCriticalPhaseMinutes, f.end});
        }
    }
    return merge(std::move(out));
}

std::vector<Interval> critical_windows(std::span<const RosterEvent> events) {
    std::vector<Interval> flights;
    for (const auto& e : events)
        if (e.kind == EventKind::Crewing) flights.push_back(e.span());
    return critical_windows(flights);
}

std::optional<double> min_effectiveness_critical(const EffectivenessSeries& series,
                                                 std::span<const Interval> windows) {
    std::optional<double> best;
    for_each_window_tick(series, windows, [&](const EffectivenessTick& t) {
        if (!best || t.E < *best) best = t.E;
    });
    return best;
}

std::optional<double> min_reservoir_critical(const EffectivenessSeries& series,
                                             std::span<const Interval> windows) {
    std::optional<double> best;
    for_each_window_tick(series, windows, [&](const EffectivenessTick& t) {
        const double pct = 100.0 * t.R / series.capacity;
        if (!best || pct < *best) best = pct;
    });
    return best;
}

double fatigue_hazard_area(const EffectivenessSeries& series, std::span<const Interval> windows, double threshold) {
    if (!(threshold > 0 && threshold <= 100)) throw std::invalid_argument("FHA threshold must lie in (0,100]");
    double area = 0;
    for_each_window_tick(series, windows, [&](const EffectivenessTick& t) {
        area += std::max(0.0, (threshold - t.E) / threshold);
    });
    return area;
}

ProductivityMetrics productivity_metrics(const ValidatedRoster& roster, const DutyPolicy& duty,
                                         const KpiOptions& options) {
    ProductivityMetrics m;
    const auto periods = duty_periods(roster, duty);

    std::vector<bool> night(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
        m.duty_hours += static_cast<double>(periods[i].length()) / 60.0;
        night[i] = touches_clock_window(periods[i], options.night_start, options.night_end);
        if (night[i]) ++m.n_ns;
    }

    // A night shift is linked when the preceding duty was a night shift that
    // started at most 24 h earlier.
    bool in_run = false;
    for (std::size_t i = 1; i < periods.size(); ++i) {
        const bool linked = night[i] && night[i - 1] && periods[i].start - periods[i - 1].start <= kMinutesPerDay;
        if (options.cns_mode == ConsecutiveNightMode::AdjacentPairs) {
            if (linked) ++m.n_cns;
        } else {
            if (linked && !in_run) ++m.n_cns;
            in_run = linked;
        }
    }

    for (const auto& e : roster.events) {
        if (e.kind == EventKind::Crewing) {
            ++m.n_crew;
            if (clock_in(e.start, options.wocl_start, options.wocl_end)) ++m.n_wocl;
            if (clock_in(e.end, options.wocl_start, options.wocl_end)) ++m.n_wocl;
        } else {
            ++m.n_work;
        }
    }
    return m;
}

KpiRecord compute_kpis(const ValidatedRoster& roster, const EffectivenessSeries& series, const DutyPolicy& duty,
                       const KpiOptions& options) {
    KpiRecord r;
    r.crew_id = roster.crew_id;
    r.epoch = roster.epoch.label;
    const auto windows = critical_windows(roster.events);
    r.em_c = min_effectiveness_critical(series, windows);
    r.rm_c = min_reservoir_critical(series, windows);
    if (r.em_c) {
        r.fha_c = fatigue_hazard_area(series, windows, options.fha_threshold);
        r.sd_max = reservoir_to_sleep_debt(*r.rm_c);
        r.t_awake_max = reservoir_to_time_awake(*r.rm_c);
    }
    r.productivity = productivity_metrics(roster, duty, options);
    return r;
}

const std::vector<std::string>& kpi_columns() {
    static const std::vector<std::string> cols = {"crew_id", "epoch", "EM_C",  "RM_C",   "FHA_C",
                                                  "SD_max",  "t_awake_max", "N_NS", "N_CNS", "DT",
                                                  "N_crew",  "N_work", "N_wocl"};
    return cols;
}

std::string kpi_csv_header() { return csv::join(kpi_columns()) + "\n"; }

std::string kpi_csv_row(const KpiRecord& r) {
    const auto& p = r.productivity;
    return csv::join({r.crew_id, r.epoch, fmt_opt(r.em_c), fmt_opt(r.rm_c), fmt_opt(r.fha_c), fmt_opt(r.sd_max),
                      fmt_opt(r.t_awake_max), std::to_string(p.n_ns), std::to_string(p.n_cns),
                      fmt::format("{:.6f}", p.duty_hours), std::to_string(p.n_crew), std::to_string(p.n_work),
                      std::to_string(p.n_wocl)}) +
           "\n";
}

std::vector<KpiRecord> parse_kpi_csv(std::string_view text) {
    const auto table = csv::parse_table(text);
    std::vector<int> idx;
    for (const auto& c : kpi_columns()) {
        const int i = table.column(c);
        if (i < 0) throw std::runtime_error("KPI table lacks column " + c);
        idx.push_back(i);
    }
    std::vector<KpiRecord> out;
    for (const auto& row : table.rows) {
        auto cell = [&](std::size_t k) -> const std::string& { return row[static_cast<std::size_t>(idx[k])]; };
        auto count = [&](std::size_t k) {
            const auto v = parse_opt(cell(k));
            if (!v) throw std::runtime_error("KPI column " + kpi_columns()[k] + " is empty");
            return static_cast<int>(*v);
        };
        KpiRecord r;
        r.crew_id = cell(0);
        r.epoch = cell(1);
        r.em_c = parse_opt(cell(2));
        r.rm_c = parse_opt(cell(3));
        r.fha_c = parse_opt(cell(4));
        r.sd_max = parse_opt(cell(5));
        r.t_awake_max = parse_opt(cell(6));
        r.productivity.n_ns = count(7);
        r.productivity.n_cns = count(8);
        r.productivity.duty_hours = parse_opt(cell(9)).value_or(0.0);
        r.productivity.n_crew = count(10);
        r.productivity.n_work = count(11);
        r.productivity.n_wocl = count(12);
        out.push_back(std::move(r));
    }
    return out;
}

std::optional<double> kpi_value(const KpiRecord& r, std::string_view c) {
    const auto& p = r.productivity;
    if (c == "EM_C") return r.em_c;
    if (c == "RM_C") return r.rm_c;
    if (c == "FHA_C") return r.fha_c;
    if (c == "SD_max") return r.sd_max;
    if (c == "t_awake_max") return r.t_awake_max;
    if (c == "N_NS") return p.n_ns;
    if (c == "N_CNS") return p.n_cns;
    if (c == "DT") return p.duty_hours;
    if (c == "N_crew") return p.n_crew;
    if (c == "N_work") return p.n_work;
    if (c == "N_wocl") return p.n_wocl;
    throw std::invalid_argument("unknown KPI column " + std::string(c));
}

}  // namespace fatigue
