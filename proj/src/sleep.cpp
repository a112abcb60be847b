#include "fatigue/sleep.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "fatigue/csv.hpp"

namespace fatigue {

namespace {

constexpr Minute kNever = std::numeric_limits<Minute>::max();

bool is_work(IntervalKind k) {
    return k == IntervalKind::Duty || k == IntervalKind::Flight || k == IntervalKind::Commute ||
           k == IntervalKind::Prepare;
}

bool is_duty(IntervalKind k) { return k == IntervalKind::Duty || k == IntervalKind::Flight; }

// Linear scans are fine: a 30-day roster has a few hundred intervals at most.
class Occupancy {
public:
    explicit Occupancy(const std::vector<TimelineInterval>& v) : v_(v) {}

    const TimelineInterval* at(Minute t) const {
        for (const auto& iv : v_)
            if (iv.start <= t && t < iv.end) return &iv;
        return nullptr;
    }

    // End of the chain of touching intervals covering t.
    Minute run_end(Minute t) const {
        Minute end = t;
        while (const auto* iv = at(end)) end = iv->end;
        return end;
    }

    Minute next_start(Minute t) const {
        Minute best = kNever;
        for (const auto& iv : v_)
            if (iv.start >= t) best = std::min(best, iv.start);
        return best;
    }

    Minute prev_end(Minute t) const {
        Minute best = std::numeric_limits<Minute>::min();
        for (const auto& iv : v_)
            if (iv.end <= t) best = std::max(best, iv.end);
        return best;
    }

    // Smallest start among intervals overlapping [s, e), or kNever.
    Minute first_conflict(Minute s, Minute e) const {
        Minute best = kNever;
        for (const auto& iv : v_)
            if (iv.start < e && s < iv.end) best = std::min(best, iv.start);
        return best;
    }

private:
    const std::vector<TimelineInterval>& v_;
};

void sort_intervals(std::vector<TimelineInterval>& v) {
    std::sort(v.begin(), v.end(), [](const TimelineInterval& a, const TimelineInterval& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
    });
}

// Contiguous runs of duty/envelope intervals: one per duty block.
struct WorkRun {
    Minute start = 0;
    Minute end = 0;
    Minute duty_start = kNever;
    Minute duty_end = 0;
};

std::vector<WorkRun> work_runs(const std::vector<TimelineInterval>& v) {
    std::vector<WorkRun> runs;
    for (const auto& iv : v) {
        if (!is_work(iv.kind)) continue;
        if (runs.empty() || iv.start != runs.back().end) runs.push_back({iv.start, iv.end});
        auto& r = runs.back();
        r.end = iv.end;
        if (is_duty(iv.kind)) {
            r.duty_start = std::min(r.duty_start, iv.start);
            r.duty_end = std::max(r.duty_end, iv.end);
        }
    }
    // A run clipped at the epoch edge may hold only envelope time.
    std::erase_if(runs, [](const WorkRun& r) { return r.duty_start == kNever; });
    return runs;
}

bool touches_night(Minute start, Minute end) {
    for (Minute d = day_index(start); d <= day_index(end - 1); ++d) {
        const Interval night{d * kMinutesPerDay, d * kMinutesPerDay + 6 * kMinutesPerHour};
        if (night.overlaps({start, end})) return true;
    }
    return false;
}

void add_clipped(ScheduleTimeline& tl, Minute s, Minute e, IntervalKind kind, Minute min_len = 1) {
    s = std::max(s, tl.epoch.begin);
    e = std::min(e, tl.epoch.end);
    if (e - s >= min_len) tl.intervals.push_back({s, e, kind});
}

}  // namespace

void validate(const BehaviorProfile& p) {
    auto positive = [](Minute v, const char* name) {
        if (v <= 0) throw std::invalid_argument(std::string("profile.") + name + " must be > 0");
    };
    positive(p.commute_minutes, "commute_minutes");
    positive(p.preparation_minutes, "preparation_minutes");
    positive(p.min_sleep_minutes, "min_sleep_minutes");
    positive(p.max_workday_sleep_minutes, "max_workday_sleep_minutes");
    positive(p.max_restday_sleep_minutes, "max_restday_sleep_minutes");
    positive(p.max_recovery_nap_minutes, "max_recovery_nap_minutes");
    positive(p.optimal_sleep_minutes, "optimal_sleep_minutes");
    positive(p.recovery_lookback_minutes, "recovery_lookback_minutes");
    auto clock = [](Minute v, const char* name) {
        if (v < 0 || v >= kMinutesPerDay)
            throw std::invalid_argument(std::string("profile.") + name + " must be a clock time");
    };
    clock(p.normal_bedtime, "normal_bedtime");
    clock(p.awake_zone_start, "awake_zone_start");
    clock(p.awake_zone_end, "awake_zone_end");
    if (p.awake_zone_end <= p.awake_zone_start)
        throw std::invalid_argument("profile.awake_zone must not wrap midnight");
}

std::string_view to_string(IntervalKind k) {
    switch (k) {
        case IntervalKind::Duty: return "Duty";
        case IntervalKind::Flight: return "Flight";
        case IntervalKind::Commute: return "Commute";
        case IntervalKind::Prepare: return "Prepare";
        case IntervalKind::Sleep: return "Sleep";
        case IntervalKind::Nap: return "Nap";
        case IntervalKind::RecoveryNap: return "RecoveryNap";
        case IntervalKind::Free: return "Free";
    }
    return "Free";
}

bool is_sleep(IntervalKind k) {
    return k == IntervalKind::Sleep || k == IntervalKind::Nap || k == IntervalKind::RecoveryNap;
}

Minute ScheduleTimeline::total(IntervalKind k) const {
    Minute t = 0;
    for (const auto& iv : intervals)
        if (iv.kind == k) t += iv.end - iv.start;
    return t;
}

Minute ScheduleTimeline::total_sleep() const {
    return total(IntervalKind::Sleep) + total(IntervalKind::Nap) + total(IntervalKind::RecoveryNap);
}

ScheduleTimeline insert_duty_envelopes(const ValidatedRoster& roster, const BehaviorProfile& profile,
                                       const DutyPolicy& duty) {
    ScheduleTimeline tl;
    tl.crew_id = roster.crew_id;
    tl.epoch = roster.epoch;
    tl.duty_periods = duty_periods(roster, duty);
    for (const auto& e : roster.events)
        if (e.kind == EventKind::Crewing) tl.flights.push_back(e.span());
    std::sort(tl.flights.begin(), tl.flights.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });

    const Minute pre = profile.preparation_minutes + profile.commute_minutes;
    const Minute post = profile.commute_minutes;

    std::vector<Interval> blocks;
    for (const auto& p : tl.duty_periods) {
        if (!blocks.empty() && p.start - blocks.back().end < pre + post)
            blocks.back().end = std::max(blocks.back().end, p.end);
        else
            blocks.push_back(p);
    }

    for (const auto& b : blocks) {
        add_clipped(tl, b.start - pre, b.start - profile.commute_minutes, IntervalKind::Prepare);
        add_clipped(tl, b.start - profile.commute_minutes, b.start, IntervalKind::Commute);
        Minute cursor = b.start;
        for (const auto& f : tl.flights) {
            if (f.end <= b.start || f.start >= b.end) continue;
            if (f.start > cursor) add_clipped(tl, cursor, f.start, IntervalKind::Duty);
            add_clipped(tl, std::max(f.start, cursor), f.end, IntervalKind::Flight);
            cursor = std::max(cursor, f.end);
        }
        if (cursor < b.end) add_clipped(tl, cursor, b.end, IntervalKind::Duty);
        add_clipped(tl, b.end, b.end + post, IntervalKind::Commute);
    }
    sort_intervals(tl.intervals);
    return tl;
}

ScheduleTimeline predict_main_sleep(ScheduleTimeline tl, const BehaviorProfile& profile) {
    const Minute first_day = day_index(tl.epoch.begin) - 1;
    const Minute last_day = day_index(tl.epoch.end - 1);
    std::vector<TimelineInterval> added;

    for (Minute d = first_day; d <= last_day; ++d) {
        const Minute day_start = d * kMinutesPerDay;
        const Minute midnight = day_start + kMinutesPerDay;
        const Minute bedtime = day_start + profile.normal_bedtime;
        Occupancy occ(tl.intervals);

        bool workday = false;
        for (const auto& iv : tl.intervals)
            if (is_work(iv.kind) && iv.start < midnight && day_start < iv.end) workday = true;
        const Minute cap = workday ? profile.max_workday_sleep_minutes : profile.max_restday_sleep_minutes;

        Minute start = bedtime;
        if (occ.at(bedtime)) {
            // Late return: sleep after it only if home before midnight.
            const Minute free_from = occ.run_end(bedtime);
            if (free_from > midnight) continue;
            start = free_from;
        }
        const Minute next = occ.next_start(start);
        Minute end = std::min(bedtime + cap, next);

        if (profile.advanced_bedtime && start == bedtime && next < bedtime + profile.optimal_sleep_minutes) {
            const Minute floor = std::max(day_start + profile.awake_zone_end, occ.prev_end(bedtime));
            start = std::min(start, std::max(next - profile.optimal_sleep_minutes, floor));
            end = next;
        }

        const Minute s = std::max(start, tl.epoch.begin);
        const Minute e = std::min(end, tl.epoch.end);
        if (e - s >= profile.min_sleep_minutes) added.push_back({s, e, IntervalKind::Sleep});
    }
    tl.intervals.insert(tl.intervals.end(), added.begin(), added.end());
    sort_intervals(tl.intervals);
    return tl;
}

Minute auto_nap_minutes(Minute minutes_awake) {
    if (minutes_awake < 8 * 60) return 0;
    if (minutes_awake < 10 * 60) return 60;
    if (minutes_awake < 12 * 60) return 90;
    if (minutes_awake < 14 * 60) return 120;
    return 180;
}

ScheduleTimeline insert_auto_naps(ScheduleTimeline tl, const BehaviorProfile& profile) {
    if (!profile.auto_nap) return tl;
    for (const auto& run : work_runs(tl.intervals)) {
        if (!touches_night(run.duty_start, run.duty_end)) continue;
        const Minute env_start = run.start;
        if (env_start <= tl.epoch.begin) continue;

        Minute last_wake = tl.epoch.begin;
        for (const auto& iv : tl.intervals)
            if (is_sleep(iv.kind) && iv.end <= env_start) last_wake = std::max(last_wake, iv.end);

        const Minute len = auto_nap_minutes(env_start - last_wake);
        if (len == 0) continue;

        // Latest free slot ending at or before the envelope.
        Occupancy occ(tl.intervals);
        Minute end = env_start;
        while (end - len >= last_wake) {
            const Minute conflict = occ.first_conflict(end - len, end);
            if (conflict == kNever) {
                tl.intervals.push_back({end - len, end, IntervalKind::Nap});
                sort_intervals(tl.intervals);
                break;
            }
            end = conflict;
        }
    }
    return tl;
}

ScheduleTimeline insert_recovery_naps(ScheduleTimeline tl, const BehaviorProfile& profile) {
    for (const auto& run : work_runs(tl.intervals)) {
        if (!clock_in(run.duty_end, profile.normal_bedtime, profile.awake_zone_start)) continue;
        const Minute start = run.end;
        if (start >= tl.epoch.end) continue;

        const Interval lookback{start - profile.recovery_lookback_minutes, start};
        Minute prior = 0;
        for (const auto& iv : tl.intervals)
            if (is_sleep(iv.kind)) prior += overlap_length(iv.span(), lookback);
        if (prior >= profile.optimal_sleep_minutes) continue;

        Occupancy occ(tl.intervals);
        if (occ.at(start)) continue;
        const Minute len = std::min(profile.max_recovery_nap_minutes, profile.optimal_sleep_minutes - prior);
        const Minute end = std::min({start + len, occ.next_start(start), tl.epoch.end});
        if (end - start >= profile.min_sleep_minutes) {
            tl.intervals.push_back({start, end, IntervalKind::RecoveryNap});
            sort_intervals(tl.intervals);
        }
    }
    return tl;
}

ScheduleTimeline estimate_sleep(const ValidatedRoster& roster, const BehaviorProfile& profile,
                                const DutyPolicy& duty) {
    auto tl = insert_duty_envelopes(roster, profile, duty);
    tl = predict_main_sleep(std::move(tl), profile);
    tl = insert_auto_naps(std::move(tl), profile);
    return insert_recovery_naps(std::move(tl), profile);
}

std::string check_timeline(const ScheduleTimeline& tl, const BehaviorProfile& profile) {
    Minute reach = tl.epoch.begin;
    for (const auto& iv : tl.intervals) {
        const std::string where = format_timestamp(iv.start) + " " + std::string(to_string(iv.kind));
        if (iv.end <= iv.start) return "empty interval at " + where;
        if (iv.start < tl.epoch.begin || iv.end > tl.epoch.end) return "interval outside epoch at " + where;
        if (iv.start < reach) return "overlapping interval at " + where;
        reach = iv.end;
        if (is_sleep(iv.kind) && iv.end - iv.start < profile.min_sleep_minutes)
            return "sleep shorter than minimum at " + where;
        if (iv.kind == IntervalKind::Sleep && iv.start != tl.epoch.begin &&
            clock_in(iv.start, profile.awake_zone_start, profile.awake_zone_end))
            return "main sleep starts inside the awake zone at " + where;
    }
    return {};
}

std::vector<TimelineInterval> with_free_gaps(const ScheduleTimeline& tl) {
    std::vector<TimelineInterval> out;
    Minute cursor = tl.epoch.begin;
    for (const auto& iv : tl.intervals) {
        if (iv.start > cursor) out.push_back({cursor, iv.start, IntervalKind::Free});
        out.push_back(iv);
        cursor = iv.end;
    }
    if (cursor < tl.epoch.end) out.push_back({cursor, tl.epoch.end, IntervalKind::Free});
    return out;
}

std::string timeline_to_csv(std::span<const ScheduleTimeline> timelines) {
    std::string out = "crew_id,start,end,kind\n";
    for (const auto& tl : timelines)
        for (const auto& iv : with_free_gaps(tl))
            out += csv::join({tl.crew_id, format_timestamp(iv.start), format_timestamp(iv.end),
                              std::string(to_string(iv.kind))}) +
                   "\n";
    return out;
}

}  // namespace fatigue
