#pragma once

// Turns a validated roster into a minute-exact schedule: duty envelopes
// (preparation and commuting), main sleep, afternoon naps before night duties
// and recovery naps after night work.

#include <string_view>
#include <vector>

#include "fatigue/roster.hpp"

namespace fatigue {

struct BehaviorProfile {
    bool auto_nap = true;
    bool advanced_bedtime = true;
    Minute commute_minutes = 60;
    Minute preparation_minutes = 60;
    Minute normal_bedtime = 23 * 60;  // minutes of day
    Minute min_sleep_minutes = 60;
    Minute max_workday_sleep_minutes = 480;
    Minute max_restday_sleep_minutes = 540;
    Minute max_recovery_nap_minutes = 210;
    Minute awake_zone_start = 13 * 60;
    Minute awake_zone_end = 20 * 60;
    // Sleep target used by advanced bedtime and the recovery-nap test.
    Minute optimal_sleep_minutes = 480;
    Minute recovery_lookback_minutes = 16 * 60;
};

// Throws std::invalid_argument naming the offending field.
void validate(const BehaviorProfile& profile);

enum class IntervalKind { Duty, Flight, Commute, Prepare, Sleep, Nap, RecoveryNap, Free };
std::string_view to_string(IntervalKind k);
bool is_sleep(IntervalKind k);

struct TimelineInterval {
    Minute start = 0;
    Minute end = 0;
    IntervalKind kind = IntervalKind::Free;

    Interval span() const { return {start, end}; }
    bool operator==(const TimelineInterval&) const = default;
};

struct ScheduleTimeline {
    std::string crew_id;
    Epoch epoch;
    // Sorted, non-overlapping. Gaps are free time; Free entries only appear
    // in exports produced by with_free_gaps().
    std::vector<TimelineInterval> intervals;
    // Merged duty periods as derived from the roster, before any envelope.
    std::vector<Interval> duty_periods;
    // Crewing event spans.
    std::vector<Interval> flights;

    Minute total(IntervalKind k) const;
    Minute total_sleep() const;
};

// Duty blocks with Prepare + Commute ahead and Commute after. A gap between
// duty periods too short to hold both envelopes is kept as Duty.
ScheduleTimeline insert_duty_envelopes(const ValidatedRoster& roster, const BehaviorProfile& profile,
                                       const DutyPolicy& duty = {});

ScheduleTimeline predict_main_sleep(ScheduleTimeline timeline, const BehaviorProfile& profile);

// Nap length keyed to hours awake before a night duty: [8,10) 60, [10,12) 90,
// [12,14) 120, >=14 180, otherwise none.
Minute auto_nap_minutes(Minute minutes_awake);

ScheduleTimeline insert_auto_naps(ScheduleTimeline timeline, const BehaviorProfile& profile);
ScheduleTimeline insert_recovery_naps(ScheduleTimeline timeline, const BehaviorProfile& profile);

// Full rule chain: envelopes, main sleep, auto naps, recovery naps.
ScheduleTimeline estimate_sleep(const ValidatedRoster& roster, const BehaviorProfile& profile,
                                const DutyPolicy& duty = {});

// Empty string when the timeline is consistent, otherwise the first violation.
std::string check_timeline(const ScheduleTimeline& timeline, const BehaviorProfile& profile);

std::vector<TimelineInterval> with_free_gaps(const ScheduleTimeline& timeline);

// crew_id,start,end,kind
std::string timeline_to_csv(std::span<const ScheduleTimeline> timelines);

}  // namespace fatigue
