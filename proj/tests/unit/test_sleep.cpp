#include <doctest.h>

#include <algorithm>

#include "fatigue/sleep.hpp"

using namespace fatigue;

namespace {

Minute at(int d, int h, int m = 0) { return make_timestamp(2019, 1, static_cast<unsigned>(d), h, m); }

RosterEvent work(Minute start, Minute end) {
    RosterEvent e;
    e.crew_id = "X";
    e.kind = EventKind::Working;
    e.subkind = EventSubkind::Other;
    e.start = start;
    e.end = end;
    return e;
}

ValidatedRoster roster(std::vector<RosterEvent> events) {
    ValidatedRoster r;
    r.crew_id = "X";
    r.epoch = Epoch::make("E", at(1, 0), 10);
    r.events = std::move(events);
    return r;
}

std::vector<TimelineInterval> of_kind(const ScheduleTimeline& t, IntervalKind k) {
    std::vector<TimelineInterval> out;
    std::copy_if(t.intervals.begin(), t.intervals.end(), std::back_inserter(out),
                 [&](const TimelineInterval& i) { return i.kind == k; });
    return out;
}

bool has(const ScheduleTimeline& t, Minute s, Minute e, IntervalKind k) {
    return std::find(t.intervals.begin(), t.intervals.end(), TimelineInterval{s, e, k}) != t.intervals.end();
}

BehaviorProfile plain() {
    BehaviorProfile p;
    p.auto_nap = false;
    p.advanced_bedtime = false;
    return p;
}

}  // namespace

TEST_CASE("duty envelope with standard commute") {
    const auto t = insert_duty_envelopes(roster({work(at(3, 9), at(3, 17))}), plain());
    CHECK(has(t, at(3, 7), at(3, 8), IntervalKind::Prepare));
    CHECK(has(t, at(3, 8), at(3, 9), IntervalKind::Commute));
    CHECK(has(t, at(3, 9), at(3, 17), IntervalKind::Duty));
    CHECK(has(t, at(3, 17), at(3, 18), IntervalKind::Commute));
    CHECK(t.intervals.size() == 4);
}

TEST_CASE("extended commute moves the envelope start to 06:00") {
    auto p = plain();
    p.commute_minutes = 120;
    const auto t = insert_duty_envelopes(roster({work(at(3, 9), at(3, 17))}), p);
    CHECK(t.intervals.front().start == at(3, 6));
    CHECK(has(t, at(3, 17), at(3, 19), IntervalKind::Commute));
}

TEST_CASE("a short gap between duties stays inside one block") {
    const auto t = insert_duty_envelopes(roster({work(at(3, 9), at(3, 12)), work(at(3, 12, 30), at(3, 15))}), plain());
    CHECK(of_kind(t, IntervalKind::Commute).size() == 2);
    CHECK(of_kind(t, IntervalKind::Prepare).size() == 1);
    CHECK(t.total(IntervalKind::Duty) == 6 * 60);
}

TEST_CASE("flights inside a duty are kept as Flight intervals") {
    RosterEvent f;
    f.crew_id = "X";
    f.kind = EventKind::Crewing;
    f.subkind = EventSubkind::Flight;
    f.start = at(3, 10);
    f.end = at(3, 11);
    f.origin = "CGH";
    f.destination = "GRU";
    const auto t = insert_duty_envelopes(roster({f}), plain());
    CHECK(has(t, at(3, 9), at(3, 10), IntervalKind::Duty));
    CHECK(has(t, at(3, 10), at(3, 11), IntervalKind::Flight));
    CHECK(has(t, at(3, 11), at(3, 11, 30), IntervalKind::Duty));
    CHECK(t.flights.size() == 1);
}

TEST_CASE("rest-day main sleep is capped at 540 minutes") {
    // Envelope starts 10:00 on day 4; the night of day 3 is a rest day.
    const auto t = predict_main_sleep(insert_duty_envelopes(roster({work(at(4, 12), at(4, 16))}), plain()), plain());
    CHECK(has(t, at(3, 23), at(4, 8), IntervalKind::Sleep));
}

TEST_CASE("advanced bedtime fits eight hours before an early envelope") {
    auto p = plain();
    p.advanced_bedtime = true;
    // Duty at 07:00 gives an envelope starting at 05:00.
    const auto r = roster({work(at(4, 7), at(4, 15))});
    const auto on = predict_main_sleep(insert_duty_envelopes(r, p), p);
    CHECK(has(on, at(3, 21), at(4, 5), IntervalKind::Sleep));

    const auto off = predict_main_sleep(insert_duty_envelopes(r, plain()), plain());
    CHECK(has(off, at(3, 23), at(4, 5), IntervalKind::Sleep));
    CHECK(off.total_sleep() <= on.total_sleep());
}

TEST_CASE("advanced bedtime never starts before 20:00") {
    auto p = plain();
    p.advanced_bedtime = true;
    const auto t = predict_main_sleep(insert_duty_envelopes(roster({work(at(4, 3), at(4, 10))}), p), p);
    CHECK(has(t, at(3, 20), at(4, 1), IntervalKind::Sleep));
}

TEST_CASE("auto nap before a night duty") {
    auto p = plain();
    p.auto_nap = true;
    // A short duty on day 3 makes its night a workday, so the main sleep is
    // 23:00-07:00; the night duty envelope starts at 18:00.
    const auto r = roster({work(at(3, 9), at(3, 11)), work(at(4, 20), at(5, 4))});
    auto t = predict_main_sleep(insert_duty_envelopes(r, p), p);
    REQUIRE(has(t, at(3, 23), at(4, 7), IntervalKind::Sleep));
    t = insert_auto_naps(std::move(t), p);
    CHECK(has(t, at(4, 16, 30), at(4, 18), IntervalKind::Nap));
}

TEST_CASE("auto nap duration table") {
    CHECK(auto_nap_minutes(7 * 60) == 0);
    CHECK(auto_nap_minutes(8 * 60) == 60);
    CHECK(auto_nap_minutes(10 * 60 - 1) == 60);
    CHECK(auto_nap_minutes(11 * 60) == 90);
    CHECK(auto_nap_minutes(12 * 60) == 120);
    CHECK(auto_nap_minutes(14 * 60) == 180);
    CHECK(auto_nap_minutes(20 * 60) == 180);
}

TEST_CASE("no auto nap after seven hours awake or when disabled") {
    auto p = plain();
    p.auto_nap = true;
    // Wake 07:00, envelope 14:00 for a duty reaching past midnight.
    auto short_day = predict_main_sleep(insert_duty_envelopes(roster({work(at(4, 16), at(5, 1))}), p), p);
    CHECK(of_kind(insert_auto_naps(short_day, p), IntervalKind::Nap).empty());

    // 15 h awake with auto naps off.
    auto long_day = predict_main_sleep(insert_duty_envelopes(roster({work(at(5, 0), at(5, 6))}), plain()), plain());
    CHECK(of_kind(insert_auto_naps(long_day, plain()), IntervalKind::Nap).empty());
    CHECK(estimate_sleep(roster({work(at(5, 0), at(5, 6))}), plain()).total(IntervalKind::Nap) == 0);
}

TEST_CASE("recovery nap after a night duty with no prior sleep") {
    // Duty 14:00-02:00 plus commute: envelope ends 03:00. Main sleep ends 07:00
    // the previous morning, so nothing is slept in the 16 h before 03:00.
    const auto r = roster({work(at(4, 14), at(5, 2))});
    auto t = predict_main_sleep(insert_duty_envelopes(r, plain()), plain());
    t = insert_recovery_naps(std::move(t), plain());
    CHECK(has(t, at(5, 3), at(5, 6, 30), IntervalKind::RecoveryNap));
}

TEST_CASE("no recovery nap after a daytime duty") {
    const auto t = estimate_sleep(roster({work(at(4, 7), at(4, 14))}), plain());
    CHECK(of_kind(t, IntervalKind::RecoveryNap).empty());
}

TEST_CASE("no recovery nap when the prior 16 h already held 480 minutes of sleep") {
    const auto r = roster({work(at(4, 9), at(4, 11))});
    const auto t = estimate_sleep(r, plain());
    REQUIRE(has(t, at(3, 23), at(4, 7), IntervalKind::Sleep));
    // Envelope ends 12:00 and the prior 16 h hold the full 480 min.
    CHECK(of_kind(t, IntervalKind::RecoveryNap).empty());
}

TEST_CASE("estimated timelines are consistent and deterministic") {
    BehaviorProfile p;
    std::vector<RosterEvent> ev;
    for (int d = 2; d <= 9; ++d) ev.push_back(work(at(d, d % 2 ? 22 : 6), at(d, d % 2 ? 23 : 14) + (d % 2 ? 5 * 60 : 0)));
    const auto r = roster(ev);
    const auto a = estimate_sleep(r, p);
    const auto b = estimate_sleep(r, p);
    CHECK(a.intervals == b.intervals);
    CHECK(check_timeline(a, p).empty());
    for (std::size_t i = 1; i < a.intervals.size(); ++i) CHECK(a.intervals[i - 1].end <= a.intervals[i].start);
    for (const auto& iv : a.intervals)
        if (is_sleep(iv.kind)) CHECK(iv.end - iv.start >= p.min_sleep_minutes);
    // Duty and flight minutes are untouched by the sleep rules.
    const auto env = insert_duty_envelopes(r, p);
    CHECK(a.total(IntervalKind::Duty) == env.total(IntervalKind::Duty));
}

TEST_CASE("timeline export") {
    const auto t = estimate_sleep(roster({work(at(3, 9), at(3, 17))}), plain());
    const auto text = timeline_to_csv(std::vector<ScheduleTimeline>{t});
    CHECK(text.rfind("crew_id,start,end,kind\n", 0) == 0);
    CHECK(text.find("X,2019-01-03T07:00,2019-01-03T08:00,Prepare") != std::string::npos);
    const auto gaps = with_free_gaps(t);
    CHECK(gaps.front().start == t.epoch.begin);
    CHECK(gaps.back().end == t.epoch.end);
}

TEST_CASE("profile validation") {
    BehaviorProfile p;
    p.min_sleep_minutes = 0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}
