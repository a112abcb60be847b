#include "fatigue/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

void validate(const EngineParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) throw std::invalid_argument(std::string("engine.") + name + " must be > 0");
    };
    positive(p.reservoir_capacity, "reservoir_capacity");
    positive(p.wake_depletion, "wake_depletion");
    positive(p.sleep_recovery_rate, "sleep_recovery_rate");
    positive(p.circadian_amp_base, "circadian_amp_base");
    positive(p.circadian_amp_debt, "circadian_amp_debt");
    positive(p.inertia_max, "inertia_max");
    positive(p.inertia_tau, "inertia_tau");
    if (p.sleep_recovery_rate >= 1.0) throw std::invalid_argument("engine.sleep_recovery_rate must be < 1");
    if (p.harmonic_ratio < 0 || p.harmonic_ratio > 1)
        throw std::invalid_argument("engine.harmonic_ratio must lie in [0,1]");
    if (p.tick != 1) throw std::invalid_argument("engine.tick must be 1 minute");
    if (p.sample <= 0) throw std::invalid_argument("engine.sample must be > 0");
    if (p.inertia_window < 0) throw std::invalid_argument("engine.inertia_window must be >= 0");
}

namespace {

void check_pct(double r) {
    if (!(r >= 0.0 && r <= 100.0))
        throw std::domain_error(fmt::format("reservoir percentage {} outside [0,100]", r));
}

}  // namespace

double reservoir_to_sleep_debt(double reservoir_pct) {
    check_pct(reservoir_pct);
    return 32.0 * (1.0 - reservoir_pct / 100.0);
}

double reservoir_to_time_awake(double reservoir_pct) {
    check_pct(reservoir_pct);
    // capacity / (depletion per hour) = 2880 / (0.5 * 60) = 96 h
    return 96.0 * (1.0 - reservoir_pct / 100.0);
}

double circadian_rhythm(double t, const EngineParams& p) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return std::cos(two_pi * (t - p.circadian_peak) / 24.0) +
           p.harmonic_ratio * std::cos(2.0 * two_pi * (t - p.circadian_peak - p.circadian_second_peak) / 24.0);
}

double circadian(double t, double debt_fraction, const EngineParams& p) {
    return circadian_rhythm(t, p) * (p.circadian_amp_base + p.circadian_amp_debt * debt_fraction);
}

const EffectivenessTick* EffectivenessSeries::minute(Minute t) const {
    const Minute i = t - origin;
    if (i < 0 || i >= static_cast<Minute>(ticks.size())) return nullptr;
    return &ticks[static_cast<std::size_t>(i)];
}

EffectivenessSeries simulate_states(std::span<const std::uint8_t> asleep, Minute origin, const EngineParams& p,
                                    double initial_R, std::string crew_id) {
    validate(p);
    EffectivenessSeries s;
    s.crew_id = std::move(crew_id);
    s.origin = origin;
    s.capacity = p.reservoir_capacity;
    s.ticks.reserve(asleep.size());

    const double cap = p.reservoir_capacity;
    double R = initial_R < 0 ? cap : std::min(initial_R, cap);
    Minute awake_for = 0;
    bool slept_before = false;

    for (std::size_t k = 0; k < asleep.size(); ++k) {
        EffectivenessTick tick;
        tick.t = origin + static_cast<Minute>(k) + 1;
        tick.asleep = asleep[k] != 0;
        if (tick.asleep) {
            R += p.sleep_recovery_rate * (cap - R);
            awake_for = 0;
            slept_before = true;
        } else {
            R = std::max(0.0, R - p.wake_depletion);
            ++awake_for;
        }
        tick.R = R;
        tick.minutes_awake = awake_for;
        if (!tick.asleep && slept_before && awake_for <= p.inertia_window)
            tick.I = p.inertia_max * std::exp(-static_cast<double>(awake_for) / p.inertia_tau);
        tick.C = circadian_rhythm(clock_hours(tick.t), p);
        const double debt = (cap - R) / cap;
        const double E = 100.0 * R / cap + tick.C * (p.circadian_amp_base + p.circadian_amp_debt * debt) - tick.I;
        tick.E = std::clamp(E, 0.0, 100.0);
        s.ticks.push_back(tick);
    }
    return s;
}

EffectivenessSeries simulate(const ScheduleTimeline& timeline, const EngineParams& params, double initial_R) {
    for (std::size_t i = 0; i < timeline.intervals.size(); ++i) {
        const auto& iv = timeline.intervals[i];
        if (iv.end <= iv.start || iv.start < timeline.epoch.begin || iv.end > timeline.epoch.end ||
            (i > 0 && iv.start < timeline.intervals[i - 1].end))
            throw TimelineError("invalid timeline for " + timeline.crew_id + " at " + format_timestamp(iv.start));
    }
    const Minute n = timeline.epoch.end - timeline.epoch.begin;
    if (n <= 0) throw TimelineError("empty epoch for " + timeline.crew_id);

    std::vector<std::uint8_t> asleep(static_cast<std::size_t>(n), 0);
    for (const auto& iv : timeline.intervals) {
        if (!is_sleep(iv.kind)) continue;
        std::fill(asleep.begin() + (iv.start - timeline.epoch.begin), asleep.begin() + (iv.end - timeline.epoch.begin),
                  std::uint8_t{1});
    }
    return simulate_states(asleep, timeline.epoch.begin, params, initial_R, timeline.crew_id);
}

std::vector<Sample> sample_series(const EffectivenessSeries& series, Minute every) {
    if (series.ticks.empty()) throw std::invalid_argument("cannot sample an empty series");
    if (every <= 0) throw std::invalid_argument("sample interval must be > 0");
    std::vector<Sample> out;
    const Minute n = static_cast<Minute>(series.ticks.size());
    for (Minute k = every; k <= n; k += every) {
        const auto& tick = series.ticks[static_cast<std::size_t>(k - 1)];
        out.push_back({tick.t, tick.E});
    }
    return out;
}

std::string series_to_csv(const EffectivenessSeries& series) {
    std::string out = "t,R,E,C,I,asleep\n";
    for (const auto& t : series.ticks)
        out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", format_timestamp(t.t), t.R, t.E, t.C, t.I,
                           t.asleep ? 1 : 0);
    return out;
}

}  // namespace fatigue
