#pragma once

// Three-process effectiveness simulation: homeostatic sleep reservoir,
// two-harmonic circadian rhythm and post-sleep inertia, advanced in exact
// one-minute steps.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatigue/sleep.hpp"

namespace fatigue {

struct EngineParams {
    double reservoir_capacity = 2880.0;  // units
    double wake_depletion = 0.5;         // units per awake minute
    double sleep_recovery_rate = 0.0055; // fraction of the deficit restored per sleep minute
    double circadian_peak = 18.0;        // h, phase of the 24 h harmonic
    double circadian_second_peak = 3.0;  // h, 12 h harmonic phase offset from circadian_peak
    double harmonic_ratio = 0.5;
    double circadian_amp_base = 7.0;     // % effectiveness
    double circadian_amp_debt = 5.0;     // % effectiveness at full debt
    double inertia_max = 5.0;            // %
    double inertia_tau = 36.5;           // min
    Minute inertia_window = 120;         // min after waking
    Minute tick = 1;                     // min; the update law is per minute
    Minute sample = 30;                  // min
};

// Throws std::invalid_argument naming the offending parameter.
void validate(const EngineParams& params);

// Reservoir level (percent of capacity) to equivalent sleep debt in hours.
double reservoir_to_sleep_debt(double reservoir_pct);
// Reservoir level to equivalent continuous wakefulness in hours (3x the debt).
double reservoir_to_time_awake(double reservoir_pct);

// Dimensionless rhythm value at clock time t (hours).
double circadian_rhythm(double clock_hours, const EngineParams& params);
// Contribution to effectiveness in %: rhythm scaled by an amplitude that grows
// with the reservoir deficit fraction.
double circadian(double clock_hours, double debt_fraction, const EngineParams& params);

struct EffectivenessTick {
    Minute t = 0;        // end of the simulated minute
    double R = 0;        // reservoir units after the minute
    double E = 0;        // effectiveness, %
    double C = 0;        // rhythm value
    double I = 0;        // inertia, %
    bool asleep = false; // state during the minute
    Minute minutes_awake = 0;
};

struct EffectivenessSeries {
    std::string crew_id;
    Minute origin = 0;  // first tick covers [origin, origin + 1)
    double capacity = 2880.0;
    std::vector<EffectivenessTick> ticks;

    // Tick covering the minute that starts at t, or nullptr outside the series.
    const EffectivenessTick* minute(Minute t) const;
};

class TimelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws TimelineError for an inconsistent timeline.
EffectivenessSeries simulate(const ScheduleTimeline& timeline, const EngineParams& params,
                             double initial_R = -1.0);

// Lower-level entry point: per-minute sleep flags starting at origin.
EffectivenessSeries simulate_states(std::span<const std::uint8_t> asleep, Minute origin, const EngineParams& params,
                                    double initial_R = -1.0, std::string crew_id = {});

struct Sample {
    Minute t = 0;
    double E = 0;
};

// E at instants origin + k*every, k = 1..floor(duration/every).
std::vector<Sample> sample_series(const EffectivenessSeries& series, Minute every = 30);

// t,R,E,C,I,asleep
std::string series_to_csv(const EffectivenessSeries& series);

}  // namespace fatigue
