#pragma once

// Per-roster fatigue and productivity indicators.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fatigue/engine.hpp"

namespace fatigue {

// Minutes at each end of a flight that count as a critical phase.
inline constexpr Minute kCriticalPhaseMinutes = 30;

// First and last 30 minutes of every flight; flights shorter than an hour
// contribute their whole span once. Output is sorted and disjoint.
std::vector<Interval> critical_windows(std::span<const Interval> flights);
std::vector<Interval> critical_windows(std::span<const RosterEvent> events);

// Minimum over every simulated minute inside any window; nullopt when no
// minute is covered.
std::optional<double> min_effectiveness_critical(const EffectivenessSeries& series,
                                                 std::span<const Interval> windows);
// Same, for the reservoir expressed in % of capacity.
std::optional<double> min_reservoir_critical(const EffectivenessSeries& series,
                                             std::span<const Interval> windows);

// Sum over in-window minutes of max(0, (T - E) / T): one full minute per
// minute spent at zero effectiveness. Windows are merged before summing.
double fatigue_hazard_area(const EffectivenessSeries& series, std::span<const Interval> windows,
                           double threshold = 77.0);

enum class ConsecutiveNightMode {
    AdjacentPairs,  // night shift whose previous duty is a night shift started within 24 h
    Runs,           // number of runs of two or more such linked night shifts
};

struct KpiOptions {
    double fha_threshold = 77.0;
    Minute wocl_start = 2 * 60;
    Minute wocl_end = 6 * 60;
    Minute night_start = 0;
    Minute night_end = 6 * 60;
    ConsecutiveNightMode cns_mode = ConsecutiveNightMode::AdjacentPairs;
};

struct ProductivityMetrics {
    int n_ns = 0;
    int n_cns = 0;
    double duty_hours = 0;
    int n_crew = 0;
    int n_work = 0;
    int n_wocl = 0;
};

ProductivityMetrics productivity_metrics(const ValidatedRoster& roster, const DutyPolicy& duty = {},
                                         const KpiOptions& options = {});

struct KpiRecord {
    std::string crew_id;
    std::string epoch;
    // Fatigue KPIs are absent for rosters without Crewing minutes.
    std::optional<double> em_c;
    std::optional<double> rm_c;
    std::optional<double> fha_c;
    std::optional<double> sd_max;
    std::optional<double> t_awake_max;
    ProductivityMetrics productivity;

    bool flagged() const { return !em_c.has_value(); }
};

KpiRecord compute_kpis(const ValidatedRoster& roster, const EffectivenessSeries& series,
                       const DutyPolicy& duty = {}, const KpiOptions& options = {});

// Column order: crew_id,epoch,EM_C,RM_C,FHA_C,SD_max,t_awake_max,N_NS,N_CNS,DT,N_crew,N_work,N_wocl
const std::vector<std::string>& kpi_columns();
std::string kpi_csv_header();
std::string kpi_csv_row(const KpiRecord& record);

// Reads a KPI table written by kpi_csv_*; empty cells become nullopt.
std::vector<KpiRecord> parse_kpi_csv(std::string_view text);

// Named numeric access used by fitting and comparisons (EM_C, N_NS, ...).
std::optional<double> kpi_value(const KpiRecord& record, std::string_view column);

}  // namespace fatigue
