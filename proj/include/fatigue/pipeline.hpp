#pragma once

// Batch workflows behind the command-line subcommands. Each returns its
// outputs as in-memory tables so the tool only handles files and exit codes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatigue/config.hpp"
#include "fatigue/kpi.hpp"
#include "fatigue/lsq.hpp"
#include "fatigue/risk.hpp"
#include "fatigue/stats.hpp"

namespace fatigue {

// Thrown for unreadable or semantically invalid inputs (exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- analyze

struct RosterOutcome {
    std::string crew_id;
    std::string epoch;
    std::string status;  // "accepted" or a reject reason
};

struct CrewSample {
    std::string crew_id;
    std::string epoch;
    Sample sample;
};

struct AnalyzeOptions {
    bool keep_timelines = false;
    bool keep_series = false;
};

struct AnalyzeResult {
    std::vector<KpiRecord> kpis;  // accepted rosters, ordered by (crew_id, epoch)
    std::vector<RosterOutcome> outcomes;
    std::vector<CrewSample> samples;  // sampled E during Crewing events
    std::vector<ParseDiagnostic> diagnostics;
    std::vector<ScheduleTimeline> timelines;
    std::vector<EffectivenessSeries> series;
    std::string config_hash;
    // Modelling choices echoed into the manifest.
    nlohmann::ordered_json metadata;

    std::size_t accepted() const;
    std::size_t rejected() const;

    std::string kpi_csv() const;
    std::string samples_csv() const;
    nlohmann::ordered_json manifest() const;
};

// Runs one (crew, epoch) roster through sleep estimation, simulation and KPIs.
KpiRecord analyze_roster(const ValidatedRoster& roster, const RunConfig& config,
                         ScheduleTimeline* timeline_out = nullptr, EffectivenessSeries* series_out = nullptr,
                         std::vector<Sample>* crewing_samples = nullptr);

// Throws SchemaError for a roster file missing mandatory columns.
AnalyzeResult analyze(std::string_view roster_csv, const RunConfig& config, const AnalyzeOptions& options = {});

std::vector<CrewSample> parse_samples_csv(std::string_view text);

// ---- fit

struct FitModel {
    std::string name;
    std::string x_column;
    std::string y_column;
    int degree = 0;
};

// emc_vs_nns:cubic, tawake_vs_nns:cubic, fha_vs_nwocl:quadratic. The suffix
// is optional.
FitModel fit_model(std::string_view name);
const std::vector<FitModel>& fit_models();

struct FitBin {
    double x = 0;
    double y = 0;
    double se = 0;       // standard error of the bin mean
    double sigma_y = 0;  // used in the fit; includes the x-spread term for pooled bins
    std::size_t n = 0;
    bool pooled = false;
};

struct BinnedFit {
    FitModel model;
    std::vector<FitBin> bins;
    std::vector<std::string> dropped;  // human-readable reasons
    FitResult fit;

    nlohmann::ordered_json to_json() const;
    std::string bins_csv() const;
    // Grid of step 0.25 over the binned x range with the 2-sigma band.
    std::string curve_csv() const;
};

// Groups rows by integer x and fits the bin means. Bins need two or more rows
// and a positive standard error. With pool_above set, rows with x above it form
// one bin whose sigma_y adds |f'(x)| times the standard error of the mean x.
// Throws FitError when too few bins remain.
BinnedFit fit_kpis(const std::vector<KpiRecord>& records, const FitModel& model,
                   std::optional<int> pool_above = std::nullopt);

std::string curve_csv(const FitResult& fit, double x_min, double x_max, double step = 0.25);

// ---- compare

struct CompareRow {
    std::string kpi;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double mean_a = 0, sd_a = 0, mean_b = 0, sd_b = 0;
    double ratio = 0;  // mean_b / mean_a, NaN when mean_a == 0
    std::optional<double> rho;
    std::optional<double> dz;
    TestReport test;
    std::string test_name;
    std::string note;
};

struct CompareResult {
    bool paired = false;
    std::vector<CompareRow> rows;

    std::string csv() const;
    nlohmann::ordered_json to_json() const;
};

// Paired mode matches rows on (crew_id, epoch) and throws InputError when the
// two key sets differ.
CompareResult compare_kpis(const std::vector<KpiRecord>& a, const std::vector<KpiRecord>& b, bool paired,
                           const RankTestOptions& options = {});

// ---- risk

struct RiskNnsReport {
    std::vector<RiskPoint> curve;
    double x_from = 1, x_to = 13;
    Measured ratio;  // RFR(x_to) / RFR(x_from)

    std::string csv() const;
    nlohmann::ordered_json to_json() const;
};

RiskNnsReport risk_vs_nightshifts(const FitResult& emc_fit, const RiskParam& param, double x_min, double x_max,
                                  double step = 0.25);

struct RiskClockReport {
    std::vector<ClockBin> bins;
    std::vector<ClockRiskPoint> curve;       // 30-minute bins
    std::vector<ClockRiskPoint> normalized;  // 18:00-24:00 averages to one
    std::vector<ClockRiskPoint> hourly;      // normalised, 1 h intervals
    std::vector<ProportionBin> proportions;  // departures and arrivals, 1 h intervals

    std::string csv() const;
    std::string proportions_csv() const;
};

RiskClockReport risk_by_clock(const std::vector<CrewSample>& samples, const RiskParam& param,
                              const std::vector<Minute>& event_times = {});

struct EpochExpectation {
    std::string epoch;
    std::size_t n = 0;
    WoclDistribution distribution;
    ExpectedFha expected;
};

// One W(N_wocl) distribution per epoch from the KPI table.
std::vector<EpochExpectation> expected_fha_by_epoch(const std::vector<KpiRecord>& records, const FitResult& fha_fit);
std::string expected_fha_csv(const std::vector<EpochExpectation>& rows);

}  // namespace fatigue
