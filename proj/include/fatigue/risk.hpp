#pragma once

// Relative fatigue risk: inverse-effectiveness scaling, risk curves over
// night-shift counts and clock time, and WOCL-distribution weighted
// expectations of the fatigue hazard area.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fatigue/engine.hpp"
#include "fatigue/lsq.hpp"

namespace fatigue {

struct RiskParam {
    double b = 79.6;       // %
    double sigma_b = 3.0;  // %
};

// b / E, E in (0, 100].
double relative_risk(double effectiveness, const RiskParam& param = {});

struct RiskPoint {
    double x = 0;
    double rfr = 0;
    double sigma = 0;
    double ci_low = 0;
    double ci_high = 0;
};

// b / f(x) with sigma_f and sigma_b propagated as independent terms.
RiskPoint rfr_vs_nightshifts(const FitResult& effectiveness_fit, const RiskParam& param, double x);

// RFR(x_to) / RFR(x_from) = f(x_from) / f(x_to); b cancels exactly and the
// uncertainty uses the fit covariance between the two points.
Measured rfr_ratio(const FitResult& effectiveness_fit, double x_from, double x_to);

struct WoclDistribution {
    std::string label;
    std::vector<double> weights;  // W(x_i), x_i = 0..size-1
    std::vector<double> counts;   // n(x_i)

    // Normalises counts into weights.
    static WoclDistribution from_counts(std::string label, std::vector<double> counts);
    // Delta distribution at x0 backed by n rosters.
    static WoclDistribution delta(std::string label, int x0, double n = 1);
};

struct ExpectedFha {
    double value = 0;
    // Fit-curve term with the cross-x covariance of the shared parameters.
    double sigma_fit_covariant = 0;
    // Fit-curve term treating each f(x_i) as independent.
    double sigma_fit_independent = 0;
    // Sum over x_i of (f(x_i) * W(x_i) / sqrt(n(x_i)))^2, square-rooted.
    double sigma_weights = 0;
    double sigma_total_covariant = 0;
    double sigma_total_independent = 0;

    double ci_low() const { return value - 2.0 * sigma_total_covariant; }
    double ci_high() const { return value + 2.0 * sigma_total_covariant; }
};

// sum_i W(x_i) f(x_i). Throws std::invalid_argument if the weights do not sum
// to one.
ExpectedFha expected_fha(const WoclDistribution& dist, const FitResult& fha_fit);

inline constexpr int kClockBins = 48;  // 30-minute bins over 24 h

struct ClockBin {
    Minute start = 0;  // minutes of day
    std::size_t n = 0;
    double mean = 0;   // NaN when empty
    double se = 0;

    bool empty() const { return n == 0; }
};

// Groups samples by clock time into 48 bins; empty bins are reported as such.
std::vector<ClockBin> effectiveness_by_clock(std::span<const Sample> samples);

struct ClockRiskPoint {
    Minute start = 0;
    Minute end = 0;
    double rfr = 0;           // NaN for empty bins
    double sigma_b_term = 0;  // from b alone
    double sigma_se_term = 0; // from the bin standard error
    double ci_low = 0;        // b-only band
    double ci_high = 0;
    bool empty = false;
};

std::vector<ClockRiskPoint> rfr_by_clock(std::span<const ClockBin> bins, const RiskParam& param = {});

// Averages a clock curve over coarser [edges[i], edges[i+1]) intervals
// (minutes of day). Empty source bins are skipped.
std::vector<ClockRiskPoint> aggregate_clock_curve(std::span<const ClockRiskPoint> curve,
                                                  std::span<const Minute> edges);

// Divides by the mean over points starting inside [from, to) so that window
// averages to 1. Throws on an empty window or zero average.
std::vector<ClockRiskPoint> normalize_rfr(std::span<const ClockRiskPoint> curve, Minute from = 18 * 60,
                                          Minute to = 24 * 60);

struct ProportionBin {
    Minute start = 0;
    Minute end = 0;
    std::size_t count = 0;
    double percent = 0;
};

// Share of timestamps per clock interval; bins sum to 100%.
std::vector<ProportionBin> event_proportion_by_clock(std::span<const Minute> times, std::span<const Minute> edges);

}  // namespace fatigue
