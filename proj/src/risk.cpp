#include "fatigue/risk.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_edges(std::span<const Minute> edges) {
    if (edges.size() < 2) throw std::invalid_argument("need at least two bin edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] <= edges[i - 1]) throw std::invalid_argument("bin edges must increase");
    if (edges.front() < 0 || edges.back() > kMinutesPerDay)
        throw std::invalid_argument("bin edges must lie within one day");
}

}  // namespace

double relative_risk(double effectiveness, const RiskParam& param) {
    if (!(effectiveness > 0 && effectiveness <= 100))
        throw std::domain_error(fmt::format("effectiveness {} outside (0,100]", effectiveness));
    return param.b / effectiveness;
}

RiskPoint rfr_vs_nightshifts(const FitResult& fit, const RiskParam& param, double x) {
    const auto f = predict_with_ci(fit, x);
    if (!(f.y > 0)) throw std::domain_error(fmt::format("fitted effectiveness {} <= 0 at x = {}", f.y, x));
    RiskPoint r;
    r.x = x;
    r.rfr = param.b / f.y;
    const double from_b = param.sigma_b / f.y;
    const double from_f = param.b * f.sigma / (f.y * f.y);
    r.sigma = std::hypot(from_b, from_f);
    r.ci_low = r.rfr - 2.0 * r.sigma;
    r.ci_high = r.rfr + 2.0 * r.sigma;
    return r;
}

Measured rfr_ratio(const FitResult& fit, double x_from, double x_to) {
    const auto from = predict_with_ci(fit, x_from);
    const auto to = predict_with_ci(fit, x_to);
    if (!(from.y > 0) || !(to.y > 0)) throw std::domain_error("fitted effectiveness must be positive");
    return propagate_ratio({from.y, from.sigma}, {to.y, to.sigma}, curve_covariance(fit, x_from, x_to));
}

WoclDistribution WoclDistribution::from_counts(std::string label, std::vector<double> counts) {
    WoclDistribution d;
    d.label = std::move(label);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (!(total > 0)) throw std::invalid_argument("WOCL distribution '" + d.label + "' has no counts");
    for (double c : counts) {
        if (c < 0) throw std::invalid_argument("negative count in WOCL distribution");
        d.weights.push_back(c / total);
    }
    d.counts = std::move(counts);
    return d;
}

WoclDistribution WoclDistribution::delta(std::string label, int x0, double n) {
    std::vector<double> counts(static_cast<std::size_t>(x0) + 1, 0.0);
    counts.back() = n;
    return from_counts(std::move(label), std::move(counts));
}

ExpectedFha expected_fha(const WoclDistribution& dist, const FitResult& fit) {
    if (dist.weights.empty()) throw std::invalid_argument("empty WOCL distribution");
    const double sum = std::accumulate(dist.weights.begin(), dist.weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(fmt::format("WOCL distribution '{}' sums to {}, not 1", dist.label, sum));
    if (!dist.counts.empty() && dist.counts.size() != dist.weights.size())
        throw std::invalid_argument("WOCL counts and weights differ in length");

    ExpectedFha out;
    Eigen::VectorXd g_mix = Eigen::VectorXd::Zero(fit.degree + 1);
    double var_indep = 0, var_w = 0;
    for (std::size_t i = 0; i < dist.weights.size(); ++i) {
        const double w = dist.weights[i];
        const double x = static_cast<double>(i);
        const auto f = predict_with_ci(fit, x);
        out.value += w * f.y;
        g_mix += w * fit.basis(x);
        var_indep += w * w * f.sigma * f.sigma;
        const double n = dist.counts.empty() ? 0.0 : dist.counts[i];
        if (w > 0 && n > 0) {
            const double sigma_w = w / std::sqrt(n);
            var_w += f.y * f.y * sigma_w * sigma_w;
        }
    }
    const double var_cov = std::max(0.0, g_mix.dot(fit.covariance * g_mix));
    out.sigma_fit_covariant = std::sqrt(var_cov);
    out.sigma_fit_independent = std::sqrt(var_indep);
    out.sigma_weights = std::sqrt(var_w);
    out.sigma_total_covariant = std::sqrt(var_cov + var_w);
    out.sigma_total_independent = std::sqrt(var_indep + var_w);
    return out;
}

std::vector<ClockBin> effectiveness_by_clock(std::span<const Sample> samples) {
    std::vector<ClockBin> bins(kClockBins);
    std::vector<double> sum(kClockBins, 0.0), sum2(kClockBins, 0.0);
    for (int i = 0; i < kClockBins; ++i) bins[static_cast<std::size_t>(i)].start = i * 30;
    // Two passes keep the variance numerically stable.
    for (const auto& s : samples) {
        const auto b = static_cast<std::size_t>(clock_of_day(s.t) / 30);
        ++bins[b].n;
        sum[b] += s.E;
    }
    for (std::size_t b = 0; b < bins.size(); ++b) bins[b].mean = bins[b].n ? sum[b] / static_cast<double>(bins[b].n) : kNaN;
    for (const auto& s : samples) {
        const auto b = static_cast<std::size_t>(clock_of_day(s.t) / 30);
        const double d = s.E - bins[b].mean;
        sum2[b] += d * d;
    }
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const auto n = static_cast<double>(bins[b].n);
        bins[b].se = bins[b].n > 1 ? std::sqrt(sum2[b] / (n - 1.0)) / std::sqrt(n) : 0.0;
    }
    return bins;
}

std::vector<ClockRiskPoint> rfr_by_clock(std::span<const ClockBin> bins, const RiskParam& param) {
    std::vector<ClockRiskPoint> out;
    for (const auto& bin : bins) {
        ClockRiskPoint p;
        p.start = bin.start;
        p.end = bin.start + 30;
        if (bin.empty() || !(bin.mean > 0)) {
            p.empty = true;
            p.rfr = p.ci_low = p.ci_high = kNaN;
        } else {
            p.rfr = param.b / bin.mean;
            p.sigma_b_term = param.sigma_b / bin.mean;
            p.sigma_se_term = param.b * bin.se / (bin.mean * bin.mean);
            p.ci_low = p.rfr - 2.0 * p.sigma_b_term;
            p.ci_high = p.rfr + 2.0 * p.sigma_b_term;
        }
        out.push_back(p);
    }
    return out;
}

std::vector<ClockRiskPoint> aggregate_clock_curve(std::span<const ClockRiskPoint> curve,
                                                  std::span<const Minute> edges) {
    check_edges(edges);
    std::vector<ClockRiskPoint> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        ClockRiskPoint agg;
        agg.start = edges[i];
        agg.end = edges[i + 1];
        std::size_t n = 0;
        double rfr = 0, sb = 0, sse = 0, lo = 0, hi = 0;
        for (const auto& p : curve) {
            if (p.empty || p.start < agg.start || p.start >= agg.end) continue;
            ++n;
            rfr += p.rfr;
            sb += p.sigma_b_term;
            sse += p.sigma_se_term * p.sigma_se_term;
            lo += p.ci_low;
            hi += p.ci_high;
        }
        if (n == 0) {
            agg.empty = true;
            agg.rfr = agg.ci_low = agg.ci_high = kNaN;
        } else {
            const auto dn = static_cast<double>(n);
            agg.rfr = rfr / dn;
            // b is common to every bin, so its term averages linearly.
            agg.sigma_b_term = sb / dn;
            agg.sigma_se_term = std::sqrt(sse) / dn;
            agg.ci_low = lo / dn;
            agg.ci_high = hi / dn;
        }
        out.push_back(agg);
    }
    return out;
}

std::vector<ClockRiskPoint> normalize_rfr(std::span<const ClockRiskPoint> curve, Minute from, Minute to) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& p : curve) {
        if (p.empty || p.start < from || p.start >= to) continue;
        sum += p.rfr;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("normalisation window holds no curve points");
    const double avg = sum / static_cast<double>(n);
    if (avg == 0) throw std::domain_error("normalisation window averages to zero");
    std::vector<ClockRiskPoint> out(curve.begin(), curve.end());
    for (auto& p : out) {
        p.rfr /= avg;
        p.sigma_b_term /= avg;
        p.sigma_se_term /= avg;
        p.ci_low /= avg;
        p.ci_high /= avg;
    }
    return out;
}

std::vector<ProportionBin> event_proportion_by_clock(std::span<const Minute> times, std::span<const Minute> edges) {
    check_edges(edges);
    std::vector<ProportionBin> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) out.push_back({edges[i], edges[i + 1], 0, 0.0});
    std::size_t total = 0;
    for (Minute t : times) {
        const Minute c = clock_of_day(t);
        for (auto& b : out) {
            if (c >= b.start && c < b.end) {
                ++b.count;
                ++total;
                break;
            }
        }
    }
    for (auto& b : out) b.percent = total ? 100.0 * static_cast<double>(b.count) / static_cast<double>(total) : 0.0;
    return out;
}

}  // namespace fatigue
