#include "fatigue/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace fatigue {

namespace {

// Largest exact problem we will enumerate; beyond this the pattern count
// stops being cheap.
constexpr std::size_t kMaxExact = 24;

double normal_two_sided(double deviation, double sd, double continuity) {
    if (!(sd > 0)) return 1.0;
    const double z = std::max(0.0, deviation - continuity) / sd;
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

// Sum of t^3 - t over tie groups.
double tie_term(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double sum = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const auto t = static_cast<double>(j - i);
        sum += t * t * t - t;
        i = j;
    }
    return sum;
}

// Midranks are multiples of 1/2, so doubling gives exact integers.
std::vector<std::int64_t> doubled(const std::vector<double>& ranks) {
    std::vector<std::int64_t> out;
    out.reserve(ranks.size());
    for (double r : ranks) out.push_back(std::llround(2.0 * r));
    return out;
}

void check_cutoff(const RankTestOptions& opt) {
    if (opt.exact_cutoff > kMaxExact) throw std::invalid_argument("exact_cutoff above 24 is not supported");
    if (opt.continuity < 0) throw std::invalid_argument("continuity correction must be >= 0");
}

}  // namespace

std::string to_string(TestMethod m) {
    return m == TestMethod::ExactEnumeration ? "ExactEnumeration" : "NormalApproxTieCorrected";
}

nlohmann::ordered_json to_json(const TestReport& r) {
    nlohmann::ordered_json j;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["n1"] = r.n1;
    j["n2"] = r.n2;
    j["method"] = to_string(r.method);
    j["degenerate"] = r.degenerate;
    return j;
}

std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

TestReport mann_whitney_u(std::span<const double> a, std::span<const double> b, const RankTestOptions& opt) {
    check_cutoff(opt);
    if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney needs two non-empty samples");
    for (double v : a)
        if (!std::isfinite(v)) throw std::invalid_argument("Mann-Whitney sample holds a non-finite value");
    for (double v : b)
        if (!std::isfinite(v)) throw std::invalid_argument("Mann-Whitney sample holds a non-finite value");

    const std::size_t na = a.size(), nb = b.size(), n = na + nb;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);

    const double ra = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);
    const double ua = ra - 0.5 * static_cast<double>(na * (na + 1));
    const double ub = static_cast<double>(na * nb) - ua;

    TestReport r;
    r.n1 = na;
    r.n2 = nb;
    r.statistic = std::min(ua, ub);

    if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); })) {
        r.method = n <= opt.exact_cutoff ? TestMethod::ExactEnumeration : TestMethod::NormalApproxTieCorrected;
        r.p_value = 1.0;
        r.degenerate = true;
        return r;
    }

    if (n <= opt.exact_cutoff) {
        r.method = TestMethod::ExactEnumeration;
        const auto d = doubled(ranks);
        const std::int64_t centre = static_cast<std::int64_t>(na * (n + 1));
        std::int64_t obs_sum = 0;
        for (std::size_t i = 0; i < na; ++i) obs_sum += d[i];
        const std::int64_t obs_dev = std::llabs(obs_sum - centre);

        // Gosper's hack walks every n-bit mask with exactly na bits set.
        std::uint64_t hits = 0, total = 0;
        const std::uint64_t limit = std::uint64_t{1} << n;
        for (std::uint64_t mask = (std::uint64_t{1} << na) - 1; mask < limit;) {
            std::int64_t s = 0;
            for (std::uint64_t m = mask; m; m &= m - 1) s += d[static_cast<std::size_t>(__builtin_ctzll(m))];
            if (std::llabs(s - centre) >= obs_dev) ++hits;
            ++total;
            const std::uint64_t c = mask & (~mask + 1);
            const std::uint64_t rr = mask + c;
            mask = (((rr ^ mask) >> 2) / c) | rr;
        }
        r.p_value = static_cast<double>(hits) / static_cast<double>(total);
        return r;
    }

    r.method = TestMethod::NormalApproxTieCorrected;
    const double dn = static_cast<double>(n);
    const double prod = static_cast<double>(na * nb);
    const double var = prod / 12.0 * ((dn + 1.0) - tie_term(pooled) / (dn * (dn - 1.0)));
    r.p_value = normal_two_sided(std::abs(ua - prod / 2.0), std::sqrt(std::max(0.0, var)), opt.continuity);
    return r;
}

TestReport wilcoxon_signed_rank(std::span<const double> diffs, const RankTestOptions& opt) {
    check_cutoff(opt);
    if (diffs.empty()) throw std::invalid_argument("Wilcoxon test needs at least one pair");
    std::vector<double> abs_d;
    std::vector<bool> positive;
    for (double d : diffs) {
        if (!std::isfinite(d)) throw std::invalid_argument("Wilcoxon difference is not finite");
        if (d == 0) continue;
        abs_d.push_back(std::abs(d));
        positive.push_back(d > 0);
    }
    const std::size_t n = abs_d.size();

    TestReport r;
    r.n1 = diffs.size();
    r.n2 = n;
    if (n == 0) {
        r.degenerate = true;
        r.p_value = 1.0;
        r.method = TestMethod::ExactEnumeration;
        return r;
    }

    const auto ranks = midranks(abs_d);
    double w_plus = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (positive[i]) w_plus += ranks[i];
    r.statistic = w_plus;

    if (n <= opt.exact_cutoff) {
        r.method = TestMethod::ExactEnumeration;
        const auto d = doubled(ranks);
        const std::int64_t total_d = std::accumulate(d.begin(), d.end(), std::int64_t{0});
        // Deviation of 2 W+ from its mean total_d / 2, doubled again to stay integral.
        const std::int64_t obs_dev = std::llabs(std::llround(4.0 * w_plus) - total_d);
        std::uint64_t hits = 0;
        const std::uint64_t limit = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < limit; ++mask) {
            std::int64_t s = 0;
            for (std::uint64_t m = mask; m; m &= m - 1) s += d[static_cast<std::size_t>(__builtin_ctzll(m))];
            if (std::llabs(2 * s - total_d) >= obs_dev) ++hits;
        }
        r.p_value = static_cast<double>(hits) / static_cast<double>(limit);
        return r;
    }

    r.method = TestMethod::NormalApproxTieCorrected;
    const double dn = static_cast<double>(n);
    const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term(abs_d) / 48.0;
    r.p_value = normal_two_sided(std::abs(w_plus - dn * (dn + 1.0) / 4.0), std::sqrt(std::max(0.0, var)),
                                 opt.continuity);
    return r;
}

TestReport wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, const RankTestOptions& opt) {
    std::vector<double> d;
    d.reserve(pairs.size());
    for (const auto& [x, y] : pairs) d.push_back(x - y);
    return wilcoxon_signed_rank(std::span<const double>(d), opt);
}

double mean(std::span<const double> v) {
    if (v.empty()) throw std::domain_error("mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stdev(std::span<const double> v) {
    if (v.size() < 2) throw std::domain_error("standard deviation needs n >= 2");
    const double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pearson_rho(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson_rho: length mismatch");
    if (xs.size() < 2) throw std::domain_error("pearson_rho needs n >= 2");
    const double mx = mean(xs), my = mean(ys);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0 || syy == 0) throw std::domain_error("pearson_rho: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cohens_dz(std::span<const double> diffs) {
    const double sd = stdev(diffs);
    if (sd == 0) throw std::domain_error("cohens_dz: differences have zero variance");
    return std::abs(mean(diffs)) / sd;
}

}  // namespace fatigue
