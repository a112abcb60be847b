// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "fatigue/pipeline.hpp"

using namespace fatigue;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> check;
};

FitResult load_fit(const std::string& name) {
    std::ifstream in(std::string(FATIGUE_DATA_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return fit_from_json(nlohmann::json::parse(ss.str()));
}

double rel_err(double got, double want) {
    return want == 0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

// ---- 1

Outcome reservoir_identities() {
    double worst_sd = 0, worst_t = 0;
    for (int i = 0; i <= 100; ++i) {
        const double r = i;
        const double sd = reservoir_to_sleep_debt(r);
        worst_sd = std::max(worst_sd, rel_err(sd, 32.0 * (1.0 - r / 100.0)));
        worst_t = std::max(worst_t, rel_err(reservoir_to_time_awake(r), 3.0 * sd));
    }
    return {worst_sd <= 1e-12 && worst_t <= 1e-12,
            fmt::format("max rel err SD {:.1e}, t_awake {:.1e} over 101 values", worst_sd, worst_t)};
}

// ---- 2

Outcome engine_consistency() {
    const EngineParams p;
    const Minute origin = make_timestamp(2019, 1, 1);
    const auto wake = simulate_states(std::vector<std::uint8_t>(1440, 0), origin, p);
    const double pct = 100.0 * wake.ticks.back().R / p.reservoir_capacity;
    const double t_awake = reservoir_to_time_awake(pct);

    ValidatedRoster free_roster;
    free_roster.crew_id = "FREE";
    free_roster.epoch = Epoch::make("F", origin, 14);
    const auto series = simulate(estimate_sleep(free_roster, BehaviorProfile{}), p);
    double drift = 0;
    // Last three days against the day before each.
    for (std::size_t i = 10 * 1440; i + 1440 < series.ticks.size(); ++i)
        drift = std::max(drift, std::abs(series.ticks[i].R - series.ticks[i + 1440].R));
    const bool ok = pct == 75.0 && t_awake == 24.0 && drift < 1.0;
    return {ok, fmt::format("R after 24 h = {}%, t_awake(75) = {} h, 14-day daily drift {:.2e} units", pct, t_awake,
                            drift)};
}

// ---- 3

Outcome reference_fit_checks() {
    const auto ta = load_fit("reference_tawake.json");
    const auto emc = load_fit("reference_emc.json");
    const double t10 = ta(10.0), t11 = ta(11.0);
    const double p = chi2_pvalue(9.0, 9);
    const double inc = rfr_ratio(emc, 1.0, 13.0).value - 1.0;
    const bool ok = std::abs(t10 - 23.85) <= 0.02 && t10 < 24 && std::abs(t11 - 24.60) <= 0.02 && t11 > 24 &&
                    std::abs(p - 0.437) <= 0.002 && inc >= 0.212 && inc <= 0.242;
    return {ok, fmt::format("t_awake(10) = {:.3f}, t_awake(11) = {:.3f}, p(9, 9) = {:.4f}, RFR(13)/RFR(1) - 1 = {:.4f}",
                            t10, t11, p, inc)};
}

// ---- 4

Outcome fitter_oracle() {
    const Eigen::Vector4d truth(87.4, -4.55, 0.50, -0.0204);
    auto f = [&](double x) { return truth[0] + truth[1] * x + truth[2] * x * x + truth[3] * x * x * x; };
    std::vector<WeightedPoint> base;
    for (int x = 1; x <= 13; ++x) base.push_back({double(x), f(x), 0.4 + 0.05 * x});

    double recover = 0;
    for (int degree = 1; degree <= 3; ++degree) {
        std::vector<WeightedPoint> pts = base;
        Eigen::VectorXd c = truth.head(degree + 1);
        for (auto& q : pts) {
            double y = 0, xp = 1;
            for (int j = 0; j <= degree; ++j, xp *= q.x) y += c[j] * xp;
            q.y = y;
        }
        const auto fit = fit_polynomial(pts, degree);
        recover = std::max(recover, (fit.coeffs - c).cwiseAbs().maxCoeff());
    }

    constexpr int kResamples = 10000;
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> g(0.0, 1.0);
    const auto reference = fit_polynomial(base, 3);
    Eigen::Vector4d sum = Eigen::Vector4d::Zero();
    Eigen::Matrix4d outer = Eigen::Matrix4d::Zero();
    std::vector<double> grid;
    for (double x = 1; x <= 13; x += 0.5) grid.push_back(x);
    std::vector<int> covered(grid.size(), 0);
    for (int k = 0; k < kResamples; ++k) {
        auto pts = base;
        for (auto& q : pts) q.y += q.sigma_y * g(rng);
        const auto fit = fit_polynomial(pts, 3);
        sum += fit.coeffs;
        outer += fit.coeffs * fit.coeffs.transpose();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto c = predict_with_ci(fit, grid[i]);
            if (c.ci_low <= f(grid[i]) && f(grid[i]) <= c.ci_high) ++covered[i];
        }
    }
    const Eigen::Vector4d m = sum / kResamples;
    const Eigen::Matrix4d emp = (outer - kResamples * m * m.transpose()) / (kResamples - 1);
    double cov_err = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const auto& v = reference.covariance;
            cov_err = std::max(cov_err, std::abs(emp(i, j) - v(i, j)) / std::sqrt(v(i, i) * v(j, j)));
        }
    double cov_lo = 1, cov_hi = 0;
    for (int c : covered) {
        cov_lo = std::min(cov_lo, double(c) / kResamples);
        cov_hi = std::max(cov_hi, double(c) / kResamples);
    }
    const bool ok = recover <= 1e-10 && cov_err <= 0.05 && cov_lo >= 0.93 && cov_hi <= 0.97;
    return {ok, fmt::format("noiseless max |dc| {:.1e}; covariance max scaled dev {:.3f} over {} resamples; "
                            "band coverage {:.4f}-{:.4f} on {} x values",
                            recover, cov_err, kResamples, cov_lo, cov_hi, grid.size())};
}

// ---- 5

Outcome expectation_checks() {
    const auto fha = load_fit("reference_fha.json");
    bool exact = true;
    for (int x0 = 0; x0 <= 22; ++x0) exact = exact && expected_fha(WoclDistribution::delta("D", x0), fha).value == fha(x0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_dist = [&](std::size_t n) {
        std::vector<double> c(n);
        for (auto& v : c) v = std::floor(u(rng) * 20);
        c[0] += 1;
        return WoclDistribution::from_counts("R", c);
    };
    double lin = 0;
    for (int k = 0; k < 100; ++k) {
        const auto a = random_dist(23), b = random_dist(23);
        const double t = u(rng);
        WoclDistribution mix;
        for (std::size_t i = 0; i < 23; ++i) {
            mix.weights.push_back(t * a.weights[i] + (1 - t) * b.weights[i]);
            mix.counts.push_back(1.0);
        }
        const double want = t * expected_fha(a, fha).value + (1 - t) * expected_fha(b, fha).value;
        lin = std::max(lin, rel_err(expected_fha(mix, fha).value, want));
    }
    const double two = expected_fha(WoclDistribution::from_counts("T", {1, 0, 1}), fha).value;
    const bool ok = exact && lin <= 1e-12 && std::abs(two - 0.944) <= 1e-12;
    return {ok, fmt::format("delta exact at x0 = 0..22: {}; linearity max rel err {:.1e}; two-point = {:.12f}",
                            exact ? "yes" : "no", lin, two)};
}

// ---- 6

double mw_brute(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> all(a);
    all.insert(all.end(), b.begin(), b.end());
    const std::size_t n = all.size(), na = a.size();
    auto u_of = [&](unsigned mask) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if ((mask >> i & 1u) && !(mask >> j & 1u)) s += all[i] > all[j] ? 1.0 : all[i] == all[j] ? 0.5 : 0.0;
        return s;
    };
    const double centre = double(na * b.size()) / 2, obs = std::abs(u_of((1u << na) - 1) - centre);
    double hit = 0, tot = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
        ++tot;
        if (std::abs(u_of(mask) - centre) >= obs) ++hit;
    }
    return hit / tot;
}

double wilcoxon_brute(std::vector<double> d) {
    std::erase(d, 0.0);
    const std::size_t n = d.size();
    std::vector<double> rank(n);
    double total = 0, obs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double less = 0, eq = 0;
        for (std::size_t j = 0; j < n; ++j) {
            less += std::abs(d[j]) < std::abs(d[i]);
            eq += std::abs(d[j]) == std::abs(d[i]);
        }
        rank[i] = less + (eq + 1) / 2;
        total += rank[i];
        if (d[i] > 0) obs += rank[i];
    }
    double hit = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) w += rank[i];
        if (std::abs(w - total / 2) >= std::abs(obs - total / 2)) ++hit;
    }
    return hit / double(1u << n);
}

// Largest |approx - exact| over every attainable untied statistic.
double wilcoxon_worst_gap(std::size_t n, const RankTestOptions& approx) {
    double worst = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<double> d;
        for (std::size_t i = 0; i < n; ++i) d.push_back((mask >> i & 1u) ? double(i + 1) : -double(i + 1));
        worst = std::max(worst, std::abs(wilcoxon_signed_rank(d).p_value - wilcoxon_signed_rank(d, approx).p_value));
    }
    return worst;
}

double mw_worst_gap(std::size_t na, std::size_t nb, const RankTestOptions& approx) {
    double worst = 0;
    const std::size_t n = na + nb;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i & 1u) ? a : b).push_back(double(i));
        worst = std::max(worst, std::abs(mann_whitney_u(a, b).p_value - mann_whitney_u(a, b, approx).p_value));
    }
    return worst;
}

Outcome rank_oracles() {
    std::mt19937_64 rng(612);
    std::normal_distribution<double> g(0.0, 1.0);
    auto sample = [&](std::size_t n, double shift, bool ties) {
        std::vector<double> v(n);
        for (auto& x : v) x = ties ? std::round(2 * (g(rng) + shift)) / 2 : g(rng) + shift;
        return v;
    };
    RankTestOptions approx;
    approx.exact_cutoff = 0;

    double exact_err = 0, approx_err = 0;
    int cases = 0, cutoff_cases = 0;
    for (int k = 0; k < 300; ++k) {
        const bool ties = k % 3 == 0;
        const double shift = 0.25 * (k % 6);
        // Mann-Whitney: combined n in 2..12.
        const std::size_t na = 1 + k % 6, nb = 1 + (k / 6) % 6;
        const auto a = sample(na, 0.0, ties), b = sample(nb, shift, ties);
        const auto r = mann_whitney_u(a, b);
        if (!r.degenerate) {
            exact_err = std::max(exact_err, std::abs(r.p_value - mw_brute(a, b)));
            ++cases;
            if (na + nb == 12) {
                approx_err = std::max(approx_err, std::abs(mann_whitney_u(a, b, approx).p_value - r.p_value));
                ++cutoff_cases;
            }
        }
        // Wilcoxon: n in 1..12.
        const auto d = sample(1 + k % 12, shift, ties);
        const auto w = wilcoxon_signed_rank(d);
        if (!w.degenerate) {
            exact_err = std::max(exact_err, std::abs(w.p_value - wilcoxon_brute(d)));
            ++cases;
            if (w.n2 == 12) {
                approx_err = std::max(approx_err, std::abs(wilcoxon_signed_rank(d, approx).p_value - w.p_value));
                ++cutoff_cases;
            }
        }
    }
    const double w_all = wilcoxon_worst_gap(12, approx);
    const double mw_all = mw_worst_gap(6, 6, approx);
    const bool ok = exact_err <= 1e-12 && approx_err <= 0.01;
    return {ok, fmt::format("{} fixtures, exact max err {:.1e}; approximation at n = 12 on {} fixtures max err {:.4f} "
                            "(all attainable statistics: Wilcoxon {:.4f}, Mann-Whitney 6+6 {:.4f})",
                            cases, exact_err, cutoff_cases, approx_err, w_all, mw_all)};
}

// ---- 7

RunConfig synth_run(std::size_t n_crew, std::uint64_t seed, std::vector<std::string> extra = {}) {
    std::vector<std::string> ov{"epochs.set=custom", "epochs.SYN=2019-01-01,30",
                                fmt::format("synth.n_crew={}", n_crew), fmt::format("synth.seed={}", seed)};
    ov.insert(ov.end(), extra.begin(), extra.end());
    return parse_config("", ov);
}

Outcome round_trip() {
    const auto config = synth_run(500, 7);
    const auto synth = generate(config.synth);
    const auto result = analyze(synth.roster_csv(), config, {false, true});
    std::map<std::string, const KpiRecord*> by_id;
    for (const auto& k : result.kpis) by_id[k.crew_id] = &k;
    std::size_t matched = 0;
    for (const auto& p : synth.planted) {
        const auto it = by_id.find(p.crew_id);
        if (it == by_id.end()) continue;
        const auto& m = it->second->productivity;
        if (m.n_ns == p.n_ns && m.n_wocl == p.n_wocl && m.n_crew == p.n_crew) ++matched;
    }

    std::mt19937_64 rng(77);
    int additive = 0, monotone = 0;
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const auto& series = result.series[rng() % result.series.size()];
        // Random disjoint windows over the epoch, split at random into two sets.
        std::vector<Interval> all, left, right;
        Minute t = series.origin + static_cast<Minute>(rng() % 600);
        const Minute end = series.origin + static_cast<Minute>(series.ticks.size());
        while (t < end) {
            const Minute len = 1 + static_cast<Minute>(rng() % 120);
            const Interval w{t, std::min(end, t + len)};
            // The first two windows seed both sets.
            (all.size() == 0 || (all.size() > 1 && rng() % 2) ? left : right).push_back(w);
            all.push_back(w);
            t = w.end + 1 + static_cast<Minute>(rng() % 900);
        }
        const double whole = fatigue_hazard_area(series, all);
        const double parts = fatigue_hazard_area(series, left) + fatigue_hazard_area(series, right);
        const double err = std::abs(whole - parts) / std::max(1.0, whole);
        worst = std::max(worst, err);
        if (err <= 1e-9) ++additive;
        const auto e_all = min_effectiveness_critical(series, all);
        const auto e_left = min_effectiveness_critical(series, left);
        if (e_all && e_left && *e_all <= *e_left) ++monotone;
    }
    const bool ok = result.kpis.size() == 500 && matched == 500 && additive == 100 && monotone == 100;
    return {ok, fmt::format("{} rosters analysed, {}/500 planted counts recovered; FHA additive {}/100 (max rel err "
                            "{:.1e}), EM_C monotone {}/100",
                            result.kpis.size(), matched, additive, worst, monotone)};
}

// ---- 8

Outcome tailored_parametrization() {
    const auto base_cfg = synth_run(100, 2024);
    const auto rosters = generate(base_cfg.synth).roster_csv();
    const auto base = analyze(rosters, base_cfg).kpis;
    std::string detail;
    bool ok = base.size() == 100;
    for (const auto& [label, setting] :
         std::vector<std::pair<std::string, std::string>>{{"auto_nap off", "profile.auto_nap=false"},
                                                          {"commute 120", "profile.commute_minutes=120"}}) {
        const auto alt = analyze(rosters, synth_run(100, 2024, {setting})).kpis;
        const auto cmp = compare_kpis(base, alt, true);
        auto row = [&](const std::string& k) {
            return *std::find_if(cmp.rows.begin(), cmp.rows.end(), [&](const auto& r) { return r.kpi == k; });
        };
        const auto fha = row("FHA_C"), emc = row("EM_C");
        const bool good = fha.n_a == 100 && emc.n_a == 100 && fha.mean_b > fha.mean_a && emc.mean_b < emc.mean_a &&
                          fha.test.p_value < 0.01 && emc.test.p_value < 0.01;
        ok = ok && good;
        detail += fmt::format("{}{}: FHA_C {:.2f} -> {:.2f} (p {:.1e}), EM_C {:.2f} -> {:.2f} (p {:.1e})",
                              detail.empty() ? "" : "; ", label, fha.mean_a, fha.mean_b, fha.test.p_value, emc.mean_a,
                              emc.mean_b, emc.test.p_value);
    }
    return {ok, fmt::format("n = 100; {}", detail)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "reservoir conversion identities", 1, reservoir_identities},
        {2, "engine depletion and periodic steady state", 5, engine_consistency},
        {3, "reference fit checks", 0, reference_fit_checks},
        {4, "weighted fit oracle", 120, fitter_oracle},
        {5, "distribution-weighted hazard area", 0, expectation_checks},
        {6, "rank-test enumeration oracles", 30, rank_oracles},
        {7, "synthetic end-to-end round trip", 120, round_trip},
        {8, "tailored parametrization direction", 0, tailored_parametrization},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_s == 0 || secs < c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        const std::string limit = c.limit_s > 0 ? fmt::format(" (limit {:g} s)", c.limit_s) : "";
        std::cout << fmt::format("{} {} {}: {} [{:.2f} s{}]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs,
                                 limit)
                  << std::flush;
    }
    std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
