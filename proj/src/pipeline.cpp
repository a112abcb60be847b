#include "fatigue/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "fatigue/csv.hpp"

namespace fatigue {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : std::string{}; }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string{}; }

double to_double(const std::string& s, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InputError(fmt::format("bad {} '{}'", what, s));
    return v;
}

nlohmann::json json_num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

template <typename T>
nlohmann::json json_opt(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// Runs f(i) for i in [0, n) on up to `jobs` threads; callers write results
// into pre-sized slots so the output order never depends on scheduling.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
}

double poly_derivative(const FitResult& fit, double x) {
    double d = 0, p = 1;
    for (int j = 1; j <= fit.degree; ++j) {
        d += j * fit.coeffs(j) * p;
        p *= x;
    }
    return d;
}

}  // namespace

// ---- analyze

std::size_t AnalyzeResult::accepted() const {
    return static_cast<std::size_t>(
        std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.status == "accepted"; }));
}

std::size_t AnalyzeResult::rejected() const { return outcomes.size() - accepted(); }

std::string AnalyzeResult::kpi_csv() const {
    std::string s = kpi_csv_header();
    for (const auto& r : kpis) s += kpi_csv_row(r);
    return s;
}

std::string AnalyzeResult::samples_csv() const {
    std::string s = "crew_id,epoch,t,E\n";
    for (const auto& c : samples)
        s += csv::join({c.crew_id, c.epoch, format_timestamp(c.sample.t), num(c.sample.E)}) + "\n";
    return s;
}

nlohmann::ordered_json AnalyzeResult::manifest() const {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash;
    j["metadata"] = metadata;
    j["parsed_rosters"] = outcomes.size();
    j["accepted"] = accepted();
    j["rejected"] = rejected();
    std::map<std::string, std::size_t> reasons;
    nlohmann::ordered_json rejects = nlohmann::ordered_json::array();
    for (const auto& o : outcomes) {
        if (o.status == "accepted") continue;
        ++reasons[o.status];
        rejects.push_back({{"crew_id", o.crew_id}, {"epoch", o.epoch}, {"reason", o.status}});
    }
    j["reject_reasons"] = reasons;
    j["flagged_no_crewing"] = std::count_if(kpis.begin(), kpis.end(), [](const auto& k) { return k.flagged(); });
    j["parse_diagnostics"] = diagnostics.size();
    j["rejects"] = rejects;
    return j;
}

KpiRecord analyze_roster(const ValidatedRoster& roster, const RunConfig& config, ScheduleTimeline* timeline_out,
                         EffectivenessSeries* series_out, std::vector<Sample>* crewing_samples) {
    auto timeline = estimate_sleep(roster, config.profile, config.duty);
    auto series = simulate(timeline, config.engine);
    auto kpi = compute_kpis(roster, series, config.duty, config.kpi);
    if (crewing_samples) {
        crewing_samples->clear();
        for (const auto& s : sample_series(series, config.engine.sample)) {
            // The sample at instant t reports the minute [t - 1, t).
            const bool in_flight = std::any_of(timeline.flights.begin(), timeline.flights.end(),
                                               [&](const Interval& f) { return f.contains(s.t - 1); });
            if (in_flight) crewing_samples->push_back(s);
        }
    }
    if (timeline_out) *timeline_out = std::move(timeline);
    if (series_out) *series_out = std::move(series);
    return kpi;
}

AnalyzeResult analyze(std::string_view roster_csv, const RunConfig& config, const AnalyzeOptions& options) {
    AnalyzeResult result;
    result.config_hash = config_hash(config);
    result.metadata = {
        {"fha_integrand", fmt::format("sum over critical-phase minutes of max(0, (T - E) / T), T = {}",
                                      config.kpi.fha_threshold)},
        {"critical_phase", "first and last 30 min of each flight; flights under 60 min count once"},
        {"cns_mode", config.kpi.cns_mode == ConsecutiveNightMode::AdjacentPairs ? "pairs" : "runs"},
        {"wocl", fmt::format("[{}, {})", format_clock(config.kpi.wocl_start), format_clock(config.kpi.wocl_end))},
        {"sample_minutes", config.engine.sample},
    };

    auto parsed = parse_roster_csv(roster_csv);
    result.diagnostics = std::move(parsed.diagnostics);
    std::set<std::string> broken;
    for (const auto& d : result.diagnostics)
        if (!d.crew_id.empty()) broken.insert(d.crew_id);

    const auto crews = group_by_crew(parsed.events);

    struct Task {
        const std::vector<RosterEvent>* events;
        const Epoch* epoch;
        std::string crew_id;
    };
    std::vector<Task> tasks;
    for (const auto& id : broken) {
        // Crews whose every row failed to parse still count as one roster.
        if (!crews.count(id)) result.outcomes.push_back({id, "", std::string(to_string(RejectReason::ParseError))});
    }
    for (const auto& [id, events] : crews) {
        for (const auto& epoch : config.epochs) {
            const bool touches = std::any_of(events.begin(), events.end(),
                                             [&](const RosterEvent& e) { return e.span().overlaps(epoch.span()); });
            if (touches) tasks.push_back({&events, &epoch, id});
        }
    }

    struct Slot {
        std::string status;
        std::optional<KpiRecord> kpi;
        std::vector<Sample> samples;
        ScheduleTimeline timeline;
        EffectivenessSeries series;
    };
    std::vector<Slot> slots(tasks.size());
    parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
        const auto& task = tasks[i];
        auto& slot = slots[i];
        if (broken.count(task.crew_id)) {
            slot.status = to_string(RejectReason::ParseError);
            return;
        }
        const auto roster = apply_filters(*task.events, *task.epoch, config.filter);
        if (roster.rejected) {
            slot.status = to_string(roster.reject_reason);
            return;
        }
        try {
            slot.kpi = analyze_roster(roster, config, options.keep_timelines ? &slot.timeline : nullptr,
                                      options.keep_series ? &slot.series : nullptr, &slot.samples);
            slot.status = "accepted";
        } catch (const std::exception&) {
            slot.status = "SimulationError";
        }
    });

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& slot = slots[i];
        result.outcomes.push_back({tasks[i].crew_id, tasks[i].epoch->label, slot.status});
        if (!slot.kpi) continue;
        result.kpis.push_back(std::move(*slot.kpi));
        for (const auto& s : slot.samples) result.samples.push_back({tasks[i].crew_id, tasks[i].epoch->label, s});
        if (options.keep_timelines) result.timelines.push_back(std::move(slot.timeline));
        if (options.keep_series) result.series.push_back(std::move(slot.series));
    }
    std::stable_sort(result.outcomes.begin(), result.outcomes.end(),
                     [](const auto& a, const auto& b) { return a.crew_id < b.crew_id; });
    return result;
}

std::vector<CrewSample> parse_samples_csv(std::string_view text) {
    const auto table = csv::parse_table(text);
    const int ci = table.column("crew_id"), ei = table.column("epoch"), ti = table.column("t"),
              vi = table.column("E");
    if (ci < 0 || ei < 0 || ti < 0 || vi < 0) throw InputError("samples table needs crew_id,epoch,t,E");
    std::vector<CrewSample> out;
    for (const auto& row : table.rows) {
        const auto t = parse_timestamp(row[static_cast<std::size_t>(ti)]);
        if (!t) throw InputError("bad timestamp '" + row[static_cast<std::size_t>(ti)] + "' in samples");
        out.push_back({row[static_cast<std::size_t>(ci)], row[static_cast<std::size_t>(ei)],
                       {*t, to_double(row[static_cast<std::size_t>(vi)], "effectiveness")}});
    }
    return out;
}

// ---- fit

const std::vector<FitModel>& fit_models() {
    static const std::vector<FitModel> models = {
        {"emc_vs_nns", "N_NS", "EM_C", 3},
        {"tawake_vs_nns", "N_NS", "t_awake_max", 3},
        {"fha_vs_nwocl", "N_wocl", "FHA_C", 2},
    };
    return models;
}

FitModel fit_model(std::string_view name) {
    const auto colon = name.find(':');
    const auto base = name.substr(0, colon);
    for (const auto& m : fit_models()) {
        if (m.name != base) continue;
        if (colon != std::string_view::npos) {
            const auto form = name.substr(colon + 1);
            const std::string_view expected = m.degree == 3 ? "cubic" : "quadratic";
            if (form != expected) throw std::invalid_argument(fmt::format("model {} is {}", m.name, expected));
        }
        return m;
    }
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

BinnedFit fit_kpis(const std::vector<KpiRecord>& records, const FitModel& model, std::optional<int> pool_above) {
    BinnedFit out;
    out.model = model;

    std::map<long, std::vector<double>> by_x;
    std::vector<std::pair<double, double>> pooled_rows;
    for (const auto& r : records) {
        const auto x = kpi_value(r, model.x_column);
        const auto y = kpi_value(r, model.y_column);
        if (!x || !y) continue;
        const long xi = std::lround(*x);
        if (pool_above && xi > *pool_above)
            pooled_rows.emplace_back(*x, *y);
        else
            by_x[xi].push_back(*y);
    }

    for (const auto& [x, ys] : by_x) {
        if (ys.size() < 2) {
            out.dropped.push_back(fmt::format("x={}: {} row", x, ys.size()));
            continue;
        }
        const double se = stdev(ys) / std::sqrt(static_cast<double>(ys.size()));
        if (!(se > 0)) {
            out.dropped.push_back(fmt::format("x={}: zero spread", x));
            continue;
        }
        out.bins.push_back({static_cast<double>(x), mean(ys), se, se, ys.size(), false});
    }

    if (!pooled_rows.empty()) {
        std::vector<double> xs, ys;
        for (const auto& [x, y] : pooled_rows) {
            xs.push_back(x);
            ys.push_back(y);
        }
        if (ys.size() < 2) {
            out.dropped.push_back(fmt::format("pooled x>{}: 1 row", *pool_above));
        } else {
            FitBin b{mean(xs), mean(ys), stdev(ys) / std::sqrt(static_cast<double>(ys.size())), 0, ys.size(), true};
            const double se_x = stdev(xs) / std::sqrt(static_cast<double>(xs.size()));
            double slope = 0;
            if (se_x > 0) {
                std::vector<WeightedPoint> pre;
                for (const auto& bin : out.bins) pre.push_back({bin.x, bin.y, bin.sigma_y});
                if (pre.size() < 2) throw FitError("insufficient bins below the pooling threshold");
                const int deg = std::min<int>(model.degree, static_cast<int>(pre.size()) - 1);
                slope = poly_derivative(fit_polynomial(pre, deg), b.x);
            }
            b.sigma_y = std::hypot(b.se, slope * se_x);
            if (b.sigma_y > 0)
                out.bins.push_back(b);
            else
                out.dropped.push_back(fmt::format("pooled x>{}: zero spread", *pool_above));
        }
    }

    const auto needed = static_cast<std::size_t>(model.degree + 1);
    if (out.bins.size() < needed)
        throw FitError(fmt::format("insufficient bins: {} usable, a degree {} fit needs {}", out.bins.size(),
                                   model.degree, needed));
    std::vector<WeightedPoint> pts;
    for (const auto& b : out.bins) pts.push_back({b.x, b.y, b.sigma_y});
    out.fit = fit_polynomial(pts, model.degree);
    return out;
}

nlohmann::ordered_json BinnedFit::to_json() const {
    auto j = fatigue::to_json(fit);
    j["model"] = model.name;
    j["x"] = model.x_column;
    j["y"] = model.y_column;
    double lo = bins.front().x, hi = bins.front().x;
    for (const auto& b : bins) {
        lo = std::min(lo, b.x);
        hi = std::max(hi, b.x);
    }
    j["x_min"] = lo;
    j["x_max"] = hi;
    j["dropped_bins"] = dropped;
    return j;
}

std::string BinnedFit::bins_csv() const {
    std::string s = "x,y,se,sigma_y,n,pooled\n";
    for (const auto& b : bins)
        s += fmt::format("{},{},{},{},{},{}\n", num(b.x), num(b.y), num(b.se), num(b.sigma_y), b.n, b.pooled ? 1 : 0);
    return s;
}

std::string curve_csv(const FitResult& fit, double x_min, double x_max, double step) {
    if (!(step > 0) || x_max < x_min) throw std::invalid_argument("bad curve grid");
    std::string s = "x,y,sigma,ci_low,ci_high\n";
    const auto n = static_cast<long>(std::floor((x_max - x_min) / step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const auto c = predict_with_ci(fit, x_min + static_cast<double>(k) * step);
        s += csv::join({num(c.x), num(c.y), num(c.sigma), num(c.ci_low), num(c.ci_high)}) + "\n";
    }
    return s;
}

std::string BinnedFit::curve_csv() const {
    double lo = bins.front().x, hi = bins.front().x;
    for (const auto& b : bins) {
        lo = std::min(lo, b.x);
        hi = std::max(hi, b.x);
    }
    return fatigue::curve_csv(fit, std::floor(lo), std::ceil(hi));
}

// ---- compare

CompareResult compare_kpis(const std::vector<KpiRecord>& a, const std::vector<KpiRecord>& b, bool paired,
                           const RankTestOptions& options) {
    CompareResult out;
    out.paired = paired;

    std::map<std::pair<std::string, std::string>, const KpiRecord*> map_b;
    if (paired) {
        std::map<std::pair<std::string, std::string>, const KpiRecord*> map_a;
        for (const auto& r : a)
            if (!map_a.emplace(std::pair{r.crew_id, r.epoch}, &r).second)
                throw InputError("duplicate row " + r.crew_id + "/" + r.epoch + " in first table");
        for (const auto& r : b)
            if (!map_b.emplace(std::pair{r.crew_id, r.epoch}, &r).second)
                throw InputError("duplicate row " + r.crew_id + "/" + r.epoch + " in second table");
        for (const auto& [k, _] : map_a)
            if (!map_b.count(k)) throw InputError("paired mode: " + k.first + "/" + k.second + " missing from second table");
        for (const auto& [k, _] : map_b)
            if (!map_a.count(k)) throw InputError("paired mode: " + k.first + "/" + k.second + " missing from first table");
    }

    const auto& cols = kpi_columns();
    for (std::size_t c = 2; c < cols.size(); ++c) {
        CompareRow row;
        row.kpi = cols[c];
        std::vector<double> va, vb;
        if (paired) {
            for (const auto& r : a) {
                const auto x = kpi_value(r, row.kpi);
                const auto y = kpi_value(*map_b.at({r.crew_id, r.epoch}), row.kpi);
                if (x && y) {
                    va.push_back(*x);
                    vb.push_back(*y);
                }
            }
        } else {
            for (const auto& r : a)
                if (const auto x = kpi_value(r, row.kpi)) va.push_back(*x);
            for (const auto& r : b)
                if (const auto x = kpi_value(r, row.kpi)) vb.push_back(*x);
        }
        row.n_a = va.size();
        row.n_b = vb.size();
        row.mean_a = va.empty() ? kNaN : mean(va);
        row.mean_b = vb.empty() ? kNaN : mean(vb);
        row.sd_a = va.size() < 2 ? kNaN : stdev(va);
        row.sd_b = vb.size() < 2 ? kNaN : stdev(vb);
        row.ratio = (va.empty() || vb.empty() || row.mean_a == 0) ? kNaN : row.mean_b / row.mean_a;

        if (va.empty() || vb.empty()) {
            row.test_name = paired ? "wilcoxon" : "mann_whitney";
            row.test.p_value = kNaN;
            row.note = "no data";
            out.rows.push_back(std::move(row));
            continue;
        }
        if (paired) {
            row.test_name = "wilcoxon";
            std::vector<double> d;
            for (std::size_t i = 0; i < va.size(); ++i) d.push_back(vb[i] - va[i]);
            row.test = wilcoxon_signed_rank(std::span<const double>(d), options);
            if (row.test.degenerate) row.note = "all differences zero";
            try {
                row.rho = pearson_rho(va, vb);
            } catch (const std::domain_error&) {
                row.note += row.note.empty() ? "rho undefined" : "; rho undefined";
            }
            try {
                row.dz = cohens_dz(d);
            } catch (const std::domain_error&) {
                row.note += row.note.empty() ? "dz undefined" : "; dz undefined";
            }
        } else {
            row.test_name = "mann_whitney";
            row.test = mann_whitney_u(va, vb, options);
            if (row.test.degenerate) row.note = "all values identical";
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::string CompareResult::csv() const {
    std::string s = "kpi,n_a,n_b,mean_a,sd_a,mean_b,sd_b,ratio,rho,dz,test,statistic,p_value,method,degenerate,note\n";
    for (const auto& r : rows)
        s += csv::join({r.kpi, std::to_string(r.n_a), std::to_string(r.n_b), num(r.mean_a), num(r.sd_a),
                        num(r.mean_b), num(r.sd_b), num(r.ratio), num(r.rho), num(r.dz), r.test_name,
                        num(r.test.statistic), num(r.test.p_value), to_string(r.test.method),
                        r.test.degenerate ? "1" : "0", r.note}) +
             "\n";
    return s;
}

nlohmann::ordered_json CompareResult::to_json() const {
    nlohmann::ordered_json j;
    j["paired"] = paired;
    j["two_sided"] = true;
    j["continuity_correction"] = RankTestOptions{}.continuity;
    j["exact_cutoff"] = RankTestOptions{}.exact_cutoff;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["kpi"] = r.kpi;
        o["n_a"] = r.n_a;
        o["n_b"] = r.n_b;
        o["mean_a"] = json_num(r.mean_a);
        o["sd_a"] = json_num(r.sd_a);
        o["mean_b"] = json_num(r.mean_b);
        o["sd_b"] = json_num(r.sd_b);
        o["ratio"] = json_num(r.ratio);
        o["rho"] = json_opt(r.rho);
        o["dz"] = json_opt(r.dz);
        o["test"] = r.test_name;
        auto t = fatigue::to_json(r.test);
        t["p_value"] = json_num(r.test.p_value);
        o["report"] = t;
        o["note"] = r.note;
        arr.push_back(o);
    }
    j["rows"] = arr;
    return j;
}

// ---- risk

RiskNnsReport risk_vs_nightshifts(const FitResult& fit, const RiskParam& param, double x_min, double x_max,
                                  double step) {
    if (!(step > 0) || x_max <= x_min) throw std::invalid_argument("bad N_NS range");
    RiskNnsReport r;
    r.x_from = x_min;
    r.x_to = x_max;
    const auto n = static_cast<long>(std::floor((x_max - x_min) / step + 1e-9));
    for (long k = 0; k <= n; ++k) r.curve.push_back(rfr_vs_nightshifts(fit, param, x_min + static_cast<double>(k) * step));
    r.ratio = rfr_ratio(fit, x_min, x_max);
    return r;
}

std::string RiskNnsReport::csv() const {
    std::string s = "x,rfr,sigma,ci_low,ci_high\n";
    for (const auto& p : curve) s += csv::join({num(p.x), num(p.rfr), num(p.sigma), num(p.ci_low), num(p.ci_high)}) + "\n";
    return s;
}

nlohmann::ordered_json RiskNnsReport::to_json() const {
    nlohmann::ordered_json j;
    j["x_from"] = x_from;
    j["x_to"] = x_to;
    j["ratio"] = ratio.value;
    j["increase"] = ratio.value - 1.0;
    j["sigma"] = ratio.sigma;
    j["increase_ci"] = {ratio.value - 1.0 - 2.0 * ratio.sigma, ratio.value - 1.0 + 2.0 * ratio.sigma};
    return j;
}

RiskClockReport risk_by_clock(const std::vector<CrewSample>& samples, const RiskParam& param,
                              const std::vector<Minute>& event_times) {
    if (samples.empty()) throw InputError("no effectiveness samples");
    RiskClockReport r;
    std::vector<Sample> flat;
    flat.reserve(samples.size());
    for (const auto& s : samples) flat.push_back(s.sample);
    r.bins = effectiveness_by_clock(flat);
    r.curve = rfr_by_clock(r.bins, param);
    r.normalized = normalize_rfr(r.curve);
    std::vector<Minute> hours;
    for (Minute h = 0; h <= 24; ++h) hours.push_back(h * 60);
    r.hourly = aggregate_clock_curve(r.normalized, hours);
    if (!event_times.empty()) r.proportions = event_proportion_by_clock(event_times, hours);
    return r;
}

std::string RiskClockReport::csv() const {
    std::string s = "start,end,n,mean_E,se_E,rfr,sigma_b_term,sigma_se_term,ci_low,ci_high,rfr_norm,ci_low_norm,ci_high_norm\n";
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const auto& b = bins[i];
        const auto& c = curve[i];
        const auto& n = normalized[i];
        s += csv::join({format_clock(c.start), format_clock(c.end), std::to_string(b.n), num(b.mean), num(b.se),
                        num(c.rfr), num(c.sigma_b_term), num(c.sigma_se_term), num(c.ci_low), num(c.ci_high),
                        num(n.rfr), num(n.ci_low), num(n.ci_high)}) +
             "\n";
    }
    return s;
}

std::string RiskClockReport::proportions_csv() const {
    std::string s = "start,end,rfr_norm,ci_low_norm,ci_high_norm,events,percent\n";
    for (std::size_t i = 0; i < hourly.size(); ++i) {
        const auto& h = hourly[i];
        const std::string count = i < proportions.size() ? std::to_string(proportions[i].count) : "";
        const std::string pct = i < proportions.size() ? num(proportions[i].percent) : "";
        s += csv::join({format_clock(h.start), format_clock(h.end), num(h.rfr), num(h.ci_low), num(h.ci_high), count,
                        pct}) +
             "\n";
    }
    return s;
}

std::vector<EpochExpectation> expected_fha_by_epoch(const std::vector<KpiRecord>& records, const FitResult& fit) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> counts;
    for (const auto& r : records) {
        auto [it, inserted] = counts.try_emplace(r.epoch);
        if (inserted) order.push_back(r.epoch);
        const auto x = static_cast<std::size_t>(std::max(0, r.productivity.n_wocl));
        if (it->second.size() <= x) it->second.resize(x + 1, 0.0);
        it->second[x] += 1.0;
    }
    std::vector<EpochExpectation> out;
    for (const auto& e : order) {
        EpochExpectation row;
        row.epoch = e;
        for (double c : counts[e]) row.n += static_cast<std::size_t>(c);
        row.distribution = WoclDistribution::from_counts(e, counts[e]);
        row.expected = expected_fha(row.distribution, fit);
        out.push_back(std::move(row));
    }
    return out;
}

std::string expected_fha_csv(const std::vector<EpochExpectation>& rows) {
    std::string s =
        "epoch,n,expected_fha,sigma_fit_covariant,sigma_fit_independent,sigma_weights,sigma_total,ci_low,ci_high\n";
    for (const auto& r : rows) {
        const auto& e = r.expected;
        s += csv::join({r.epoch, std::to_string(r.n), num(e.value), num(e.sigma_fit_covariant),
                        num(e.sigma_fit_independent), num(e.sigma_weights), num(e.sigma_total_covariant),
                        num(e.ci_low()), num(e.ci_high())}) +
             "\n";
    }
    return s;
}

}  // namespace fatigue
