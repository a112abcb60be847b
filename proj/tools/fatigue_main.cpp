// fatigue: batch front-end for roster fatigue analysis.
//
//   fatigue analyze ROSTERS.csv [--config F] [--out DIR]
//   fatigue fit KPI.csv --model NAME [--out DIR]
//   fatigue compare A.csv B.csv [--paired] [--out DIR]
//   fatigue risk INPUT --mode nns|clock|expected_fha [--fit F] [--out DIR]
//   fatigue synth [--seed N] [--out DIR]
//
// Exit codes: 0 success, 1 configuration error, 2 input error.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fatigue/config.hpp"
#include "fatigue/csv.hpp"
#include "fatigue/pipeline.hpp"

namespace fs = std::filesystem;
using namespace fatigue;

namespace {

constexpr int kConfigError = 1;
constexpr int kInputError = 2;

struct Common {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = ".";
};

void write(const Common& c, const std::string& name, std::string_view content) {
    fs::create_directories(c.out);
    csv::write_file((fs::path(c.out) / name).string(), content);
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<KpiRecord> read_kpis(const std::string& path) {
    try {
        return parse_kpi_csv(csv::read_file(path));
    } catch (const std::exception& ex) {
        throw InputError(path + ": " + ex.what());
    }
}

FitResult read_fit(const std::string& path, double* x_min = nullptr, double* x_max = nullptr) {
    try {
        const auto j = nlohmann::json::parse(csv::read_file(path));
        if (x_min && j.contains("x_min")) *x_min = j.at("x_min").get<double>();
        if (x_max && j.contains("x_max")) *x_max = j.at("x_max").get<double>();
        return fit_from_json(j);
    } catch (const std::exception& ex) {
        throw InputError(path + ": " + ex.what());
    }
}

int run_analyze(const Common& c, const std::string& rosters, bool timelines, bool series) {
    const auto config = load_config(c.config, c.overrides);
    std::string text;
    try {
        text = csv::read_file(rosters);
    } catch (const std::exception& ex) {
        throw InputError(ex.what());
    }
    AnalyzeResult result;
    try {
        result = analyze(text, config, {timelines, series});
    } catch (const SchemaError& ex) {
        throw InputError(rosters + ": " + ex.what());
    }
    write(c, "kpi.csv", result.kpi_csv());
    write(c, "samples.csv", result.samples_csv());
    write(c, "manifest.json", dump(result.manifest()));
    write(c, "diagnostics.jsonl", diagnostics_to_jsonl(result.diagnostics));
    write(c, "config.ini", canonical_ini(config));
    if (timelines) write(c, "timeline.csv", timeline_to_csv(result.timelines));
    if (series) {
        fs::create_directories(fs::path(c.out) / "series");
        for (std::size_t i = 0; i < result.kpis.size(); ++i)
            write(c, fmt::format("series/{}_{}.csv", result.kpis[i].crew_id, result.kpis[i].epoch),
                  series_to_csv(result.series[i]));
    }
    fmt::print("{} rosters: {} accepted, {} rejected\n", result.outcomes.size(), result.accepted(), result.rejected());
    return 0;
}

int run_fit(const Common& c, const std::string& kpi_path, const std::string& model_name, const std::string& load) {
    const auto config = load_config(c.config, c.overrides);
    if (!load.empty()) {
        double lo = 0, hi = 13;
        const auto fit = read_fit(load, &lo, &hi);
        write(c, "curve.csv", curve_csv(fit, std::floor(lo), std::ceil(hi)));
        return 0;
    }
    FitModel model;
    try {
        model = fit_model(model_name);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    const auto records = read_kpis(kpi_path);
    BinnedFit fit;
    try {
        fit = fit_kpis(records, model, config.pool_above);
    } catch (const FitError& ex) {
        throw InputError(ex.what());
    }
    write(c, "fit.json", dump(fit.to_json()));
    write(c, "curve.csv", fit.curve_csv());
    write(c, "bins.csv", fit.bins_csv());
    fmt::print("{}: chi2 = {:.3f}, dof = {}, p = {:.3f}\n", model.name, fit.fit.chi2, fit.fit.dof, fit.fit.p_value);
    return 0;
}

int run_compare(const Common& c, const std::string& a, const std::string& b, bool paired) {
    load_config(c.config, c.overrides);
    const auto result = compare_kpis(read_kpis(a), read_kpis(b), paired);
    write(c, "compare.csv", result.csv());
    write(c, "compare.json", dump(result.to_json()));
    return 0;
}

int run_risk(const Common& c, const std::string& input, const std::string& mode, const std::string& fit_path,
             const std::string& rosters, double x_from, double x_to) {
    const auto config = load_config(c.config, c.overrides);
    try {
        if (mode == "nns") {
            const auto report = risk_vs_nightshifts(read_fit(input), config.risk, x_from, x_to);
            write(c, "rfr_nns.csv", report.csv());
            write(c, "rfr_nns.json", dump(report.to_json()));
            fmt::print("RFR({})/RFR({}) - 1 = {:.4f} +/- {:.4f}\n", x_to, x_from, report.ratio.value - 1.0,
                       2.0 * report.ratio.sigma);
        } else if (mode == "clock") {
            std::vector<Minute> events;
            if (!rosters.empty()) {
                const auto parsed = parse_roster_csv(csv::read_file(rosters));
                for (const auto& e : parsed.events) {
                    if (e.kind != EventKind::Crewing) continue;
                    events.push_back(e.start);
                    events.push_back(e.end);
                }
            }
            const auto report = risk_by_clock(parse_samples_csv(csv::read_file(input)), config.risk, events);
            write(c, "rfr_clock.csv", report.csv());
            write(c, "rfr_clock_hourly.csv", report.proportions_csv());
        } else if (mode == "expected_fha") {
            if (fit_path.empty()) throw ConfigError("--mode expected_fha needs --fit FHA_FIT.json");
            const auto rows = expected_fha_by_epoch(read_kpis(input), read_fit(fit_path));
            write(c, "expected_fha.csv", expected_fha_csv(rows));
        } else {
            throw ConfigError("unknown risk mode '" + mode + "'");
        }
    } catch (const std::domain_error& ex) {
        throw InputError(fmt::format("risk {}: {}", mode, ex.what()));
    } catch (const std::invalid_argument& ex) {
        throw InputError(fmt::format("risk {}: {}", mode, ex.what()));
    }
    return 0;
}

int run_synth(const Common& c, std::optional<std::uint64_t> seed) {
    auto config = load_config(c.config, c.overrides);
    if (seed) config.synth.seed = *seed;
    const auto out = generate(config.synth);
    write(c, "rosters.csv", out.roster_csv());
    write(c, "planted.csv", out.planted_csv());
    fmt::print("{} rosters written\n", out.rosters.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roster fatigue analysis"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--config", common.config, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", common.overrides, "section.key=value override (repeatable)");
    app.add_option("--out", common.out, "output directory");
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads for analyze");

    auto* analyze_cmd = app.add_subcommand("analyze", "sleep estimation, simulation and KPIs per roster");
    std::string rosters;
    bool timelines = false, series = false;
    analyze_cmd->add_option("rosters", rosters, "roster CSV")->required();
    analyze_cmd->add_flag("--timeline", timelines, "also write timeline.csv");
    analyze_cmd->add_flag("--series", series, "also write per-roster minute series");

    auto* fit_cmd = app.add_subcommand("fit", "bin KPIs and fit a polynomial");
    std::string kpi_path, model, load;
    fit_cmd->add_option("kpi", kpi_path, "KPI CSV");
    fit_cmd->add_option("--model", model, "emc_vs_nns | tawake_vs_nns | fha_vs_nwocl");
    fit_cmd->add_option("--load", load, "write curve.csv for an existing fit.json instead of fitting");

    auto* compare_cmd = app.add_subcommand("compare", "compare two KPI tables");
    std::string table_a, table_b;
    bool paired = false;
    compare_cmd->add_option("a", table_a, "first KPI CSV")->required();
    compare_cmd->add_option("b", table_b, "second KPI CSV")->required();
    compare_cmd->add_flag("--paired", paired, "match rows on crew_id and epoch");

    auto* risk_cmd = app.add_subcommand("risk", "relative fatigue risk curves");
    std::string risk_input, mode = "nns", fit_path, event_rosters;
    double x_from = 1, x_to = 13;
    risk_cmd->add_option("input", risk_input, "fit.json (nns), samples.csv (clock) or kpi.csv (expected_fha)")
        ->required();
    risk_cmd->add_option("--mode", mode, "nns | clock | expected_fha");
    risk_cmd->add_option("--fit", fit_path, "FHA fit.json for expected_fha");
    risk_cmd->add_option("--rosters", event_rosters, "roster CSV for event proportions (clock)");
    risk_cmd->add_option("--from", x_from, "lower N_NS (nns)");
    risk_cmd->add_option("--to", x_to, "upper N_NS (nns)");

    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic rosters");
    std::optional<std::uint64_t> seed;
    synth_cmd->add_option("--seed", seed, "generator seed");

    CLI11_PARSE(app, argc, argv);
    if (jobs > 0) common.overrides.push_back(fmt::format("run.jobs={}", jobs));

    try {
        if (*analyze_cmd) return run_analyze(common, rosters, timelines, series);
        if (*fit_cmd) {
            if (load.empty() && (kpi_path.empty() || model.empty()))
                throw ConfigError("fit needs a KPI CSV and --model, or --load fit.json");
            return run_fit(common, kpi_path, model, load);
        }
        if (*compare_cmd) return run_compare(common, table_a, table_b, paired);
        if (*risk_cmd) return run_risk(common, risk_input, mode, fit_path, event_rosters, x_from, x_to);
        if (*synth_cmd) return run_synth(common, seed);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kConfigError;
    } catch (const SynthError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kConfigError;
    } catch (const InputError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kInputError;
    } catch (const std::exception& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kInputError;
    }
    return 0;
}
