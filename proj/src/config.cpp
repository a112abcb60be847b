#include "fatigue/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "fatigue/csv.hpp"

namespace fatigue {

namespace pt = boost::property_tree;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Reads typed values out of one section and remembers which keys were used.
class Section {
public:
    Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
        if (const auto child = root.get_child_optional(name_)) tree_ = *child;
    }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return std::string(csv::trim(*v));
    }

    void read(const std::string& key, double& out) {
        if (const auto v = raw(key)) {
            double d = 0;
            auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), d);
            if (ec != std::errc{} || p != v->data() + v->size()) fail(key, *v, "a number");
            out = d;
        }
    }

    template <typename Int>
        requires std::is_integral_v<Int>
    void read(const std::string& key, Int& out) {
        if (const auto v = raw(key)) {
            Int d = 0;
            auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), d);
            if (ec != std::errc{} || p != v->data() + v->size()) fail(key, *v, "an integer");
            out = d;
        }
    }

    void read(const std::string& key, bool& out) {
        if (const auto v = raw(key)) {
            const auto s = lower(*v);
            if (s == "true" || s == "1" || s == "yes" || s == "on")
                out = true;
            else if (s == "false" || s == "0" || s == "no" || s == "off")
                out = false;
            else
                fail(key, *v, "a boolean");
        }
    }

    void read(const std::string& key, std::string& out) {
        if (const auto v = raw(key)) out = *v;
    }

    void read_clock(const std::string& key, Minute& out) {
        if (const auto v = raw(key)) {
            const auto c = parse_clock(*v);
            if (!c) fail(key, *v, "a clock time HH:MM");
            out = *c;
        }
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        for (const auto& [k, _] : tree_) out.push_back(k);
        return out;
    }

    void mark_used(const std::string& key) { used_.insert(key); }

    void check_unused() const {
        for (const auto& [k, _] : tree_)
            if (!used_.count(k)) throw ConfigError(fmt::format("unknown key [{}] {}", name_, k));
    }

    [[noreturn]] void fail(const std::string& key, const std::string& value, const char* what) const {
        throw ConfigError(fmt::format("[{}] {} = '{}' is not {}", name_, key, value, what));
    }

private:
    std::string name_;
    pt::ptree tree_;
    std::set<std::string> used_;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (const auto& item : csv::split_line(s)) {
        const auto t = csv::trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

Epoch parse_epoch_entry(const std::string& label, const std::string& value) {
    const auto parts = split_list(value);
    if (parts.size() != 2) throw ConfigError("[epochs] " + label + " must be 'YYYY-MM-DD,days'");
    const auto begin = parse_timestamp(parts[0] + "T00:00");
    int days = 0;
    auto [p, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), days);
    if (!begin || ec != std::errc{} || p != parts[1].data() + parts[1].size() || days < 1)
        throw ConfigError("[epochs] " + label + " must be 'YYYY-MM-DD,days'");
    return Epoch::make(label, *begin, days);
}

void check_epochs(std::vector<Epoch>& epochs) {
    if (epochs.empty()) throw ConfigError("no epochs configured");
    std::sort(epochs.begin(), epochs.end(), [](const Epoch& a, const Epoch& b) { return a.begin < b.begin; });
    std::set<std::string> labels;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        if (!labels.insert(epochs[i].label).second) throw ConfigError("duplicate epoch label " + epochs[i].label);
        if (i > 0 && epochs[i - 1].span().overlaps(epochs[i].span()))
            throw ConfigError(fmt::format("epochs {} and {} overlap", epochs[i - 1].label, epochs[i].label));
    }
}

RunConfig from_tree(const pt::ptree& root, const std::filesystem::path& base_dir) {
    static const std::set<std::string> known = {"epochs", "engine", "profile", "run", "synth"};
    for (const auto& [name, _] : root)
        if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");

    RunConfig c;

    Section ep(root, "epochs");
    ep.read("set", c.epoch_set);
    c.epoch_set = lower(c.epoch_set);
    if (c.epoch_set == "30d") {
        c.epochs = standard_epochs_30d();
    } else if (c.epoch_set == "15d") {
        c.epochs = standard_epochs_15d();
    } else if (c.epoch_set == "custom") {
        c.epochs.clear();
        for (const auto& k : ep.keys()) {
            if (k == "set") continue;
            ep.mark_used(k);
            c.epochs.push_back(parse_epoch_entry(k, *ep.raw(k)));
        }
    } else {
        throw ConfigError("[epochs] set must be 30d, 15d or custom");
    }
    ep.check_unused();
    check_epochs(c.epochs);

    auto& e = c.engine;
    Section en(root, "engine");
    en.read("reservoir_capacity", e.reservoir_capacity);
    en.read("wake_depletion", e.wake_depletion);
    en.read("sleep_recovery_rate", e.sleep_recovery_rate);
    en.read("circadian_peak", e.circadian_peak);
    en.read("circadian_second_peak", e.circadian_second_peak);
    en.read("harmonic_ratio", e.harmonic_ratio);
    en.read("circadian_amp_base", e.circadian_amp_base);
    en.read("circadian_amp_debt", e.circadian_amp_debt);
    en.read("inertia_max", e.inertia_max);
    en.read("inertia_tau", e.inertia_tau);
    en.read("inertia_window", e.inertia_window);
    en.read("tick", e.tick);
    en.read("sample", e.sample);
    en.check_unused();

    auto& p = c.profile;
    Section pr(root, "profile");
    pr.read("auto_nap", p.auto_nap);
    pr.read("advanced_bedtime", p.advanced_bedtime);
    pr.read("commute_minutes", p.commute_minutes);
    pr.read("preparation_minutes", p.preparation_minutes);
    pr.read_clock("normal_bedtime", p.normal_bedtime);
    pr.read("min_sleep_minutes", p.min_sleep_minutes);
    pr.read("max_workday_sleep_minutes", p.max_workday_sleep_minutes);
    pr.read("max_restday_sleep_minutes", p.max_restday_sleep_minutes);
    pr.read("max_recovery_nap_minutes", p.max_recovery_nap_minutes);
    pr.read_clock("awake_zone_start", p.awake_zone_start);
    pr.read_clock("awake_zone_end", p.awake_zone_end);
    pr.read("optimal_sleep_minutes", p.optimal_sleep_minutes);
    pr.read("recovery_lookback_minutes", p.recovery_lookback_minutes);
    pr.check_unused();

    Section run(root, "run");
    run.read("fha_threshold", c.kpi.fha_threshold);
    run.read_clock("wocl_start", c.kpi.wocl_start);
    run.read_clock("wocl_end", c.kpi.wocl_end);
    run.read_clock("night_start", c.kpi.night_start);
    run.read_clock("night_end", c.kpi.night_end);
    std::string cns = "pairs";
    run.read("cns_mode", cns);
    cns = lower(cns);
    if (cns == "pairs")
        c.kpi.cns_mode = ConsecutiveNightMode::AdjacentPairs;
    else if (cns == "runs")
        c.kpi.cns_mode = ConsecutiveNightMode::Runs;
    else
        throw ConfigError("[run] cns_mode must be pairs or runs");
    run.read("report_before", c.duty.report_before);
    run.read("release_domestic", c.duty.release_domestic);
    run.read("release_international", c.duty.release_international);
    std::string home = "BR";
    run.read("home_country", home);
    run.read("airports", c.airports_path);
    run.read("drop_home_standby", c.filter.drop_home_standby);
    run.read("b", c.risk.b);
    run.read("sigma_b", c.risk.sigma_b);
    std::string pool = "none";
    run.read("pool_above", pool);
    if (lower(pool) != "none") {
        int v = 0;
        auto [ptr, ec] = std::from_chars(pool.data(), pool.data() + pool.size(), v);
        if (ec != std::errc{} || ptr != pool.data() + pool.size()) run.fail("pool_above", pool, "an integer or none");
        c.pool_above = v;
    }
    run.read("jobs", c.jobs);
    run.check_unused();

    if (!c.airports_path.empty()) {
        std::filesystem::path ap(c.airports_path);
        if (ap.is_relative() && !base_dir.empty()) ap = base_dir / ap;
        try {
            c.duty.airports = AirportTable::from_csv(csv::read_file(ap.string()), home);
        } catch (const std::exception& ex) {
            throw ConfigError(fmt::format("[run] airports: {}", ex.what()));
        }
    } else {
        c.duty.airports = AirportTable(home);
    }

    auto& s = c.synth;
    Section sy(root, "synth");
    sy.read("seed", s.seed);
    sy.read("n_crew", s.n_crew);
    std::string start = "2019-01-01";
    int days = 30;
    sy.read("start", start);
    sy.read("days", days);
    const auto sb = parse_timestamp(start + "T00:00");
    if (!sb || days < 1) throw ConfigError("[synth] start/days do not form an epoch");
    s.epoch = Epoch::make("SYN", *sb, days);
    auto read_text = [&](const std::string& key) {
        std::string text;
        sy.read(key, text);
        return text;
    };
    try {
        if (const auto t = read_text("target_nns"); !t.empty()) s.target_nns = IntDistribution::parse(t);
        if (const auto t = read_text("target_nwocl"); !t.empty()) s.target_nwocl = IntDistribution::parse(t);
        if (const auto t = read_text("sector_length"); !t.empty()) s.sector_length = IntDistribution::parse(t);
    } catch (const SynthError& ex) {
        throw ConfigError(std::string("[synth] ") + ex.what());
    }
    if (const auto t = read_text("airports"); !t.empty()) s.airports = split_list(t);
    sy.read("day_duty_probability", s.day_duty_probability);
    sy.read("training_probability", s.training_probability);
    sy.read("id_prefix", s.id_prefix);
    sy.check_unused();

    if (c.jobs < 1) throw ConfigError("[run] jobs must be >= 1");
    try {
        validate(c.engine);
        validate(c.profile);
        validate(c.synth);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    if (!(c.kpi.fha_threshold > 0 && c.kpi.fha_threshold <= 100))
        throw ConfigError("[run] fha_threshold must lie in (0,100]");
    if (!(c.risk.b > 0) || !(c.risk.sigma_b >= 0)) throw ConfigError("[run] b must be > 0 and sigma_b >= 0");
    return c;
}

pt::ptree apply_overrides(pt::ptree root, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        const auto dot = o.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError("override '" + o + "' is not section.key=value");
        const std::string section(csv::trim(std::string_view(o).substr(0, dot)));
        const std::string key(csv::trim(std::string_view(o).substr(dot + 1, eq - dot - 1)));
        const std::string value(csv::trim(std::string_view(o).substr(eq + 1)));
        const pt::ptree::path_type sp(section, '\0');
        if (!root.get_child_optional(sp)) root.add_child(sp, pt::ptree{});
        root.get_child(sp).put(pt::ptree::path_type(key, '\0'), value);
    }
    return root;
}

RunConfig from_text(const std::string& text, const std::vector<std::string>& overrides,
                    const std::filesystem::path& base_dir) {
    pt::ptree root;
    try {
        std::istringstream in(text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& ex) {
        throw ConfigError(fmt::format("config line {}: {}", ex.line(), ex.message()));
    }
    return from_tree(apply_overrides(std::move(root), overrides), base_dir);
}

}  // namespace

RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
    return from_text(ini_text, overrides, {});
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    if (path.empty()) return from_text("", overrides, {});
    std::string text;
    try {
        text = csv::read_file(path);
    } catch (const std::exception& ex) {
        throw ConfigError(ex.what());
    }
    return from_text(text, overrides, std::filesystem::path(path).parent_path());
}

std::string canonical_ini(const RunConfig& c) {
    std::string s;
    auto kv = [&](std::string_view k, const auto& v) { s += fmt::format("{} = {}\n", k, v); };
    auto clock = [&](std::string_view k, Minute v) { kv(k, format_clock(v)); };

    s += "[epochs]\n";
    kv("set", c.epoch_set);
    // Standard sets list their resolved windows as comments.
    const std::string_view lead = c.epoch_set == "custom" ? "" : "; ";
    for (const auto& e : c.epochs)
        s += fmt::format("{}{} = {},{}\n", lead, e.label, format_timestamp(e.begin).substr(0, 10), e.days);

    const auto& e = c.engine;
    s += "[engine]\n";
    kv("reservoir_capacity", e.reservoir_capacity);
    kv("wake_depletion", e.wake_depletion);
    kv("sleep_recovery_rate", e.sleep_recovery_rate);
    kv("circadian_peak", e.circadian_peak);
    kv("circadian_second_peak", e.circadian_second_peak);
    kv("harmonic_ratio", e.harmonic_ratio);
    kv("circadian_amp_base", e.circadian_amp_base);
    kv("circadian_amp_debt", e.circadian_amp_debt);
    kv("inertia_max", e.inertia_max);
    kv("inertia_tau", e.inertia_tau);
    kv("inertia_window", e.inertia_window);
    kv("tick", e.tick);
    kv("sample", e.sample);

    const auto& p = c.profile;
    s += "[profile]\n";
    kv("auto_nap", p.auto_nap);
    kv("advanced_bedtime", p.advanced_bedtime);
    kv("commute_minutes", p.commute_minutes);
    kv("preparation_minutes", p.preparation_minutes);
    clock("normal_bedtime", p.normal_bedtime);
    kv("min_sleep_minutes", p.min_sleep_minutes);
    kv("max_workday_sleep_minutes", p.max_workday_sleep_minutes);
    kv("max_restday_sleep_minutes", p.max_restday_sleep_minutes);
    kv("max_recovery_nap_minutes", p.max_recovery_nap_minutes);
    clock("awake_zone_start", p.awake_zone_start);
    clock("awake_zone_end", p.awake_zone_end);
    kv("optimal_sleep_minutes", p.optimal_sleep_minutes);
    kv("recovery_lookback_minutes", p.recovery_lookback_minutes);

    s += "[run]\n";
    kv("fha_threshold", c.kpi.fha_threshold);
    clock("wocl_start", c.kpi.wocl_start);
    clock("wocl_end", c.kpi.wocl_end);
    clock("night_start", c.kpi.night_start);
    clock("night_end", c.kpi.night_end);
    kv("cns_mode", c.kpi.cns_mode == ConsecutiveNightMode::AdjacentPairs ? "pairs" : "runs");
    kv("report_before", c.duty.report_before);
    kv("release_domestic", c.duty.release_domestic);
    kv("release_international", c.duty.release_international);
    kv("home_country", c.duty.airports.home_country());
    kv("airports", c.airports_path);
    kv("drop_home_standby", c.filter.drop_home_standby);
    kv("b", c.risk.b);
    kv("sigma_b", c.risk.sigma_b);
    kv("pool_above", c.pool_above ? std::to_string(*c.pool_above) : std::string("none"));

    const auto& y = c.synth;
    s += "[synth]\n";
    kv("seed", y.seed);
    kv("n_crew", y.n_crew);
    kv("start", format_timestamp(y.epoch.begin).substr(0, 10));
    kv("days", y.epoch.days);
    kv("target_nns", y.target_nns.to_string());
    kv("target_nwocl", y.target_nwocl.to_string());
    kv("sector_length", y.sector_length.to_string());
    kv("airports", csv::join(y.airports));
    kv("day_duty_probability", y.day_duty_probability);
    kv("training_probability", y.training_probability);
    kv("id_prefix", y.id_prefix);
    return s;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string config_hash(const RunConfig& config) { return sha256_hex(canonical_ini(config)); }

}  // namespace fatigue
