#include "fatigue/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fatigue/csv.hpp"

namespace fatigue {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Flights of one night duty, as minutes after midnight of the duty day.
struct NightSector {
    Minute dep;
    Minute arr;
};

constexpr NightSector kS1{60, 140};    // 01:00-02:20, arrival in WOCL
constexpr NightSector kS2{170, 230};   // 02:50-03:50, both in WOCL
constexpr NightSector kS3{260, 320};   // 04:20-05:20, both in WOCL
constexpr NightSector kS4{345, 405};   // 05:45-06:45, departure in WOCL
constexpr NightSector kS0{30, 90};     // 00:30-01:30, none in WOCL

std::vector<NightSector> night_template(int wocl) {
    switch (wocl) {
        case 0: return {kS0};
        case 1: return {kS1};
        case 2: return {kS2};
        case 3: return {kS1, kS2};
        case 4: return {kS2, kS3};
        case 5: return {kS1, kS2, kS3};
        case 6: return {kS1, kS2, kS3, kS4};
        default: throw SynthError(fmt::format("a night duty carries at most {} WOCL events", kMaxWoclPerNight));
    }
}

constexpr Minute kDayFirstDepLo = 7 * 60;
constexpr Minute kDayFirstDepHi = 10 * 60;
constexpr Minute kDayLastArr = 21 * 60 + 30;
constexpr Minute kTurnaround = 40;
constexpr Minute kTrainingStart = 9 * 60;
constexpr Minute kTrainingEnd = 17 * 60;

std::int64_t parse_int(std::string_view s) {
    s = csv::trim(s);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw SynthError("bad integer '" + std::string(s) + "'");
    return v;
}

double parse_double(std::string_view s) {
    s = csv::trim(s);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw SynthError("bad weight '" + std::string(s) + "'");
    return v;
}

std::string pick_other(CounterRng& rng, const std::vector<std::string>& airports, const std::string& not_this) {
    std::string out;
    do {
        out = airports[static_cast<std::size_t>(rng.below(airports.size()))];
    } while (out == not_this);
    return out;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kGolden))) {}

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::next() { return mix(key_ + (++counter_) * kGolden); }

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("CounterRng::below(0)");
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t CounterRng::between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("CounterRng::between: empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double CounterRng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

IntDistribution IntDistribution::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw SynthError(fmt::format("empty range {}-{}", lo, hi));
    IntDistribution d;
    for (auto v = lo; v <= hi; ++v) d.values.push_back(v);
    d.weights.assign(d.values.size(), 1.0 / static_cast<double>(d.values.size()));
    return d;
}

IntDistribution IntDistribution::parse(std::string_view text) {
    text = csv::trim(text);
    if (text.empty()) throw SynthError("empty distribution");
    if (text.find(':') == std::string_view::npos) {
        const auto dash = text.find('-', 1);
        if (dash == std::string_view::npos) {
            const auto v = parse_int(text);
            return uniform(v, v);
        }
        return uniform(parse_int(text.substr(0, dash)), parse_int(text.substr(dash + 1)));
    }
    IntDistribution d;
    double total = 0;
    for (const auto& item : csv::split_line(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw SynthError("distribution item '" + item + "' is not value:weight");
        const auto v = parse_int(std::string_view(item).substr(0, colon));
        const auto w = parse_double(std::string_view(item).substr(colon + 1));
        if (!(w >= 0)) throw SynthError("distribution weights must be >= 0");
        if (std::find(d.values.begin(), d.values.end(), v) != d.values.end())
            throw SynthError(fmt::format("value {} listed twice in distribution", v));
        if (w == 0) continue;
        d.values.push_back(v);
        d.weights.push_back(w);
        total += w;
    }
    if (!(total > 0)) throw SynthError("distribution has no positive weight");
    // Weights already normalised up to rounding are kept bit for bit so that
    // to_string and parse round-trip.
    if (std::abs(total - 1.0) > 1e-12)
        for (auto& w : d.weights) w /= total;
    return d;
}

std::string IntDistribution::to_string() const {
    if (values.size() == 1) return std::to_string(values.front());
    const bool contiguous = std::is_sorted(values.begin(), values.end()) && max() - min() + 1 == std::ssize(values);
    const bool flat = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights.front(); });
    if (contiguous && flat && *this == uniform(min(), max())) return fmt::format("{}-{}", min(), max());
    std::vector<std::string> items;
    for (std::size_t i = 0; i < values.size(); ++i) items.push_back(fmt::format("{}:{}", values[i], weights[i]));
    return csv::join(items);
}

std::int64_t IntDistribution::min() const {
    if (values.empty()) throw SynthError("empty distribution");
    return *std::min_element(values.begin(), values.end());
}

std::int64_t IntDistribution::max() const {
    if (values.empty()) throw SynthError("empty distribution");
    return *std::max_element(values.begin(), values.end());
}

double IntDistribution::probability(std::int64_t v) const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == v) return weights[i];
    return 0.0;
}

std::int64_t IntDistribution::draw(CounterRng& rng) const {
    const double u = rng.unit();
    double acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += weights[i];
        if (u < acc) return values[i];
    }
    return values.back();
}

void validate(const SynthConfig& c) {
    if (c.n_crew == 0) throw SynthError("n_crew must be >= 1");
    if (c.epoch.days < 2) throw SynthError("synthetic epoch needs at least 2 days");
    if (clock_of_day(c.epoch.begin) != 0) throw SynthError("synthetic epoch must start at midnight");
    if (c.target_nns.min() < 0) throw SynthError("target N_NS must be >= 0");
    if (c.target_nns.max() > c.epoch.days - 1)
        throw SynthError(fmt::format("N_NS <= days - 1: target N_NS {} exceeds the {} schedulable nights",
                                     c.target_nns.max(), c.epoch.days - 1));
    if (c.target_nwocl.min() < 0) throw SynthError("target N_wocl must be >= 0");
    if (c.target_nwocl.max() > kMaxWoclPerNight * c.target_nns.min())
        throw SynthError(fmt::format("N_wocl <= {0} * N_NS: target N_wocl {1} exceeds the {2} WOCL slots of "
                                     "{3} night duties",
                                     kMaxWoclPerNight, c.target_nwocl.max(), kMaxWoclPerNight * c.target_nns.min(),
                                     c.target_nns.min()));
    if (c.sector_length.min() < 1) throw SynthError("sector length must be >= 1 minute");
    if (c.sector_length.max() > kDayLastArr - kDayFirstDepHi)
        throw SynthError(fmt::format("sector length <= {} minutes so one day sector fits before 21:30",
                                     kDayLastArr - kDayFirstDepHi));
    if (c.airports.size() < 2) throw SynthError("need at least two airports");
    for (const auto& a : c.airports)
        if (a.empty() || a.find_first_of(",\"\n") != std::string::npos)
            throw SynthError("airport code '" + a + "' is not a plain token");
    if (!(c.day_duty_probability >= 0 && c.day_duty_probability <= 1))
        throw SynthError("day_duty_probability must lie in [0,1]");
    if (!(c.training_probability >= 0 && c.training_probability <= 1))
        throw SynthError("training_probability must lie in [0,1]");
}

SynthOutput generate(const SynthConfig& c) {
    validate(c);
    SynthOutput out;
    const int width = std::max(4, static_cast<int>(std::to_string(c.n_crew - 1).size()));
    const std::string& base = c.airports.front();

    for (std::size_t i = 0; i < c.n_crew; ++i) {
        CounterRng rng(c.seed, i);
        const std::string id = fmt::format("{}{:0{}}", c.id_prefix, i, width);
        const Rank rank = rng.below(2) == 0 ? Rank::Captain : Rank::FirstOfficer;
        const int nns = static_cast<int>(c.target_nns.draw(rng));
        const int nwocl = static_cast<int>(c.target_nwocl.draw(rng));

        // Nights on days 1..days-1, chosen by a partial Fisher-Yates shuffle.
        std::vector<int> days(static_cast<std::size_t>(c.epoch.days - 1));
        std::iota(days.begin(), days.end(), 1);
        for (int k = 0; k < nns; ++k) {
            const auto j = static_cast<std::size_t>(rng.between(k, static_cast<std::int64_t>(days.size()) - 1));
            std::swap(days[static_cast<std::size_t>(k)], days[j]);
        }
        std::vector<int> wocl_per_night(static_cast<std::size_t>(c.epoch.days), -1);
        std::vector<int> nights(days.begin(), days.begin() + nns);
        std::sort(nights.begin(), nights.end());
        for (int d : nights) wocl_per_night[static_cast<std::size_t>(d)] = 0;
        for (int u = 0; u < nwocl; ++u) {
            std::vector<int> open;
            for (int d : nights)
                if (wocl_per_night[static_cast<std::size_t>(d)] < kMaxWoclPerNight) open.push_back(d);
            ++wocl_per_night[static_cast<std::size_t>(open[static_cast<std::size_t>(rng.below(open.size()))])];
        }

        ValidatedRoster roster;
        roster.crew_id = id;
        roster.epoch = c.epoch;
        PlantedCounts planted{id, nns, nwocl, 0, 0};

        auto crewing = [&](Minute dep, Minute arr, const std::string& from, const std::string& to) {
            RosterEvent e;
            e.crew_id = id;
            e.kind = EventKind::Crewing;
            e.subkind = EventSubkind::Flight;
            e.start = dep;
            e.end = arr;
            e.origin = from;
            e.destination = to;
            e.rank = rank;
            roster.events.push_back(std::move(e));
            ++planted.n_crew;
        };

        for (int d = 0; d < c.epoch.days; ++d) {
            const Minute midnight = c.epoch.begin + d * kMinutesPerDay;
            const int w = wocl_per_night[static_cast<std::size_t>(d)];
            if (w >= 0) {
                std::string at = base;
                for (const auto& s : night_template(w)) {
                    const std::string to = at == base ? pick_other(rng, c.airports, base) : base;
                    crewing(midnight + s.dep, midnight + s.arr, at, to);
                    at = to;
                }
                continue;
            }
            if (rng.unit() < c.day_duty_probability) {
                const int sectors = static_cast<int>(rng.between(1, 4));
                Minute dep = midnight + kDayFirstDepLo + 5 * rng.between(0, (kDayFirstDepHi - kDayFirstDepLo) / 5);
                std::string at = base;
                for (int s = 0; s < sectors; ++s) {
                    const Minute arr = dep + c.sector_length.draw(rng);
                    if (arr > midnight + kDayLastArr) break;
                    const std::string to = pick_other(rng, c.airports, at);
                    crewing(dep, arr, at, to);
                    at = to;
                    dep = arr + kTurnaround;
                }
                continue;
            }
            if (rng.unit() < c.training_probability) {
                RosterEvent e;
                e.crew_id = id;
                e.kind = EventKind::Working;
                e.subkind = EventSubkind::Training;
                e.start = midnight + kTrainingStart;
                e.end = midnight + kTrainingEnd;
                e.rank = rank;
                roster.events.push_back(std::move(e));
                ++planted.n_work;
            }
        }
        out.rosters.push_back(std::move(roster));
        out.planted.push_back(std::move(planted));
    }
    return out;
}

std::string SynthOutput::roster_csv() const {
    std::vector<RosterEvent> all;
    for (const auto& r : rosters) all.insert(all.end(), r.events.begin(), r.events.end());
    return serialize_roster_csv(all);
}

std::string SynthOutput::planted_csv() const {
    std::string s = "crew_id,N_NS,N_wocl,N_crew,N_work\n";
    for (const auto& p : planted) s += fmt::format("{},{},{},{},{}\n", p.crew_id, p.n_ns, p.n_wocl, p.n_crew, p.n_work);
    return s;
}

}  // namespace fatigue
