#pragma once

// Synthetic roster populations with planted night-shift and WOCL counts.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fatigue/roster.hpp"

namespace fatigue {

// SplitMix64 evaluated in counter mode: output k of stream s is
// mix(key(seed, s) + (k + 1) * golden). Streams never share state, so each
// roster can be generated independently of the others.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();
    // Uniform in [0, bound) by Lemire's multiply-shift rejection.
    std::uint64_t below(std::uint64_t bound);
    // Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);
    // Uniform in [0, 1) with 53 bits.
    double unit();

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Finite integer distribution. Text form: "v:w,v:w,..." or "a-b" for a
// uniform range or a single integer.
struct IntDistribution {
    std::vector<std::int64_t> values;
    std::vector<double> weights;  // normalised

    static IntDistribution parse(std::string_view text);
    static IntDistribution uniform(std::int64_t lo, std::int64_t hi);
    std::string to_string() const;

    std::int64_t min() const;
    std::int64_t max() const;
    double probability(std::int64_t v) const;
    std::int64_t draw(CounterRng& rng) const;

    bool operator==(const IntDistribution&) const = default;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_crew = 50;
    Epoch epoch = Epoch::make("SYN", make_timestamp(2019, 1, 1), 30);
    IntDistribution target_nns = IntDistribution::uniform(1, 13);
    IntDistribution target_nwocl = IntDistribution::uniform(0, 6);
    IntDistribution sector_length = IntDistribution::uniform(50, 150);  // minutes
    std::vector<std::string> airports = {"GRU", "BSB", "CNF", "SSA", "REC", "POA"};
    double day_duty_probability = 0.5;
    double training_probability = 0.1;
    std::string id_prefix = "S";
};

class SynthError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws SynthError naming the violated constraint.
void validate(const SynthConfig& config);

struct PlantedCounts {
    std::string crew_id;
    int n_ns = 0;
    int n_wocl = 0;
    int n_crew = 0;
    int n_work = 0;
};

struct SynthOutput {
    std::vector<ValidatedRoster> rosters;
    std::vector<PlantedCounts> planted;

    std::string roster_csv() const;
    std::string planted_csv() const;
};

// Night duties sit on epoch days 1..days-1 and carry 0 to 6 WOCL departures
// and arrivals each, so N_wocl <= 6 N_NS. Day duties stay within 06:00-22:15
// including report and release time.
inline constexpr int kMaxWoclPerNight = 6;

SynthOutput generate(const SynthConfig& config);

}  // namespace fatigue
