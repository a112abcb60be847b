#include <doctest.h>

#include <cmath>
#include <set>

#include "fatigue/kpi.hpp"
#include "fatigue/synth.hpp"

using namespace fatigue;

namespace {

SynthConfig small(std::uint64_t seed, std::size_t n) {
    SynthConfig c;
    c.seed = seed;
    c.n_crew = n;
    return c;
}

}  // namespace

TEST_CASE("counter generator") {
    CounterRng a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    CounterRng r(1, 2);
    for (int i = 0; i < 2000; ++i) {
        CHECK(r.below(7) < 7);
        const auto v = r.between(-3, 3);
        CHECK(v >= -3);
        CHECK(v <= 3);
        const double u = r.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    // SplitMix64 finaliser reference value.
    CHECK(CounterRng::mix(0) == 0);
    CHECK(CounterRng::mix(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("integer distributions") {
    const auto d = IntDistribution::parse("0:1,2:3");
    CHECK(d.values == std::vector<std::int64_t>{0, 2});
    CHECK(d.probability(2) == doctest::Approx(0.75));
    CHECK(d.probability(1) == 0.0);
    const auto u = IntDistribution::parse("3-6");
    CHECK(u.min() == 3);
    CHECK(u.max() == 6);
    CHECK(u.probability(4) == doctest::Approx(0.25));
    CHECK(IntDistribution::parse("5").values == std::vector<std::int64_t>{5});
    CHECK(IntDistribution::parse(u.to_string()).values == u.values);
    CHECK_THROWS(IntDistribution::parse("4-2"));
    CHECK_THROWS(IntDistribution::parse("1:-1"));
    CHECK_THROWS(IntDistribution::parse("x"));
}

TEST_CASE("no planted night shifts means no night duty") {
    auto c = small(9, 40);
    c.target_nns = IntDistribution::parse("0");
    c.target_nwocl = IntDistribution::parse("0");
    const auto out = generate(c);
    for (const auto& r : out.rosters) {
        CHECK(productivity_metrics(r).n_ns == 0);
        CHECK(productivity_metrics(r).n_wocl == 0);
    }
}

TEST_CASE("same seed gives identical output") {
    const auto a = generate(small(77, 30)), b = generate(small(77, 30)), c = generate(small(78, 30));
    CHECK(a.roster_csv() == b.roster_csv());
    CHECK(a.planted_csv() == b.planted_csv());
    CHECK(a.roster_csv() != c.roster_csv());
    // Each roster depends only on its own stream.
    const auto longer = generate(small(77, 31));
    for (std::size_t i = 0; i < a.rosters.size(); ++i)
        CHECK(a.rosters[i].events.size() == longer.rosters[i].events.size());
}

TEST_CASE("planted counts survive serialisation and parsing") {
    const auto out = generate(small(5, 100));
    const auto parsed = parse_roster_csv(out.roster_csv());
    CHECK(parsed.diagnostics.empty());
    const auto crews = group_by_crew(parsed.events);
    REQUIRE(crews.size() == out.planted.size());
    const DutyPolicy duty;
    for (const auto& planted : out.planted) {
        const auto roster = apply_filters(crews.at(planted.crew_id), small(5, 1).epoch);
        REQUIRE_FALSE(roster.rejected);
        const auto m = productivity_metrics(roster, duty);
        CHECK(m.n_ns == planted.n_ns);
        CHECK(m.n_wocl == planted.n_wocl);
        CHECK(m.n_crew == planted.n_crew);
        CHECK(m.n_work == planted.n_work);
    }
}

TEST_CASE("planted N_wocl follows the target distribution") {
    const auto out = generate(small(2024, 500));
    std::vector<int> hist(7, 0);
    for (const auto& p : out.planted) {
        REQUIRE(p.n_wocl >= 0);
        REQUIRE(p.n_wocl <= 6);
        ++hist[static_cast<std::size_t>(p.n_wocl)];
    }
    for (int v = 0; v <= 6; ++v) {
        const double p = 1.0 / 7.0, expected = 500 * p, sd = std::sqrt(500 * p * (1 - p));
        CHECK(std::abs(hist[static_cast<std::size_t>(v)] - expected) <= 3 * sd);
    }
}

TEST_CASE("generated rosters are well formed") {
    const auto out = generate(small(3, 60));
    std::set<std::string> ids;
    for (const auto& r : out.rosters) {
        ids.insert(r.crew_id);
        for (std::size_t i = 0; i < r.events.size(); ++i) {
            const auto& e = r.events[i];
            CHECK(e.start < e.end);
            CHECK(e.start >= r.epoch.begin);
            CHECK(e.end <= r.epoch.end);
            if (i > 0) CHECK(r.events[i - 1].end <= e.start);
            if (e.kind == EventKind::Crewing) CHECK(e.end - e.start <= 150);
        }
    }
    CHECK(ids.size() == 60);
    CHECK(*ids.begin() == "S0000");
}

TEST_CASE("infeasible targets are rejected") {
    auto c = small(1, 1);
    c.target_nns = IntDistribution::parse("30");
    CHECK_THROWS_AS(generate(c), SynthError);
    c = small(1, 1);
    c.target_nns = IntDistribution::parse("1");
    c.target_nwocl = IntDistribution::parse("7");
    CHECK_THROWS_AS(generate(c), SynthError);
    c = small(1, 1);
    c.airports = {"GRU"};
    CHECK_THROWS_AS(generate(c), SynthError);
}
