#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fatigue/config.hpp"

using namespace fatigue;

namespace {

const std::string kDefaultIni = std::string(FATIGUE_DATA_DIR) + "/../config/default.ini";

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
    const auto c = parse_config("");
    CHECK(c.epochs.size() == 14);
    CHECK(c.engine.reservoir_capacity == 2880.0);
    CHECK(c.profile.auto_nap);
    CHECK(c.profile.commute_minutes == 60);
    CHECK(c.kpi.fha_threshold == 77.0);
    CHECK(c.risk.b == 79.6);
    CHECK_FALSE(c.pool_above.has_value());
    CHECK(c.jobs == 1);
}

TEST_CASE("shipped default file matches the built-in defaults") {
    const auto file = load_config(kDefaultIni);
    auto builtin = parse_config("");
    CHECK(file.duty.airports.is_domestic("GRU"));
    CHECK_FALSE(file.duty.airports.is_domestic("EZE"));
    builtin.airports_path = file.airports_path;
    CHECK(canonical_ini(file) == canonical_ini(builtin));
}

TEST_CASE("overrides and typed values") {
    const auto c = parse_config("[profile]\nauto_nap = false\n",
                                {"profile.commute_minutes=120", "run.pool_above=15", "engine.harmonic_ratio=0.25"});
    CHECK_FALSE(c.profile.auto_nap);
    CHECK(c.profile.commute_minutes == 120);
    CHECK(*c.pool_above == 15);
    CHECK(c.engine.harmonic_ratio == 0.25);
    CHECK(parse_config("[run]\ncns_mode = runs\n").kpi.cns_mode == ConsecutiveNightMode::Runs);
    CHECK(parse_config("[profile]\nnormal_bedtime = 22:30\n").profile.normal_bedtime == 22 * 60 + 30);
    CHECK(parse_config("", {"synth.target_nns=2:1,4:3"}).synth.target_nns.probability(4) == doctest::Approx(0.75));
}

TEST_CASE("invalid configuration is rejected") {
    CHECK_THROWS_AS(parse_config("[engine]\nunknown_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[engine]\nharmonic_ratio = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[profile]\nauto_nap = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\nwocl_start = 25:00\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("", {"engine.tick"}), ConfigError);
    CHECK_THROWS_AS(parse_config("[epochs]\nset = 7d\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("epoch sets") {
    CHECK(parse_config("[epochs]\nset = 15d\n").epochs.size() == 2);
    const auto c = parse_config("[epochs]\nset = custom\nB = 2019-03-01,10\nA = 2019-01-01,30\n");
    REQUIRE(c.epochs.size() == 2);
    CHECK(c.epochs[0].label == "A");
    CHECK(c.epochs[1].begin == make_timestamp(2019, 3, 1));
    CHECK(c.epochs[1].end == make_timestamp(2019, 3, 11));
    CHECK_THROWS_AS(parse_config("[epochs]\nset = custom\nA = 2019-01-01,30\nB = 2019-01-20,5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[epochs]\nset = custom\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[epochs]\nset = custom\nA = 2019-01-01\n"), ConfigError);
}

TEST_CASE("configuration hash") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const auto a = parse_config("");
    CHECK(config_hash(a) == config_hash(parse_config("")));
    CHECK(config_hash(a) != config_hash(parse_config("", {"profile.commute_minutes=120"})));
    // The worker count does not change results, so it is not hashed.
    CHECK(config_hash(a) == config_hash(parse_config("", {"run.jobs=4"})));
    // The canonical text parses back to the same configuration.
    const auto b = parse_config("", {"profile.auto_nap=false", "run.pool_above=12", "epochs.set=15d"});
    CHECK(config_hash(parse_config(canonical_ini(b))) == config_hash(b));
}

TEST_CASE("airport path is resolved against the configuration file") {
    const auto dir = std::filesystem::temp_directory_path() / "fatigue_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "ap.csv") << "code,country\nXXA,BR\nXXB,AR\n";
        std::ofstream(dir / "run.ini") << "[run]\nairports = ap.csv\n";
    }
    const auto c = load_config((dir / "run.ini").string());
    CHECK(c.duty.airports.is_domestic("XXA"));
    CHECK_FALSE(c.duty.airports.is_domestic("XXB"));
    {
        std::ofstream(dir / "bad.ini") << "[run]\nairports = missing.csv\n";
    }
    CHECK_THROWS_AS(load_config((dir / "bad.ini").string()), ConfigError);
    std::filesystem::remove_all(dir);
}
