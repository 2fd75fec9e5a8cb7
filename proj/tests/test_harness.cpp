#include "parapde/errors.hpp"
#include "parapde/experiments.hpp"
#include "parapde/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <doctest.h>

using namespace parapde;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream f(std::string(PARAPDE_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(f);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

ExperimentConfig small_config(const std::string& experiment, long replicas = 1) {
    Config c;
    c.set("experiment", experiment);
    c.set("seed", "7");
    c.set("replicas", std::to_string(replicas));
    return make_experiment_config(c);
}

const ReportRow* find_row(const ExperimentReport& r, const std::string& params, const std::string& statistic) {
    for (const auto& row : r.rows)
        if (row.params == params && row.statistic == statistic) return &row;
    return nullptr;
}

}  // namespace

TEST_CASE("config parsing: comments, whitespace, typed getters") {
    const auto c = Config::parse("# header\n  experiment = ou-moments  \nseed=12 # trailing\n\nts = 0.1, 0.5\nflag = on\n");
    CHECK(c.get("experiment") == "ou-moments");
    CHECK(c.get_int("seed", 0) == 12);
    CHECK(c.get_list("ts", {}) == std::vector<double>{0.1, 0.5});
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_double("missing", 2.5) == 2.5);
    CHECK_THROWS_AS(c.get("missing"), ConfigurationError);
    CHECK_THROWS_AS(c.get_double("experiment", 0.0), ConfigurationError);
    CHECK_THROWS_AS(c.get_bool("seed", false), ConfigurationError);
    CHECK_THROWS_AS(Config::parse("no equals sign\n"), ConfigurationError);
    CHECK_THROWS_AS(Config::parse("= value\n"), ConfigurationError);
    CHECK_THROWS_AS(Config::load("/nonexistent/parapde.cfg"), ConfigurationError);
}

TEST_CASE("config merge: later values win and dump parses back") {
    auto a = Config::parse("x = 1\ny = 2\n");
    a.merge(Config::parse("y = 3\nz = 4\n"));
    CHECK(a.get("x") == "1");
    CHECK(a.get("y") == "3");
    CHECK(a.get("z") == "4");
    CHECK(Config::parse(a.dump()).values() == a.values());
}

TEST_CASE("experiment config validation") {
    Config c;
    CHECK_THROWS_AS(make_experiment_config(c), ConfigurationError);
    c.set("experiment", "ou-moments");
    const auto ok = make_experiment_config(c);
    CHECK(ok.replicas == 1);
    CHECK(ok.format == "csv");
    auto bad = c;
    bad.set("replicas", "0");
    CHECK_THROWS_AS(make_experiment_config(bad), ConfigurationError);
    bad = c;
    bad.set("schema", "parapde-config/0");
    CHECK_THROWS_AS(make_experiment_config(bad), ConfigurationError);
    bad = c;
    bad.set("format", "xml");
    CHECK_THROWS_AS(make_experiment_config(bad), ConfigurationError);
    auto good = c;
    good.set("schema", kConfigSchema);
    CHECK_NOTHROW(make_experiment_config(good));
}

TEST_CASE("unknown experiment is a configuration error") {
    CHECK_THROWS_AS(run_experiment(small_config("no-such-experiment")), ConfigurationError);
}

TEST_CASE("empty report: header-only CSV, empty rows with metadata in JSON") {
    ExperimentReport r;
    r.metadata["seed"] = "1";
    CHECK(emit_csv(r) == "experiment,params,statistic,value,stderr,n\n");
    CHECK(parse_csv(emit_csv(r)).empty());
    const auto back = parse_json(emit_json(r));
    CHECK(back.rows.empty());
    CHECK(back.metadata.at("seed") == "1");
}

TEST_CASE("single rows round-trip losslessly through CSV and JSON") {
    const double values[] = {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0,
                             std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::infinity()};
    for (double v : values) {
        ExperimentReport r;
        r.experiment = "x";
        r.rows.push_back({"x", "k=1;t=0.5", "mean_sq", v, 1e-17 / 3.0, 12345});
        const auto csv = parse_csv(emit_csv(r));
        REQUIRE(csv.size() == 1);
        CHECK(csv[0] == r.rows[0]);
        const auto json = parse_json(emit_json(r));
        REQUIRE(json.rows.size() == 1);
        CHECK(json.rows[0] == r.rows[0]);
    }
}

TEST_CASE("canonical ordering of 1000 rows is independent of insertion order") {
    std::vector<ReportRow> rows;
    for (int i = 0; i < 1000; ++i)
        rows.push_back({"e" + std::to_string(i % 3), param_string({{"k", i % 17}, {"t", (i % 5) * 0.1}}),
                        "s" + std::to_string(i % 7), double(i), 0.0, 1});
    std::mt19937_64 rng(3);
    std::string first;
    for (int trial = 0; trial < 4; ++trial) {
        std::shuffle(rows.begin(), rows.end(), rng);
        ExperimentReport r;
        r.rows = rows;
        r.canonicalize();
        for (std::size_t i = 1; i < r.rows.size(); ++i) {
            const auto& a = r.rows[i - 1];
            const auto& b = r.rows[i];
            CHECK(std::tie(a.experiment, a.params, a.statistic) <= std::tie(b.experiment, b.params, b.statistic));
        }
        // keys repeat, so only the key sequence is order independent
        std::string keys;
        for (const auto& row : r.rows) keys += row.experiment + row.params + row.statistic + "\n";
        if (trial == 0) first = keys;
        CHECK(keys == first);
    }
}

TEST_CASE("gate rule compares against max(tol, 3 se)") {
    CHECK(gate_near("a", 1.0, 1.2, 0.0, 0.1).pass);
    CHECK_FALSE(gate_near("b", 1.0, 1.31, 0.0, 0.1).pass);
    CHECK(gate_near("c", 1.0, 1.31, 0.5, 0.1).pass);
    CHECK(gate_at_most("d", 1.0, 1.0).pass);
    CHECK_FALSE(gate_at_least("e", 0.5, 1.0).pass);
    CHECK_FALSE(gate_near("f", std::nan(""), 0.0, 1.0).pass);
}

TEST_CASE("pairwise summation and summary statistics") {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i);
    CHECK(pairwise_sum(x) == 999.0 * 1000.0 / 2.0);
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-15));
    CHECK(s.n == 4);
}

TEST_CASE("replica fan-out is independent of the thread count") {
    auto fn = [](long r) {
        std::mt19937_64 g(std::uint64_t(r) * 7919u);
        return std::vector<double>{std::generate_canonical<double, 53>(g), double(r)};
    };
    const auto a = run_replicas(37, 1, fn), b = run_replicas(37, 4, fn);
    CHECK(a == b);
    CHECK(a[36][1] == 36.0);
    CHECK_THROWS(run_replicas(5, 2, [](long r) -> std::vector<double> {
        if (r == 3) throw std::runtime_error("boom");
        return {};
    }));
}

TEST_CASE("same config and seed give byte-identical reports") {
    for (const char* name : {"ou-moments", "drift-antisymmetry", "wick"}) {
        auto c = small_config(name);
        const auto a = emit_csv(run_experiment(c));
        c.threads = 3;
        const auto b = emit_csv(run_experiment(c));
        CHECK_MESSAGE(a == b, name);
    }
}

TEST_CASE("ou-moments: k = 1, t = 0.5 matches (1 - e^{-1})/2 within 3 SE") {
    auto c = small_config("ou-moments", 4000);
    c.params.set("ks", "1");
    c.params.set("ts", "0.5");
    const auto r = run_experiment(c);
    const auto* row = find_row(r, "N=64;k=1;t=0.5", "mean_sq");
    REQUIRE(row);
    CHECK(row->n == 4000);
    CHECK(row->stderr_ > 0.0);
    CHECK(std::abs(row->value - 0.5 * (1.0 - std::exp(-1.0))) <= 3.0 * row->stderr_);
    CHECK(r.passed());
}

TEST_CASE("renorm-constants reproduces the committed fixture exactly") {
    const auto r = run_experiment(small_config("renorm-constants"));
    CHECK(fixture_diff(read_fixture("renorm-constants.json"), r, 0.0).empty());
    CHECK(r.passed());
}

TEST_CASE("fixture drift is reported") {
    auto r = run_experiment(small_config("renorm-constants"));
    r.rows[0].value *= 1.0 + 1e-12;
    CHECK_FALSE(fixture_diff(read_fixture("renorm-constants.json"), r, 0.0).empty());
}
