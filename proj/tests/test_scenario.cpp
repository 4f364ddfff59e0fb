#include <doctest.h>

#include "mif/scenario.hpp"

#include <fstream>
#include <sstream>

using namespace mif;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mif_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("scenario listing") {
    CHECK(list_scenarios().size() == 8);
    const auto t5 = list_scenarios("theorem5");
    REQUIRE(t5.size() == 1);
    CHECK(t5[0].name == "theorem5-crosscheck");
    CHECK(t5[0].defaults.contains("sizes"));
    CHECK(list_scenarios("no-such").empty());
    for (const ScenarioInfo& s : list_scenarios()) CHECK_FALSE(s.description.empty());
}

TEST_CASE("configuration round trip and validation") {
    ScenarioConfig c = default_config("kadets-sweep");
    c.seed = 7;
    c.window = std::make_pair(-10, 12);
    c.deltas = {0.1, 0.2};
    const ScenarioConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(back.window->second == 12);

    json bad = to_json(c);
    bad["colour"] = "blue";
    try {
        config_from_json(bad);
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigError);
    }

    CHECK(parse_window("-64..64") == std::make_pair(-64, 64));
    CHECK_THROWS_AS(parse_window("5..1"), Error);
    CHECK_THROWS_AS(parse_window("abc"), Error);
    CHECK(parse_tail("truncate") == TailPolicy::Truncate);
    CHECK_THROWS_AS(parse_tail("none"), Error);
}

TEST_CASE("sequence construction") {
    SequenceConfig s;
    s.kind = "perturbed";
    s.delta = 0.2;
    const SeparatedSequence alt = build_sequence(s, -5, 5, 1);
    CHECK(alt.lambda(1) == doctest::Approx(0.8));
    s.pattern = "random";
    const SeparatedSequence r1 = build_sequence(s, -5, 5, 1), r2 = build_sequence(s, -5, 5, 1);
    CHECK(r1.lambdas == r2.lambdas);
    CHECK((r1.lambdas - alt.lambdas).cwiseAbs().maxCoeff() > 0.0);

    const fs::path dir = scratch("nodes");
    fs::create_directories(dir);
    write_nodes_csv(dir / "nodes.csv", alt);
    s.kind = "file";
    s.file = (dir / "nodes.csv").string();
    const SeparatedSequence f = build_sequence(s, 0, 0, 1);
    CHECK(f.first_index == -5);
    CHECK((f.lambdas - alt.lambdas).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f.nus - alt.nus).cwiseAbs().maxCoeff() == 0.0);
    fs::remove_all(dir);
}

TEST_CASE("lattice-gram writes a report and its files") {
    ScenarioConfig c = default_config("lattice-gram");
    c.out = scratch("gram");
    const ScenarioResult r = run_scenario(c);
    CHECK(r.passed());
    CHECK(fs::exists(c.out / "gram.csv"));
    CHECK(fs::exists(c.out / "gram.json"));
    const json report = read_json(c.out / "report.json");
    CHECK(report["version"] == MIF_VERSION);
    CHECK(report["config"]["scenario"] == "lattice-gram");
    CHECK(report["passed"] == true);
    fs::remove_all(c.out);
}

TEST_CASE("scenario output is deterministic") {
    ScenarioConfig c = default_config("hilbert-pairs");
    c.out = scratch("det_a");
    run_scenario(c);
    const fs::path first = c.out;
    c.out = scratch("det_b");
    run_scenario(c);
    CHECK(slurp(first / "hilbert.csv") == slurp(c.out / "hilbert.csv"));
    fs::remove_all(first);
    fs::remove_all(c.out);
}

TEST_CASE("unknown scenario") {
    ScenarioConfig c;
    c.scenario = "nope";
    c.out = scratch("nope");
    CHECK_THROWS_AS(run_scenario(c), Error);
    fs::remove_all(c.out);
}
