#include "mif/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace mif;

namespace {

// Options shared by the analysis subcommands.
struct Common {
    std::string out = "out";
    std::uint64_t seed = 20240917;
    int grid = 0;
    std::string window;
    std::string config;
    std::string kind = "lattice";
    std::string pattern = "alternating";
    double delta = 0.0;
    double rate = 2.0;
    double nu = 1.0 / kPi;
    std::string nodes_file;
    double theta_type = 2.0 * kPi;
    std::string tail = "lattice";
    std::vector<int> sizes;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "output directory")->capture_default_str();
    app->add_option("--seed", c.seed, "random seed")->capture_default_str();
    app->add_option("--grid", c.grid, "circle resolution (power of two)");
    app->add_option("--window", c.window, "node index window a..b");
    app->add_option("--config", c.config, "JSON configuration file");
    app->add_option("--sequence", c.kind, "lattice | perturbed | decaying | file")->capture_default_str();
    app->add_option("--pattern", c.pattern, "perturbation pattern: alternating | random")->capture_default_str();
    app->add_option("--delta", c.delta, "perturbation size");
    app->add_option("--rate", c.rate, "decay base for decaying sequences")->capture_default_str();
    app->add_option("--nu", c.nu, "Clark weight for generated sequences");
    app->add_option("--nodes", c.nodes_file, "node CSV (index,value[,nu]) for --sequence file");
    app->add_option("--theta-type", c.theta_type, "exponential type a of Theta = exp(i a z)")->capture_default_str();
    app->add_option("--tail", c.tail, "Clark tail policy: lattice | truncate")->capture_default_str();
    app->add_option("--sizes", c.sizes, "window or section sizes");
}

// Flags override the config file, which overrides the defaults.
ScenarioConfig resolve(const CLI::App* app, const Common& c, const std::string& scenario) {
    ScenarioConfig cfg = default_config(scenario);
    if (!c.config.empty()) {
        json j = read_json(c.config);
        if (!scenario.empty()) j["scenario"] = scenario;
        cfg = config_from_json(j);
    }
    auto given = [app](const char* name) { return app->count(name) > 0; };
    if (given("--out")) cfg.out = c.out;
    else if (c.config.empty()) cfg.out = c.out;
    if (given("--seed")) cfg.seed = c.seed;
    if (given("--grid")) cfg.grid = c.grid;
    if (given("--window")) cfg.window = parse_window(c.window);
    if (given("--sequence")) cfg.sequence.kind = c.kind;
    if (given("--pattern")) cfg.sequence.pattern = c.pattern;
    if (given("--delta")) cfg.sequence.delta = c.delta;
    if (given("--rate")) cfg.sequence.rate = c.rate;
    if (given("--nu")) cfg.sequence.nu = c.nu;
    if (given("--nodes")) {
        cfg.sequence.kind = "file";
        cfg.sequence.file = c.nodes_file;
    }
    if (given("--theta-type")) cfg.theta = exponential_inner(c.theta_type);
    if (given("--tail")) cfg.tail = c.tail;
    if (given("--sizes")) cfg.sizes = c.sizes;
    parse_tail(cfg.tail);
    return cfg;
}

SeparatedSequence sequence_of(const ScenarioConfig& cfg, int lo, int hi) {
    const auto w = cfg.window.value_or(std::pair{lo, hi});
    return build_sequence(cfg.sequence, w.first, w.second, cfg.seed);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_validate(const ScenarioConfig& cfg) {
    const SeparatedSequence seq = sequence_of(cfg, -10, 10);
    write_nodes_csv(cfg.out / "nodes.csv", seq);
    print(to_json(seq));
    return 0;
}

int cmd_clark(const ScenarioConfig& cfg) {
    const SeparatedSequence seq = sequence_of(cfg, -100, 100);
    const ClarkInner clark(seq, parse_tail(cfg.tail));
    const int n = cfg.grid > 0 ? cfg.grid : 4096;
    write_trace_csv(cfg.out / "clark_trace.csv",
                    transfer_symbol([&](double t) { return clark(Complex(t, 0.0)); }, n));
    json j = to_json(seq);
    j["tail"] = cfg.tail;
    j["herglotz_offset"] = clark.herglotz_offset();
    j["resolution"] = n;
    print(j);
    return 0;
}

int cmd_gram(const ScenarioConfig& cfg) {
    const KernelSystem ks(InnerFunction(cfg.theta), sequence_of(cfg, 0, 63));
    GramMatrix g = gram_closed_form(ks);
    riesz_bounds(g);
    write_gram(cfg.out / "gram", g, {{"theta", to_json(cfg.theta)}, {"sequence", to_json(ks.nodes)}});
    print({{"size", g.size()}, {"lambda_min", *g.lambda_min}, {"lambda_max", *g.lambda_max}});
    return 0;
}

int cmd_riesz(const ScenarioConfig& cfg) {
    const KernelSystem ks(InnerFunction(cfg.theta), sequence_of(cfg, -100, 99));
    std::vector<int> sizes = cfg.sizes;
    if (sizes.empty()) sizes = {ks.size() / 4, ks.size() / 2, ks.size()};
    const BasisReport rep = basis_report(ks, sizes, {});
    write_riesz_csv(cfg.out / "riesz.csv", rep);
    write_json(cfg.out / "basis.json", to_json(rep));
    print(to_json(rep));
    return 0;
}

int cmd_aob(const ScenarioConfig& cfg, std::vector<int> starts) {
    const KernelSystem ks(InnerFunction(cfg.theta), sequence_of(cfg, -40, 40));
    if (starts.empty()) {
        for (int n = std::max(ks.nodes.first_index, 0); n <= ks.nodes.last_index(); n += 5) starts.push_back(n);
    }
    const std::vector<AobTail> tails = aob_constants(gram_closed_form(ks), starts);
    CsvWriter w(cfg.out / "aob.csv", {"start", "c", "C"});
    json j = json::array();
    for (const AobTail& t : tails) {
        w << t.start << t.lower << t.upper;
        w.end_row();
        j.push_back({{"start", t.start}, {"c", t.lower}, {"C", t.upper}});
    }
    print(j);
    return 0;
}

int cmd_angle(const ScenarioConfig& cfg, std::vector<int> tails) {
    const SeparatedSequence seq = sequence_of(cfg, -64, 64);
    const TailPolicy tail = parse_tail(cfg.tail);
    const ClarkInner clark(recenter_weights(seq, tail), tail);
    const KernelSystem ks(InnerFunction(cfg.theta), seq);
    if (tails.empty()) tails = {5, 10, 20, 40};
    const int n = cfg.grid > 0 ? cfg.grid : 1 << 17;
    CsvWriter w(cfg.out / "angle.csv", {"N", "cosine", "tail_lambda_min", "resolution"});
    json j = json::array();
    for (const int t : tails) {
        const AngleResult a = subspace_angle_cosine(ks, clark, t, seq.last_index(), n);
        w << t << a.cosine << a.tail_lambda_min << n;
        w.end_row();
        j.push_back({{"N", t}, {"cosine", a.cosine}, {"tail_lambda_min", a.tail_lambda_min}});
    }
    print(j);
    return 0;
}

int cmd_toeplitz(const ScenarioConfig& cfg, const std::string& kind, int power) {
    std::vector<int> sizes = cfg.sizes;
    if (sizes.empty()) sizes = {128, 256, 512};
    int n = cfg.grid > 0 ? cfg.grid : default_resolution(sizes);
    std::optional<Symbol> u;
    if (kind == "phi") {
        u = Symbol::cayley_power(power);
    } else if (kind == "jump") {
        u = Symbol::raw([](double t) { return t > 0 ? kI : Complex(1.0, 0.0); }, "jump");
    } else if (kind == "inner-pair") {
        const SeparatedSequence seq = sequence_of(cfg, -64, 64);
        const TailPolicy tail = parse_tail(cfg.tail);
        u = Symbol::inner_pair(InnerFunction(cfg.theta), InnerFunction(ClarkInner(recenter_weights(seq, tail), tail)));
        if (cfg.grid == 0) n = std::max(n, 1 << 15);
    } else {
        throw Error(ErrorKind::ConfigError, "symbol must be inner-pair, phi or jump: " + kind);
    }
    const UnitaryCompactEvidence uc = unitary_plus_compact_verdict(*u, sizes, cfg.tau, n);
    json j = {{"symbol", u->describe()}, {"resolution", n}, {"unitary_plus_compact", to_json(uc)}};
    if (sizes.size() >= 3) j["invertibility"] = to_json(invertibility_verdict(*u, sizes, cfg.tau_inv, n));
    write_spectrum_csv(cfg.out / "spectrum.csv", uc.spectrum);
    write_json(cfg.out / "verdicts.json", j);
    print(j);
    return 0;
}

int cmd_scenario_run(const ScenarioConfig& cfg) {
    const ScenarioResult r = run_scenario(cfg);
    for (const Check& c : r.checks) {
        std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << ": " << format_double(c.value) << ' '
                  << c.relation << ' ' << format_double(c.threshold) << '\n';
    }
    std::cout << r.scenario << ": " << (r.passed() ? "passed" : "failed") << " (report: "
              << (cfg.out / "report.json").string() << ")\n";
    return r.passed() ? 0 : 2;
}

int cmd_scenario_list(const std::string& filter, bool as_json) {
    const std::vector<ScenarioInfo> list = list_scenarios(filter);
    if (as_json) {
        json j = json::array();
        for (const ScenarioInfo& s : list) j.push_back({{"name", s.name}, {"description", s.description}, {"defaults", s.defaults}});
        print(j);
        return 0;
    }
    for (const ScenarioInfo& s : list) {
        std::cout << s.name << "\n    " << s.description << "\n    defaults: " << s.defaults.dump() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Meromorphic inner functions, model-space kernels and Toeplitz sections"};
    app.set_version_flag("--version", std::string(MIF_VERSION));
    app.require_subcommand(1);

    Common common;
    std::string symbol = "inner-pair";
    int power = 1;
    std::vector<int> starts, tails;
    std::string scenario_name, filter;
    bool as_json = false;

    CLI::App* validate = app.add_subcommand("validate", "check separation and weights of a node sequence");
    CLI::App* clark = app.add_subcommand("clark", "Clark inner function of a sequence: circle trace");
    CLI::App* gram = app.add_subcommand("gram", "closed-form Gram of normalized kernels");
    CLI::App* riesz = app.add_subcommand("riesz", "Riesz bounds on nested windows");
    CLI::App* aob = app.add_subcommand("aob", "tail Riesz constants");
    CLI::App* angle = app.add_subcommand("angle", "angle between kernel tails and I H^2");
    CLI::App* toeplitz = app.add_subcommand("toeplitz", "Toeplitz section spectra and verdicts");
    CLI::App* scenario = app.add_subcommand("scenario", "run or list the scenario suite");
    scenario->require_subcommand(1);
    CLI::App* run = scenario->add_subcommand("run", "run one scenario");
    CLI::App* list = scenario->add_subcommand("list", "list scenarios");

    for (CLI::App* a : {validate, clark, gram, riesz, aob, angle, toeplitz, run}) add_common(a, common);
    aob->add_option("--starts", starts, "tail start indices");
    angle->add_option("--tails", tails, "tail start indices");
    toeplitz->add_option("--symbol", symbol, "inner-pair | phi | jump")->capture_default_str();
    toeplitz->add_option("--power", power, "k for the symbol phi^k")->capture_default_str();
    run->add_option("name", scenario_name, "scenario name")->required();
    list->add_option("--filter", filter, "substring filter on names");
    list->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (list->parsed()) return cmd_scenario_list(filter, as_json);
        if (run->parsed()) return cmd_scenario_run(resolve(run, common, scenario_name));
        if (validate->parsed()) return cmd_validate(resolve(validate, common, ""));
        if (clark->parsed()) return cmd_clark(resolve(clark, common, ""));
        if (gram->parsed()) return cmd_gram(resolve(gram, common, ""));
        if (riesz->parsed()) return cmd_riesz(resolve(riesz, common, ""));
        if (aob->parsed()) return cmd_aob(resolve(aob, common, ""), starts);
        if (angle->parsed()) return cmd_angle(resolve(angle, common, ""), tails);
        if (toeplitz->parsed()) return cmd_toeplitz(resolve(toeplitz, common, ""), symbol, power);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: ExecutionError: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
