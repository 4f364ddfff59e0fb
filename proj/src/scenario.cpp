#include "mif/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#ifndef MIF_VERSION
#define MIF_VERSION "unknown"
#endif

namespace mif {

// ---------------------------------------------------------------------------
// configuration

namespace {

const std::vector<double> kKadetsDeltas = {0.05, 0.15, 0.25, 0.35, 0.45};
const std::vector<int> kAngleTails = {5, 10, 20, 40};

std::string window_text(const std::pair<int, int>& w) {
    return std::to_string(w.first) + ".." + std::to_string(w.second);
}

}  // namespace

std::pair<int, int> parse_window(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw Error(ErrorKind::ConfigError, "window must look like a..b: " + text);
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const int lo = std::stoi(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        const int hi = std::stoi(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        if (lo > hi) throw Error(ErrorKind::ConfigError, "empty window " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::ConfigError, "window must look like a..b: " + text);
    }
}

TailPolicy parse_tail(const std::string& text) {
    if (text == "lattice") return TailPolicy::LatticeTail;
    if (text == "truncate") return TailPolicy::Truncate;
    throw Error(ErrorKind::ConfigError, "tail policy must be lattice or truncate: " + text);
}

json to_json(const ScenarioConfig& c) {
    json seq = {{"kind", c.sequence.kind},
                {"pattern", c.sequence.pattern},
                {"delta", c.sequence.delta},
                {"rate", c.sequence.rate},
                {"nu", c.sequence.nu},
                {"file", c.sequence.file}};
    return {{"scenario", c.scenario},
            {"out", c.out.generic_string()},
            {"seed", c.seed},
            {"grid", c.grid},
            {"window", c.window ? json(window_text(*c.window)) : json(nullptr)},
            {"sequence", seq},
            {"theta", to_json(c.theta)},
            {"tail", c.tail},
            {"clark_terms", c.clark_terms},
            {"sizes", c.sizes},
            {"deltas", c.deltas},
            {"tau", c.tau},
            {"tau_inv", c.tau_inv},
            {"aob_threshold", c.aob_threshold}};
}

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be an object");
    static const std::set<std::string> known = {"scenario", "out",   "seed",  "grid",   "window",  "sequence",
                                                "theta",    "tail",  "clark_terms", "sizes", "deltas", "tau",
                                                "tau_inv",  "aob_threshold"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw Error(ErrorKind::ConfigError, "unknown config key: " + key);
    }
    try {
        ScenarioConfig c = default_config(j.value("scenario", std::string()));
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("grid")) c.grid = j.at("grid").get<int>();
        if (j.contains("window") && !j.at("window").is_null()) c.window = parse_window(j.at("window").get<std::string>());
        if (j.contains("sequence")) {
            const json& s = j.at("sequence");
            c.sequence.kind = s.value("kind", c.sequence.kind);
            c.sequence.pattern = s.value("pattern", c.sequence.pattern);
            c.sequence.delta = s.value("delta", c.sequence.delta);
            c.sequence.rate = s.value("rate", c.sequence.rate);
            c.sequence.nu = s.value("nu", c.sequence.nu);
            c.sequence.file = s.value("file", c.sequence.file);
        }
        if (j.contains("theta")) c.theta = inner_spec_from_json(j.at("theta"));
        if (j.contains("tail")) c.tail = j.at("tail").get<std::string>();
        if (j.contains("clark_terms")) c.clark_terms = j.at("clark_terms").get<int>();
        if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<int>>();
        if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<double>>();
        if (j.contains("tau")) c.tau = j.at("tau").get<double>();
        if (j.contains("tau_inv")) c.tau_inv = j.at("tau_inv").get<double>();
        if (j.contains("aob_threshold")) c.aob_threshold = j.at("aob_threshold").get<double>();
        parse_tail(c.tail);
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }
}

SeparatedSequence build_sequence(const SequenceConfig& c, int lo, int hi, std::uint64_t seed) {
    if (c.kind == "lattice") return lattice_sequence(lo, hi, c.nu);
    if (c.kind == "decaying") return decaying_sequence(lo, hi, c.delta, c.rate, c.nu);
    if (c.kind == "file") return read_nodes_csv(c.file, c.nu);
    if (c.kind == "perturbed") {
        if (c.pattern == "alternating") return alternating_sequence(lo, hi, c.delta, c.nu);
        if (c.pattern == "random") {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> jitter(-c.delta, c.delta);
            VectorXd l(hi - lo + 1);
            for (int n = lo; n <= hi; ++n) l[n - lo] = n + jitter(rng);
            return validate_sequence(l, VectorXd::Constant(l.size(), c.nu), lo);
        }
        throw Error(ErrorKind::ConfigError, "unknown perturbation pattern: " + c.pattern);
    }
    throw Error(ErrorKind::ConfigError, "unknown sequence kind: " + c.kind);
}

bool ScenarioResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

// ---------------------------------------------------------------------------
// catalog

namespace {

struct Entry {
    const char* name;
    const char* description;
};

const Entry kCatalog[] = {
    {"clark-identity",
     "Clark inner function of the integers with weights 1/pi against exp(2 pi i z) on the closed strip "
     "0 <= Im z <= 1, plus node values I = 1 and |I'| = 2/nu"},
    {"lattice-gram", "normalized kernels of exp(2 pi i z) at integer nodes are orthonormal"},
    {"kadets-sweep", "lower Riesz bound of kernels at n + delta (-1)^n as delta grows"},
    {"aob-decay",
     "perturbation n + 0.3 * 2^-|n|: tail Riesz constants approach 1 and the angle between kernel tails "
     "and I H^2 closes"},
    {"theorem4-crosscheck",
     "Riesz-basis property of the kernel Gram against invertibility of the Toeplitz operator with symbol "
     "Theta conj(I), across the alternating perturbation sweep"},
    {"theorem5-crosscheck",
     "asymptotically orthonormal tails, a unitary-plus-compact Toeplitz operator and vanishing angles "
     "co-occur for a decaying perturbation and break for the control n + 0.2 (-1)^n"},
    {"hilbert-pairs",
     "Hilbert transform with the t/(1+t^2) correction against a closed-form pair, principal-value "
     "quadrature and double-transform negation"},
    {"verify-lemmas",
     "strip modulus bound, kernel identity for (1 - I) combinations, horizontal-line norm bound and the "
     "lower bound of T_{1-I} on K_Theta"},
};

}  // namespace

ScenarioConfig default_config(const std::string& name) {
    ScenarioConfig c;
    c.scenario = name;
    if (name == "lattice-gram") {
        c.sizes = {64};
    } else if (name == "kadets-sweep" || name == "theorem4-crosscheck") {
        c.deltas = kKadetsDeltas;
        c.sizes = {50, 100, 200};
        c.sequence.kind = "perturbed";
        c.grid = name == "theorem4-crosscheck" ? 1 << 20 : 0;
    } else if (name == "aob-decay") {
        c.sequence = {"decaying", "alternating", 0.3, 2.0, 1.0 / kPi, ""};
        c.window = std::pair{-64, 64};
        c.sizes = kAngleTails;
        c.grid = 1 << 17;
    } else if (name == "theorem5-crosscheck") {
        c.sequence = {"decaying", "alternating", 0.3, 2.0, 1.0 / kPi, ""};
        c.window = std::pair{-64, 64};
        c.sizes = {128, 256, 512};
        c.grid = 1 << 17;
    }
    return c;
}

std::vector<ScenarioInfo> list_scenarios(const std::string& filter) {
    std::vector<ScenarioInfo> out;
    for (const Entry& e : kCatalog) {
        if (!filter.empty() && std::string(e.name).find(filter) == std::string::npos) continue;
        json d = to_json(default_config(e.name));
        d.erase("scenario");
        d.erase("out");
        out.push_back({e.name, e.description, d});
    }
    return out;
}

// ---------------------------------------------------------------------------
// helpers

namespace {

Check below(const std::string& name, double value, double threshold) {
    return {name, value, threshold, value < threshold, "<"};
}

Check at_least(const std::string& name, double value, double threshold) {
    return {name, value, threshold, value >= threshold, ">="};
}

Check flag(const std::string& name, bool ok) { return {name, ok ? 1.0 : 0.0, 1.0, ok, "=="}; }

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t j = 0; j < order.size();) {
        std::size_t k = j;
        while (k + 1 < order.size() && v[order[k + 1]] == v[order[j]]) ++k;
        for (std::size_t m = j; m <= k; ++m) r[order[m]] = 0.5 * (j + k);
        j = k + 1;
    }
    return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n - 1) / 2;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        sab += (ra[j] - mean) * (rb[j] - mean);
        saa += (ra[j] - mean) * (ra[j] - mean);
        sbb += (rb[j] - mean) * (rb[j] - mean);
    }
    return saa > 0 && sbb > 0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t j = 1; j < v.size(); ++j) {
        if (!(v[j] < v[j - 1])) return false;
    }
    return true;
}

struct Context {
    const ScenarioConfig& cfg;
    ScenarioResult& result;

    std::filesystem::path file(const std::string& name) {
        result.files.push_back(name);
        return cfg.out / name;
    }
};

std::pair<int, int> window_or(const ScenarioConfig& c, int lo, int hi) { return c.window.value_or(std::pair{lo, hi}); }

// ---------------------------------------------------------------------------
// scenarios

void clark_identity(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const int half = c.clark_terms / 2;
    const auto [lo, hi] = window_or(c, -half, half);
    const SeparatedSequence seq = build_sequence(c.sequence, lo, hi, c.seed);
    const ClarkInner clark(seq, parse_tail(c.tail));
    const bool lattice = c.sequence.kind == "lattice" && std::abs(c.sequence.nu - 1.0 / kPi) < 1e-15;

    json& r = ctx.result.report;
    r["window"] = {lo, hi};
    r["herglotz_offset"] = clark.herglotz_offset();
    if (lattice) {
        CsvWriter w(ctx.file("clark_deviation.csv"), {"index", "re", "im", "abs_err"});
        double worst = 0.0;
        int index = 0;
        for (int a = 0; a < 20; ++a) {
            for (int b = 0; b < 10; ++b) {
                const Complex z(-0.5 + a / 19.0, b / 9.0);
                const double err = std::abs(clark(z) - std::exp(2.0 * kPi * kI * z));
                worst = std::max(worst, err);
                w << index++ << z.real() << z.imag() << err;
                w.end_row();
            }
        }
        r["max_deviation"] = worst;
        r["test_points"] = index;
        ctx.result.checks.push_back(below("max |I - exp(2 pi i z)|", worst, 1e-4));
    }

    // Node values and derivatives at the 20 most central nodes.
    const int centre = (seq.first_index + seq.last_index()) / 2;
    const int first = std::max(seq.first_index, centre - 10);
    const int last = std::min(seq.last_index(), first + 19);
    double value_err = 0.0, deriv_err = 0.0;
    CsvWriter w(ctx.file("nodes.csv"), {"index", "value", "I_minus_1", "deriv_exact", "deriv_numeric"});
    for (int n = first; n <= last; ++n) {
        const double l = seq.lambda(n);
        const double exact = clark.node_derivative(n);
        const double h = 1e-5;
        const double numeric = std::abs((clark(Complex(l + h, 0.0)) - clark(Complex(l - h, 0.0))) / (2.0 * h));
        const double verr = std::abs(clark(Complex(l, 0.0)) - 1.0);
        value_err = std::max(value_err, verr);
        deriv_err = std::max(deriv_err, std::abs(numeric - exact) / exact);
        w << n << l << verr << exact << numeric;
        w.end_row();
    }
    r["node_value_error"] = value_err;
    r["node_derivative_rel_error"] = deriv_err;
    ctx.result.checks.push_back(below("max |I(lambda_n) - 1|", value_err, 1e-6));
    ctx.result.checks.push_back(below("max rel err |I'(lambda_n)| vs 2/nu_n", deriv_err, 1e-3));
}

void lattice_gram(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const int n = c.sizes.empty() ? 64 : c.sizes.front();
    const auto [lo, hi] = window_or(c, 0, n - 1);
    KernelSystem ks(InnerFunction(c.theta), lattice_sequence(lo, hi));
    GramMatrix g = gram_closed_form(ks);
    riesz_bounds(g);
    const double off = (g.entries - MatrixXcd::Identity(g.size(), g.size())).cwiseAbs().maxCoeff();
    write_gram(ctx.file("gram"), g, {{"theta", to_json(c.theta)}, {"nodes", "integers"}});
    ctx.result.files.back() = "gram.csv";
    ctx.result.files.push_back("gram.json");
    ctx.result.report["size"] = g.size();
    ctx.result.report["max_offdiagonal"] = off;
    ctx.result.report["riesz"] = {*g.lambda_min, *g.lambda_max};
    ctx.result.checks.push_back(below("max |G - Id|", off, 1e-12));
}

SeparatedSequence kadets_nodes(const ScenarioConfig& c, double delta, int lo, int hi) {
    SequenceConfig s = c.sequence;
    s.delta = delta;
    return build_sequence(s, lo, hi, c.seed);
}

void kadets_sweep(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const int big = *std::max_element(c.sizes.begin(), c.sizes.end());
    CsvWriter w(ctx.file("riesz.csv"), {"delta", "N", "c", "C"});
    std::vector<double> lower;
    json rows = json::array();
    for (const double d : c.deltas) {
        KernelSystem ks(InnerFunction(c.theta), kadets_nodes(c, d, -big / 2, big - big / 2 - 1));
        const BasisReport rep = basis_report(ks, c.sizes, {});
        for (std::size_t j = 0; j < c.sizes.size(); ++j) {
            w << d << c.sizes[j] << rep.lower[j] << rep.upper[j];
            w.end_row();
        }
        lower.push_back(rep.lower.back());
        rows.push_back({{"delta", d}, {"basis", to_json(rep)}});
    }
    ctx.result.report["sweep"] = rows;
    ctx.result.checks.push_back(flag("c(delta) strictly decreasing", strictly_decreasing(lower)));
}

void theorem4_crosscheck(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const int big = *std::max_element(c.sizes.begin(), c.sizes.end());
    const int grid = c.grid > 0 ? c.grid : 1 << 20;
    const InnerFunction theta(c.theta);
    CsvWriter table(ctx.file("crosscheck.csv"),
                    {"delta", "N", "c", "sigma_min", "gram_verdict", "toeplitz_verdict", "agree"});
    CsvWriter spectra(ctx.file("spectra.csv"), {"delta", "N", "k", "sigma_k"});
    std::vector<double> lower, sigma;
    bool agree_all = true;
    json rows = json::array();
    for (const double d : c.deltas) {
        KernelSystem ks(theta, kadets_nodes(c, d, -big / 2, big - big / 2 - 1));
        const BasisReport rep = basis_report(ks, c.sizes, {});
        const SeparatedSequence clark_nodes =
            recenter_weights(kadets_nodes(c, d, -big / 2, big - big / 2), parse_tail(c.tail));
        const Symbol u = Symbol::inner_pair(theta, InnerFunction(ClarkInner(clark_nodes, parse_tail(c.tail))));
        const InvertibilityEvidence inv = invertibility_verdict(u, c.sizes, c.tau_inv, grid);
        const bool toeplitz_yes = inv.verdict == Verdict::Yes;
        const bool agree = rep.riesz_verdict == toeplitz_yes && inv.verdict != Verdict::Inconclusive;
        agree_all = agree_all && agree;
        lower.push_back(rep.lower.back());
        sigma.push_back(inv.spectrum.sigma_min.back());
        table << d << big << rep.lower.back() << inv.spectrum.sigma_min.back()
              << std::string(rep.riesz_verdict ? "riesz" : "not_riesz") << std::string(to_string(inv.verdict))
              << std::string(agree ? "yes" : "no");
        table.end_row();
        for (std::size_t j = 0; j < c.sizes.size(); ++j) {
            const VectorXd& sv = inv.spectrum.singular_values[j];
            for (Eigen::Index k = 0; k < sv.size(); ++k) {
                spectra << d << c.sizes[j] << static_cast<int>(k) << sv[k];
                spectra.end_row();
            }
        }
        rows.push_back({{"delta", d}, {"basis", to_json(rep)}, {"invertibility", to_json(inv)}, {"agree", agree}});
    }
    const double rho = spearman(lower, sigma);
    ctx.result.report["sweep"] = rows;
    ctx.result.report["rank_correlation"] = rho;
    ctx.result.report["resolution"] = grid;
    ctx.result.checks.push_back(flag("c(delta) strictly decreasing", strictly_decreasing(lower)));
    ctx.result.checks.push_back(at_least("rank correlation c vs sigma_min", rho, 1.0 - 1e-12));
    ctx.result.checks.push_back(flag("Gram and Toeplitz verdicts agree", agree_all));
}

struct Signatures {
    std::vector<AobTail> tails;
    double tail_deviation = 0.0;
    bool aob = false;
    UnitaryCompactEvidence uc;
    std::vector<AngleResult> angles;
    bool angle_decreasing = false;
    bool all() const { return aob && uc.verdict == Verdict::Yes && angle_decreasing; }
};

// Tail constants on [-40, 40], sections over `sizes`, angles for tails starting at `angle_tails`.
Signatures signatures(const SeparatedSequence& seq, const ScenarioConfig& c, const std::vector<int>& sizes,
                      const std::vector<int>& angle_tails, int grid) {
    Signatures s;
    const InnerFunction theta(c.theta);
    const KernelSystem ks(theta, seq);
    const int g_lo = std::max(seq.first_index, -40), g_hi = std::min(seq.last_index(), 40);
    const GramMatrix g = gram_closed_form(ks, g_lo, g_hi);
    std::vector<int> starts;
    for (int n = 11; n <= std::min(30, g_hi); ++n) starts.push_back(n);
    s.tails = aob_constants(g, starts);
    for (const AobTail& t : s.tails) s.tail_deviation = std::max(s.tail_deviation, t.deviation());
    s.aob = !s.tails.empty() && s.tail_deviation < c.aob_threshold;

    const TailPolicy tail = parse_tail(c.tail);
    const ClarkInner clark(recenter_weights(seq, tail), tail);
    if (!sizes.empty()) {
        s.uc = unitary_plus_compact_verdict(Symbol::inner_pair(theta, InnerFunction(clark)), sizes, c.tau, grid);
    }
    std::vector<double> cos;
    for (const int n : angle_tails) {
        s.angles.push_back(subspace_angle_cosine(ks, clark, n, seq.last_index(), grid));
        cos.push_back(s.angles.back().cosine);
    }
    s.angle_decreasing = cos.size() >= 2 && strictly_decreasing(cos);
    return s;
}

json to_json(const Signatures& s) {
    json tails = json::array(), angles = json::array();
    for (const AobTail& t : s.tails) tails.push_back({{"start", t.start}, {"c", t.lower}, {"C", t.upper}});
    for (const AngleResult& a : s.angles) {
        angles.push_back({{"tail_start", a.tail_start},
                          {"tail_end", a.tail_end},
                          {"cosine", a.cosine},
                          {"tail_lambda_min", a.tail_lambda_min},
                          {"resolution", a.resolution}});
    }
    return {{"aob_tails", tails},
            {"aob_max_deviation", s.tail_deviation},
            {"aob", s.aob},
            {"unitary_plus_compact", to_json(s.uc)},
            {"angles", angles},
            {"angle_decreasing", s.angle_decreasing},
            {"all_signatures", s.all()}};
}

void write_signature_files(Context& ctx, const std::string& prefix, const Signatures& s) {
    CsvWriter tails(ctx.file(prefix + "aob.csv"), {"start", "c", "C"});
    for (const AobTail& t : s.tails) {
        tails << t.start << t.lower << t.upper;
        tails.end_row();
    }
    CsvWriter angles(ctx.file(prefix + "angle.csv"), {"N", "cosine", "tail_lambda_min", "resolution"});
    for (const AngleResult& a : s.angles) {
        angles << a.tail_start << a.cosine << a.tail_lambda_min << a.resolution;
        angles.end_row();
    }
    if (!s.uc.spectrum.sizes.empty()) write_spectrum_csv(ctx.file(prefix + "spectrum.csv"), s.uc.spectrum);
}

void aob_decay(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const auto [lo, hi] = window_or(c, -64, 64);
    const SeparatedSequence seq = build_sequence(c.sequence, lo, hi, c.seed);
    const Signatures s = signatures(seq, c, {}, c.sizes, c.grid > 0 ? c.grid : 1 << 17);
    write_signature_files(ctx, "", s);
    ctx.result.report["signatures"] = to_json(s);
    ctx.result.checks.push_back(below("max |c_N - 1|, |C_N - 1| beyond index 10", s.tail_deviation, c.aob_threshold));
    ctx.result.checks.push_back(flag("angle cosine decreasing", s.angle_decreasing));
}

void theorem5_crosscheck(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const auto [lo, hi] = window_or(c, -64, 64);
    const int grid = c.grid > 0 ? c.grid : 1 << 17;
    const Signatures main = signatures(build_sequence(c.sequence, lo, hi, c.seed), c, c.sizes, kAngleTails, grid);
    const Signatures control = signatures(alternating_sequence(lo, hi, 0.2, c.sequence.nu), c, c.sizes, kAngleTails, grid);
    write_signature_files(ctx, "decaying_", main);
    write_signature_files(ctx, "control_", control);
    ctx.result.report["decaying"] = to_json(main);
    ctx.result.report["control"] = to_json(control);
    ctx.result.checks.push_back(flag("decaying: AOB tails within threshold", main.aob));
    ctx.result.checks.push_back(flag("decaying: unitary plus compact", main.uc.verdict == Verdict::Yes));
    ctx.result.checks.push_back(flag("decaying: angle cosine decreasing", main.angle_decreasing));
    ctx.result.checks.push_back(flag("control: at least one signature fails", !control.all()));
}

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

void hilbert_pairs(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    const LineFunction pair{[](double t) { return 1.0 / (1.0 + t * t); }, DecayClass::L1Pi, 0.0};
    const VectorXd xs = VectorXd::LinSpaced(41, -5.0, 5.0);
    const HilbertResult h = hilbert_transform(pair, xs, c.grid);
    CsvWriter w(ctx.file("hilbert.csv"), {"x", "computed", "closed_form", "pv_quadrature"});
    double closed_err = 0.0, pv_err = 0.0;
    for (Eigen::Index j = 0; j < xs.size(); ++j) {
        const double x = xs[j];
        const double exact = x / (1.0 + x * x);
        const double pv = pv_hilbert(pair, x);
        closed_err = std::max(closed_err, std::abs(h.values[j] - exact));
        pv_err = std::max(pv_err, std::abs(h.values[j] - pv));
        w << x << h.values[j] << exact << pv;
        w.end_row();
    }

    // Odd, mean-zero bumps: applying the transform twice gives -b.
    const std::vector<LineFunction> tests = {
        {[](double t) { return bump(t - 1.0) - bump(t + 1.0); }, DecayClass::L2, 0.0},
        {[](double t) { return -2.0 * t / ((1.0 - t * t) * (1.0 - t * t)) * bump(t); }, DecayClass::L2, 0.0},
    };
    double twice_err = 0.0;
    for (const LineFunction& b : tests) {
        const int n = c.grid > 0 ? c.grid
                                 : adaptive_resolution([&](double t) { return Complex(b(t), 0.0); }, false);
        const HilbertResult once = hilbert_on_nodes(b, n);
        const CircleTrace again = conjugate_function(CircleTrace::from_samples(once.values.cast<Complex>()));
        const VectorXd t = cayley_nodes(n);
        for (int m = 0; m < n; ++m) {
            if (std::abs(t[m]) > 4.0) continue;
            twice_err = std::max(twice_err, std::abs(again.samples()[m].real() + b(t[m])));
        }
    }
    ctx.result.report["resolution"] = h.resolution;
    ctx.result.report["hilbert_constant"] = h.constant;
    ctx.result.report["closed_form_error"] = closed_err;
    ctx.result.report["pv_error"] = pv_err;
    ctx.result.report["double_transform_error"] = twice_err;
    ctx.result.checks.push_back(below("pair vs closed form", closed_err, 1e-3));
    ctx.result.checks.push_back(below("pair vs PV quadrature", pv_err, 1e-3));
    ctx.result.checks.push_back(below("double transform + b (|t| <= 4)", twice_err, 1e-4));
}

void verify_lemmas(Context& ctx) {
    const ScenarioConfig& c = ctx.cfg;
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;

    // Strip modulus bound on random explicit specs.
    CsvWriter strip(ctx.file("strip.csv"), {"trial", "zeros", "epsilon", "sup_derivative", "min_modulus", "bound"});
    double strip_margin = INFINITY;
    for (int trial = 0; trial < 20; ++trial) {
        InnerFunctionSpec spec;
        spec.exp_type = 3.0 * unit(rng);
        const int zeros = static_cast<int>(rng() % 9);
        for (int k = 0; k < zeros; ++k) spec.zeros.emplace_back(-5.0 + 10.0 * unit(rng), 0.2 + 2.8 * unit(rng));
        if (spec.exp_type == 0.0 && spec.zeros.empty()) spec.exp_type = 1.0;
        const InnerFunction f(spec);
        const double sup = f.sup_derivative();
        const double eps = (0.1 + 0.4 * unit(rng)) / sup;
        const VectorXd grid = default_boundary_grid(f, -10.0, 10.0);
        const double m = min_modulus_strip(f, eps, grid, sup);
        const double bound = 1.0 - eps * sup;
        strip_margin = std::min(strip_margin, m - bound);
        strip << trial << zeros << eps << sup << m << bound;
        strip.end_row();
    }
    ctx.result.checks.push_back(at_least("min |Theta| - (1 - eps ||Theta'||)", strip_margin, -1e-6));

    // Key identity for (1 - I) combinations.
    const int half = c.clark_terms / 2;
    const TailPolicy tail = parse_tail(c.tail);
    const ClarkInner clark(lattice_sequence(-half, half), tail);
    const InnerFunction theta(c.theta);
    double identity = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        VectorXcd a(8);
        for (int j = 0; j < 8; ++j) a[j] = Complex(normal(rng), normal(rng));
        std::vector<Complex> zs;
        for (int k = 0; k < 50; ++k) zs.emplace_back(-6.0 + 12.0 * unit(rng), 2.0 * unit(rng));
        identity = std::max(identity, verify_key_identity(clark, theta, clark.sequence(), -3, a, zs));
    }
    ctx.result.report["key_identity_residual"] = identity;
    ctx.result.checks.push_back(below("key identity residual", identity, 1e-6));

    // Horizontal-line norms of unit kernel combinations.
    const double sup = theta.sup_derivative();
    const double eps = 0.5 / sup;
    VectorXd nodes(6);
    for (int j = 0; j < 6; ++j) nodes[j] = 1.1 * (j - 3) + 0.6 * (unit(rng) - 0.5);
    const KernelSystem ks(theta, validate_sequence(nodes, VectorXd::Constant(6, 1.0 / kPi)));
    const GramMatrix g = gram_closed_form(ks);
    CsvWriter lines(ctx.file("horizontal.csv"), {"trial", "y", "norm", "bound"});
    double line_margin = INFINITY;
    const double bound = 1.0 / (1.0 - eps * sup);
    for (int trial = 0; trial < 3; ++trial) {
        VectorXcd a(6);
        for (int j = 0; j < 6; ++j) a[j] = Complex(normal(rng), normal(rng));
        a /= std::sqrt(a.dot(g.entries * a).real());
        const KernelEvaluator f = kernel_combination(ks, 0, a);
        for (const double y : {-0.9 * eps, 0.0, 0.9 * eps}) {
            const double norm = horizontal_norm(f, y);
            line_margin = std::min(line_margin, bound - norm);
            lines << trial << y << norm << bound;
            lines.end_row();
        }
    }
    ctx.result.checks.push_back(at_least("horizontal-line norm bound margin", line_margin, -1e-6));

    // Lower bound of T_{1-I} on K_I: (1 - I) f = f - I f with I f orthogonal to f.
    const InnerFunction inner(clark);
    const KernelSystem self(inner, clark.sequence());
    const double lower = t_one_minus_i_lower_bound(self, inner, -3, 3);
    ctx.result.report["t_one_minus_i_lower_bound"] = lower;
    ctx.result.checks.push_back(below("|T_{1-I} lower bound - sqrt 2| on K_I", std::abs(lower - std::sqrt(2.0)), 1e-4));
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
    ScenarioResult result;
    result.scenario = config.scenario;
    Context ctx{config, result};
    try {
        std::filesystem::create_directories(config.out);
        if (config.scenario == "clark-identity") clark_identity(ctx);
        else if (config.scenario == "lattice-gram") lattice_gram(ctx);
        else if (config.scenario == "kadets-sweep") kadets_sweep(ctx);
        else if (config.scenario == "aob-decay") aob_decay(ctx);
        else if (config.scenario == "theorem4-crosscheck") theorem4_crosscheck(ctx);
        else if (config.scenario == "theorem5-crosscheck") theorem5_crosscheck(ctx);
        else if (config.scenario == "hilbert-pairs") hilbert_pairs(ctx);
        else if (config.scenario == "verify-lemmas") verify_lemmas(ctx);
        else throw Error(ErrorKind::ConfigError, "unknown scenario: " + config.scenario);
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error(ErrorKind::ExecutionError, e.what());
    }

    json checks = json::array();
    for (const Check& ch : result.checks) {
        checks.push_back({{"name", ch.name},
                          {"value", ch.value},
                          {"relation", ch.relation},
                          {"threshold", ch.threshold},
                          {"passed", ch.passed}});
    }
    json report = {{"scenario", config.scenario},
                   {"version", MIF_VERSION},
                   {"config", to_json(config)},
                   {"passed", result.passed()},
                   {"checks", checks},
                   {"results", result.report},
                   {"files", result.files}};
    write_json(config.out / "report.json", report);
    result.report = report;
    return result;
}

}  // namespace mif
