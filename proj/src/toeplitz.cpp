#include "mif/toeplitz.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mif {

Symbol Symbol::inner_pair(InnerFunction theta, InnerFunction inner) {
    return Symbol(InnerPair{std::move(theta), std::move(inner)});
}

Symbol Symbol::synthesized(SynthesizedSymbol s) { return Symbol(std::move(s)); }

Symbol Symbol::raw(std::function<Complex(double)> eval, std::string name) {
    return Symbol(Raw{std::move(eval), std::move(name)});
}

Symbol Symbol::cayley_power(int k) {
    return raw([k](double t) { return std::pow((t - kI) / (t + kI), k); }, "phi^" + std::to_string(k));
}

Complex Symbol::operator()(double t) const {
    return std::visit(
        [t](const auto& r) -> Complex {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, InnerPair>) {
                return r.theta(Complex(t, 0.0)) * std::conj(r.inner(Complex(t, 0.0)));
            } else if constexpr (std::is_same_v<R, SynthesizedSymbol>) {
                return r(t);
            } else {
                return r.eval(t);
            }
        },
        *rep_);
}

CircleTrace Symbol::trace(int resolution) const {
    if (const auto* s = std::get_if<SynthesizedSymbol>(rep_.get())) return s->trace(resolution);
    return transfer_symbol([this](double t) { return (*this)(t); }, resolution);
}

std::optional<double> Symbol::exact_phase_increment(double a, double b) const {
    if (const auto* p = std::get_if<InnerPair>(rep_.get())) {
        return p->theta.argument_increment(a, b) - p->inner.argument_increment(a, b);
    }
    return std::nullopt;
}

Symbol Symbol::conjugate() const {
    Symbol self = *this;
    return raw([self](double t) { return std::conj(self(t)); }, "conj(" + describe() + ")");
}

std::string Symbol::describe() const {
    return std::visit(
        [](const auto& r) -> std::string {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, InnerPair>) {
                return r.theta.describe() + " * conj(" + r.inner.describe() + ")";
            } else if constexpr (std::is_same_v<R, SynthesizedSymbol>) {
                std::ostringstream os;
                os << "phi^" << r.winding() << " exp(i(" << r.c() << " + a + b~))";
                return os.str();
            } else {
                return r.name;
            }
        },
        *rep_);
}

namespace {

void require_resolution(const CircleTrace& trace, int n) {
    if (trace.size() < 4 * n) {
        std::ostringstream os;
        os << "circle resolution " << trace.size() << " < 4 N = " << 4 * n;
        throw Error(ErrorKind::ResolutionTooLow, os.str());
    }
}

// Least-squares line through (x, y); returns slope and R^2.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return {0.0, 0.0};
    double mx = 0, my = 0;
    for (std::size_t j = 0; j < n; ++j) {
        mx += x[j];
        my += y[j];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t j = 0; j < n; ++j) {
        sxx += (x[j] - mx) * (x[j] - mx);
        sxy += (x[j] - mx) * (y[j] - my);
        syy += (y[j] - my) * (y[j] - my);
    }
    if (sxx == 0.0) return {0.0, 0.0};
    const double slope = sxy / sxx;
    const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return {slope, r2};
}

}  // namespace

MatrixXcd toeplitz_section(const CircleTrace& trace, int n) {
    require_resolution(trace, n);
    MatrixXcd t(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) t(j, k) = trace.coefficient(j - k);
    }
    return t;
}

MatrixXcd hankel_section(const CircleTrace& trace, int n) {
    require_resolution(trace, n);
    MatrixXcd h(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) h(j, k) = trace.coefficient(-1 - j - k);
    }
    return h;
}

MatrixXcd conjugate_hankel_section(const CircleTrace& trace, int n) {
    require_resolution(trace, n);
    MatrixXcd h(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) h(j, k) = std::conj(trace.coefficient(1 + j + k));
    }
    return h;
}

VectorXd singular_values(const MatrixXcd& m) {
    Eigen::BDCSVD<MatrixXcd> svd(m);
    return svd.singularValues();
}

WindingResult winding_number(const CircleTrace& trace) {
    const VectorXcd& s = trace.samples();
    const Eigen::Index n = s.size();
    WindingResult r;
    double total = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        const Complex a = s[m], b = s[(m + 1) % n];
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0) {
            throw Error(ErrorKind::UnwrapFailure, "symbol vanishes on the grid");
        }
        const double step = std::arg(b / a);
        r.max_jump = std::max(r.max_jump, std::abs(step));
        total += step;
    }
    if (r.max_jump > kMaxPhaseJump) {
        std::ostringstream os;
        os << "phase step " << r.max_jump << " exceeds " << kMaxPhaseJump << " at resolution " << n;
        throw Error(ErrorKind::UnwrapFailure, os.str());
    }
    const double turns = total / (2.0 * kPi);
    r.winding = static_cast<int>(std::lround(turns));
    r.residual = std::abs(turns - r.winding);
    return r;
}

namespace {

// Phase increment of u from angle a to angle b, splitting the interval while the
// principal step is too large to be trusted.
double phase_increment(const Symbol& u, double a, double b, Complex ua, Complex ub, int depth, double& max_jump) {
    const double step = std::arg(ub / ua);
    if (std::abs(step) <= 0.5 * kPi || depth >= kMaxBisections) {
        max_jump = std::max(max_jump, std::abs(step));
        return step;
    }
    double mid = 0.5 * (a + b);
    if (std::abs(std::sin(0.5 * mid)) < 1e-12) mid = a + 0.49 * (b - a);  // theta = 0 is t = infinity
    const Complex um = u(-1.0 / std::tan(0.5 * mid));
    if (std::abs(um) == 0.0) throw Error(ErrorKind::UnwrapFailure, "symbol vanishes on the boundary");
    return phase_increment(u, a, mid, ua, um, depth + 1, max_jump) +
           phase_increment(u, mid, b, um, ub, depth + 1, max_jump);
}

WindingResult adaptive_winding(const Symbol& symbol, const CircleTrace& trace) {
    const int resolution = trace.size();
    const VectorXcd& s = trace.samples();
    const VectorXd th = circle_angles(resolution);
    WindingResult r;
    double total = 0.0;
    // Closed-form increments are additive: one call covers every finite interval and only
    // the step through t = infinity is taken from the samples.
    const VectorXd t = cayley_nodes(resolution);
    const std::optional<double> exact = symbol.exact_phase_increment(t[0], t[resolution - 1]);
    if (exact) total = *exact;
    for (int m = exact ? resolution - 1 : 0; m < resolution; ++m) {
        const int next = (m + 1) % resolution;
        if (std::abs(s[m]) == 0.0 || std::abs(s[next]) == 0.0) {
            throw Error(ErrorKind::UnwrapFailure, "symbol vanishes on the grid");
        }
        const double b = next == 0 ? th[0] + 2.0 * kPi : th[next];
        total += phase_increment(symbol, th[m], b, s[m], s[next], 0, r.max_jump);
    }
    if (r.max_jump > kMaxPhaseJump) {
        std::ostringstream os;
        os << "phase step " << r.max_jump << " survives " << kMaxBisections << " bisections";
        throw Error(ErrorKind::UnwrapFailure, os.str());
    }
    const double turns = total / (2.0 * kPi);
    r.winding = static_cast<int>(std::lround(turns));
    r.residual = std::abs(turns - r.winding);
    return r;
}

}  // namespace

WindingResult winding_number(const Symbol& symbol, int resolution) {
    return adaptive_winding(symbol, symbol.trace(resolution));
}

HankelDecay hankel_decay(const MatrixXcd& h, double tau) {
    HankelDecay d;
    d.n = static_cast<int>(h.rows());
    d.sigma = singular_values(h);
    d.frobenius_sq = h.squaredNorm();
    if (d.sigma.size() == 0 || d.sigma[0] == 0.0) return d;
    for (Eigen::Index m = 0; m < d.sigma.size(); ++m) {
        if (d.sigma[m] < tau * d.sigma[0]) {
            d.decay_index = static_cast<int>(m);
            break;
        }
    }
    std::vector<double> x, y;
    for (Eigen::Index m = 1; m < d.sigma.size(); ++m) {
        if (d.sigma[m] <= 1e-13 * d.sigma[0]) break;
        x.push_back(std::log(static_cast<double>(m + 1)));
        y.push_back(std::log(d.sigma[m]));
    }
    d.exponent = fit_line(x, y).first;
    return d;
}

const char* to_string(CompactFlag f) {
    switch (f) {
        case CompactFlag::Compact: return "compact";
        case CompactFlag::NotCompact: return "not_compact";
        case CompactFlag::Unknown: return "unknown";
    }
    return "?";
}

CompactnessEvidence hankel_compactness(const CircleTrace& trace, int n, bool conjugate_symbol) {
    const auto section = [&](int k) {
        return conjugate_symbol ? conjugate_hankel_section(trace, k) : hankel_section(trace, k);
    };
    CompactnessEvidence e;
    e.n = n;
    const double small = section(n).squaredNorm();
    e.decay = hankel_decay(section(2 * n));
    const double large = e.decay.frobenius_sq;
    if (large < 1e-24) {
        e.increment = 0.0;
        e.flag = CompactFlag::Compact;
        return e;
    }
    e.increment = (large - small) / large;
    if (e.increment < kCompactIncrement) {
        e.flag = CompactFlag::Compact;
    } else if (e.increment > kNotCompactIncrement) {
        e.flag = CompactFlag::NotCompact;
    }
    return e;
}

int default_resolution(const std::vector<int>& sizes) {
    int top = sizes.empty() ? 1 : *std::max_element(sizes.begin(), sizes.end());
    int n = 4096;
    while (n < 4 * top) n *= 2;
    return n;
}

SectionSpectrum section_spectrum(const CircleTrace& trace, const std::vector<int>& sizes, double tau,
                                 const std::optional<WindingResult>& winding) {
    SectionSpectrum s;
    s.sizes = sizes;
    s.tau = tau;
    s.resolution = trace.size();
    s.winding = winding ? *winding : winding_number(trace);
    for (const int n : sizes) {
        const VectorXd sv = singular_values(toeplitz_section(trace, n));
        int out = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            if (std::abs(sv[k] - 1.0) > tau) ++out;
        }
        s.sigma_min.push_back(sv.size() ? sv.minCoeff() : 0.0);
        s.sigma_max.push_back(sv.size() ? sv.maxCoeff() : 0.0);
        s.outliers.push_back(out);
        s.cluster_fraction.push_back(n > 0 ? 1.0 - static_cast<double>(out) / n : 1.0);
        s.singular_values.push_back(sv);
    }
    return s;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Criterion c) {
    switch (c) {
        case Criterion::Pass: return "pass";
        case Criterion::Fail: return "fail";
        case Criterion::Unknown: return "unknown";
    }
    return "?";
}

namespace {

InvertibilityEvidence invertibility_impl(const CircleTrace& trace, const std::vector<int>& sizes, double tau_inv,
                                         const std::optional<WindingResult>& winding) {
    if (sizes.size() < 3) throw Error(ErrorKind::ConfigError, "invertibility sweep needs at least 3 sizes");
    InvertibilityEvidence e;
    e.tau_inv = tau_inv;
    e.spectrum = section_spectrum(trace, sizes, 0.1, winding);
    const auto& sm = e.spectrum.sigma_min;
    e.min_sigma = *std::min_element(sm.begin(), sm.end());
    const std::size_t k = sm.size();
    e.last_change = std::abs(sm[k - 1] - sm[k - 2]) / std::max(sm[k - 2], 1e-300);

    std::vector<double> x, y;
    for (std::size_t j = 0; j < k; ++j) {
        x.push_back(std::log(static_cast<double>(sizes[j])));
        y.push_back(std::log(std::max(sm[j], 1e-300)));
    }
    std::tie(e.fit_slope, e.fit_r2) = fit_line(x, y);

    if (e.spectrum.winding.winding != 0 || e.min_sigma < 1e-12) {
        e.verdict = Verdict::No;
    } else if (e.min_sigma > tau_inv && e.last_change < 0.2) {
        e.verdict = Verdict::Yes;
    } else if (e.fit_slope < -0.5 && e.fit_r2 > 0.9) {
        e.verdict = Verdict::No;
    }
    return e;
}

UnitaryCompactEvidence unitary_compact_impl(const CircleTrace& trace, const std::vector<int>& sizes, double tau,
                                            const std::optional<WindingResult>& winding);

}  // namespace

InvertibilityEvidence invertibility_verdict(const CircleTrace& trace, const std::vector<int>& sizes, double tau_inv) {
    return invertibility_impl(trace, sizes, tau_inv, std::nullopt);
}

InvertibilityEvidence invertibility_verdict(const Symbol& symbol, const std::vector<int>& sizes, double tau_inv,
                                            int resolution) {
    const int n = resolution > 0 ? resolution : default_resolution(sizes);
    const CircleTrace trace = symbol.trace(n);
    return invertibility_impl(trace, sizes, tau_inv, adaptive_winding(symbol, trace));
}

UnitaryCompactEvidence unitary_plus_compact_verdict(const CircleTrace& trace, const std::vector<int>& sizes,
                                                    double tau) {
    return unitary_compact_impl(trace, sizes, tau, std::nullopt);
}

namespace {

UnitaryCompactEvidence unitary_compact_impl(const CircleTrace& trace, const std::vector<int>& sizes, double tau,
                                            const std::optional<WindingResult>& winding) {
    if (sizes.empty()) throw Error(ErrorKind::ConfigError, "empty size sweep");
    UnitaryCompactEvidence e;
    e.spectrum = section_spectrum(trace, sizes, tau, winding);
    e.winding = e.spectrum.winding.winding == 0 ? Criterion::Pass : Criterion::Fail;

    if (sizes.size() >= 2) {
        e.outliers = Criterion::Pass;
        for (std::size_t j = 1; j < sizes.size(); ++j) {
            const double ratio = (e.spectrum.outliers[j] + 1.0) / (e.spectrum.outliers[j - 1] + 1.0);
            e.outlier_ratios.push_back(ratio);
            if (ratio >= kOutlierGrowthRatio) e.outliers = Criterion::Fail;
        }
    }

    const int half = std::max(1, *std::max_element(sizes.begin(), sizes.end()) / 2);
    e.hankel_u = hankel_compactness(trace, half, false);
    e.hankel_conj = hankel_compactness(trace, half, true);
    if (e.hankel_u.flag == CompactFlag::NotCompact || e.hankel_conj.flag == CompactFlag::NotCompact) {
        e.hankel = Criterion::Fail;
    } else if (e.hankel_u.flag == CompactFlag::Compact && e.hankel_conj.flag == CompactFlag::Compact) {
        e.hankel = Criterion::Pass;
    }

    const Criterion all[] = {e.winding, e.outliers, e.hankel};
    if (std::any_of(std::begin(all), std::end(all), [](Criterion c) { return c == Criterion::Fail; })) {
        e.verdict = Verdict::No;
    } else if (std::all_of(std::begin(all), std::end(all), [](Criterion c) { return c == Criterion::Pass; })) {
        e.verdict = Verdict::Yes;
    }
    return e;
}

}  // namespace

UnitaryCompactEvidence unitary_plus_compact_verdict(const Symbol& symbol, const std::vector<int>& sizes, double tau,
                                                    int resolution) {
    const int n = resolution > 0 ? resolution : default_resolution(sizes);
    const CircleTrace trace = symbol.trace(n);
    return unitary_compact_impl(trace, sizes, tau, adaptive_winding(symbol, trace));
}

}  // namespace mif
