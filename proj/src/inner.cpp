#include "mif/inner.hpp"

#include "mif/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mif {

int SeparatedSequence::position(int n) const {
    if (!contains(n)) {
        std::ostringstream os;
        os << "index " << n << " outside window [" << first_index << ", " << last_index() << "]";
        throw Error(ErrorKind::IndexOutOfWindow, os.str());
    }
    return n - first_index;
}

SeparatedSequence validate_sequence(const VectorXd& lambdas, const VectorXd& nus, int first_index) {
    if (lambdas.size() != nus.size()) {
        throw Error(ErrorKind::ConfigError, "lambdas and nus differ in length");
    }
    if (lambdas.size() < 2) {
        throw Error(ErrorKind::ConfigError, "a sequence needs at least two nodes");
    }
    const Eigen::Index n = lambdas.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!std::isfinite(lambdas[k])) {
            throw Error(ErrorKind::ConfigError, "non-finite node");
        }
        if (!(nus[k] > 0.0) || !std::isfinite(nus[k])) {
            std::ostringstream os;
            os << "weight " << nus[k] << " at input position " << k;
            throw Error(ErrorKind::WeightViolation, os.str());
        }
    }

    SeparatedSequence seq;
    seq.first_index = first_index;
    seq.permutation.resize(n);
    std::iota(seq.permutation.begin(), seq.permutation.end(), 0);
    std::stable_sort(seq.permutation.begin(), seq.permutation.end(),
                     [&](int a, int b) { return lambdas[a] < lambdas[b]; });
    seq.lambdas.resize(n);
    seq.nus.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        seq.lambdas[k] = lambdas[seq.permutation[k]];
        seq.nus[k] = nus[seq.permutation[k]];
    }

    seq.delta = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        seq.delta = std::min(seq.delta, seq.lambdas[k + 1] - seq.lambdas[k]);
    }
    if (!(seq.delta > 0.0)) {
        throw Error(ErrorKind::SeparationViolation, "coincident nodes");
    }

    const VectorXd& l = seq.lambdas;
    const VectorXd centering = l.array() / (l.array().square() + 1.0);
    const double centering_sum = centering.sum();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double s = 0.0;
        const double lj = l[j];
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k != j) s += 1.0 / (lj - l[k]);
        }
        s += centering_sum - centering[j];
        worst = std::max(worst, std::abs(s));
    }
    seq.discrepancy = worst;
    seq.weight_mass = (seq.nus.array() / (l.array().square() + 1.0)).sum();
    return seq;
}

SeparatedSequence lattice_sequence(int lo, int hi, double nu) {
    const int n = hi - lo + 1;
    VectorXd l(n);
    for (int k = 0; k < n; ++k) l[k] = lo + k;
    return validate_sequence(l, VectorXd::Constant(n, nu), lo);
}

SeparatedSequence alternating_sequence(int lo, int hi, double delta, double nu) {
    const int n = hi - lo + 1;
    VectorXd l(n);
    for (int k = 0; k < n; ++k) {
        const int idx = lo + k;
        l[k] = idx + (idx % 2 == 0 ? delta : -delta);
    }
    return validate_sequence(l, VectorXd::Constant(n, nu), lo);
}

SeparatedSequence decaying_sequence(int lo, int hi, double delta, double rate, double nu) {
    const int n = hi - lo + 1;
    VectorXd l(n);
    for (int k = 0; k < n; ++k) {
        const int idx = lo + k;
        l[k] = idx + delta * std::pow(rate, -std::abs(idx));
    }
    return validate_sequence(l, VectorXd::Constant(n, nu), lo);
}

// ---------------------------------------------------------------------------
// explicit specs

double InnerFunctionSpec::blaschke_mass() const {
    double s = 0.0;
    for (const Complex& z : zeros) s += z.imag() / (1.0 + std::norm(z));
    return s;
}

InnerFunctionSpec exponential_inner(double a) { return InnerFunctionSpec{a, {}}; }

namespace {

Complex blaschke_normalization(Complex zk) {
    if (std::abs(zk) <= 1.0) return 1.0;
    const Complex w = zk * zk + 1.0;
    return std::conj(w) / std::abs(w);
}

Complex upper_value(const InnerFunctionSpec& spec, Complex z) {
    Complex value = std::exp(kI * spec.exp_type * z);
    for (const Complex& zk : spec.zeros) {
        const Complex den = z - std::conj(zk);
        if (den == Complex(0.0, 0.0)) {
            throw Error(ErrorKind::PoleHit, "evaluation at a reflected zero");
        }
        value *= blaschke_normalization(zk) * (z - zk) / den;
    }
    return value;
}

}  // namespace

Complex eval_inner(const InnerFunctionSpec& spec, Complex z) {
    for (const Complex& zk : spec.zeros) {
        if (!(zk.imag() > 0.0)) {
            throw Error(ErrorKind::ConfigError, "Blaschke zero off the upper half-plane");
        }
    }
    if (z.imag() >= 0.0) return upper_value(spec, z);
    // Factorwise reflection: each factor below the axis is 1/conj(factor(conj z)).
    Complex value = std::exp(kI * spec.exp_type * z);
    const Complex zr = std::conj(z);
    for (const Complex& zk : spec.zeros) {
        const Complex upper = blaschke_normalization(zk) * (zr - zk) / (zr - std::conj(zk));
        if (upper == Complex(0.0, 0.0)) {
            throw Error(ErrorKind::PoleHit, "evaluation at a reflected zero");
        }
        value /= std::conj(upper);
    }
    return value;
}

double boundary_derivative(const InnerFunctionSpec& spec, double t) {
    double s = spec.exp_type;
    for (const Complex& zk : spec.zeros) s += 2.0 * zk.imag() / std::norm(t - zk);
    return s;
}

double argument_increment(const InnerFunctionSpec& spec, double a, double b) {
    // Each Blaschke factor contributes 2 arg(t - z_k), continuous in (-pi, 0) for real t.
    double s = spec.exp_type * (b - a);
    for (const Complex& zk : spec.zeros) s += 2.0 * (std::arg(b - zk) - std::arg(a - zk));
    return s;
}

namespace {

template <class F>
double golden_max(const F& f, double a, double b, int iters = 80) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + g * (b - a); fd = f(d);
        }
    }
    return std::max({fc, fd, f(0.5 * (a + b))});
}

template <class F>
double sampled_max(const F& f, double lo, double hi, double step) {
    const long count = std::clamp<long>(static_cast<long>(std::ceil((hi - lo) / step)), 2, 400000);
    const double h = (hi - lo) / count;
    std::vector<double> vals(count + 1);
    for (long k = 0; k <= count; ++k) vals[k] = f(lo + k * h);
    std::vector<long> order(count + 1);
    std::iota(order.begin(), order.end(), 0L);
    const long keep = std::min<long>(8, count + 1);
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      [&](long a, long b) { return vals[a] > vals[b]; });
    double best = vals[order[0]];
    for (long i = 0; i < keep; ++i) {
        const double c = lo + order[i] * h;
        best = std::max(best, golden_max(f, c - h, c + h));
    }
    return best;
}

}  // namespace

double sup_boundary_derivative(const InnerFunctionSpec& spec) {
    if (spec.zeros.empty()) return spec.exp_type;
    double xmin = spec.zeros.front().real(), xmax = xmin;
    double ymin = spec.zeros.front().imag(), ymax = ymin;
    for (const Complex& z : spec.zeros) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    auto f = [&](double t) { return boundary_derivative(spec, t); };
    double best = sampled_max(f, xmin - 3.0 * ymax, xmax + 3.0 * ymax, ymin / 8.0);
    for (const Complex& z : spec.zeros) best = std::max(best, f(z.real()));
    return best;
}

// ---------------------------------------------------------------------------
// Clark construction

ClarkInner::ClarkInner(SeparatedSequence seq, TailPolicy tail, double tail_weight)
    : seq_(std::move(seq)), tail_(tail), tail_weight_(tail_weight) {
    const VectorXd& l = seq_.lambdas;
    const VectorXd& nu = seq_.nus;
    centering_ = (nu.array() * l.array() / (l.array().square() + 1.0)).sum();

    // Bounded-increment test: the outer quarter of the window (by |lambda|) may
    // carry only a small share of sum nu/(1+lambda^2).
    if (seq_.size() >= 8) {
        std::vector<int> order(seq_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(l[a]) < std::abs(l[b]); });
        const int outer = std::max(1, seq_.size() / 4);
        double total = 0.0, outer_mass = 0.0;
        for (int i = 0; i < seq_.size(); ++i) {
            const double m = nu[order[i]] / (1.0 + l[order[i]] * l[order[i]]);
            total += m;
            if (i >= seq_.size() - outer) outer_mass += m;
        }
        if (outer_mass > 0.1 * total) {
            std::ostringstream os;
            os << "outer quarter carries " << outer_mass / total << " of sum nu/(1+lambda^2)";
            throw Error(ErrorKind::DivergenceDetected, os.str());
        }
    }

    if (tail_ == TailPolicy::LatticeTail) {
        const double a = seq_.last_index() + 1.0;
        const double p = 1.0 - seq_.first_index;
        tail_constant_hi_ = 0.5 * (digamma({a, -1.0}) + digamma({a, 1.0}));
        tail_constant_lo_ = 0.5 * (digamma({p, -1.0}) + digamma({p, 1.0}));
    }
}

int ClarkInner::nearest_position(double x) const {
    const VectorXd& l = seq_.lambdas;
    const auto* begin = l.data();
    const auto* end = l.data() + l.size();
    const auto* it = std::lower_bound(begin, end, x);
    if (it == end) return static_cast<int>(l.size()) - 1;
    if (it == begin) return 0;
    return (x - *(it - 1) <= *it - x) ? static_cast<int>(it - begin - 1) : static_cast<int>(it - begin);
}

Complex ClarkInner::tail_sum(Complex z) const {
    if (tail_ != TailPolicy::LatticeTail) return 0.0;
    const double a = seq_.last_index() + 1.0;
    const double p = 1.0 - seq_.first_index;
    return tail_weight_ * (-digamma(a - z) + tail_constant_hi_ + digamma(p + z) - tail_constant_lo_);
}

double ClarkInner::tail_derivative(double t) const {
    if (tail_ != TailPolicy::LatticeTail) return 0.0;
    const double a = seq_.last_index() + 1.0;
    const double p = 1.0 - seq_.first_index;
    return tail_weight_ * (trigamma(Complex(a - t, 0.0)) + trigamma(Complex(p + t, 0.0))).real();
}

long ClarkInner::nodes_in(double a, double b) const {
    if (b <= a) return 0;
    const double* l = seq_.lambdas.data();
    const double* end = l + seq_.lambdas.size();
    long count = std::upper_bound(l, end, b) - std::upper_bound(l, end, a);
    if (tail_ == TailPolicy::LatticeTail) {
        const double fa = std::floor(a), fb = std::floor(b);
        count += static_cast<long>(std::max(0.0, fb - std::max(fa, double(seq_.last_index()))));
        count += static_cast<long>(std::max(0.0, std::min(fb, double(seq_.first_index - 1)) - fa));
    }
    return count;
}

double ClarkInner::argument_increment(double a, double b) const {
    // arg I increases by exactly 2 pi between consecutive nodes, where I = 1.
    const auto angle = [this](double t) {
        const double p = std::arg((*this)(Complex(t, 0.0)));
        return p < 0.0 ? p + 2.0 * kPi : p;
    };
    return 2.0 * kPi * static_cast<double>(nodes_in(a, b)) + angle(b) - angle(a);
}

ClarkInner::Split ClarkInner::split(Complex z) const {
    const VectorXd& l = seq_.lambdas;
    const VectorXd& nu = seq_.nus;
    const int j = nearest_position(z.real());
    Complex rest = -centering_;
    for (Eigen::Index k = 0; k < l.size(); ++k) {
        if (k != j) rest += nu[k] / (l[k] - z);
    }
    rest += tail_sum(z);
    return {j, l[j] - z, rest};
}

Complex ClarkInner::herglotz(Complex z) const {
    const Split s = split(z);
    return seq_.nus[s.nearest] / s.distance + s.rest;
}

Complex ClarkInner::operator()(Complex z) const {
    const Split s = split(z);
    if (!std::isfinite(s.rest.real()) || !std::isfinite(s.rest.imag())) return 1.0;  // integer tail node
    const double nu = seq_.nus[s.nearest];
    const Complex num = nu + s.distance * (s.rest - kI);
    const Complex den = nu + s.distance * (s.rest + kI);
    if (den == Complex(0.0, 0.0)) {
        throw Error(ErrorKind::PoleHit, "G(z) = -i");
    }
    return num / den;
}

double ClarkInner::boundary_derivative(double t) const {
    const VectorXd& l = seq_.lambdas;
    const VectorXd& nu = seq_.nus;
    const Split s = split(Complex(t, 0.0));
    const double tail_d = tail_derivative(t);
    if (!std::isfinite(tail_d) || !std::isfinite(s.rest.real())) return 2.0 / tail_weight_;
    double rest_d = tail_d;
    for (Eigen::Index k = 0; k < l.size(); ++k) {
        if (k != s.nearest) rest_d += nu[k] / ((l[k] - t) * (l[k] - t));
    }
    const double d = s.distance.real();
    const double r = s.rest.real();
    const double nj = nu[s.nearest];
    return 2.0 * (nj + rest_d * d * d) / ((nj + r * d) * (nj + r * d) + d * d);
}

double ClarkInner::node_derivative(int n) const { return 2.0 / seq_.nu(n); }

double ClarkInner::herglotz_offset() const {
    double limit = 0.0;
    if (tail_ == TailPolicy::LatticeTail) {
        const int lo = seq_.first_index, hi = seq_.last_index();
        if (-lo > hi) {
            for (int k = hi + 1; k <= -lo; ++k) limit -= k / (k * static_cast<double>(k) + 1.0);
        } else {
            for (int m = -lo + 1; m <= hi; ++m) limit += m / (m * static_cast<double>(m) + 1.0);
        }
        limit *= tail_weight_;
    }
    return limit - centering_;
}

ClarkInner clark_inner(const SeparatedSequence& seq, TailPolicy tail) { return ClarkInner(seq, tail); }

double clark_derivative(const SeparatedSequence& seq, int n) { return 2.0 / seq.nu(n); }

SeparatedSequence recenter_weights(const SeparatedSequence& seq, TailPolicy tail, int support, double tail_weight) {
    const ClarkInner probe(seq, tail, tail_weight);
    const double offset = probe.herglotz_offset();
    const int count = std::clamp(support, 2, seq.size());
    std::vector<int> order(seq.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(seq.lambdas[a]) < std::abs(seq.lambdas[b]); });
    order.resize(count);

    VectorXd w(count);
    for (int i = 0; i < count; ++i) {
        const double l = seq.lambdas[order[i]];
        w[i] = l / (l * l + 1.0);
    }
    const VectorXd centered = w.array() - w.mean();
    const double spread = centered.squaredNorm();
    if (spread <= 1e-14) {
        throw Error(ErrorKind::WeightViolation, "central nodes cannot absorb the offset");
    }
    const double scale = offset / spread;

    SeparatedSequence out = seq;
    for (int i = 0; i < count; ++i) {
        out.nus[order[i]] += scale * centered[i];
        if (!(out.nus[order[i]] > 0.0)) {
            throw Error(ErrorKind::WeightViolation, "recentering drives a weight non-positive");
        }
    }
    out.weight_mass = (out.nus.array() / (out.lambdas.array().square() + 1.0)).sum();
    return out;
}

// ---------------------------------------------------------------------------
// InnerFunction

InnerFunction::InnerFunction(InnerFunctionSpec spec) : rep_(std::move(spec)) {}
InnerFunction::InnerFunction(ClarkInner clark) : rep_(std::move(clark)) {}

Complex InnerFunction::operator()(Complex z) const {
    if (const auto* s = spec()) return eval_inner(*s, z);
    return (*clark())(z);
}

double InnerFunction::boundary_derivative(double t) const {
    if (const auto* s = spec()) return mif::boundary_derivative(*s, t);
    return clark()->boundary_derivative(t);
}

double InnerFunction::argument_increment(double a, double b) const {
    if (const auto* s = spec()) return mif::argument_increment(*s, a, b);
    return clark()->argument_increment(a, b);
}

double InnerFunction::sup_derivative(double lo, double hi) const {
    if (const auto* s = spec()) return sup_boundary_derivative(*s);
    const ClarkInner& c = *clark();
    const double gap = c.sequence().delta;
    auto f = [&](double t) { return c.boundary_derivative(t); };
    double best = sampled_max(f, lo - 2.0 * gap, hi + 2.0 * gap, gap / 32.0);
    const VectorXd& l = c.sequence().lambdas;
    for (Eigen::Index k = 0; k < l.size(); ++k) {
        if (l[k] >= lo - 2.0 * gap && l[k] <= hi + 2.0 * gap) best = std::max(best, 2.0 / c.sequence().nus[k]);
    }
    return best;
}

std::string InnerFunction::describe() const {
    std::ostringstream os;
    if (const auto* s = spec()) {
        os << "explicit(a=" << s->exp_type << ", zeros=" << s->zeros.size() << ")";
    } else {
        const auto& c = *clark();
        os << "clark(window=[" << c.sequence().first_index << "," << c.sequence().last_index() << "], tail="
           << (c.tail_policy() == TailPolicy::LatticeTail ? "lattice" : "truncate") << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// boundary behaviour

VectorXd uniform_grid(double a, double b, int points) { return VectorXd::LinSpaced(points, a, b); }

VectorXd default_boundary_grid(const InnerFunction& f, double a, double b) {
    const double sup = f.sup_derivative(a, b);
    const double h_max = (kPi / 4.0) / std::max(sup, 1e-12);
    const int points = std::max(2, static_cast<int>(std::ceil((b - a) / (0.99 * h_max))) + 1);
    return uniform_grid(a, b, points);
}

BoundaryProfile boundary_profile(const InnerFunction& f, const VectorXd& grid) {
    if (grid.size() < 2) throw Error(ErrorKind::ConfigError, "grid needs two points");
    BoundaryProfile p;
    p.grid = grid;
    p.step = grid[1] - grid[0];
    const Eigen::Index n = grid.size();
    p.modulus_derivative.resize(n);
    p.argument.resize(n);
    VectorXcd values(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        values[j] = f(Complex(grid[j], 0.0));
        p.modulus_derivative[j] = f.boundary_derivative(grid[j]);
    }
    p.argument[0] = std::arg(values[0]);
    double mismatch = 0.0;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        const double h = grid[j + 1] - grid[j];
        const double expected = 0.5 * h * (p.modulus_derivative[j] + p.modulus_derivative[j + 1]);
        if (expected >= kPi) {
            std::ostringstream os;
            os << "phase increment " << expected << " near t=" << grid[j];
            throw Error(ErrorKind::UnwrapFailure, os.str());
        }
        const double jump = std::arg(values[j + 1] / values[j]);
        p.argument[j + 1] = p.argument[j] + jump;
        const double slope = 0.5 * (p.modulus_derivative[j] + p.modulus_derivative[j + 1]);
        mismatch = std::max(mismatch, std::abs(jump / h - slope) / std::max(slope, 1e-300));
    }
    p.max_fd_mismatch = mismatch;
    p.sup_derivative = p.modulus_derivative.maxCoeff();
    p.min_derivative = p.modulus_derivative.minCoeff();
    p.ratio = p.sup_derivative > 0.0 ? p.min_derivative / p.sup_derivative : 0.0;
    p.bounded_ratio = p.ratio >= kBoundedRatioThreshold;
    return p;
}

double min_modulus_strip(const InnerFunction& f, double epsilon, const VectorXd& grid, double sup_derivative,
                         int levels) {
    if (epsilon < 0.0 || epsilon * sup_derivative >= 1.0) {
        std::ostringstream os;
        os << "epsilon*sup|Theta'| = " << epsilon * sup_derivative;
        throw Error(ErrorKind::InvalidStrip, os.str());
    }
    double best = std::numeric_limits<double>::infinity();
    const int top = epsilon == 0.0 ? 0 : levels;
    for (int j = 0; j <= top; ++j) {
        const double y = top == 0 ? 0.0 : epsilon * j / top;
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            best = std::min(best, std::abs(f(Complex(grid[k], y))));
        }
    }
    return best;
}

double min_modulus_strip(const InnerFunction& f, double epsilon, const VectorXd& grid) {
    return min_modulus_strip(f, epsilon, grid, f.sup_derivative(grid.minCoeff(), grid.maxCoeff()));
}

}  // namespace mif
