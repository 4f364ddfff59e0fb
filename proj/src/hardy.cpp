#include "mif/hardy.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <sstream>

namespace mif {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

int signed_mode(Eigen::Index p, Eigen::Index n) { return static_cast<int>(p < n / 2 ? p : p - n); }

void require_power_of_two(int n) {
    if (!is_power_of_two(n) || n < 4) {
        std::ostringstream os;
        os << "circle resolution " << n << " is not a power of two";
        throw Error(ErrorKind::GridMismatch, os.str());
    }
}

}  // namespace

VectorXcd fourier_coefficients(const VectorXcd& samples) {
    const Eigen::Index n = samples.size();
    Eigen::FFT<double> fft;
    VectorXcd out(n);
    fft.fwd(out, samples);
    for (Eigen::Index p = 0; p < n; ++p) {
        const int k = signed_mode(p, n);
        out[p] *= std::polar(1.0 / static_cast<double>(n), -kPi * k / static_cast<double>(n));
    }
    return out;
}

VectorXcd fourier_samples(const VectorXcd& coeffs) {
    const Eigen::Index n = coeffs.size();
    VectorXcd shifted(n);
    for (Eigen::Index p = 0; p < n; ++p) {
        const int k = signed_mode(p, n);
        shifted[p] = coeffs[p] * std::polar(static_cast<double>(n), kPi * k / static_cast<double>(n));
    }
    Eigen::FFT<double> fft;
    VectorXcd out(n);
    fft.inv(out, shifted);
    return out;
}

CircleTrace CircleTrace::from_samples(VectorXcd samples) {
    require_power_of_two(static_cast<int>(samples.size()));
    CircleTrace t;
    t.coeffs_ = fourier_coefficients(samples);
    t.samples_ = std::move(samples);
    return t;
}

CircleTrace CircleTrace::from_coefficients(VectorXcd coeffs) {
    require_power_of_two(static_cast<int>(coeffs.size()));
    CircleTrace t;
    t.samples_ = fourier_samples(coeffs);
    t.coeffs_ = std::move(coeffs);
    return t;
}

Complex CircleTrace::coefficient(int k) const {
    const int n = size();
    if (k < -n / 2 || k >= n / 2) return 0.0;
    return coeffs_[k >= 0 ? k : k + n];
}

Complex CircleTrace::evaluate(double theta) const {
    const Eigen::Index n = coeffs_.size();
    Complex s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
        s += coeffs_[p] * std::polar(1.0, signed_mode(p, n) * theta);
    }
    return s;
}

VectorXd circle_angles(int n) {
    VectorXd th(n);
    for (int m = 0; m < n; ++m) th[m] = 2.0 * kPi * (m + 0.5) / n;
    return th;
}

VectorXd cayley_nodes(int n) {
    VectorXd t(n);
    for (int m = 0; m < n; ++m) {
        const double half = kPi * (m + 0.5) / n;
        t[m] = -std::cos(half) / std::sin(half);
    }
    return t;
}

double cayley_angle(double t) { return 2.0 * std::atan2(1.0, -t); }

CircleTrace cayley_transfer(const VectorXd& nodes, const VectorXcd& line_values) {
    const int n = static_cast<int>(nodes.size());
    require_power_of_two(n);
    if (line_values.size() != n) throw Error(ErrorKind::GridMismatch, "value count differs from node count");
    const VectorXd expected = cayley_nodes(n);
    for (int m = 0; m < n; ++m) {
        if (std::abs(nodes[m] - expected[m]) > 1e-12 * (1.0 + std::abs(expected[m]))) {
            throw Error(ErrorKind::GridMismatch, "line grid is not the Cayley pullback grid");
        }
    }
    VectorXcd samples(n);
    for (int m = 0; m < n; ++m) samples[m] = line_values[m] * (expected[m] + kI) / std::sqrt(2.0);
    return CircleTrace::from_samples(std::move(samples));
}

VectorXcd cayley_inverse(const CircleTrace& trace) {
    const VectorXd t = cayley_nodes(trace.size());
    VectorXcd out(trace.size());
    for (int m = 0; m < trace.size(); ++m) out[m] = trace.samples()[m] * std::sqrt(2.0) / (t[m] + kI);
    return out;
}

CircleTrace transfer_function(const std::function<Complex(double)>& f, int n) {
    require_power_of_two(n);
    const VectorXd t = cayley_nodes(n);
    VectorXcd samples(n);
    for (int m = 0; m < n; ++m) samples[m] = f(t[m]) * (t[m] + kI) / std::sqrt(2.0);
    return CircleTrace::from_samples(std::move(samples));
}

CircleTrace transfer_symbol(const std::function<Complex(double)>& u, int n) {
    require_power_of_two(n);
    const VectorXd t = cayley_nodes(n);
    VectorXcd samples(n);
    for (int m = 0; m < n; ++m) samples[m] = u(t[m]);
    return CircleTrace::from_samples(std::move(samples));
}

Complex circle_inner(const CircleTrace& f, const CircleTrace& g) {
    if (f.size() != g.size()) throw Error(ErrorKind::GridMismatch, "trace sizes differ");
    return 2.0 * kPi / f.size() * (f.samples().array() * g.samples().array().conjugate()).sum();
}

double circle_norm(const CircleTrace& f) { return std::sqrt(std::abs(circle_inner(f, f))); }

CircleTrace riesz_project(const CircleTrace& trace) {
    VectorXcd c = trace.coefficients();
    const Eigen::Index n = c.size();
    for (Eigen::Index p = n / 2; p < n; ++p) c[p] = 0.0;
    return CircleTrace::from_coefficients(std::move(c));
}

CircleTrace riesz_complement(const CircleTrace& trace) {
    VectorXcd c = trace.coefficients();
    const Eigen::Index n = c.size();
    for (Eigen::Index p = 0; p < n / 2; ++p) c[p] = 0.0;
    return CircleTrace::from_coefficients(std::move(c));
}

CircleTrace conjugate_function(const CircleTrace& trace) {
    VectorXcd c = trace.coefficients();
    const Eigen::Index n = c.size();
    c[0] = 0.0;
    c[n / 2] = 0.0;
    for (Eigen::Index p = 1; p < n / 2; ++p) c[p] *= -kI;
    for (Eigen::Index p = n / 2 + 1; p < n; ++p) c[p] *= kI;
    return CircleTrace::from_coefficients(std::move(c));
}

double tail_mass_fraction(const CircleTrace& trace) {
    const VectorXcd& c = trace.coefficients();
    const Eigen::Index n = c.size();
    double total = 0.0, tail = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
        const double w = std::norm(c[p]);
        total += w;
        if (std::abs(signed_mode(p, n)) > n / 4) tail += w;
    }
    return total > 0.0 ? tail / total : 0.0;
}

int adaptive_resolution(const std::function<Complex(double)>& f, bool weighted, int start, int max_size,
                        double tol) {
    int n = start;
    while (n < max_size) {
        const CircleTrace t = weighted ? transfer_function(f, n) : transfer_symbol(f, n);
        if (tail_mass_fraction(t) < tol) return n;
        n *= 2;
    }
    return max_size;
}

// ---------------------------------------------------------------------------
// Hilbert transform

double pv_hilbert(const LineFunction& b, double x, const QuadratureOptions& opts) {
    // Fold the principal value onto s = |t - x| so both singular halves meet in one
    // integrand; the t/(1+t^2) correction is folded the same way.
    auto folded = [&](double s) {
        s = std::abs(s);
        const double lo = x - s, hi = x + s;
        const double bl = b(lo), bh = b(hi);
        return (bl - bh) / s + hi * bh / (1.0 + hi * hi) + lo * bl / (1.0 + lo * lo);
    };
    const QuadratureResult r = integrate_line([&](double s) { return Complex(0.5 * folded(s), 0.0); }, opts);
    return r.value[0].real() / kPi;
}

HilbertResult hilbert_on_nodes(const LineFunction& b, int n, double anchor) {
    const CircleTrace trace = transfer_symbol([&](double t) { return Complex(b(t), 0.0); }, n);
    const CircleTrace conj = conjugate_function(trace);
    HilbertResult out;
    out.resolution = n;
    out.anchor = anchor;
    out.constant = pv_hilbert(b, anchor) - conj.evaluate(cayley_angle(anchor)).real();
    out.values = conj.samples().real().array() + out.constant;
    return out;
}

HilbertResult hilbert_transform(const LineFunction& b, const VectorXd& xs, int resolution, double anchor) {
    const auto as_complex = [&](double t) { return Complex(b(t), 0.0); };
    const int n = resolution > 0 ? resolution : adaptive_resolution(as_complex, false);
    const CircleTrace conj = conjugate_function(transfer_symbol(as_complex, n));
    HilbertResult out;
    out.resolution = n;
    out.anchor = anchor;
    out.constant = pv_hilbert(b, anchor) - conj.evaluate(cayley_angle(anchor)).real();
    out.values.resize(xs.size());
    for (Eigen::Index j = 0; j < xs.size(); ++j) {
        out.values[j] = conj.evaluate(cayley_angle(xs[j])).real() + out.constant;
    }
    return out;
}

// ---------------------------------------------------------------------------
// unimodular symbols

SynthesizedSymbol::SynthesizedSymbol(LineFunction a, LineFunction b, double c, int winding, int reference_resolution)
    : a_(std::move(a)), b_(std::move(b)), c_(c), n_(winding) {
    const auto bc = [&](double t) { return Complex(b_(t), 0.0); };
    const int n = reference_resolution > 0 ? reference_resolution : adaptive_resolution(bc, false);
    reference_ = conjugate_function(transfer_symbol(bc, n));
    constant_ = pv_hilbert(b_, 0.0) - reference_.evaluate(cayley_angle(0.0)).real();
}

CircleTrace SynthesizedSymbol::trace(int n) const {
    const VectorXd t = cayley_nodes(n);
    const VectorXd th = circle_angles(n);
    const CircleTrace conj = conjugate_function(transfer_symbol([&](double s) { return Complex(b_(s), 0.0); }, n));
    VectorXcd samples(n);
    for (int m = 0; m < n; ++m) {
        const double phase = c_ + a_(t[m]) + conj.samples()[m].real() + constant_;
        samples[m] = std::polar(1.0, n_ * th[m] + phase);
    }
    return CircleTrace::from_samples(std::move(samples));
}

Complex SynthesizedSymbol::operator()(double t) const {
    const double theta = cayley_angle(t);
    const double phase = c_ + a_(t) + reference_.evaluate(theta).real() + constant_;
    return std::polar(1.0, n_ * theta + phase);
}

SynthesizedSymbol synthesize_unimodular(const LineFunction& a, const LineFunction& b, double c, int n) {
    return SynthesizedSymbol(a, b, c, n);
}

QuadratureResult inner_product_quadrature(const std::function<Complex(double)>& f,
                                          const std::function<Complex(double)>& g, const QuadratureOptions& opts) {
    return integrate_line([&](double t) { return f(t) * std::conj(g(t)); }, opts);
}

}  // namespace mif
