#include <doctest.h>

#include "mif/hardy.hpp"

#include <random>

using namespace mif;

namespace {

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

}  // namespace

TEST_CASE("grid helpers") {
    CHECK(is_power_of_two(1024));
    CHECK_FALSE(is_power_of_two(1000));
    const VectorXd t = cayley_nodes(64);
    const VectorXd th = circle_angles(64);
    for (int m = 0; m < 64; ++m) {
        if (m > 0) CHECK(t[m] > t[m - 1]);
        CHECK(std::abs(cayley(Complex(t[m], 0.0)) - std::polar(1.0, th[m])) < 1e-13);
        CHECK(cayley_angle(t[m]) == doctest::Approx(th[m]));
    }
}

TEST_CASE("Fourier coefficients on the half-shifted grid") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    VectorXcd c = VectorXcd::Zero(32);
    for (int p = 0; p < 32; ++p) c[p] = Complex(g(rng), g(rng));
    const CircleTrace t = CircleTrace::from_coefficients(c);
    CHECK((fourier_coefficients(t.samples()) - c).cwiseAbs().maxCoeff() < 1e-13);

    // A direct DFT oracle for one mode on the shifted grid.
    const VectorXd th = circle_angles(32);
    for (const int k : {-16, -5, 0, 3, 15}) {
        VectorXcd s(32);
        for (int m = 0; m < 32; ++m) s[m] = std::polar(1.0, k * th[m]);
        const CircleTrace tr = CircleTrace::from_samples(s);
        CHECK(std::abs(tr.coefficient(k) - 1.0) < 1e-13);
        CHECK(tr.coefficients().cwiseAbs().sum() == doctest::Approx(1.0));
        CHECK(std::abs(tr.evaluate(0.37) - std::polar(1.0, k * 0.37)) < 1e-12);
    }
    CHECK_THROWS_AS(CircleTrace::from_samples(VectorXcd::Zero(12)), Error);
}

TEST_CASE("weighted transfer maps phi^k sqrt2/(t+i) to the k-th mode") {
    for (const int k : {0, 1, 4}) {
        const CircleTrace t = transfer_function(
            [k](double x) { return std::sqrt(2.0) / (x + kI) * std::pow(cayley(Complex(x, 0.0)), k); }, 256);
        CHECK(std::abs(t.coefficient(k) - 1.0) < 1e-12);
        CHECK(std::abs(t.coefficients().cwiseAbs().sum() - 1.0) < 1e-10);
    }
}

TEST_CASE("transfer is unitary: circle norms match line quadrature") {
    const auto f = [](double t) { return Complex(1.0 / (1.0 + t * t), t / (4.0 + t * t)); };
    const auto g = [](double t) { return Complex(t + 0.5, 1.0) / (t * t + 4.0); };
    const int n = 1 << 14;
    const CircleTrace tf = transfer_function(f, n), tg = transfer_function(g, n);
    const Complex line = inner_product_quadrature(f, g).value[0];
    CHECK(std::abs(circle_inner(tf, tg) - line) < 1e-6);
    CHECK(circle_norm(tf) == doctest::Approx(std::sqrt(inner_product_quadrature(f, f).value[0].real())));
    const VectorXcd back = cayley_inverse(tf);
    const VectorXd t = cayley_nodes(n);
    for (int m = 0; m < n; m += 97) CHECK(std::abs(back[m] - f(t[m])) < 1e-13);
}

TEST_CASE("cayley_transfer validates the grid") {
    const VectorXd t = cayley_nodes(16);
    const VectorXcd v = VectorXcd::Ones(16);
    CHECK_NOTHROW(cayley_transfer(t, v));
    VectorXd shifted = t;
    shifted[3] += 1e-3;
    try {
        cayley_transfer(shifted, v);
        FAIL("expected GridMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridMismatch);
    }
    CHECK_THROWS_AS(cayley_transfer(t, VectorXcd::Ones(8)), Error);
}

TEST_CASE("Riesz projection and conjugate function") {
    const VectorXd th = circle_angles(64);
    VectorXcd s(64);
    for (int m = 0; m < 64; ++m) s[m] = std::cos(3.0 * th[m]) + 0.5;
    const CircleTrace t = CircleTrace::from_samples(s);
    const CircleTrace p = riesz_project(t), q = riesz_complement(t);
    for (int m = 0; m < 64; ++m) {
        CHECK(std::abs(p.samples()[m] - (0.5 + 0.5 * std::polar(1.0, 3.0 * th[m]))) < 1e-13);
        CHECK(std::abs(p.samples()[m] + q.samples()[m] - s[m]) < 1e-13);
    }
    const CircleTrace c = conjugate_function(t);
    for (int m = 0; m < 64; ++m) CHECK(std::abs(c.samples()[m] - std::sin(3.0 * th[m])) < 1e-13);
}

TEST_CASE("adaptive resolution") {
    const int n = adaptive_resolution([](double t) { return Complex(1.0 / (1.0 + t * t), 0.0); }, false);
    CHECK(is_power_of_two(n));
    CHECK(tail_mass_fraction(transfer_symbol([](double t) { return Complex(1.0 / (1.0 + t * t), 0.0); }, n)) < 1e-8);
}

TEST_CASE("Hilbert transform: closed-form pair and PV oracle") {
    const LineFunction p{[](double t) { return 1.0 / (1.0 + t * t); }, DecayClass::L1Pi, 0.0};
    const VectorXd xs = VectorXd::LinSpaced(17, -4.0, 4.0);
    const HilbertResult h = hilbert_transform(p, xs);
    CHECK(std::abs(h.constant) < 1e-8);
    for (Eigen::Index j = 0; j < xs.size(); ++j) {
        CHECK(h.values[j] == doctest::Approx(xs[j] / (1.0 + xs[j] * xs[j])).epsilon(1e-10));
    }
    for (const double x : {-2.0, 0.0, 0.5, 3.0}) CHECK(std::abs(pv_hilbert(p, x) - x / (1.0 + x * x)) < 1e-7);

    // x/(1+x^2) has no closed form under the corrected kernel; compare both routes.
    const LineFunction q{[](double t) { return t / (1.0 + t * t); }, DecayClass::L2, 0.0};
    const VectorXd ys = VectorXd::LinSpaced(5, -2.0, 2.0);
    const HilbertResult hq = hilbert_transform(q, ys);
    for (Eigen::Index j = 0; j < ys.size(); ++j) CHECK(std::abs(hq.values[j] - pv_hilbert(q, ys[j])) < 1e-6);
}

TEST_CASE("Hilbert transform twice negates odd mean-zero bumps") {
    const LineFunction b{[](double t) { return bump(t - 1.0) - bump(t + 1.0); }, DecayClass::L2, 0.0};
    const int n = 4096;
    const HilbertResult once = hilbert_on_nodes(b, n);
    const CircleTrace again = conjugate_function(CircleTrace::from_samples(once.values.cast<Complex>()));
    const VectorXd t = cayley_nodes(n);
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
        if (std::abs(t[m]) < 4.0) worst = std::max(worst, std::abs(again.samples()[m].real() + b(t[m])));
    }
    CHECK(worst < 1e-10);
    // PV quadrature agrees with the circle route away from the support edges.
    for (const double x : {-3.0, 0.0, 0.5, 2.2}) {
        const VectorXd one = VectorXd::Constant(1, x);
        CHECK(std::abs(hilbert_transform(b, one, n).values[0] - pv_hilbert(b, x)) < 1e-7);
    }
}

TEST_CASE("synthesized symbols are unimodular and interpolate their traces") {
    const LineFunction a{[](double t) { return 0.7 * bump(t / 2.0); }, DecayClass::L2, 0.0};
    const LineFunction b{[](double t) { return 0.5 * bump(t - 0.5); }, DecayClass::L2, 0.0};
    const SynthesizedSymbol u = synthesize_unimodular(a, b, 0.3, 2);
    const CircleTrace tr = u.trace(u.reference_resolution());
    CHECK((tr.samples().cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-13);
    const VectorXd t = cayley_nodes(tr.size());
    for (int m = 0; m < tr.size(); m += 131) CHECK(std::abs(u(t[m]) - tr.samples()[m]) < 1e-9);
    CHECK(u.winding() == 2);
}
