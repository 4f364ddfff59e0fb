#include <doctest.h>

#include "mif/inner.hpp"
#include "mif/special.hpp"

#include <random>

using namespace mif;

namespace {

// -cot(pi z) from symmetric partial fractions, summed directly.
Complex cot_partial_fractions(Complex z, long terms) {
    Complex s = -1.0 / z;
    for (long n = terms; n >= 1; --n) s += 2.0 * z / (static_cast<double>(n) * n - z * z);
    return s / kPi;
}

// Direct window sum of the Clark Herglotz function for lattice nodes.
Complex truncated_lattice_herglotz(Complex z, int lo, int hi, double nu) {
    Complex s = 0.0;
    for (int n = lo; n <= hi; ++n) s += nu * (1.0 / (static_cast<double>(n) - z) - n / (n * static_cast<double>(n) + 1.0));
    return s;
}

Complex cayley_of(Complex g) { return (g - kI) / (g + kI); }

}  // namespace

TEST_CASE("digamma and trigamma reference values") {
    const double gamma = 0.57721566490153286061;
    CHECK(std::abs(digamma(1.0) + gamma) < 1e-13);
    CHECK(std::abs(digamma(0.5) - (-gamma - 2.0 * std::log(2.0))) < 1e-13);
    CHECK(std::abs(trigamma(1.0) - kPi * kPi / 6.0) < 1e-12);
    // reflection: psi(1 - w) - psi(w) = pi cot(pi w)
    for (const Complex w : {Complex(0.3, 0.7), Complex(-2.4, 0.1), Complex(5.5, -3.0)}) {
        CHECK(std::abs(digamma(1.0 - w) - digamma(w) - kPi * cot_pi(w)) < 1e-11);
    }
    // recurrence psi(w + 1) = psi(w) + 1/w
    const Complex w(0.2, 2.0);
    CHECK(std::abs(digamma(w + 1.0) - digamma(w) - 1.0 / w) < 1e-13);
    CHECK(std::abs(cot_pi(Complex(0.25, 0.0)) - 1.0) < 1e-14);
    CHECK(std::abs(cot_pi(Complex(0.3, 400.0)) + kI) < 1e-14);
}

TEST_CASE("validate_sequence sorts, records the permutation and rejects bad input") {
    VectorXd l(4), nu(4);
    l << 3.0, -1.0, 0.5, 2.0;
    nu << 1.0, 2.0, 3.0, 4.0;
    const SeparatedSequence s = validate_sequence(l, nu, -1);
    CHECK(s.lambdas[0] == -1.0);
    CHECK(s.nus[0] == 2.0);
    CHECK(s.permutation == std::vector<int>{1, 2, 3, 0});
    CHECK(s.delta == doctest::Approx(1.0));
    CHECK(s.lambda(2) == 3.0);
    CHECK_THROWS_AS(s.lambda(3), Error);

    l << 0.0, 1.0, 1.0, 2.0;
    try {
        validate_sequence(l, nu);
        FAIL("expected SeparationViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SeparationViolation);
    }
    l << 0.0, 1.0, 2.0, 3.0;
    nu[2] = 0.0;
    try {
        validate_sequence(l, nu);
        FAIL("expected WeightViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WeightViolation);
    }
}

TEST_CASE("lattice discrepancy vanishes by symmetry at the centre") {
    const SeparatedSequence s = lattice_sequence(-50, 50);
    CHECK(s.delta == doctest::Approx(1.0));
    CHECK(s.discrepancy > 0.0);
    CHECK(s.size() == 101);
}

TEST_CASE("explicit inner functions") {
    InnerFunctionSpec b;
    b.zeros = {kI};
    CHECK(std::abs(eval_inner(b, 0.0) + 1.0) < 1e-15);

    const InnerFunctionSpec e = exponential_inner(2.0 * kPi);
    CHECK(std::abs(eval_inner(e, Complex(0.25, 0.0)) - kI) < 1e-15);
    CHECK(boundary_derivative(e, 3.0) == doctest::Approx(2.0 * kPi));

    InnerFunctionSpec bad;
    bad.zeros = {Complex(1.0, -0.5)};
    CHECK_THROWS_AS(eval_inner(bad, kI), Error);

    InnerFunctionSpec pole;
    pole.zeros = {Complex(0.0, 1.0)};
    try {
        eval_inner(pole, Complex(0.0, -1.0));
        FAIL("expected PoleHit");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::PoleHit);
    }
}

TEST_CASE("random specs: unimodular boundary, reflection and derivative vs finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        InnerFunctionSpec s;
        s.exp_type = 2.0 * u(rng);
        const int zeros = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < zeros; ++k) s.zeros.emplace_back(-4.0 + 8.0 * u(rng), 0.3 + 2.0 * u(rng));
        for (int k = 0; k < 10; ++k) {
            const double t = -6.0 + 12.0 * u(rng);
            CHECK(std::abs(std::abs(eval_inner(s, t)) - 1.0) < 1e-13);
            const double h = 1e-6;
            const double fd = std::abs((eval_inner(s, t + h) - eval_inner(s, t - h)) / (2.0 * h));
            CHECK(fd == doctest::Approx(boundary_derivative(s, t)).epsilon(1e-6));
            const Complex z(t, 0.2 + u(rng));
            CHECK(std::abs(eval_inner(s, std::conj(z)) * std::conj(eval_inner(s, z)) - 1.0) < 1e-12);
            CHECK(std::abs(eval_inner(s, z)) < 1.0);
        }
        // The sampled supremum dominates a dense scan.
        double scan = 0.0;
        for (int k = 0; k <= 20000; ++k) scan = std::max(scan, boundary_derivative(s, -20.0 + 40.0 * k / 20000));
        CHECK(sup_boundary_derivative(s) >= scan - 1e-9);
    }
}

TEST_CASE("Clark inner function of the integers is exp(2 pi i z)") {
    const ClarkInner lattice(lattice_sequence(-200, 200));
    const ClarkInner truncated(lattice_sequence(-5000, 5000), TailPolicy::Truncate);
    for (const Complex z : {Complex(0.3, 0.0), Complex(-0.45, 0.5), Complex(0.1, 1.0), Complex(2.7, 0.05),
                            Complex(0.0, 3.0), Complex(0.5, 0.0)}) {
        const Complex oracle = cayley_of(cot_partial_fractions(z, 1000000));
        CHECK(std::abs(oracle - std::exp(2.0 * kPi * kI * z)) < 1e-5);
        CHECK(std::abs(lattice(z) - std::exp(2.0 * kPi * kI * z)) < 1e-12);
        CHECK(std::abs(lattice(z) - oracle) < 1e-5);
        // Truncated window against its own direct sum.
        const Complex direct = cayley_of(truncated_lattice_herglotz(z, -5000, 5000, 1.0 / kPi));
        CHECK(std::abs(truncated(z) - direct) < 1e-10);
    }
    // Near the imaginary axis the plain truncation error is O(1/M).
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const Complex z(-0.5 + k / 20.0, 0.5);
        worst = std::max(worst, std::abs(truncated(z) - std::exp(2.0 * kPi * kI * z)));
    }
    CHECK(worst < 2e-4);
}

TEST_CASE("Clark node values and derivatives on a perturbed sequence") {
    const SeparatedSequence s = alternating_sequence(-60, 60, 0.2);
    const ClarkInner c(s);
    for (int n = -10; n <= 10; ++n) {
        const double l = s.lambda(n);
        CHECK(std::abs(c(Complex(l, 0.0)) - 1.0) < 1e-14);
        const double h = 1e-6;
        const double fd = std::abs((c(Complex(l + h, 0.0)) - c(Complex(l - h, 0.0))) / (2.0 * h));
        CHECK(fd == doctest::Approx(2.0 / s.nu(n)).epsilon(1e-6));
        CHECK(c.boundary_derivative(l) == doctest::Approx(2.0 / s.nu(n)));
        CHECK(clark_derivative(s, n) == doctest::Approx(2.0 / s.nu(n)));
    }
    for (int k = 0; k < 50; ++k) {
        const double t = -30.0 + 60.0 * k / 49.0 + 0.013;
        CHECK(std::abs(std::abs(c(Complex(t, 0.0))) - 1.0) < 1e-12);
        const double h = 1e-6;
        const double fd = std::abs((c(Complex(t + h, 0.0)) - c(Complex(t - h, 0.0))) / (2.0 * h));
        CHECK(fd == doctest::Approx(c.boundary_derivative(t)).epsilon(1e-5));
    }
    CHECK(std::abs(c(Complex(0.3, 2.0))) < 1.0);
}

TEST_CASE("recentering removes the Herglotz offset with a mean-zero weight change") {
    const SeparatedSequence s = decaying_sequence(-64, 64, 0.3, 2.0);
    const ClarkInner before(s);
    CHECK(std::abs(before.herglotz_offset()) > 1e-2);
    const SeparatedSequence r = recenter_weights(s, TailPolicy::LatticeTail);
    const ClarkInner after(r);
    CHECK(std::abs(after.herglotz_offset()) < 1e-14);
    CHECK(r.nus.sum() == doctest::Approx(s.nus.sum()).epsilon(1e-14));
    CHECK(r.nus.minCoeff() > 0.0);
    // I(iy) -> 0 once the offset is gone.
    CHECK(std::abs(after(Complex(0.0, 40.0))) < 1e-2);
    CHECK(std::abs(before(Complex(0.0, 40.0))) > 3e-2);
}

TEST_CASE("divergence guard rejects weights concentrated at the window edge") {
    VectorXd l = VectorXd::LinSpaced(16, -8.0, 7.0);
    VectorXd nu = VectorXd::Constant(16, 1e-3);
    nu[0] = 100.0;
    nu[15] = 100.0;
    try {
        ClarkInner c(validate_sequence(l, nu));
        FAIL("expected DivergenceDetected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DivergenceDetected);
    }
}

TEST_CASE("boundary profile and strip bound") {
    InnerFunctionSpec s;
    s.exp_type = 1.0;
    s.zeros = {Complex(0.0, 0.5), Complex(2.0, 1.0)};
    const InnerFunction f(s);
    const VectorXd grid = default_boundary_grid(f, -10.0, 10.0);
    const BoundaryProfile p = boundary_profile(f, grid);
    for (Eigen::Index j = 1; j < p.argument.size(); ++j) CHECK(p.argument[j] >= p.argument[j - 1]);
    CHECK(p.sup_derivative <= f.sup_derivative() + 1e-12);
    CHECK(p.max_fd_mismatch < 0.1);
    CHECK(p.bounded_ratio == (p.ratio >= kBoundedRatioThreshold));
    CHECK_THROWS_AS(boundary_profile(f, uniform_grid(-10.0, 10.0, 5)), Error);

    const double sup = f.sup_derivative();
    for (const double frac : {0.1, 0.3, 0.5}) {
        const double eps = frac / sup;
        CHECK(min_modulus_strip(f, eps, grid, sup) >= 1.0 - eps * sup - 1e-12);
    }
    try {
        min_modulus_strip(f, 1.01 / sup, grid, sup);
        FAIL("expected InvalidStrip");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidStrip);
    }
}

TEST_CASE("InnerFunction dispatch") {
    const InnerFunction e(exponential_inner(2.0 * kPi));
    CHECK_FALSE(e.is_clark());
    CHECK(e.sup_derivative() == doctest::Approx(2.0 * kPi));
    const InnerFunction c(ClarkInner(lattice_sequence(-20, 20)));
    CHECK(c.is_clark());
    CHECK(c.sup_derivative(-5.0, 5.0) == doctest::Approx(2.0 * kPi).epsilon(1e-9));
    CHECK(std::abs(c(Complex(0.1, 0.2)) - e(Complex(0.1, 0.2))) < 1e-12);
}

TEST_CASE("argument increments match a dense unwrap") {
    const auto dense = [](const auto& f, double a, double b) {
        const int n = 200000;
        double total = 0.0;
        Complex prev = f(a);
        for (int k = 1; k <= n; ++k) {
            const Complex cur = f(a + (b - a) * k / n);
            total += std::arg(cur / prev);
            prev = cur;
        }
        return total;
    };
    InnerFunctionSpec s = exponential_inner(1.5);
    s.zeros = {Complex(0.3, 0.2), Complex(-2.0, 1.0)};
    CHECK(argument_increment(s, -4.0, 3.0) ==
          doctest::Approx(dense([&](double t) { return eval_inner(s, t); }, -4.0, 3.0)).epsilon(1e-9));

    const ClarkInner clark(alternating_sequence(-5, 5, 0.2));
    CHECK(clark.nodes_in(-3.3, 4.7) == 8);
    CHECK(clark.nodes_in(-9.5, 9.5) == 19);  // tail integers outside the window count too
    CHECK(clark.nodes_in(2.0, 1.0) == 0);
    const InnerFunction f(clark);
    for (const auto& [a, b] : {std::pair{-3.3, 4.7}, std::pair{-9.5, 9.5}, std::pair{0.21, 0.4}}) {
        CHECK(f.argument_increment(a, b) ==
              doctest::Approx(dense([&](double t) { return clark(t); }, a, b)).epsilon(1e-8));
    }
}
