#include <doctest.h>

#include "mif/basis.hpp"
#include "mif/hardy.hpp"

#include <random>

using namespace mif;

namespace {

MatrixXcd random_gram(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    MatrixXcd a(n + 3, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(g(rng), g(rng));
    MatrixXcd gram = a.adjoint() * a;
    const VectorXd d = gram.diagonal().real().cwiseSqrt().cwiseInverse();
    return d.asDiagonal() * gram * d.asDiagonal();
}

// Cosine between span{k_n} and I H^2 straight from the definition: project conj(I) k_n
// onto H^2 on the circle and take the top generalized eigenvalue against the Gram.
double brute_force_cosine(const KernelSystem& sys, const ClarkInner& clark, int lo, int hi, int resolution) {
    const int m = hi - lo + 1;
    std::vector<CircleTrace> proj;
    for (int n = lo; n <= hi; ++n) {
        const KernelEvaluator k = normalized_kernel(sys, n);
        proj.push_back(riesz_project(
            transfer_function([&](double t) { return std::conj(clark(t)) * k(t); }, resolution)));
    }
    MatrixXcd b(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) b(i, j) = circle_inner(proj[j], proj[i]);
    const MatrixXcd g = gram_closed_form(sys, lo, hi).entries;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(0.5 * (b + b.adjoint()), g, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace

TEST_CASE("Riesz bounds of small Grams") {
    const RieszBounds id = riesz_bounds(MatrixXcd::Identity(5, 5));
    CHECK(id.lower == doctest::Approx(1.0));
    CHECK(id.upper == doctest::Approx(1.0));

    const double g = 2.0 / kPi;
    MatrixXcd two(2, 2);
    two << 1.0, Complex(0.0, g), Complex(0.0, -g), 1.0;
    const RieszBounds b = riesz_bounds(two);
    CHECK(b.lower == doctest::Approx(1.0 - g));
    CHECK(b.upper == doctest::Approx(1.0 + g));
    CHECK(b.lower == doctest::Approx(0.3634).epsilon(1e-4));

    MatrixXcd bad = two;
    bad(0, 1) = 0.5;
    try {
        riesz_bounds(bad);
        FAIL("expected NonHermitianInput");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonHermitianInput);
    }
    CHECK_THROWS_AS(riesz_bounds(MatrixXcd::Identity(2, 3)), Error);
}

TEST_CASE("nested sections interlace") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixXcd g = random_gram(rng, 12);
        double last_lower = 2.0, last_upper = 0.0;
        for (int n = 1; n <= 12; ++n) {
            const RieszBounds r = riesz_bounds(g.topLeftCorner(n, n));
            CHECK(r.lower <= last_lower + 1e-12);
            CHECK(r.upper >= last_upper - 1e-12);
            last_lower = r.lower;
            last_upper = r.upper;
        }
    }
}

TEST_CASE("AOB tails are trailing submatrices") {
    std::mt19937_64 rng(31);
    GramMatrix gram{random_gram(rng, 10), -3, {}, {}};
    const std::vector<AobTail> tails = aob_constants(gram, {-3, 0, 4});
    REQUIRE(tails.size() == 3);
    for (const AobTail& t : tails) {
        const int off = t.start - gram.first_index;
        const RieszBounds r = riesz_bounds(gram.entries.bottomRightCorner(10 - off, 10 - off));
        CHECK(t.lower == doctest::Approx(r.lower));
        CHECK(t.upper == doctest::Approx(r.upper));
    }
    CHECK(tails[0].lower <= tails[1].lower + 1e-12);
    CHECK(tails[0].upper >= tails[1].upper - 1e-12);
    const RieszBounds all = riesz_bounds(gram);
    CHECK(gram.lambda_min.value() == doctest::Approx(all.lower));

    try {
        aob_constants(gram, {7});
        FAIL("expected WindowTooSmall");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WindowTooSmall);
    }
}

TEST_CASE("minimality margin") {
    const MinimalityMargin id = minimality_margin(MatrixXcd::Identity(4, 4));
    CHECK_FALSE(id.singular);
    CHECK(id.min() == doctest::Approx(1.0));

    const double g = 2.0 / kPi;
    MatrixXcd two(2, 2);
    two << 1.0, g, g, 1.0;
    CHECK(minimality_margin(two).min() == doctest::Approx(1.0 - g * g));
    CHECK(1.0 - g * g == doctest::Approx(0.5947).epsilon(1e-4));

    // A repeated kernel: k_1 = k_2.
    MatrixXcd dup = MatrixXcd::Identity(3, 3);
    dup(1, 2) = dup(2, 1) = 1.0;
    const MinimalityMargin m = minimality_margin(dup);
    CHECK(m.singular);
    CHECK(m.flagged == std::vector<int>{1, 2});
    CHECK(m.distance_sq[0] == doctest::Approx(1.0));
    CHECK(m.distance_sq[1] == doctest::Approx(0.0));

    // Oracle: 1 / (G^-1)_nn through a full inverse.
    std::mt19937_64 rng(37);
    const MatrixXcd r = random_gram(rng, 6);
    const MatrixXcd inv = r.inverse();
    const MinimalityMargin mr = minimality_margin(r);
    for (int n = 0; n < 6; ++n) CHECK(mr.distance_sq[n] == doctest::Approx(1.0 / inv(n, n).real()));
}

TEST_CASE("multiplier lower bounds") {
    const KernelSystem sys(InnerFunction(exponential_inner(2.0 * kPi)), lattice_sequence(-2, 2));
    CHECK(multiplier_lower_bound(sys, -2, 2, [](double) { return Complex(0.0, 0.0); }) == doctest::Approx(0.0));
    CHECK(multiplier_lower_bound(sys, -2, 2, [](double) { return Complex(0.0, 3.0); }) ==
          doctest::Approx(3.0).epsilon(1e-6));

    // Single kernel: ||(1 - I) k||^2 = 2 - 2 Re <I k, k>, computed independently.
    const SeparatedSequence seq = alternating_sequence(-200, 200, 0.2);
    const ClarkInner clark(seq);
    const KernelSystem one(InnerFunction(exponential_inner(2.0 * kPi)), lattice_sequence(0, 1));
    const KernelEvaluator k = normalized_kernel(one, 0);
    const double ik = integrate_line([&](double t) { return clark(t) * std::norm(k(t)); }).value[0].real();
    CHECK(t_one_minus_i_lower_bound(one, InnerFunction(clark), 0, 0) ==
          doctest::Approx(std::sqrt(2.0 - 2.0 * ik)).epsilon(1e-5));
}

TEST_CASE("subspace angle against a brute-force projection") {
    // Rational data throughout so the circle traces are resolved.
    const SeparatedSequence seq = alternating_sequence(-6, 5, 0.2);
    const ClarkInner clark(seq, TailPolicy::Truncate);
    // A rational Theta with a 17-dimensional model space.
    const KernelSystem sys(InnerFunction(ClarkInner(lattice_sequence(-8, 8, 0.5), TailPolicy::Truncate)), seq);
    const int res = 1 << 13;
    const AngleResult a = subspace_angle_cosine(sys, clark, 0, 5, res);
    const double oracle = brute_force_cosine(sys, clark, 0, 5, res);
    CHECK(a.cosine > 0.05);
    CHECK(a.cosine == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(a.tail_start == 0);
    CHECK(a.tail_end == 5);

    // Theta = I: the kernels are orthogonal to I H^2.
    const KernelSystem same(InnerFunction(clark), seq);
    CHECK(subspace_angle_cosine(same, clark, -2, 3, res).cosine < 1e-4);
}

TEST_CASE("ill-conditioned tails are refused") {
    const SeparatedSequence seq = validate_sequence((VectorXd(3) << 0.0, 1.0, 1.0 + 1e-9).finished(),
                                                    VectorXd::Ones(3));
    const KernelSystem sys(InnerFunction(exponential_inner(0.5)), seq);
    const ClarkInner clark(lattice_sequence(-2, 2), TailPolicy::Truncate);
    CHECK_THROWS_AS(subspace_angle_cosine(sys, clark, 0, 2), Error);
}

TEST_CASE("basis report on perturbed lattices") {
    const KernelSystem sys(InnerFunction(exponential_inner(2.0 * kPi)), alternating_sequence(-40, 39, 0.1));
    const BasisReport r = basis_report(sys, {20, 40, 80}, {-40, -20, 0, 20});
    CHECK(r.nested_monotone);
    CHECK(r.riesz_verdict);
    CHECK(r.lower.back() > 0.5);
    CHECK(r.upper.back() < 1.5);
    CHECK(r.min_margin_sq > 0.5);
    CHECK_FALSE(r.aob_verdict);

    // Lattice kernels: every tail is exactly orthonormal.
    const KernelSystem lat(InnerFunction(exponential_inner(2.0 * kPi)), lattice_sequence(-20, 19));
    const BasisReport rl = basis_report(lat, {10, 20, 40}, {-20, 0, 10});
    CHECK(rl.aob_verdict);
    for (const AobTail& t : rl.aob_tails) CHECK(t.deviation() < 1e-12);
}

TEST_CASE("Riesz lower bound decreases with the perturbation size") {
    double last = 2.0;
    for (const double d : {0.05, 0.15, 0.25, 0.35}) {
        const KernelSystem sys(InnerFunction(exponential_inner(2.0 * kPi)), alternating_sequence(-50, 49, d));
        const double c = riesz_bounds(gram_closed_form(sys).entries).lower;
        CHECK(c < last);
        last = c;
    }
}
