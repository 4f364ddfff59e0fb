#include <doctest.h>

#include "mif/toeplitz.hpp"

using namespace mif;

namespace {

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

Symbol smooth_symbol(int winding) {
    const LineFunction a{[](double t) { return 0.6 * bump(t / 3.0); }, DecayClass::L2, 0.0};
    const LineFunction b{[](double t) { return 0.4 * bump(t - 1.0); }, DecayClass::L2, 0.0};
    return Symbol::synthesized(synthesize_unimodular(a, b, 0.2, winding));
}

Symbol jump_symbol(double half_jump) {
    return Symbol::raw([half_jump](double t) { return std::polar(1.0, t > 0.0 ? half_jump : -half_jump); },
                       "jump");
}

}  // namespace

TEST_CASE("constant symbol gives the identity") {
    const CircleTrace one = Symbol::raw([](double) { return Complex(1.0, 0.0); }, "one").trace(256);
    CHECK((toeplitz_section(one, 32) - MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(hankel_section(one, 32).cwiseAbs().maxCoeff() < 1e-14);
    const InvertibilityEvidence inv = invertibility_verdict(one, {16, 32, 64});
    CHECK(inv.verdict == Verdict::Yes);
}

TEST_CASE("phi is the shift") {
    const CircleTrace phi = Symbol::cayley_power(1).trace(512);
    const MatrixXcd t = toeplitz_section(phi, 40);
    MatrixXcd shift = MatrixXcd::Zero(40, 40);
    for (int j = 1; j < 40; ++j) shift(j, j - 1) = 1.0;
    CHECK((t - shift).cwiseAbs().maxCoeff() < 1e-13);
    const VectorXd s = singular_values(t);
    CHECK((s.head(39).array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(s[39] < 1e-12);
    CHECK(hankel_section(phi, 20).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(invertibility_verdict(phi, {16, 32, 64}).verdict == Verdict::No);
}

TEST_CASE("winding number of phi^k") {
    for (int k = -5; k <= 5; ++k) {
        const WindingResult w = winding_number(Symbol::cayley_power(k).trace(1024));
        CHECK(w.winding == k);
        CHECK(w.residual < 1e-10);
    }
    for (const int n : {-2, 0, 1, 3}) CHECK(winding_number(smooth_symbol(n).trace(4096)).winding == n);
}

TEST_CASE("winding numbers add under multiplication") {
    const Symbol a = smooth_symbol(2), b = Symbol::cayley_power(-3);
    const CircleTrace product =
        Symbol::raw([&](double t) { return a(t) * b(t); }, "product").trace(4096);
    CHECK(winding_number(product).winding ==
          winding_number(a.trace(4096)).winding + winding_number(b.trace(4096)).winding);
}

TEST_CASE("analytic symbols: triangular sections and vanishing Hankel") {
    const CircleTrace p2 = Symbol::cayley_power(2).trace(512), p3 = Symbol::cayley_power(3).trace(512);
    const CircleTrace p5 = Symbol::cayley_power(5).trace(512);
    CHECK((toeplitz_section(p2, 24) * toeplitz_section(p3, 24) - toeplitz_section(p5, 24)).cwiseAbs().maxCoeff() <
          1e-13);
    CHECK(hankel_section(p5, 24).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(conjugate_hankel_section(Symbol::cayley_power(-4).trace(512), 24).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("section norms stay below one for unimodular symbols") {
    const CircleTrace u = smooth_symbol(1).trace(4096);
    for (const int n : {16, 64, 256}) CHECK(singular_values(toeplitz_section(u, n))[0] <= 1.0 + 1e-6);
}

TEST_CASE("sections need enough resolution") {
    const CircleTrace u = Symbol::cayley_power(1).trace(64);
    try {
        toeplitz_section(u, 32);
        FAIL("expected ResolutionTooLow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ResolutionTooLow);
    }
    CHECK_THROWS_AS(hankel_section(u, 17), Error);
}

TEST_CASE("phase jumps beyond the unwrap threshold are refused") {
    try {
        winding_number(jump_symbol(0.45 * kPi).trace(1024));
        FAIL("expected UnwrapFailure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnwrapFailure);
    }
    CHECK_NOTHROW(winding_number(jump_symbol(0.25 * kPi).trace(1024)));
}

TEST_CASE("smooth symbol: compact Hankel, unitary plus compact") {
    const Symbol u = smooth_symbol(0);
    const CompactnessEvidence h = hankel_compactness(u.trace(4096), 128);
    CHECK(h.flag == CompactFlag::Compact);
    CHECK(h.decay.decay_index >= 0);
    const UnitaryCompactEvidence e = unitary_plus_compact_verdict(u, {64, 128, 256});
    CHECK(e.verdict == Verdict::Yes);
    CHECK(e.winding == Criterion::Pass);
    CHECK(e.outliers == Criterion::Pass);
    CHECK(e.hankel == Criterion::Pass);
    CHECK(invertibility_verdict(u, {64, 128, 256}).verdict == Verdict::Yes);
}

TEST_CASE("jump symbol: Hankel not compact") {
    const Symbol u = jump_symbol(0.25 * kPi);
    const CompactnessEvidence h = hankel_compactness(u.trace(4096), 128);
    CHECK(h.flag == CompactFlag::NotCompact);
    CHECK(h.increment > kNotCompactIncrement);
    const UnitaryCompactEvidence e = unitary_plus_compact_verdict(u, {64, 128, 256});
    CHECK(e.verdict == Verdict::No);
    CHECK(e.hankel == Criterion::Fail);
}

TEST_CASE("bump phase exp(i a) with a = (pi/4)/(1+t^2) is invertible") {
    const Symbol u = Symbol::raw([](double t) { return std::polar(1.0, 0.25 * kPi / (1.0 + t * t)); }, "bump");
    const InvertibilityEvidence e = invertibility_verdict(u, {64, 128, 256});
    CHECK(e.verdict == Verdict::Yes);
    CHECK(e.min_sigma > 0.5);
}

TEST_CASE("Theta conj(I) for the integers is the identity symbol") {
    const ClarkInner clark(lattice_sequence(-5000, 5000));
    const Symbol u = Symbol::inner_pair(InnerFunction(exponential_inner(2.0 * kPi)), InnerFunction(clark));
    const CircleTrace tr = u.trace(1 << 15);
    CHECK((toeplitz_section(tr, 32) - MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-4);
    CHECK(u.is_unimodular_family());
    CHECK(u.conjugate()(0.3) == std::conj(u(0.3)));
}

TEST_CASE("symbol winding: closed-form increments and bisection") {
    for (const int k : {-3, 0, 2}) CHECK(winding_number(Symbol::cayley_power(k), 256).winding == k);
    CHECK(winding_number(smooth_symbol(-2), 1024).winding == -2);

    // Theta = exp(2 pi i z) b_i against the Clark function of the integers: u is close to phi.
    InnerFunctionSpec s = exponential_inner(2.0 * kPi);
    s.zeros = {kI};
    const ClarkInner clark(lattice_sequence(-200, 200));
    CHECK(winding_number(Symbol::inner_pair(InnerFunction(s), InnerFunction(clark)), 1 << 12).winding == 1);

    // Tightly paired nodes turn the phase many times between samples; the count stays exact.
    const ClarkInner paired(recenter_weights(alternating_sequence(-100, 100, 0.45), TailPolicy::LatticeTail));
    const Symbol u = Symbol::inner_pair(InnerFunction(exponential_inner(2.0 * kPi)), InnerFunction(paired));
    for (const int n : {1 << 12, 1 << 15}) {
        const WindingResult w = winding_number(u, n);
        CHECK(w.winding == 0);
        CHECK(w.residual < 1e-8);
    }
}
