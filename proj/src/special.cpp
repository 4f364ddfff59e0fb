#include "mif/special.hpp"

#include <cmath>
#include <limits>

namespace mif {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SeparationViolation: return "SeparationViolation";
        case ErrorKind::WeightViolation: return "WeightViolation";
        case ErrorKind::PoleHit: return "PoleHit";
        case ErrorKind::DivergenceDetected: return "DivergenceDetected";
        case ErrorKind::IndexOutOfWindow: return "IndexOutOfWindow";
        case ErrorKind::UnwrapFailure: return "UnwrapFailure";
        case ErrorKind::InvalidStrip: return "InvalidStrip";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::QuadratureNonconvergence: return "QuadratureNonconvergence";
        case ErrorKind::NodeNotUnimodular: return "NodeNotUnimodular";
        case ErrorKind::NodeMismatch: return "NodeMismatch";
        case ErrorKind::NonHermitianInput: return "NonHermitianInput";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::IllConditionedTail: return "IllConditionedTail";
        case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::ExecutionError: return "ExecutionError";
    }
    return "Unknown";
}

namespace {

constexpr double kShiftThreshold = 10.0;

bool is_nonpositive_integer(Complex w) {
    return w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real());
}

Complex digamma_asymptotic(Complex w) {
    const Complex r = 1.0 / w;
    const Complex r2 = r * r;
    // Bernoulli tail: B_2k / (2k w^2k)
    const Complex series =
        r2 * (1.0 / 12 -
              r2 * (1.0 / 120 -
                    r2 * (1.0 / 252 -
                          r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 * (1.0 / 12)))))));
    return std::log(w) - 0.5 * r - series;
}

Complex trigamma_asymptotic(Complex w) {
    const Complex r = 1.0 / w;
    const Complex r2 = r * r;
    const Complex series =
        1.0 / 6 -
        r2 * (1.0 / 30 - r2 * (1.0 / 42 - r2 * (1.0 / 30 - r2 * (5.0 / 66 - r2 * (691.0 / 2730 - r2 * (7.0 / 6))))));
    return r + 0.5 * r2 + r * r2 * series;
}

}  // namespace

Complex cot_pi(Complex w) {
    const Complex arg = 2.0 * kPi * kI * w;
    if (w.imag() >= 0.0) {
        const Complex q = std::exp(arg);
        return -kI * (1.0 + q) / (1.0 - q);
    }
    const Complex q = std::exp(-arg);
    return kI * (1.0 + q) / (1.0 - q);
}

Complex csc2_pi(Complex w) {
    const Complex arg = 2.0 * kPi * kI * w;
    const Complex q = w.imag() >= 0.0 ? std::exp(arg) : std::exp(-arg);
    return -4.0 * q / ((1.0 - q) * (1.0 - q));
}

Complex digamma(Complex w) {
    if (is_nonpositive_integer(w)) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    if (w.real() < 0.0) {
        return digamma(1.0 - w) - kPi * cot_pi(w);
    }
    Complex acc{0.0, 0.0};
    while (std::abs(w) < kShiftThreshold) {
        acc -= 1.0 / w;
        w += 1.0;
    }
    return acc + digamma_asymptotic(w);
}

Complex trigamma(Complex w) {
    if (is_nonpositive_integer(w)) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    if (w.real() < 0.0) {
        return kPi * kPi * csc2_pi(w) - trigamma(1.0 - w);
    }
    Complex acc{0.0, 0.0};
    while (std::abs(w) < kShiftThreshold) {
        acc += 1.0 / (w * w);
        w += 1.0;
    }
    return acc + trigamma_asymptotic(w);
}

}  // namespace mif
