#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mif {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
    SeparationViolation,
    WeightViolation,
    PoleHit,
    DivergenceDetected,
    IndexOutOfWindow,
    UnwrapFailure,
    InvalidStrip,
    GridMismatch,
    QuadratureNonconvergence,
    NodeNotUnimodular,
    NodeMismatch,
    NonHermitianInput,
    WindowTooSmall,
    IllConditionedTail,
    ResolutionTooLow,
    ConfigError,
    ExecutionError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Cayley map of the upper half-plane onto the disc.
inline Complex cayley(Complex z) { return (z - kI) / (z + kI); }

}  // namespace mif
