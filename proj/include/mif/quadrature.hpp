#pragma once

#include "mif/common.hpp"

#include <functional>

namespace mif {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double panel_width = 0.5;        // initial subdivision of every block
    double initial_half_width = 64.0;
    double max_half_width = 8192.0;
    double tail_tol = 1e-8;          // on successive Richardson estimates
    long max_evaluations = 50'000'000;
};

struct QuadratureResult {
    VectorXcd value;
    double error = 0.0;
    double half_width = 0.0;
    long evaluations = 0;
};

using VectorIntegrand = std::function<VectorXcd(double)>;

/// Adaptive Gauss-Kronrod (7/15) for a vector-valued integrand on [a, b].
QuadratureResult integrate(const VectorIntegrand& f, Eigen::Index dim, double a, double b,
                           const QuadratureOptions& opts = {});

/// Integral over the real line: [-T, T] is grown by doubling and the 1/T tail is
/// removed by Richardson extrapolation until successive estimates agree.
QuadratureResult integrate_line(const VectorIntegrand& f, Eigen::Index dim, const QuadratureOptions& opts = {});

/// Scalar convenience wrapper around integrate_line.
QuadratureResult integrate_line(const std::function<Complex(double)>& f, const QuadratureOptions& opts = {});

}  // namespace mif
