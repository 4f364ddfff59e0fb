#pragma once

#include "mif/inner.hpp"
#include "mif/quadrature.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mif {

/// Reproducing kernels of K_Theta at the nodes of a sequence window.
struct KernelSystem {
    InnerFunction theta;
    SeparatedSequence nodes;
    VectorXd derivatives;  // |Theta'(lambda_n)|
    VectorXd norms;        // ||K_{lambda_n}|| = sqrt(|Theta'(lambda_n)| / 2 pi)
    VectorXd phases_re, phases_im;  // Theta(lambda_n)
    std::optional<VectorXd> etas;   // set by pair_with

    KernelSystem(InnerFunction theta, SeparatedSequence nodes);

    int size() const { return nodes.size(); }
    Complex theta_at_node(int position) const { return {phases_re[position], phases_im[position]}; }

    /// eta_n = |I'(lambda_n)|^{1/2} |Theta'(lambda_n)|^{-1/2}, with |I'(lambda_n)| = 2/nu_n.
    void pair_with(const ClarkInner& clark);
};

inline constexpr double kUnimodularTolerance = 1e-8;

/// K_lambda(z) = (i / 2 pi) (1 - conj(Theta(lambda)) Theta(z)) / (z - lambda) for real lambda.
Complex kernel_eval(const InnerFunction& theta, double lambda, Complex z);

using KernelEvaluator = std::function<Complex(Complex)>;

/// k_{lambda_n} = K_{lambda_n} / ||K_{lambda_n}|| for node index n. The evaluator refers to
/// system.theta, so the system must outlive it.
KernelEvaluator normalized_kernel(const KernelSystem& system, int n);

struct GramMatrix {
    MatrixXcd entries;  // entries(m, n) = <k_n, k_m>
    int first_index = 0;
    std::optional<double> lambda_min, lambda_max;

    int size() const { return static_cast<int>(entries.rows()); }
    int last_index() const { return first_index + size() - 1; }
};

/// Closed-form Gram over node indices [lo, hi] (the whole window by default).
GramMatrix gram_closed_form(const KernelSystem& system);
GramMatrix gram_closed_form(const KernelSystem& system, int lo, int hi);

/// Gram of arbitrary line functions by quadrature: entries(m, n) = int f_n conj(f_m) dt.
MatrixXcd gram_of_functions(const std::vector<std::function<Complex(double)>>& fs,
                            const QuadratureOptions& opts = {});

/// Quadrature Gram of the normalized kernels with indices in [lo, hi].
GramMatrix gram_quadrature(const KernelSystem& system, int lo, int hi, const QuadratureOptions& opts = {});

/// max |(1 - I) sum a_n k^Theta_n - (sum a_n eta_n k^I_n - Theta sum a_n eta_n conj(Theta(lambda_n)) k^I_n)|
/// over the sample points. Coefficients a cover the node indices [first, first + a.size()).
double verify_key_identity(const ClarkInner& clark, const InnerFunction& theta, const SeparatedSequence& nodes,
                           int first, const VectorXcd& a, const std::vector<Complex>& z_samples);

/// sqrt(int |f(x + i y)|^2 dx).
double horizontal_norm(const KernelEvaluator& f, double y, const QuadratureOptions& opts = {});

/// Linear combination sum a_n k_n with indices starting at `first`.
KernelEvaluator kernel_combination(const KernelSystem& system, int first, const VectorXcd& a);

}  // namespace mif
