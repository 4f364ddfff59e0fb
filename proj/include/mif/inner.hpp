#pragma once

#include "mif/common.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mif {

/// A finite window of a separated real sequence together with its Clark weights.
///
/// Nodes are stored sorted and carry consecutive integer indices starting at
/// `first_index`, so node `n` lives at position `n - first_index`.
struct SeparatedSequence {
    VectorXd lambdas;
    VectorXd nus;
    int first_index = 0;

    double delta = 0.0;         // min consecutive gap
    double discrepancy = 0.0;   // max_n |sum_{k!=n} (1/(l_n-l_k) + l_k/(l_k^2+1))|
    double weight_mass = 0.0;   // sum nu_k / (1 + l_k^2)
    std::vector<int> permutation;  // sorted position -> input position

    int size() const { return static_cast<int>(lambdas.size()); }
    int last_index() const { return first_index + size() - 1; }
    bool contains(int n) const { return n >= first_index && n <= last_index(); }
    int position(int n) const;
    double lambda(int n) const { return lambdas[position(n)]; }
    double nu(int n) const { return nus[position(n)]; }
};

/// Sorts (recording the permutation) and checks separation and weight positivity.
SeparatedSequence validate_sequence(const VectorXd& lambdas, const VectorXd& nus, int first_index = 0);

/// lambda_n = n on [lo, hi].
SeparatedSequence lattice_sequence(int lo, int hi, double nu = 1.0 / kPi);
/// lambda_n = n + delta * (-1)^n on [lo, hi].
SeparatedSequence alternating_sequence(int lo, int hi, double delta, double nu = 1.0 / kPi);
/// lambda_n = n + delta * rate^{-|n|} on [lo, hi].
SeparatedSequence decaying_sequence(int lo, int hi, double delta, double rate, double nu = 1.0 / kPi);

/// Explicit meromorphic inner function e^{iaz} B(z) with finitely many zeros.
struct InnerFunctionSpec {
    double exp_type = 0.0;
    std::vector<Complex> zeros;

    /// sum Im z_k / (1 + |z_k|^2) over the stored zeros.
    double blaschke_mass() const;
};

InnerFunctionSpec exponential_inner(double a);

/// Product of normalized half-plane Blaschke factors and e^{iaz}.
/// Below the axis the value is 1/conj(Theta(conj z)), taken factor by factor.
Complex eval_inner(const InnerFunctionSpec& spec, Complex z);

/// |Theta'(t)| = a + 2 sum Im z_k / |t - z_k|^2.
double boundary_derivative(const InnerFunctionSpec& spec, double t);

/// Continuous increase of arg Theta along the real line from a to b.
double argument_increment(const InnerFunctionSpec& spec, double a, double b);

/// sup over the real line of boundary_derivative.
double sup_boundary_derivative(const InnerFunctionSpec& spec);

enum class TailPolicy {
    Truncate,     // window sum only
    LatticeTail,  // nodes outside the window are the integers, summed in closed form
};

/// Inner function I = (G - i)/(G + i) built from the Clark measure sum nu_k delta_{lambda_k}.
class ClarkInner {
public:
    explicit ClarkInner(SeparatedSequence seq, TailPolicy tail = TailPolicy::LatticeTail,
                        double tail_weight = 1.0 / kPi);

    /// G(z) = sum nu_k (1/(lambda_k - z) - lambda_k/(lambda_k^2+1)), plus the tail term.
    Complex herglotz(Complex z) const;
    Complex operator()(Complex z) const;

    /// |I'(t)| on the real line; equals 2/nu_n at the nodes.
    double boundary_derivative(double t) const;
    double node_derivative(int n) const;
    /// Continuous increase of arg I from a to b: one full turn per node in (a, b], tail
    /// integers included, plus the change of the principal angle in [0, 2 pi).
    double argument_increment(double a, double b) const;
    /// Number of nodes in (a, b], counting lattice tail nodes outside the window.
    long nodes_in(double a, double b) const;

    /// lim_{y->inf} Re G(iy).
    double herglotz_offset() const;

    const SeparatedSequence& sequence() const { return seq_; }
    TailPolicy tail_policy() const { return tail_; }
    double tail_weight() const { return tail_weight_; }

private:
    struct Split {
        int nearest;       // position of the nearest node
        Complex distance;  // lambda_nearest - z
        Complex rest;      // G(z) without the nearest pole
    };
    Split split(Complex z) const;
    Complex tail_sum(Complex z) const;
    double tail_derivative(double t) const;
    int nearest_position(double x) const;

    SeparatedSequence seq_;
    TailPolicy tail_;
    double tail_weight_;
    double centering_ = 0.0;  // sum nu_k lambda_k/(lambda_k^2+1)
    Complex tail_constant_hi_{}, tail_constant_lo_{};
};

ClarkInner clark_inner(const SeparatedSequence& seq, TailPolicy tail = TailPolicy::LatticeTail);

/// |I'(lambda_n)| = 2/nu_n for the Clark inner function of `seq`.
double clark_derivative(const SeparatedSequence& seq, int n);

/// Adjusts the weights of the `support` central nodes (mean-zero change) so that
/// herglotz_offset() vanishes, i.e. I(iy) -> 0 along the imaginary axis.
SeparatedSequence recenter_weights(const SeparatedSequence& seq, TailPolicy tail, int support = 8,
                                   double tail_weight = 1.0 / kPi);

/// Either an explicit spec or a Clark construction behind one evaluation interface.
class InnerFunction {
public:
    InnerFunction(InnerFunctionSpec spec);
    InnerFunction(ClarkInner clark);

    Complex operator()(Complex z) const;
    double boundary_derivative(double t) const;
    double argument_increment(double a, double b) const;

    /// Estimate of ||Theta'||_inf. Explicit specs are global; Clark functions are
    /// sampled on [lo, hi] extended by two node gaps.
    double sup_derivative(double lo = -10.0, double hi = 10.0) const;

    bool is_clark() const { return std::holds_alternative<ClarkInner>(rep_); }
    const ClarkInner* clark() const { return std::get_if<ClarkInner>(&rep_); }
    const InnerFunctionSpec* spec() const { return std::get_if<InnerFunctionSpec>(&rep_); }
    std::string describe() const;

private:
    std::variant<InnerFunctionSpec, ClarkInner> rep_;
};

struct BoundaryProfile {
    VectorXd grid;
    double step = 0.0;
    VectorXd modulus_derivative;
    VectorXd argument;  // continuous, nondecreasing branch
    double sup_derivative = 0.0;
    double min_derivative = 0.0;
    double ratio = 0.0;           // min/max of modulus_derivative
    bool bounded_ratio = false;   // ratio >= kBoundedRatioThreshold
    double max_fd_mismatch = 0.0; // max |dphi/dt - |Theta'|| at midpoints
};

inline constexpr double kBoundedRatioThreshold = 0.1;

VectorXd uniform_grid(double a, double b, int points);

/// Uniform grid on [a, b] with step h such that h * sup|Theta'| < pi/4.
VectorXd default_boundary_grid(const InnerFunction& f, double a, double b);

BoundaryProfile boundary_profile(const InnerFunction& f, const VectorXd& grid);

/// min |Theta| over grid x {0 <= Im z <= epsilon}; throws InvalidStrip when
/// epsilon * sup_derivative >= 1.
double min_modulus_strip(const InnerFunction& f, double epsilon, const VectorXd& grid,
                         double sup_derivative, int levels = 16);
double min_modulus_strip(const InnerFunction& f, double epsilon, const VectorXd& grid);

}  // namespace mif
