#pragma once

#include "mif/common.hpp"
#include "mif/quadrature.hpp"

#include <functional>

namespace mif {

/// Boundary values on N equispaced circle points theta_m = 2 pi (m + 1/2) / N
/// together with their Fourier coefficients c_k, k in [-N/2, N/2).
///
/// The half-step offset keeps theta = 0 (the image of t = infinity) off the grid.
class CircleTrace {
public:
    CircleTrace() = default;
    static CircleTrace from_samples(VectorXcd samples);
    static CircleTrace from_coefficients(VectorXcd coeffs_fft_order);

    int size() const { return static_cast<int>(samples_.size()); }
    const VectorXcd& samples() const { return samples_; }
    /// Coefficients in FFT storage order: c_k at position k mod N.
    const VectorXcd& coefficients() const { return coeffs_; }
    Complex coefficient(int k) const;

    /// Fourier series evaluated at an arbitrary angle (trigonometric interpolation).
    Complex evaluate(double theta) const;

private:
    VectorXcd samples_;
    VectorXcd coeffs_;
};

bool is_power_of_two(int n);

/// Circle angles theta_m and their Cayley pullback nodes t_m = -cot(theta_m / 2).
VectorXd circle_angles(int n);
VectorXd cayley_nodes(int n);
/// Angle on the circle of the real point t, in (0, 2 pi).
double cayley_angle(double t);

/// Fourier coefficients (FFT order) of samples on the half-shifted grid, and back.
VectorXcd fourier_coefficients(const VectorXcd& samples);
VectorXcd fourier_samples(const VectorXcd& coeffs);

/// Function transfer F(zeta) = f(t) (t + i) / sqrt(2): the inverse of
/// M(F)(t) = sqrt(2)/(t + i) F(phi(t)), unitary between L^2(R, dt) and L^2(T, dtheta).
CircleTrace cayley_transfer(const VectorXd& nodes, const VectorXcd& line_values);
VectorXcd cayley_inverse(const CircleTrace& trace);

/// Samples a line function through the weighted transfer.
CircleTrace transfer_function(const std::function<Complex(double)>& f, int n);
/// Samples a multiplier (no weight): symbols act by multiplication on both sides.
CircleTrace transfer_symbol(const std::function<Complex(double)>& u, int n);

/// Discrete L^2(T, dtheta) inner product and norm.
Complex circle_inner(const CircleTrace& f, const CircleTrace& g);
double circle_norm(const CircleTrace& f);

/// Keeps modes k >= 0 (constants belong to the analytic side).
CircleTrace riesz_project(const CircleTrace& trace);
CircleTrace riesz_complement(const CircleTrace& trace);

/// Conjugate function: multiplier -i sign(k), Nyquist mode dropped.
CircleTrace conjugate_function(const CircleTrace& trace);

/// Fraction of sum |c_k|^2 carried by |k| > N/4.
double tail_mass_fraction(const CircleTrace& trace);

/// Smallest power of two >= start whose trace of f has tail_mass_fraction below `tol`
/// (capped at max_size).
int adaptive_resolution(const std::function<Complex(double)>& f, bool weighted, int start = 4096,
                        int max_size = 1 << 20, double tol = 1e-8);

enum class DecayClass { CDotR, L2, L1Pi };

/// Real function on the line with its decay class; CDotR functions carry their
/// common limit at +-infinity.
struct LineFunction {
    std::function<double(double)> eval;
    DecayClass decay = DecayClass::L1Pi;
    double limit = 0.0;

    double operator()(double t) const { return eval(t); }
};

/// (1/pi) PV int (1/(x - t) + t/(1 + t^2)) b(t) dt by direct quadrature.
double pv_hilbert(const LineFunction& b, double x, const QuadratureOptions& opts = {});

struct HilbertResult {
    VectorXd values;
    double constant = 0.0;   // anchor calibration added to the circle conjugate
    double anchor = 0.0;
    int resolution = 0;
};

/// Hilbert transform through the circle conjugate function, with the additive
/// constant fixed by PV quadrature at `anchor`.
HilbertResult hilbert_transform(const LineFunction& b, const VectorXd& xs, int resolution = 0,
                                double anchor = 0.0);

/// Hilbert transform values at the Cayley nodes of resolution n, calibrated constant included.
HilbertResult hilbert_on_nodes(const LineFunction& b, int n, double anchor = 0.0);

/// u(t) = phi(t)^n exp(i (c + a(t) + b~(t))).
class SynthesizedSymbol {
public:
    SynthesizedSymbol(LineFunction a, LineFunction b, double c, int winding, int reference_resolution = 0);

    CircleTrace trace(int n) const;
    Complex operator()(double t) const;

    const LineFunction& a() const { return a_; }
    const LineFunction& b() const { return b_; }
    double c() const { return c_; }
    int winding() const { return n_; }
    double hilbert_constant() const { return constant_; }
    int reference_resolution() const { return reference_.size(); }

private:
    LineFunction a_, b_;
    double c_;
    int n_;
    double constant_ = 0.0;
    CircleTrace reference_;  // b~ at the reference resolution
};

SynthesizedSymbol synthesize_unimodular(const LineFunction& a, const LineFunction& b, double c, int n);

/// int f conj(g) dt over R.
QuadratureResult inner_product_quadrature(const std::function<Complex(double)>& f,
                                          const std::function<Complex(double)>& g,
                                          const QuadratureOptions& opts = {});

}  // namespace mif
