#include "mif/kernels.hpp"

#include <cmath>
#include <sstream>

namespace mif {

namespace {

// Below this distance to the node the difference quotient is replaced by its limit.
constexpr double kCoincidence = 1e-9;

Complex kernel_from_values(Complex theta_lambda, Complex theta_z, double derivative, double lambda, Complex z) {
    const Complex d = z - lambda;
    if (std::abs(d) < kCoincidence) return derivative / (2.0 * kPi);
    return kI / (2.0 * kPi) * (1.0 - std::conj(theta_lambda) * theta_z) / d;
}

void check_unimodular(Complex value, double lambda) {
    if (std::abs(std::abs(value) - 1.0) > kUnimodularTolerance) {
        std::ostringstream os;
        os << "|Theta(" << lambda << ")| = " << std::abs(value);
        throw Error(ErrorKind::NodeNotUnimodular, os.str());
    }
}

}  // namespace

KernelSystem::KernelSystem(InnerFunction th, SeparatedSequence seq) : theta(std::move(th)), nodes(std::move(seq)) {
    const int n = nodes.size();
    derivatives.resize(n);
    norms.resize(n);
    phases_re.resize(n);
    phases_im.resize(n);
    for (int p = 0; p < n; ++p) {
        const double l = nodes.lambdas[p];
        const Complex v = theta(l);
        check_unimodular(v, l);
        phases_re[p] = v.real();
        phases_im[p] = v.imag();
        derivatives[p] = theta.boundary_derivative(l);
        if (!(derivatives[p] > 0.0)) {
            std::ostringstream os;
            os << "|Theta'(" << l << ")| = " << derivatives[p];
            throw Error(ErrorKind::NodeNotUnimodular, os.str());
        }
        norms[p] = std::sqrt(derivatives[p] / (2.0 * kPi));
    }
}

void KernelSystem::pair_with(const ClarkInner& clark) {
    VectorXd e(size());
    for (int p = 0; p < size(); ++p) {
        const int n = nodes.first_index + p;
        e[p] = std::sqrt(clark.node_derivative(n) / derivatives[p]);
    }
    etas = e;
}

Complex kernel_eval(const InnerFunction& theta, double lambda, Complex z) {
    const Complex tl = theta(lambda);
    check_unimodular(tl, lambda);
    if (std::abs(z - lambda) < kCoincidence) return theta.boundary_derivative(lambda) / (2.0 * kPi);
    return kernel_from_values(tl, theta(z), 0.0, lambda, z);
}

KernelEvaluator normalized_kernel(const KernelSystem& system, int n) {
    const int p = system.nodes.position(n);
    const double lambda = system.nodes.lambdas[p];
    const Complex tl = system.theta_at_node(p);
    const double deriv = system.derivatives[p];
    const double norm = system.norms[p];
    const InnerFunction* theta = &system.theta;
    return [=](Complex z) { return kernel_from_values(tl, (*theta)(z), deriv, lambda, z) / norm; };
}

GramMatrix gram_closed_form(const KernelSystem& system) {
    return gram_closed_form(system, system.nodes.first_index, system.nodes.last_index());
}

GramMatrix gram_closed_form(const KernelSystem& system, int lo, int hi) {
    const int p0 = system.nodes.position(lo);
    system.nodes.position(hi);
    const int n = hi - lo + 1;
    MatrixXcd g(n, n);
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            if (m == k) {
                g(m, k) = 1.0;
                continue;
            }
            const int pm = p0 + m, pk = p0 + k;
            const Complex value = kernel_from_values(system.theta_at_node(pk), system.theta_at_node(pm),
                                                     system.derivatives[pk], system.nodes.lambdas[pk],
                                                     system.nodes.lambdas[pm]);
            g(m, k) = value / (system.norms[pk] * system.norms[pm]);
        }
    }
    GramMatrix out;
    out.entries = 0.5 * (g + g.adjoint());
    out.first_index = lo;
    return out;
}

MatrixXcd gram_of_functions(const std::vector<std::function<Complex(double)>>& fs, const QuadratureOptions& opts) {
    const Eigen::Index n = static_cast<Eigen::Index>(fs.size());
    auto integrand = [&](double t) {
        VectorXcd v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = fs[j](t);
        VectorXcd out(n * n);
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index m = 0; m < n; ++m) out[k * n + m] = v[k] * std::conj(v[m]);
        }
        return out;
    };
    const QuadratureResult r = integrate_line(integrand, n * n, opts);
    MatrixXcd g(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index m = 0; m < n; ++m) g(m, k) = r.value[k * n + m];
    }
    return 0.5 * (g + g.adjoint());
}

GramMatrix gram_quadrature(const KernelSystem& system, int lo, int hi, const QuadratureOptions& opts) {
    std::vector<std::function<Complex(double)>> fs;
    for (int n = lo; n <= hi; ++n) {
        KernelEvaluator k = normalized_kernel(system, n);
        fs.emplace_back([k](double t) { return k(Complex(t, 0.0)); });
    }
    GramMatrix out;
    out.entries = gram_of_functions(fs, opts);
    out.first_index = lo;
    return out;
}

double verify_key_identity(const ClarkInner& clark, const InnerFunction& theta, const SeparatedSequence& nodes,
                           int first, const VectorXcd& a, const std::vector<Complex>& z_samples) {
    const int count = static_cast<int>(a.size());
    std::vector<double> lambdas(count), theta_deriv(count), clark_deriv(count);
    std::vector<Complex> theta_at(count);
    for (int j = 0; j < count; ++j) {
        const int n = first + j;
        lambdas[j] = nodes.lambda(n);
        const Complex iv = clark(lambdas[j]);
        if (std::abs(iv - 1.0) > kUnimodularTolerance) {
            std::ostringstream os;
            os << "I(lambda_" << n << ") = " << iv.real() << (iv.imag() < 0 ? "" : "+") << iv.imag() << "i";
            throw Error(ErrorKind::NodeMismatch, os.str());
        }
        theta_at[j] = theta(lambdas[j]);
        check_unimodular(theta_at[j], lambdas[j]);
        theta_deriv[j] = theta.boundary_derivative(lambdas[j]);
        clark_deriv[j] = clark.node_derivative(n);
    }

    double worst = 0.0;
    for (const Complex z : z_samples) {
        const Complex iz = clark(z), tz = theta(z);
        Complex lhs_sum = 0.0, eta_sum = 0.0, eta_phase_sum = 0.0;
        for (int j = 0; j < count; ++j) {
            const double norm_theta = std::sqrt(theta_deriv[j] / (2.0 * kPi));
            const double norm_clark = std::sqrt(clark_deriv[j] / (2.0 * kPi));
            const Complex k_theta =
                kernel_from_values(theta_at[j], tz, theta_deriv[j], lambdas[j], z) / norm_theta;
            const Complex k_clark = kernel_from_values(1.0, iz, clark_deriv[j], lambdas[j], z) / norm_clark;
            const double eta = std::sqrt(clark_deriv[j] / theta_deriv[j]);
            lhs_sum += a[j] * k_theta;
            eta_sum += a[j] * eta * k_clark;
            eta_phase_sum += a[j] * eta * std::conj(theta_at[j]) * k_clark;
        }
        const Complex lhs = (1.0 - iz) * lhs_sum;
        const Complex rhs = eta_sum - tz * eta_phase_sum;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double horizontal_norm(const KernelEvaluator& f, double y, const QuadratureOptions& opts) {
    const QuadratureResult r = integrate_line([&](double x) { return Complex(std::norm(f(Complex(x, y))), 0.0); }, opts);
    return std::sqrt(r.value[0].real());
}

KernelEvaluator kernel_combination(const KernelSystem& system, int first, const VectorXcd& a) {
    std::vector<KernelEvaluator> ks;
    for (int j = 0; j < a.size(); ++j) ks.push_back(normalized_kernel(system, first + j));
    return [ks = std::move(ks), a](Complex z) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < ks.size(); ++j) s += a[static_cast<Eigen::Index>(j)] * ks[j](z);
        return s;
    };
}

}  // namespace mif
