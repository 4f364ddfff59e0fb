#include "mif/basis.hpp"

#include "mif/hardy.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace mif {

RieszBounds riesz_bounds(GramMatrix& gram) {
    const RieszBounds b = riesz_bounds(gram.entries);
    gram.lambda_min = b.lower;
    gram.lambda_max = b.upper;
    return b;
}

std::vector<AobTail> aob_constants(const GramMatrix& gram, const std::vector<int>& start_indices) {
    require_hermitian(gram.entries);
    std::vector<AobTail> out;
    for (const int s : start_indices) {
        const int p = s - gram.first_index;
        if (p < 0 || p >= gram.size()) {
            std::ostringstream os;
            os << "tail start " << s << " outside Gram window [" << gram.first_index << ", " << gram.last_index()
               << "]";
            throw Error(ErrorKind::WindowTooSmall, os.str());
        }
        const int len = gram.size() - p;
        const RieszBounds b = riesz_bounds(gram.entries.bottomRightCorner(len, len));
        out.push_back({s, b.lower, b.upper});
    }
    return out;
}

MinimalityMargin minimality_margin(const MatrixXcd& gram, double singular_tol) {
    const Eigen::Index n = gram.rows();
    MinimalityMargin out;
    out.distance_sq = VectorXd::Zero(n);
    if (n == 0) return out;
    if (n == 1) {
        out.distance_sq[0] = gram(0, 0).real();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
    const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    if (es.eigenvalues()(0) > singular_tol * top) {
        const MatrixXcd inv = gram.ldlt().solve(MatrixXcd::Identity(n, n));
        for (Eigen::Index j = 0; j < n; ++j) out.distance_sq[j] = 1.0 / inv(j, j).real();
        return out;
    }
    // Singular: indices carried by a null vector sit in the span of the others.
    out.singular = true;
    for (Eigen::Index k = 0; k < n && es.eigenvalues()(k) <= singular_tol * top; ++k) {
        const VectorXcd v = es.eigenvectors().col(k);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(v[j]) > 1e-8) out.flagged.push_back(static_cast<int>(j));
        }
    }
    std::sort(out.flagged.begin(), out.flagged.end());
    out.flagged.erase(std::unique(out.flagged.begin(), out.flagged.end()), out.flagged.end());
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::binary_search(out.flagged.begin(), out.flagged.end(), static_cast<int>(j))) continue;
        std::vector<Eigen::Index> others;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k != j) others.push_back(k);
        }
        const MatrixXcd go = gram(others, others);
        const VectorXcd b = gram(others, j);
        const VectorXcd x = go.completeOrthogonalDecomposition().solve(b);
        out.distance_sq[j] = std::max(0.0, gram(j, j).real() - b.dot(x).real());
    }
    return out;
}

double multiplier_lower_bound(const KernelSystem& system, int lo, int hi,
                              const std::function<Complex(double)>& multiplier, const QuadratureOptions& opts) {
    const GramMatrix g = gram_closed_form(system, lo, hi);
    std::vector<std::function<Complex(double)>> fs;
    for (int n = lo; n <= hi; ++n) {
        KernelEvaluator k = normalized_kernel(system, n);
        fs.emplace_back([k, &multiplier](double t) { return multiplier(t) * k(Complex(t, 0.0)); });
    }
    const MatrixXcd a = gram_of_functions(fs, opts);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(a, g.entries, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues()(0)));
}

double t_one_minus_i_lower_bound(const KernelSystem& system, const InnerFunction& inner, int lo, int hi,
                                 const QuadratureOptions& opts) {
    return multiplier_lower_bound(
        system, lo, hi, [&inner](double t) { return 1.0 - inner(Complex(t, 0.0)); }, opts);
}

AngleResult subspace_angle_cosine(const KernelSystem& system, const ClarkInner& clark, int tail_start, int tail_end,
                                  int resolution) {
    AngleResult out;
    out.tail_start = tail_start;
    out.tail_end = tail_end;
    out.resolution = resolution;

    const GramMatrix g = gram_closed_form(system, tail_start, tail_end);
    out.tail_lambda_min = riesz_bounds(g.entries).lower;
    if (out.tail_lambda_min < 1e-8) {
        std::ostringstream os;
        os << "tail Gram lambda_min = " << out.tail_lambda_min;
        throw Error(ErrorKind::IllConditionedTail, os.str());
    }

    const InnerFunction& theta = system.theta;
    auto u = [&](double t) { return theta(Complex(t, 0.0)) * std::conj(clark(Complex(t, 0.0))); };

    const VectorXd t = cayley_nodes(resolution);
    VectorXcd u_grid(resolution);
    for (int m = 0; m < resolution; ++m) u_grid[m] = u(t[m]);

    const int count = tail_end - tail_start + 1;
    const int half = resolution / 2;
    MatrixXcd modes(half, count);
    for (int j = 0; j < count; ++j) {
        const int n = tail_start + j;
        const int p = system.nodes.position(n);
        const double lambda = system.nodes.lambdas[p];
        const Complex clark_value = clark(Complex(lambda, 0.0));
        if (std::abs(clark_value - 1.0) > kUnimodularTolerance) {
            throw Error(ErrorKind::NodeMismatch, "I(lambda_" + std::to_string(n) + ") != 1");
        }
        const Complex theta_lambda = system.theta_at_node(p);
        const Complex u_lambda = theta_lambda;
        const Complex scale = -kI / std::sqrt(2.0 * kPi * system.derivatives[p]) * std::conj(theta_lambda);
        // Derivative of u at the node, used where a grid point nearly coincides with it.
        const double h = 1e-5;
        const Complex du = (u(lambda + h) - u(lambda - h)) / (2.0 * h);

        VectorXcd samples(resolution);
        for (int m = 0; m < resolution; ++m) {
            const double d = t[m] - lambda;
            const Complex q = std::abs(d) < 1e-7 ? du : (u_grid[m] - u_lambda) / d;
            samples[m] = scale * q * (t[m] + kI) / std::sqrt(2.0);
        }
        modes.col(j) = fourier_coefficients(samples).head(half);
    }

    const MatrixXcd b = 2.0 * kPi * modes.adjoint() * modes;
    Eigen::LLT<MatrixXcd> llt(g.entries);
    const MatrixXcd lb = llt.matrixL().solve(b);
    const MatrixXcd x = llt.matrixL().solve(lb.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
    out.cosine = std::sqrt(std::max(0.0, es.eigenvalues()(count - 1)));
    return out;
}

BasisReport basis_report(const KernelSystem& system, const std::vector<int>& sizes, const std::vector<int>& aob_starts,
                         double aob_threshold, double riesz_floor) {
    BasisReport r;
    r.sizes = sizes;
    r.aob_threshold = aob_threshold;
    r.riesz_floor = riesz_floor;
    const int total = system.size();
    for (const int s : sizes) {
        if (s < 1 || s > total) {
            throw Error(ErrorKind::WindowTooSmall, "window size " + std::to_string(s) + " exceeds the node window");
        }
        const int lo = system.nodes.first_index + (total - s) / 2;
        const RieszBounds b = riesz_bounds(gram_closed_form(system, lo, lo + s - 1).entries);
        r.lower.push_back(b.lower);
        r.upper.push_back(b.upper);
    }
    r.nested_monotone = true;
    for (std::size_t j = 1; j < sizes.size(); ++j) {
        if (sizes[j] < sizes[j - 1]) continue;
        if (r.lower[j] > r.lower[j - 1] + 1e-10 || r.upper[j] < r.upper[j - 1] - 1e-10) r.nested_monotone = false;
    }

    const GramMatrix full = gram_closed_form(system);
    r.min_margin_sq = minimality_margin(full.entries).min();
    if (!r.lower.empty()) {
        const std::size_t k = r.lower.size();
        r.riesz_verdict = r.lower.back() > riesz_floor;
        if (k >= 2) {
            const double change = std::abs(r.lower[k - 1] - r.lower[k - 2]) / std::max(r.lower[k - 2], 1e-300);
            r.riesz_verdict = r.riesz_verdict && change < 0.2;
        }
    }

    if (!aob_starts.empty()) {
        r.aob_tails = aob_constants(full, aob_starts);
        const std::size_t k = r.aob_tails.size();
        bool trend = true;
        for (std::size_t j = (k >= 3 ? k - 2 : 1); j < k; ++j) {
            if (r.aob_tails[j].deviation() > r.aob_tails[j - 1].deviation() + 1e-12) trend = false;
        }
        r.aob_verdict = trend && r.aob_tails.back().deviation() < aob_threshold;
    }
    return r;
}

}  // namespace mif
