#pragma once

#include "mif/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <vector>

namespace mif {

struct RieszBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Throws NonHermitianInput unless g is square and ||g - g*|| <= tol * max(1, ||g||).
template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& g, double tol = 1e-10) {
    if (g.rows() != g.cols()) throw Error(ErrorKind::NonHermitianInput, "Gram matrix is not square");
    const double asym = (g - g.adjoint()).norm();
    if (asym > tol * std::max(1.0, static_cast<double>(g.norm()))) {
        throw Error(ErrorKind::NonHermitianInput, "Gram asymmetry " + std::to_string(asym));
    }
}

/// Extremal eigenvalues (c, C) of a Hermitian Gram section.
template <typename Derived>
RieszBounds riesz_bounds(const Eigen::MatrixBase<Derived>& g) {
    require_hermitian(g);
    if (g.rows() == 0) return {};
    using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Plain h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Plain> es(h, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

/// Also records the bounds on the Gram.
RieszBounds riesz_bounds(GramMatrix& gram);

struct AobTail {
    int start = 0;  // node index where the tail begins
    double lower = 0.0;
    double upper = 0.0;
    double deviation() const { return std::max(std::abs(lower - 1.0), std::abs(upper - 1.0)); }
};

/// Riesz bounds of the trailing principal submatrices starting at the given node indices.
std::vector<AobTail> aob_constants(const GramMatrix& gram, const std::vector<int>& start_indices);

struct MinimalityMargin {
    VectorXd distance_sq;       // squared distance of k_n to span of the others
    bool singular = false;
    std::vector<int> flagged;   // positions in an exact linear dependence
    double min() const { return distance_sq.size() ? distance_sq.minCoeff() : 0.0; }
};

MinimalityMargin minimality_margin(const MatrixXcd& gram, double singular_tol = 1e-12);

/// inf ||m f|| / ||f|| over the span of the normalized kernels with indices in [lo, hi],
/// from the kernel Gram and the quadrature Gram of {m k_n}.
double multiplier_lower_bound(const KernelSystem& system, int lo, int hi,
                              const std::function<Complex(double)>& multiplier,
                              const QuadratureOptions& opts = {});

/// Multiplier 1 - I.
double t_one_minus_i_lower_bound(const KernelSystem& system, const InnerFunction& inner, int lo, int hi,
                                 const QuadratureOptions& opts = {});

struct AngleResult {
    double cosine = 0.0;
    double tail_lambda_min = 0.0;
    int tail_start = 0;
    int tail_end = 0;
    int resolution = 0;
};

/// Cosine of the angle between span{k^Theta_n : tail_start <= n <= tail_end} and I H^2.
///
/// Uses P_+(conj(I) k_n) = -c_n conj(Theta(lambda_n)) P_+[(u - u(lambda_n)) / (t - lambda_n)],
/// u = Theta conj(I), which holds because I(lambda_n) = 1; the difference quotients are
/// bounded and decay like 1/t, so their circle traces resolve well even when conj(I) k_n
/// oscillates at infinity.
AngleResult subspace_angle_cosine(const KernelSystem& system, const ClarkInner& clark, int tail_start, int tail_end,
                                  int resolution = 1 << 17);

struct BasisReport {
    std::vector<int> sizes;
    std::vector<double> lower, upper;
    std::vector<AobTail> aob_tails;
    double min_margin_sq = 0.0;
    bool nested_monotone = false;

    double riesz_floor = 1e-3;
    bool riesz_verdict = false;

    double aob_threshold = 0.02;
    bool aob_verdict = false;
};

/// Nested centered windows of the given sizes; AOB tails from the full window.
BasisReport basis_report(const KernelSystem& system, const std::vector<int>& sizes,
                         const std::vector<int>& aob_starts, double aob_threshold = 0.02,
                         double riesz_floor = 1e-3);

}  // namespace mif
