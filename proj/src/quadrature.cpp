#include "mif/quadrature.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace mif {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    VectorXcd value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const VectorIntegrand& f, Eigen::Index dim, double a, double b, long& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    VectorXcd kron = VectorXcd::Zero(dim), gauss = VectorXcd::Zero(dim);
    const VectorXcd fc = f(c);
    kron += kWgk[7] * fc;
    gauss += kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const VectorXcd s = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
        kron += kWgk[i] * s;
        if (i % 2 == 1) gauss += kWg[i / 2] * s;
    }
    evals += 15;
    kron *= h;
    gauss *= h;
    return {a, b, kron, (kron - gauss).cwiseAbs().maxCoeff()};
}

}  // namespace

QuadratureResult integrate(const VectorIntegrand& f, Eigen::Index dim, double a, double b,
                           const QuadratureOptions& opts) {
    QuadratureResult out;
    out.value = VectorXcd::Zero(dim);
    if (a == b) return out;
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / opts.panel_width)));
    std::priority_queue<Panel> heap;
    VectorXcd total = VectorXcd::Zero(dim);
    double err = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double pa = a + (b - a) * i / pieces;
        const double pb = a + (b - a) * (i + 1) / pieces;
        Panel p = gk15(f, dim, pa, pb, out.evaluations);
        total += p.value;
        err += p.error;
        heap.push(std::move(p));
    }
    while (err > std::max(opts.abs_tol, opts.rel_tol * total.cwiseAbs().maxCoeff())) {
        if (out.evaluations > opts.max_evaluations) {
            std::ostringstream os;
            os << "error estimate " << err << " on [" << a << ", " << b << "]";
            throw Error(ErrorKind::QuadratureNonconvergence, os.str());
        }
        Panel worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) break;  // interval exhausted at double precision
        Panel left = gk15(f, dim, worst.a, m, out.evaluations);
        Panel right = gk15(f, dim, m, worst.b, out.evaluations);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    total.setZero();
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = err;
    out.half_width = 0.5 * std::abs(b - a);
    return out;
}

QuadratureResult integrate_line(const VectorIntegrand& f, Eigen::Index dim, const QuadratureOptions& opts) {
    double T = opts.initial_half_width;
    QuadratureResult core = integrate(f, dim, -T, T, opts);
    VectorXcd running = core.value;
    long evals = core.evaluations;
    double qerr = core.error;

    VectorXcd previous_estimate;
    bool have_previous = false;
    while (true) {
        const QuadratureResult left = integrate(f, dim, -2.0 * T, -T, opts);
        const QuadratureResult right = integrate(f, dim, T, 2.0 * T, opts);
        evals += left.evaluations + right.evaluations;
        qerr += left.error + right.error;
        const VectorXcd wider = running + left.value + right.value;
        const VectorXcd estimate = 2.0 * wider - running;  // removes the A/T tail term
        running = wider;
        T *= 2.0;
        if (have_previous) {
            const double change = (estimate - previous_estimate).cwiseAbs().maxCoeff();
            const double scale = std::max(1.0, estimate.cwiseAbs().maxCoeff());
            if (change <= opts.tail_tol * scale) {
                return {estimate, change + qerr, T, evals};
            }
        }
        if (T > opts.max_half_width) {
            const double change = have_previous ? (estimate - previous_estimate).cwiseAbs().maxCoeff() : INFINITY;
            std::ostringstream os;
            os << "tail estimate still moving by " << change << " at T=" << T;
            throw Error(ErrorKind::QuadratureNonconvergence, os.str());
        }
        previous_estimate = estimate;
        have_previous = true;
    }
}

QuadratureResult integrate_line(const std::function<Complex(double)>& f, const QuadratureOptions& opts) {
    return integrate_line([&](double t) { return VectorXcd::Constant(1, f(t)); }, 1, opts);
}

}  // namespace mif
