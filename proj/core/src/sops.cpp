#include "cdsurface/sops.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace cdsurface {

namespace {

double subtract_radius(const ContourQuadrature& quad) {
    return 0.2 * *std::min_element(quad.radii.begin(), quad.radii.end());
}

Mat hankel(const std::vector<cplx>& m, int j) {
    Mat h(j, j);
    for (int a = 0; a < j; ++a)
        for (int b = 0; b < j; ++b) h(a, b) = m[a + b];
    return h;
}

}  // namespace

std::vector<cplx> scalar_moments(const ScalarWeight& weight, const ContourQuadrature& quad, int count) {
    std::vector<cplx> m(count, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < quad.size(); ++j) {
        const cplx z = quad.nodes[j];
        const cplx wz = weight(z);
        if (!is_finite(wz)) throw PoleError("scalar weight is not finite at a quadrature node");
        cplx acc = wz * quad.weights[j];
        for (int k = 0; k < count; ++k, acc *= z) m[k] += acc;
    }
    return m;
}

ScalarOPSystem solve_scalar_ops(const ScalarWeight& weight, const ContourQuadrature& quad, int n,
                                double max_condition) {
    if (n < 1) throw InvalidArgument("solve_scalar_ops: n must be at least 1");
    ScalarOPSystem s;
    s.n = n;
    s.moments = scalar_moments(weight, quad, 2 * n + 1);
    double reference = 0.0;
    for (std::size_t j = 0; j < quad.size(); ++j)
        reference += std::abs(quad.weights[j] * weight(quad.nodes[j])) *
                     std::pow(std::max(1.0, std::abs(quad.nodes[j])), 2 * n);
    s.p.push_back(ScalarPolynomial{{cplx{1.0, 0.0}}});
    const double scale = hankel(s.moments, n).cwiseAbs().colwise().sum().maxCoeff();
    for (int j = 1; j <= n; ++j) {
        const Mat h = hankel(s.moments, j);
        const LinearSolver lu(h, std::numeric_limits<double>::infinity());
        const double hn = h.cwiseAbs().colwise().sum().maxCoeff();
        const double cond = hn > kMomentFloor * reference && hn > 0.0 ? lu.condition() * std::max(1.0, scale / hn)
                                     : std::numeric_limits<double>::infinity();
        s.condition.push_back(cond);
        if (!(cond <= max_condition)) {
            if (j == n)
                throw SingularSystem("scalar moment matrix of size " + std::to_string(j) +
                                     ": numerically singular (condition estimate " + std::to_string(cond) + ")");
            s.complete = false;
        }
        if (j == n) {
            const Mat g = lu.solve(Mat::Identity(n, n));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) s.gram_inverse.push_back(g(a, b));
        }
        Vec rhs(j), unit = Vec::Zero(j);
        for (int k = 0; k < j; ++k) rhs(k) = -s.moments[j + k];
        unit(j - 1) = 1.0;
        // h is symmetric, so row and column systems coincide
        const Vec c = lu.solve(rhs);
        const Vec d = lu.solve(unit);
        ScalarPolynomial pj, qj;
        for (int k = 0; k < j; ++k) {
            pj.coeffs.push_back(c(k));
            qj.coeffs.push_back(d(k));
        }
        pj.coeffs.push_back(1.0);
        s.p.push_back(std::move(pj));
        s.q.push_back(std::move(qj));
    }
    return s;
}

cplx scalar_cd_kernel_sum(const ScalarOPSystem& sys, cplx omega, cplx zeta) {
    if (!sys.complete) throw SingularSystem("scalar_cd_kernel_sum: orthogonal polynomials of some degree below n do not exist");
    cplx acc{0.0, 0.0};
    for (int j = 0; j < sys.n; ++j) acc += sys.q[j](omega) * sys.p[j](zeta);
    return acc;
}

cplx scalar_cd_kernel_moment(const ScalarOPSystem& sys, cplx omega, cplx zeta) {
    const int n = sys.n;
    cplx acc{0.0, 0.0}, wa{1.0, 0.0};
    for (int a = 0; a < n; ++a, wa *= omega) {
        cplx row{0.0, 0.0}, zb{1.0, 0.0};
        for (int b = 0; b < n; ++b, zb *= zeta) row += sys.gram_inverse[a * n + b] * zb;
        acc += wa * row;
    }
    return acc;
}

cplx scalar_cd_kernel(const ScalarOPSystem& sys, cplx omega, cplx zeta, double eps_switch) {
    if (std::abs(zeta - omega) < eps_switch) return scalar_cd_kernel_moment(sys, omega, zeta);
    const int n = sys.n;
    return (sys.q[n - 1](omega) * sys.p[n](zeta) - sys.p[n](omega) * sys.q[n - 1](zeta)) / (zeta - omega);
}

Mat scalar_cd_kernel_grid(const ScalarOPSystem& sys, const std::vector<cplx>& omegas, const std::vector<cplx>& zetas,
                          double eps_switch) {
    const int n = sys.n;
    std::vector<cplx> qw(omegas.size()), pw(omegas.size()), pz(zetas.size()), qz(zetas.size());
    for (std::size_t a = 0; a < omegas.size(); ++a) {
        qw[a] = sys.q[n - 1](omegas[a]);
        pw[a] = sys.p[n](omegas[a]);
    }
    for (std::size_t b = 0; b < zetas.size(); ++b) {
        pz[b] = sys.p[n](zetas[b]);
        qz[b] = sys.q[n - 1](zetas[b]);
    }
    Mat out(omegas.size(), zetas.size());
    for (std::size_t a = 0; a < omegas.size(); ++a)
        for (std::size_t b = 0; b < zetas.size(); ++b) {
            const cplx d = zetas[b] - omegas[a];
            out(a, b) = std::abs(d) < eps_switch ? scalar_cd_kernel_moment(sys, omegas[a], zetas[b])
                                                 : (qw[a] * pz[b] - pw[a] * qz[b]) / d;
        }
    return out;
}

YResult assemble_scalar_Y(const ScalarOPSystem& sys, const ScalarWeight& weight, const ContourQuadrature& quad,
                          cplx zeta) {
    const auto& p = sys.p[sys.n];
    const auto& q = sys.q[sys.n - 1];
    const double sub = subtract_radius(quad);
    YResult y;
    y.near_contour = quad.distance(zeta) < kNearContour;
    y.value.resize(2, 2);
    y.value(0, 0) = p(zeta);
    y.value(0, 1) = cauchy_integral(quad, [&](cplx s) { return p(s) * weight(s); }, zeta, sub) / two_pi_i;
    y.value(1, 0) = -two_pi_i * q(zeta);
    y.value(1, 1) = -cauchy_integral(quad, [&](cplx s) { return q(s) * weight(s); }, zeta, sub);
    return y;
}

YResult assemble_scalar_Yinv(const ScalarOPSystem& sys, const ScalarWeight& weight, const ContourQuadrature& quad,
                             cplx zeta) {
    const auto& p = sys.p[sys.n];
    const auto& q = sys.q[sys.n - 1];
    const double sub = subtract_radius(quad);
    YResult y;
    y.near_contour = quad.distance(zeta) < kNearContour;
    y.value.resize(2, 2);
    y.value(0, 0) = -cauchy_integral(quad, [&](cplx s) { return weight(s) * q(s); }, zeta, sub);
    y.value(0, 1) = -cauchy_integral(quad, [&](cplx s) { return weight(s) * p(s); }, zeta, sub) / two_pi_i;
    y.value(1, 0) = two_pi_i * q(zeta);
    y.value(1, 1) = p(zeta);
    return y;
}

cplx scalar_kernel_from_Y(const ScalarOPSystem& sys, const ScalarWeight& weight, const ContourQuadrature& quad,
                          cplx omega, cplx zeta) {
    const Mat yinv = assemble_scalar_Yinv(sys, weight, quad, omega).value;
    const Mat y = assemble_scalar_Y(sys, weight, quad, zeta).value;
    const cplx v = yinv(1, 0) * y(0, 0) + yinv(1, 1) * y(1, 0);
    return v / (two_pi_i * (zeta - omega));
}

}  // namespace cdsurface
