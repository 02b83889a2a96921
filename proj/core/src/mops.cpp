#include "cdsurface/mops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cdsurface {

namespace {

Mat checked_weight(const MatrixWeight& weight, cplx z) {
    Mat w = weight.eval(z);
    if (!all_finite(w)) throw PoleError("weight is not finite at a quadrature node");
    return w;
}

Mat block_hankel(const std::vector<Mat>& m, int j, int r) {
    Mat h(r * j, r * j);
    for (int a = 0; a < j; ++a)
        for (int b = 0; b < j; ++b) h.block(r * a, r * b, r, r) = m[a + b];
    return h;
}

std::vector<Mat> split_row(const Mat& x, int j, int r) {
    std::vector<Mat> c(j);
    for (int i = 0; i < j; ++i) c[i] = x.block(0, r * i, r, r);
    return c;
}

std::vector<Mat> split_col(const Mat& x, int j, int r) {
    std::vector<Mat> c(j);
    for (int i = 0; i < j; ++i) c[i] = x.block(r * i, 0, r, r);
    return c;
}

double subtract_radius(const ContourQuadrature& quad) {
    return 0.2 * *std::min_element(quad.radii.begin(), quad.radii.end());
}

}  // namespace

Mat pairing(const MatrixPolynomial& p, const MatrixPolynomial& q, const MatrixWeight& weight,
            const ContourQuadrature& quad) {
    return quad.integrate([&](cplx z) -> Mat { return p(z) * checked_weight(weight, z) * q(z); });
}

std::vector<Mat> compute_moments(const MatrixWeight& weight, const ContourQuadrature& quad, int N) {
    if (N < 0) throw InvalidArgument("compute_moments: N must be non-negative");
    const int r = weight.r;
    std::vector<Mat> m(2 * N + 1, Mat::Zero(r, r));
    for (std::size_t j = 0; j < quad.size(); ++j) {
        const cplx z = quad.nodes[j];
        const Mat wz = checked_weight(weight, z) * quad.weights[j];
        cplx zk{1.0, 0.0};
        for (int k = 0; k <= 2 * N; ++k, zk *= z) m[k] += wz * zk;
    }
    return m;
}

MOPSystem solve_mops(const std::vector<Mat>& moments, int N, double max_condition, double reference) {
    if (N < 1) throw InvalidArgument("solve_mops: N must be at least 1");
    if (static_cast<int>(moments.size()) < 2 * N) throw InvalidArgument("solve_mops: need moments M_0..M_{2N-1}");
    const int r = static_cast<int>(moments[0].rows());
    const Mat I = Mat::Identity(r, r);
    MOPSystem s;
    s.r = r;
    s.N = N;
    s.moments = moments;
    s.PL.push_back(MatrixPolynomial({I}));
    s.PR.push_back(MatrixPolynomial({I}));
    const double scale = block_hankel(moments, N, r).cwiseAbs().colwise().sum().maxCoeff();
    for (int j = 1; j <= N; ++j) {
        const Mat h = block_hankel(moments, j, r);
        const LinearSolver lu(h, std::numeric_limits<double>::infinity());
        const double hn = h.cwiseAbs().colwise().sum().maxCoeff();
        const double cond = hn > kMomentFloor * reference && hn > 0.0 ? lu.condition() * std::max(1.0, scale / hn)
                                     : std::numeric_limits<double>::infinity();
        s.condition.push_back(cond);
        if (!(cond <= max_condition)) {
            if (j == N)
                throw SingularSystem("block moment matrix of size " + std::to_string(j) +
                                     ": numerically singular (condition estimate " + std::to_string(cond) + ")");
            s.complete = false;
        }
        if (j == N) s.gram_inverse = lu.solve(Mat::Identity(r * N, r * N));

        Mat rhs_row(r, r * j), rhs_col(r * j, r);
        for (int i = 0; i < j; ++i) {
            rhs_row.block(0, r * i, r, r) = -moments[j + i];
            rhs_col.block(r * i, 0, r, r) = -moments[j + i];
        }
        auto pl = split_row(lu.solve_left(rhs_row), j, r);
        pl.push_back(I);
        s.PL.emplace_back(std::move(pl));
        auto pr = split_col(lu.solve(rhs_col), j, r);
        pr.push_back(I);
        s.PR.emplace_back(std::move(pr));

        Mat e_row = Mat::Zero(r, r * j), e_col = Mat::Zero(r * j, r);
        e_row.block(0, r * (j - 1), r, r) = I;
        e_col.block(r * (j - 1), 0, r, r) = I;
        s.QL.emplace_back(split_row(lu.solve_left(e_row), j, r));
        s.QR.emplace_back(split_col(lu.solve(e_col), j, r));
        s.kappaL.push_back(s.QL.back().coeffs.back());
        s.kappaR.push_back(s.QR.back().coeffs.back());
        const Eigen::PartialPivLU<Mat> klu(s.kappaL.back());
        const double rc = klu.rcond();
        s.kappa_condition.push_back(rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity());
    }
    return s;
}

MOPSystem build_mops(const MatrixWeight& weight, const ContourQuadrature& quad, int N, double max_condition) {
    double reference = 0.0;
    for (std::size_t j = 0; j < quad.size(); ++j)
        reference += std::abs(quad.weights[j]) * checked_weight(weight, quad.nodes[j]).cwiseAbs().maxCoeff() *
                     std::pow(std::max(1.0, std::abs(quad.nodes[j])), 2 * N);
    return solve_mops(compute_moments(weight, quad, N), N, max_condition, reference);
}

KernelSums cd_kernel_sum_both(const MOPSystem& sys, cplx w, cplx z) {
    if (!sys.complete) throw SingularSystem("cd_kernel_sum: orthogonal polynomials of some degree below N do not exist");
    KernelSums k{Mat::Zero(sys.r, sys.r), Mat::Zero(sys.r, sys.r)};
    for (int j = 0; j < sys.N; ++j) {
        k.qr_pl += sys.QR[j](w) * sys.PL[j](z);
        k.pr_ql += sys.PR[j](w) * sys.QL[j](z);
    }
    return k;
}

Mat cd_kernel_sum(const MOPSystem& sys, cplx w, cplx z) {
    if (!sys.complete) throw SingularSystem("cd_kernel_sum: orthogonal polynomials of some degree below N do not exist");
    Mat k = Mat::Zero(sys.r, sys.r);
    for (int j = 0; j < sys.N; ++j) k += sys.QR[j](w) * sys.PL[j](z);
    return k;
}

Mat cd_kernel_moment(const MOPSystem& sys, cplx w, cplx z) {
    const int r = sys.r, n = sys.N;
    Mat left(r, r * n), right(r * n, r);
    cplx wa{1.0, 0.0}, zb{1.0, 0.0};
    for (int a = 0; a < n; ++a, wa *= w, zb *= z) {
        left.block(0, r * a, r, r) = Mat::Identity(r, r) * wa;
        right.block(r * a, 0, r, r) = Mat::Identity(r, r) * zb;
    }
    return left * sys.gram_inverse * right;
}

Mat cd_kernel_formula(const MOPSystem& sys, cplx w, cplx z, double eps_switch) {
    if (std::abs(z - w) < eps_switch) return cd_kernel_moment(sys, w, z);
    const int n = sys.N;
    return (sys.QR[n - 1](w) * sys.PL[n](z) - sys.PR[n](w) * sys.QL[n - 1](z)) / (z - w);
}

Mat cd_kernel_grid(const MOPSystem& sys, const std::vector<cplx>& ws, const std::vector<cplx>& zs,
                   double eps_switch) {
    const int r = sys.r, n = sys.N;
    std::vector<Mat> qr(ws.size()), pr(ws.size()), pl(zs.size()), ql(zs.size());
    for (std::size_t a = 0; a < ws.size(); ++a) {
        qr[a] = sys.QR[n - 1](ws[a]);
        pr[a] = sys.PR[n](ws[a]);
    }
    for (std::size_t b = 0; b < zs.size(); ++b) {
        pl[b] = sys.PL[n](zs[b]);
        ql[b] = sys.QL[n - 1](zs[b]);
    }
    Mat out(r * ws.size(), r * zs.size());
    for (std::size_t a = 0; a < ws.size(); ++a)
        for (std::size_t b = 0; b < zs.size(); ++b) {
            const cplx d = zs[b] - ws[a];
            if (std::abs(d) < eps_switch)
                out.block(r * a, r * b, r, r) = cd_kernel_moment(sys, ws[a], zs[b]);
            else
                out.block(r * a, r * b, r, r) = (qr[a] * pl[b] - pr[a] * ql[b]) / d;
        }
    return out;
}

YResult assemble_Y(const MOPSystem& sys, const MatrixWeight& weight, const ContourQuadrature& quad, cplx z) {
    const int r = sys.r, n = sys.N;
    const double sub = subtract_radius(quad);
    const auto& p = sys.PL[n];
    const auto& q = sys.QL[n - 1];
    YResult y;
    y.near_contour = quad.distance(z) < kNearContour;
    y.value.resize(2 * r, 2 * r);
    y.value.block(0, 0, r, r) = p(z);
    y.value.block(0, r, r, r) =
        cauchy_integral(quad, [&](cplx s) -> Mat { return p(s) * weight.eval(s); }, z, sub) / two_pi_i;
    y.value.block(r, 0, r, r) = -two_pi_i * q(z);
    y.value.block(r, r, r, r) = -cauchy_integral(quad, [&](cplx s) -> Mat { return q(s) * weight.eval(s); }, z, sub);
    return y;
}

YResult assemble_Yinv(const MOPSystem& sys, const MatrixWeight& weight, const ContourQuadrature& quad, cplx z) {
    const int r = sys.r, n = sys.N;
    const double sub = subtract_radius(quad);
    const auto& p = sys.PR[n];
    const auto& q = sys.QR[n - 1];
    YResult y;
    y.near_contour = quad.distance(z) < kNearContour;
    y.value.resize(2 * r, 2 * r);
    y.value.block(0, 0, r, r) = -cauchy_integral(quad, [&](cplx s) -> Mat { return weight.eval(s) * q(s); }, z, sub);
    y.value.block(0, r, r, r) =
        -cauchy_integral(quad, [&](cplx s) -> Mat { return weight.eval(s) * p(s); }, z, sub) / two_pi_i;
    y.value.block(r, 0, r, r) = two_pi_i * q(z);
    y.value.block(r, r, r, r) = p(z);
    return y;
}

Mat kernel_from_Y(const MOPSystem& sys, const MatrixWeight& weight, const ContourQuadrature& quad, cplx w, cplx z) {
    const int r = sys.r;
    const Mat yinv = assemble_Yinv(sys, weight, quad, w).value;
    const Mat y = assemble_Y(sys, weight, quad, z).value;
    const Mat prod = yinv.bottomRows(r) * y.leftCols(r);
    return prod / (two_pi_i * (z - w));
}

Mat jump_matrix(const MatrixWeight& weight, cplx z) {
    const int r = weight.r;
    Mat j = Mat::Identity(2 * r, 2 * r);
    j.block(0, r, r, r) = weight.eval(z);
    return j;
}

}  // namespace cdsurface
