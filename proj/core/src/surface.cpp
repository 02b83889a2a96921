#include "cdsurface/surface.hpp"

#include <cmath>
#include <limits>

namespace cdsurface {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec vec2(cplx a, cplx b) {
    Vec v(2);
    v << a, b;
    return v;
}

RowVec row2(cplx a, cplx b) {
    RowVec v(2);
    v << a, b;
    return v;
}

LedgerPoint at_infinity(std::string label, int order) { return {std::move(label), std::nullopt, order, true}; }
LedgerPoint at_point(std::string label, cplx pre, int order) { return {std::move(label), pre, order, false}; }

std::size_t node_count(const ChartOptions& o) { return o.nodes == 0 ? default_node_count() : with_floor(o.nodes); }

void build_cyclic(Genus0Chart& c, const CyclicUniform& f, const ChartOptions& o) {
    const int r = f.r;
    c.phi_fn = [r](cplx z) { return ipow(z, r); };
    c.dphi_fn = [r](cplx z) { return double(r) * ipow(z, r - 1); };
    c.eta_fn = [](cplx z) { return z; };
    c.h_fn = [](cplx) { return cplx{1.0, 0.0}; };
    c.hhat_fn = [r](cplx z) { return ipow(z, r - 1); };
    c.lambda_hat_fn = [](cplx z) { return 1.0 + z; };
    c.evec_fn = [r](cplx z) {
        Vec v(r);
        cplx p{1.0, 0.0};
        for (int i = 0; i < r; ++i, p *= z) v(i) = p;
        return v;
    };
    c.evec_inv_fn = [r](cplx z) {
        RowVec v(r);
        const cplx inv = 1.0 / z;
        cplx p{1.0 / r, 0.0};
        for (int i = 0; i < r; ++i, p *= inv) v(i) = p;
        return v;
    };
    c.hhat_evec_inv_fn = [r](cplx z) {
        RowVec v(r);
        for (int i = 0; i < r; ++i) v(i) = ipow(z, r - 1 - i) / double(r);
        return v;
    };
    c.phi_inv_point_fn = [](cplx, cplx eta) { return eta; };
    c.lambda_hat_power = f.L;
    c.z_power = f.R;
    c.ledger.Q.push_back(at_infinity("inf^(1)", -(r - 1)));
    c.ledger.Qhat.push_back(at_point("0^(1)", 0.0, -(r - 1)));
    c.gamma_C = unit_circle_quadrature(node_count(o));
}

void build_root_k(Genus0Chart& c, const TwoByTwoRootK& f, const ChartOptions& o) {
    const int k = f.k;
    c.phi_fn = [](cplx z) { return z * z; };
    c.dphi_fn = [](cplx z) { return 2.0 * z; };
    c.eta_fn = [k](cplx z) { return ipow(z, k); };
    c.h_fn = [](cplx) { return cplx{1.0, 0.0}; };
    c.hhat_fn = [k](cplx z) { return ipow(z, k); };
    c.lambda_hat_fn = [k](cplx z) { return 1.0 + ipow(z, k); };
    c.evec_fn = [k](cplx z) { return vec2(1.0, ipow(z, k)); };
    c.evec_inv_fn = [k](cplx z) { return row2(0.5, 0.5 * ipow(z, -k)); };
    c.hhat_evec_inv_fn = [k](cplx z) { return row2(0.5 * ipow(z, k), 0.5); };
    c.phi_inv_point_fn = [k](cplx z, cplx eta) {
        const cplx s = std::sqrt(z);
        return std::abs(ipow(s, k) - eta) <= std::abs(ipow(-s, k) - eta) ? s : -s;
    };
    c.lambda_hat_power = f.L;
    c.z_power = f.M;
    c.ledger.Q.push_back(at_infinity("inf^(1)", -k));
    c.ledger.Qhat.push_back(at_point("0^(1)", 0.0, -k));
    c.gamma_C = unit_circle_quadrature(node_count(o));
}

void build_2x1(Genus0Chart& c, const Periodic2x1& f, const ChartOptions& o) {
    const double a0 = f.a0, a1 = f.a1, b0 = f.b0, b1 = f.b1;
    const double s = 4.0 * a0 * a1;
    const double beta = std::abs(b0 - b1);
    c.phi_fn = [s, beta](cplx z) { return (z * z - beta * beta) / s; };
    c.dphi_fn = [s](cplx z) { return 2.0 * z / s; };
    c.eta_fn = [](cplx z) { return z; };
    c.h_fn = [](cplx) { return cplx{1.0, 0.0}; };
    c.hhat_fn = [](cplx z) { return z; };
    c.lambda_hat_fn = [b0, b1](cplx z) { return (b0 + b1 + z) / 2.0; };
    c.evec_fn = [a0, b0, b1](cplx z) { return vec2(1.0, (b1 - b0 + z) / (2.0 * a0)); };
    c.evec_inv_fn = [a0, b0, b1](cplx z) { return row2((z + b0 - b1) / (2.0 * z), a0 / z); };
    c.hhat_evec_inv_fn = [a0, b0, b1](cplx z) { return row2((z + b0 - b1) / 2.0, cplx(a0, 0.0)); };
    c.phi_inv_point_fn = [](cplx, cplx eta) { return eta; };
    c.lambda_hat_power = f.L;
    c.z_power = (f.M + f.N) / 2;
    c.ledger.Q.push_back(at_infinity("inf^(1)", -1));
    c.ledger.Qhat.push_back(at_point("z1^(1)", 0.0, -1));
    const double radius = o.radius > 0 ? o.radius : beta + 1.0;
    if (radius <= beta) throw InvalidArgument("periodic-2x1: contour radius must exceed |b0 - b1|");
    c.gamma_C = circle_quadrature(0.0, radius, node_count(o));
}

void build_2x2(Genus0Chart& c, const Periodic2x2& f, const ChartOptions& o) {
    const Periodic2x2Constants k = periodic2x2_constants(f);
    const double s = k.c0 + k.c1;
    const double ap = k.a_plus, am = k.a_minus, bp = k.b_plus, bm = k.b_minus, d = k.d;
    c.lambda_hat_power = f.L / 2;
    c.z_power = (f.M + f.N) / 2;
    if (am == 0.0) {
        c.phi_fn = [s, bm](cplx z) { return (z * z - bm * bm) / (2.0 * s); };
        c.dphi_fn = [s](cplx z) { return z / s; };
        c.eta_fn = [](cplx z) { return z; };
        c.h_fn = [](cplx) { return cplx{1.0, 0.0}; };
        c.hhat_fn = [](cplx z) { return z; };
        c.lambda_hat_fn = [s, ap, bp, bm](cplx z) { return (ap * (z * z - bm * bm) / (2.0 * s) + bp + z) / 2.0; };
        c.evec_fn = [bm, d](cplx z) { return vec2(1.0, (z + bm) / (2.0 * d)); };
        c.evec_inv_fn = [bm, d](cplx z) { return row2((z - bm) / (2.0 * z), d / z); };
        c.hhat_evec_inv_fn = [bm, d](cplx z) { return row2((z - bm) / 2.0, cplx(d, 0.0)); };
        c.phi_inv_point_fn = [](cplx, cplx eta) { return eta; };
        c.ledger.Q.push_back(at_infinity("inf^(1)", -1));
        c.ledger.Qhat.push_back(at_point("z1^(1)", 0.0, -1));
        const double radius = o.radius > 0 ? o.radius : std::abs(bm) + 1.0;
        if (radius <= std::abs(bm)) throw InvalidArgument("periodic-2x2: contour radius must exceed |b_-|");
        c.gamma_C = circle_quadrature(0.0, radius, node_count(o));
        return;
    }
    if (!(k.z_minus < k.z_plus && k.z_plus < 0.0) || !(k.c > 0.0 && k.c < 1.0))
        throw InconsistentParameters("periodic-2x2: expected z_- < z_+ < 0 and 0 < c < 1");
    const double mid = (k.z_plus + k.z_minus) / 2.0, half = (k.z_plus - k.z_minus) / 4.0;
    const int n = c.N;
    c.phi_fn = [mid, half](cplx z) { return mid + half * (z + 1.0 / z); };
    c.dphi_fn = [half](cplx z) { return half * (1.0 - 1.0 / (z * z)); };
    c.eta_fn = [am, half](cplx z) { return am * half * (z - 1.0 / z); };
    c.h_fn = [n](cplx z) { return ipow(z, n); };
    c.hhat_fn = [n](cplx z) { return ipow(z, n - 2) * (z - 1.0) * (z + 1.0); };
    c.lambda_hat_fn = [=](cplx z) {
        return (ap * (mid + half * (z + 1.0 / z)) + bp + am * half * (z - 1.0 / z)) / 2.0;
    };
    c.evec_fn = [=](cplx z) {
        const cplx ph = mid + half * (z + 1.0 / z), et = am * half * (z - 1.0 / z);
        return vec2(1.0, (bm - am * ph + et) / (2.0 * d));
    };
    c.evec_inv_fn = [=](cplx z) {
        const cplx ph = mid + half * (z + 1.0 / z), et = am * half * (z - 1.0 / z);
        return row2((am * ph + et - bm) / (2.0 * et), d / et);
    };
    c.hhat_evec_inv_fn = [=](cplx z) {
        const cplx ph = mid + half * (z + 1.0 / z), et = am * half * (z - 1.0 / z);
        const cplx pre = ipow(z, n - 1) / (am * half);
        return row2(pre * (am * ph + et - bm) / 2.0, pre * d);
    };
    c.phi_inv_point_fn = [=](cplx z, cplx eta) {
        const cplx u = (z - mid) / half;
        const cplx v = eta / (am * half);
        return (u + v) / 2.0;
    };
    c.ledger.Q.push_back(at_point("inf^(2)", 0.0, -1));
    c.ledger.Zhat.push_back(at_point("inf^(2)", 0.0, 1));
    c.ledger.Qhat.push_back(at_point("z_+", 1.0, -1));
    c.ledger.Qhat.push_back(at_point("z_-", -1.0, -1));
    c.ledger.other_infinities.push_back(0.0);
    const double gap = 1.0 / k.c - k.c;
    const double center = (k.c + 1.0 / k.c) / 2.0;
    // without an explicit choice, balance the distance to c, 1/c inside against the pole at 0 outside
    const double radius = o.radius > 0   ? o.radius
                          : o.margin > 0 ? gap / 2.0 + o.margin * gap
                                         : std::sqrt(gap / 2.0 * center);
    if (radius <= gap / 2.0) throw InvalidArgument("periodic-2x2: contour must enclose c and 1/c");
    if (center - radius <= 0.0) throw InvalidArgument("periodic-2x2: contour must not enclose 0");
    c.gamma_C = circle_quadrature(center, radius, node_count(o));
}

cplx ledger_product(const std::vector<cplx>& infinities, int N, const std::vector<LedgerPoint>& a,
                    const std::vector<LedgerPoint>& b, cplx zeta) {
    cplx v{1.0, 0.0};
    for (cplx p : infinities) v *= ipow(zeta - p, N - 1);
    for (const auto* set : {&a, &b})
        for (const auto& pt : *set)
            if (!pt.is_phi_infinity && pt.preimage) v *= ipow(zeta - *pt.preimage, -pt.order);
    return v;
}

void require_finite(cplx v, const char* what) {
    if (!is_finite(v)) throw DomainError(std::string(what) + ": point lies in a pole set");
}

}  // namespace

cplx Genus0Chart::lambda(cplx zeta) const { return ipow(lambda_hat(zeta), lambda_hat_power) * ipow(phi(zeta), -z_power); }

cplx Genus0Chart::scalar_weight(cplx zeta) const { return lambda(zeta) * dphi(zeta) / (h(zeta) * hhat(zeta)); }

ScalarWeight Genus0Chart::weight_fn() const {
    return [c = *this](cplx zeta) { return c.scalar_weight(zeta); };
}

int Genus0Chart::sheet_of(cplx zeta) const {
    const cplx z = phi(zeta), e = eta(zeta);
    int best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < r; ++k) {
        const double d = std::abs(spectral->eta(k, z) - e);
        if (d < dist) {
            dist = d;
            best = k;
        }
    }
    return best;
}

cplx Genus0Chart::phi_inv(int sheet, cplx z) const { return phi_inv_point_fn(z, spectral->eta(sheet, z)); }

cplx Genus0Chart::h_from_ledger(cplx zeta) const {
    return ledger_product(ledger.other_infinities, N, ledger.Z, ledger.Q, zeta);
}

cplx Genus0Chart::hhat_from_ledger(cplx zeta) const {
    return ledger_product(ledger.other_infinities, N, ledger.Zhat, ledger.Qhat, zeta);
}

cplx Genus0Chart::v_element(const MatrixPolynomial& p, cplx zeta) const {
    return (p(phi(zeta)) * evec(zeta))(0, 0) * h(zeta);
}

cplx Genus0Chart::vstar_element(const MatrixPolynomial& p, cplx zeta) const {
    return (hhat_evec_inv(zeta) * p(phi(zeta)))(0, 0);
}

std::vector<MatrixPolynomial> Genus0Chart::row_basis() const {
    std::vector<MatrixPolynomial> out;
    for (int deg = 0; deg < N; ++deg)
        for (int i = 0; i < r; ++i) {
            std::vector<Mat> c(deg + 1, Mat::Zero(1, r));
            c[deg](0, i) = 1.0;
            out.emplace_back(std::move(c));
        }
    return out;
}

std::vector<MatrixPolynomial> Genus0Chart::column_basis() const {
    std::vector<MatrixPolynomial> out;
    for (int deg = 0; deg < N; ++deg)
        for (int i = 0; i < r; ++i) {
            std::vector<Mat> c(deg + 1, Mat::Zero(r, 1));
            c[deg](i, 0) = 1.0;
            out.emplace_back(std::move(c));
        }
    return out;
}

Genus0Chart build_chart(const WeightFamily& family, int N, const ChartOptions& options) {
    validate(family);
    if (N < 1) throw InvalidArgument("build_chart: N must be at least 1");
    Genus0Chart c;
    c.family = family;
    c.r = matrix_size(family);
    c.N = N;
    std::visit(overloaded{
                   [&](const CyclicUniform& f) { build_cyclic(c, f, options); },
                   [&](const TwoByTwoRootK& f) { build_root_k(c, f, options); },
                   [&](const Periodic2x1& f) { build_2x1(c, f, options); },
                   [&](const Periodic2x2& f) { build_2x2(c, f, options); },
                   [&](const ScalarMonomial&) {
                       throw UnsupportedFamily("scalar-monomial has no genus-0 chart");
                   },
               },
               family);
    c.spectral.emplace(family);
    int total = 0;
    for (const auto* set : {&c.ledger.Z, &c.ledger.Q})
        for (const auto& pt : *set) total += pt.order;
    c.V_is_full = -total == c.r - 1;
    return c;
}

cplx r_lambda(const SpectralData& spectral, const MOPSystem& sys, int w_sheet, cplx w, int z_sheet, cplx z) {
    const RowVec a = spectral.evec_inv(w_sheet, w);
    const Vec b = spectral.evec(z_sheet, z);
    if (!all_finite(a) || !all_finite(b)) throw DomainError("r_lambda: point lies in a pole set of e or e^{-1}");
    const cplx v = (a * cd_kernel_formula(sys, w, z) * b)(0, 0);
    require_finite(v, "r_lambda");
    return v;
}

Mat r_lambda_matrix(const SpectralData& spectral, const MOPSystem& sys, cplx w, cplx z) {
    return spectral.E_inv(w) * cd_kernel_formula(sys, w, z) * spectral.E(z);
}

cplx frak_R(const Genus0Chart& chart, const MOPSystem& sys, cplx omega, cplx zeta) {
    const Mat k = cd_kernel_formula(sys, chart.phi(omega), chart.phi(zeta));
    return (chart.hhat_evec_inv(omega) * k * chart.evec(zeta))(0, 0) * chart.h(zeta);
}

double check_reproducing_surface(const SpectralData& spectral, const MOPSystem& sys, const ContourQuadrature& gamma,
                                 const MatrixPolynomial& p, int z_sheet, cplx z) {
    const Vec ez = spectral.evec(z_sheet, z);
    if (!all_finite(ez)) throw DomainError("check_reproducing_surface: z lies in a pole set");
    const int r = spectral.r();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const cplx w = gamma.nodes[i];
        const Mat pw = p(w);
        const Vec kz = cd_kernel_formula(sys, w, z) * ez;
        cplx s{0.0, 0.0};
        for (int j = 0; j < r; ++j) {
            const cplx f = (pw * spectral.evec(j, w))(0, 0);
            s += f * spectral.lambda(j, w) * (spectral.evec_inv(j, w) * kz)(0, 0);
        }
        acc += s * gamma.weights[i];
    }
    return std::abs(acc - (p(z) * ez)(0, 0));
}

double check_reproducing_surface_dual(const SpectralData& spectral, const MOPSystem& sys,
                                      const ContourQuadrature& gamma, const MatrixPolynomial& p, int w_sheet, cplx w) {
    const RowVec ew = spectral.evec_inv(w_sheet, w);
    if (!all_finite(ew)) throw DomainError("check_reproducing_surface_dual: w lies in a pole set");
    const int r = spectral.r();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const cplx z = gamma.nodes[i];
        const Mat pz = p(z);
        const RowVec kw = ew * cd_kernel_formula(sys, w, z);
        cplx s{0.0, 0.0};
        for (int j = 0; j < r; ++j) {
            const cplx f = (spectral.evec_inv(j, z) * pz)(0, 0);
            s += (kw * spectral.evec(j, z))(0, 0) * spectral.lambda(j, z) * f;
        }
        acc += s * gamma.weights[i];
    }
    return std::abs(acc - (ew * p(w))(0, 0));
}

double check_reproducing_plane(const Genus0Chart& chart, const ScalarKernel& kernel,
                               const std::function<cplx(cplx)>& p, cplx zeta) {
    const auto& q = chart.gamma_C;
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const cplx w = q.nodes[i];
        acc += p(w) * chart.scalar_weight(w) * kernel(w, zeta) * q.weights[i];
    }
    return std::abs(acc - p(zeta));
}

double check_reproducing_plane_dual(const Genus0Chart& chart, const ScalarKernel& kernel,
                                    const std::function<cplx(cplx)>& p, cplx omega) {
    const auto& q = chart.gamma_C;
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const cplx z = q.nodes[i];
        acc += kernel(omega, z) * chart.scalar_weight(z) * p(z) * q.weights[i];
    }
    return std::abs(acc - p(omega));
}

}  // namespace cdsurface
