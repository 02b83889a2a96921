#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/LU>
#include <Eigen/QR>

#include "cdsurface/surface.hpp"

using namespace cdsurface;

namespace {

double maxabs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

Periodic2x2 case_a() {
    Periodic2x2 p;
    p.b[0][1] = 2.0;
    return p;
}

Periodic2x2 case_b() {
    Periodic2x2 p = case_a();
    p.a[0][1] = 2.0;
    return p;
}

std::vector<WeightFamily> chart_families() {
    return {CyclicUniform{2, 2, 2}, CyclicUniform{3, 1, 2}, TwoByTwoRootK{1, 3, 2}, TwoByTwoRootK{3, 1, 2},
            Periodic2x1{1, 2, 1, 2, 2, 2, 4}, Periodic2x1{0.5, 2, 1.5, 1.5, 2, 2, 2}, case_a(), case_b()};
}

struct Rng {
    std::mt19937_64 g{31};
    double u(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
    cplx coeff() { return {u(-1, 1), u(-1, 1)}; }
    cplx disc(double lo, double hi) { return std::polar(u(lo, hi), u(0, 2 * pi)); }
    MatrixPolynomial row(int r, int N) {
        std::vector<Mat> c;
        for (int d = 0; d < N; ++d) {
            Mat m(1, r);
            for (int i = 0; i < r; ++i) m(0, i) = coeff();
            c.push_back(m);
        }
        return MatrixPolynomial(c);
    }
    MatrixPolynomial column(int r, int N) {
        std::vector<Mat> c;
        for (int d = 0; d < N; ++d) {
            Mat m(r, 1);
            for (int i = 0; i < r; ++i) m(i, 0) = coeff();
            c.push_back(m);
        }
        return MatrixPolynomial(c);
    }
};

/// A point of the chart away from the cuts and from the contour.
cplx chart_point(const Genus0Chart& c, Rng& rng) {
    for (;;) {
        const cplx base = c.gamma_C.centers.front();
        const double rad = c.gamma_C.radii.front();
        const cplx z = base + rad * rng.disc(0.3, 1.8);
        if (c.gamma_C.distance(z) < 0.1 * rad) continue;
        if (std::abs(z) < 0.05) continue;
        if (c.spectral->distance_to_cut(c.phi(z)) < 1e-4) continue;
        return z;
    }
}

MOPSystem system_for(const Genus0Chart& c, std::size_t n = 256) {
    return build_mops(as_matrix_weight(c.family), unit_circle_quadrature(n), c.N);
}

}  // namespace

TEST_CASE("chart maps: phi inverts through the sheet index") {
    Rng rng;
    for (const auto& f : chart_families()) {
        const Genus0Chart c = build_chart(f, 2);
        INFO(family_name(f));
        for (int t = 0; t < 20; ++t) {
            const cplx z = chart_point(c, rng);
            const int k = c.sheet_of(z);
            CHECK(std::abs(c.phi_inv(k, c.phi(z)) - z) < 1e-9 * std::max(1.0, std::abs(z)));
            CHECK(std::abs(c.eta(z) - c.spectral->eta(k, c.phi(z))) < 1e-9 * std::max(1.0, std::abs(c.eta(z))));
        }
    }
}

TEST_CASE("chart maps: derivative, eigenvector, eigenvalue") {
    Rng rng;
    for (const auto& f : chart_families()) {
        const Genus0Chart c = build_chart(f, 2);
        INFO(family_name(f));
        for (int t = 0; t < 10; ++t) {
            const cplx z = chart_point(c, rng);
            const double h = 1e-5;
            const cplx fd = (c.phi(z + h) - c.phi(z - h)) / (2.0 * h);
            CHECK(std::abs(fd - c.dphi(z)) < 1e-7 * std::max(1.0, std::abs(c.dphi(z))));

            const Mat w = eval_weight(f, c.phi(z));
            const Vec e = c.evec(z);
            const cplx lam = c.lambda(z);
            CHECK(maxabs(w * e - lam * e) < 1e-9 * std::max(1.0, maxabs(w)) * std::max(1.0, maxabs(e)));
            CHECK(std::abs((c.evec_inv(z) * e)(0, 0) - 1.0) < 1e-10);
            CHECK(maxabs(c.hhat_evec_inv(z) - c.hhat(z) * c.evec_inv(z)) < 1e-9 * std::max(1.0, std::abs(c.hhat(z))));
            CHECK(std::abs(lam - c.spectral->lambda(c.sheet_of(z), c.phi(z))) < 1e-9 * std::max(1.0, std::abs(lam)));
        }
    }
    CHECK_THROWS_AS(build_chart(ScalarMonomial{2, 2}, 2), UnsupportedFamily);
}

TEST_CASE("ledger: h and hhat from the defining products, fullness of V") {
    Rng rng;
    for (const auto& f : chart_families()) {
        for (int N : {1, 2, 3}) {
            const Genus0Chart c = build_chart(f, N);
            INFO(family_name(f), " N=", N);
            int total = 0;
            for (const auto* set : {&c.ledger.Z, &c.ledger.Q})
                for (const auto& p : *set) total += p.order;
            CHECK(c.V_is_full == (-total == c.r - 1));
            for (int t = 0; t < 5; ++t) {
                const cplx z = chart_point(c, rng);
                CHECK(std::abs(c.h(z) - c.h_from_ledger(z)) < 1e-12 * std::max(1.0, std::abs(c.h(z))));
                CHECK(std::abs(c.hhat(z) - c.hhat_from_ledger(z)) < 1e-12 * std::max(1.0, std::abs(c.hhat(z))));
            }
        }
    }
    CHECK(build_chart(CyclicUniform{3, 1, 1}, 2).V_is_full);
    CHECK(build_chart(TwoByTwoRootK{1, 1, 2}, 2).V_is_full);
    CHECK_FALSE(build_chart(TwoByTwoRootK{3, 1, 2}, 2).V_is_full);
    CHECK(build_chart(case_b(), 2).V_is_full);
}

TEST_CASE("ledger: pole orders of e and e^{-1} by probing") {
    // log-slope of |e| at infinity and of |e^{-1}| at 0
    for (const auto& f : {WeightFamily(CyclicUniform{2, 1, 1}), WeightFamily(CyclicUniform{4, 1, 1}),
                          WeightFamily(TwoByTwoRootK{3, 1, 2}), WeightFamily(Periodic2x1{1, 2, 1, 2, 2, 2, 4})}) {
        const Genus0Chart c = build_chart(f, 1);
        const LedgerPoint& q = c.ledger.Q.front();
        const LedgerPoint& qh = c.ledger.Qhat.front();
        REQUIRE(q.is_phi_infinity);
        REQUIRE(qh.preimage.has_value());
        const cplx dir = std::polar(1.0, 0.7);
        const double big = 1e4, small = 1e-4;
        const double s_inf = std::log(c.evec(10 * big * dir).norm() / c.evec(big * dir).norm()) / std::log(10.0);
        const cplx p0 = *qh.preimage;
        const double s_0 =
            std::log(c.evec_inv(p0 + small * dir).norm() / c.evec_inv(p0 + 10 * small * dir).norm()) / std::log(10.0);
        INFO(family_name(f));
        CHECK(s_inf == doctest::Approx(-q.order).epsilon(1e-3));
        CHECK(s_0 == doctest::Approx(-qh.order).epsilon(1e-3));
    }
}

TEST_CASE("scalar monomial: R^lambda is the closed-form kernel") {
    const ScalarMonomial f{3, 2};
    const SpectralData s(f);
    const MOPSystem sys = build_mops(as_matrix_weight(f), unit_circle_quadrature(256), 2);
    const cplx w{0.5, 0.4}, z{-1.2, 0.3};
    const cplx exact = (z * z - w * w) / (two_pi_i * (z - w));
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(std::abs(r_lambda(s, sys, j, w, k, z) - (j == k ? exact : 0.0)) < 1e-12);
}

TEST_CASE("R^lambda matrix agrees with its entries") {
    Rng rng;
    for (const auto& f : chart_families()) {
        const SpectralData s(f);
        const Genus0Chart c = build_chart(f, 2);
        const MOPSystem sys = system_for(c);
        INFO(family_name(f));
        for (int t = 0; t < 5; ++t) {
            const cplx w = c.phi(chart_point(c, rng)), z = c.phi(chart_point(c, rng));
            const Mat m = r_lambda_matrix(s, sys, w, z);
            for (int j = 0; j < c.r; ++j)
                for (int k = 0; k < c.r; ++k)
                    CHECK(std::abs(m(j, k) - r_lambda(s, sys, j, w, k, z)) < 1e-10 * std::max(1.0, maxabs(m)));
        }
    }
}

TEST_CASE("property: refining the quadrature leaves the kernel unchanged") {
    Rng rng;
    for (const auto& f : {WeightFamily(CyclicUniform{2, 2, 2}), WeightFamily(TwoByTwoRootK{3, 1, 2})}) {
        const Genus0Chart c = build_chart(f, 2);
        const MOPSystem a = system_for(c, 256), b = system_for(c, 512);
        for (int t = 0; t < 5; ++t) {
            const cplx w = chart_point(c, rng), z = chart_point(c, rng);
            CHECK(std::abs(frak_R(c, a, w, z) - frak_R(c, b, w, z)) < 1e-10);
        }
    }
}

TEST_CASE("property: reproducing on the surface, both sides") {
    Rng rng;
    for (const auto& f : {WeightFamily(CyclicUniform{2, 2, 2}), WeightFamily(Periodic2x1{1, 2, 1, 2, 2, 2, 4})}) {
        const SpectralData s(f);
        const auto gamma = unit_circle_quadrature(256);
        const MOPSystem sys = build_mops(as_matrix_weight(f), gamma, 2);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const cplx z = rng.disc(0.3, 2.0);
            if (s.distance_to_cut(z) < 1e-3 || gamma.distance(z) < 0.1) continue;
            const int sheet = t % 2;
            worst = std::max(worst, check_reproducing_surface(s, sys, gamma, rng.row(2, 2), sheet, z));
            worst = std::max(worst, check_reproducing_surface_dual(s, sys, gamma, rng.column(2, 2), sheet, z));
        }
        INFO(family_name(f));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("cyclic: the row basis maps to the monomials below rN") {
    for (int r : {2, 3}) {
        const Genus0Chart c = build_chart(CyclicUniform{r, 1, 1}, 2);
        const cplx z{0.6, -0.7};
        std::vector<bool> hit(r * 2, false);
        for (const auto& p : c.row_basis()) {
            const cplx v = c.v_element(p, z);
            for (int m = 0; m < r * 2; ++m)
                if (std::abs(v - ipow(z, m)) < 1e-14) hit[m] = true;
        }
        for (int m = 0; m < r * 2; ++m) CHECK(hit[m]);
    }
}

TEST_CASE("property: V and V* have dimension rN") {
    Rng rng;
    for (const auto& f : chart_families()) {
        const Genus0Chart c = build_chart(f, 2);
        const int dim = c.r * c.N;
        Mat a(dim + 2, dim), b(dim + 2, dim);
        for (int i = 0; i < dim + 2; ++i) {
            const cplx z = chart_point(c, rng);
            const auto rows = c.row_basis();
            const auto cols = c.column_basis();
            for (int j = 0; j < dim; ++j) {
                a(i, j) = c.v_element(rows[j], z);
                b(i, j) = c.vstar_element(cols[j], z);
            }
        }
        INFO(family_name(f));
        CHECK(Eigen::FullPivLU<Mat>(a).rank() == dim);
        CHECK(Eigen::FullPivLU<Mat>(b).rank() == dim);
    }
}

TEST_CASE("property: the kernel lies in V in zeta and in V* in omega") {
    Rng rng;
    for (const auto& f : chart_families()) {
        const Genus0Chart c = build_chart(f, 2);
        const MOPSystem sys = system_for(c);
        const int dim = c.r * c.N, m = dim + 4;
        const cplx fixed = chart_point(c, rng);
        const auto rows = c.row_basis();
        const auto cols = c.column_basis();
        Mat a(m, dim), b(m, dim);
        Vec ka(m), kb(m);
        for (int i = 0; i < m; ++i) {
            const cplx z = chart_point(c, rng);
            for (int j = 0; j < dim; ++j) {
                a(i, j) = c.v_element(rows[j], z);
                b(i, j) = c.vstar_element(cols[j], z);
            }
            ka(i) = frak_R(c, sys, fixed, z);
            kb(i) = frak_R(c, sys, z, fixed);
        }
        const Vec ra = a * a.colPivHouseholderQr().solve(ka) - ka;
        const Vec rb = b * b.colPivHouseholderQr().solve(kb) - kb;
        INFO(family_name(f));
        CHECK(ra.norm() < 1e-9 * std::max(1.0, ka.norm()));
        CHECK(rb.norm() < 1e-9 * std::max(1.0, kb.norm()));
    }
}

TEST_CASE("cyclic: the surface kernel is the scalar CD kernel of the plane weight") {
    const Genus0Chart c = build_chart(CyclicUniform{2, 2, 2}, 2);
    const MOPSystem sys = system_for(c);
    const ScalarOPSystem ops = solve_scalar_ops(c.weight_fn(), c.gamma_C, c.r * c.N);
    Rng rng;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const cplx w = chart_point(c, rng), z = chart_point(c, rng);
        worst = std::max(worst, std::abs(frak_R(c, sys, w, z) - scalar_cd_kernel(ops, w, z)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("root-k with k = 1: the surface kernel is a scalar CD kernel") {
    const TwoByTwoRootK f{1, 3, 2};
    const Genus0Chart c = build_chart(f, 2);
    REQUIRE(c.V_is_full);
    const ScalarOPSystem ops = solve_scalar_ops(c.weight_fn(), c.gamma_C, 4);
    const MOPSystem sys = system_for(c);
    Rng rng;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const cplx w = chart_point(c, rng), z = chart_point(c, rng);
        worst = std::max(worst, std::abs(frak_R(c, sys, w, z) - scalar_cd_kernel(ops, w, z)));
    }
    CHECK(worst < 1e-7);
    // the plane weight is 2 zeta^{-4} (1 + zeta)^3
    const cplx z{0.3, 0.8};
    CHECK(std::abs(c.scalar_weight(z) - 2.0 * ipow(z, -4) * ipow(1.0 + z, 3)) < 1e-12);
}

TEST_CASE("root-k with k = 3: reproducing on V only") {
    const Genus0Chart c = build_chart(TwoByTwoRootK{3, 1, 2}, 2);
    CHECK_FALSE(c.V_is_full);
    const MOPSystem sys = system_for(c);
    const ScalarKernel k = [&](cplx w, cplx z) { return frak_R(c, sys, w, z); };
    Rng rng;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const MatrixPolynomial p = rng.row(2, 2);
        const cplx z = chart_point(c, rng);
        worst = std::max(worst, check_reproducing_plane(c, k, [&](cplx x) { return c.v_element(p, x); }, z));
    }
    CHECK(worst < 1e-8);
    // zeta itself is not in V
    CHECK(check_reproducing_plane(c, k, [](cplx x) { return x; }, cplx{0.4, 0.3}) > 1e-2);
}

TEST_CASE("2x2 with a_- != 0: removable points and the contour") {
    const Genus0Chart c = build_chart(case_b(), 2);
    const auto k = periodic2x2_constants(case_b());
    CHECK(c.gamma_C.winding(0.0) == 0);
    CHECK(c.gamma_C.winding(k.c) == 1);
    CHECK(c.gamma_C.winding(1.0 / k.c) == 1);
    const MOPSystem sys = system_for(c);
    const cplx fixed{1.3, 0.4};
    for (double s : {1.0, -1.0}) {
        const RowVec lo = c.hhat_evec_inv(s - 1e-6), hi = c.hhat_evec_inv(s + 1e-6);
        CHECK(all_finite(lo));
        CHECK(maxabs(lo - hi) < 1e-4);
        const cplx a = frak_R(c, sys, s - 1e-6, fixed), b = frak_R(c, sys, s + 1e-6, fixed);
        CHECK(is_finite(a));
        CHECK(std::abs(a - b) < 1e-4 * std::max(1.0, std::abs(a)));
    }
}
