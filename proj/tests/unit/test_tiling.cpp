#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cdsurface/tiling.hpp"

using namespace cdsurface;

namespace {

double maxabs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

Periodic2x2 case_a(int L = 4) {
    Periodic2x2 p;
    p.b[0][1] = 2.0;
    p.L = L;
    return p;
}

Periodic2x2 case_b(int L = 4) {
    Periodic2x2 p = case_a(L);
    p.a[0][1] = 2.0;
    return p;
}

HexagonModel three_periodic() {
    HexagonModel m;
    m.r = 1;
    m.q = 3;
    m.L = 3;
    m.M = 1;
    m.N = 2;
    m.a = {{1.0}, {2.0}, {0.5}};
    m.b = {{1.5}, {1.0}, {3.0}};
    return m;
}

/// Single points and pairs of interior points, compared with enumeration.
void check_against_enumeration(const HexagonModel& m, const PointKernel& k, int pairs, double tol) {
    const auto systems = enumerate_path_systems(m);
    std::vector<Point> pts;
    for (int x = 1; x < m.L; ++x) {
        const auto [lo, hi] = m.column_range(x);
        for (int y = lo; y <= hi; ++y) pts.emplace_back(x, y);
    }
    double worst = 0.0;
    for (const Point& p : pts) {
        const double d = probability_determinantal(k, m, {p});
        CHECK(d >= -tol);
        CHECK(d <= 1.0 + tol);
        worst = std::max(worst, std::abs(d - probability_enumeration(systems, {p})));
    }
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int t = 0; t < pairs; ++t) {
        const Point a = pts[pick(rng)], b = pts[pick(rng)];
        if (a == b) continue;
        worst = std::max(worst, std::abs(probability_determinantal(k, m, {a, b}) -
                                         probability_enumeration(systems, {a, b})));
    }
    CHECK(worst < tol);
}

double max_block_difference(const std::function<Mat(const KernelQuery&)>& a,
                            const std::function<Mat(const KernelQuery&)>& b, int L) {
    double worst = 0.0;
    for (int x1 = 1; x1 <= std::min(3, L - 1); ++x1)
        for (int x2 = 1; x2 <= std::min(3, L - 1); ++x2)
            for (int y1 = -1; y1 <= 1; ++y1)
                for (int y2 = -1; y2 <= 1; ++y2) {
                    const KernelQuery q{x1, y1, x2, y2};
                    worst = std::max(worst, maxabs(a(q) - b(q)));
                }
    return worst;
}

}  // namespace

TEST_CASE("edge weights: tables and the uniform model") {
    const HexagonModel u = HexagonModel::uniform(4, 2, 2, 2);
    for (int x = 0; x < 4; ++x)
        for (int y = -3; y < 5; ++y)
            for (int d : {0, 1}) CHECK(edge_weight(u, {x, y, d}) == 1.0);
    const HexagonModel p = HexagonModel::periodic_2x2(case_b());
    CHECK(edge_weight(p, {0, 1, 1}) == 2.0);  // a[0][1]
    CHECK(edge_weight(p, {0, 1, 0}) == 2.0);  // b[0][1]
    CHECK(edge_weight(p, {2, 3, 0}) == 2.0);
    CHECK(edge_weight(p, {1, 1, 0}) == 1.0);
    CHECK(edge_weight(p, {-1, -1, 1}) == 1.0);
    const HexagonModel t = HexagonModel::periodic_2x1(Periodic2x1{1.5, 0.5, 2.0, 3.0, 2, 2, 2});
    CHECK(edge_weight(t, {0, 0, 1}) == 1.5);
    CHECK(edge_weight(t, {5, 1, 1}) == 0.5);
    CHECK(edge_weight(t, {5, 2, 0}) == 2.0);
    CHECK_THROWS_AS(edge_weight(t, {0, 0, 2}), InvalidArgument);
}

TEST_CASE("property: edge weights recovered by contour integrals") {
    const auto quad = unit_circle_quadrature(64);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> xs(-4, 8), ys(-6, 6), ds(0, 1);
    for (const HexagonModel& m : {HexagonModel::periodic_2x2(case_b()),
                                  HexagonModel::periodic_2x1(Periodic2x1{1.5, 0.5, 2.0, 3.0, 2, 2, 2}),
                                  three_periodic()}) {
        for (int t = 0; t < 20; ++t) {
            const Edge e{xs(rng), ys(rng), ds(rng)};
            CHECK(std::abs(edge_weight_contour(m, e, quad) - edge_weight(m, e)) < 1e-12);
        }
    }
}

TEST_CASE("model: validation, transitions, hexagon shape") {
    HexagonModel bad = HexagonModel::uniform(3, 2, 2, 2);
    CHECK_NOTHROW(bad.validate());
    bad.N = 3;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    const HexagonModel m = HexagonModel::periodic_2x2(case_b());
    const cplx z{0.3, -0.2};
    CHECK(maxabs(m.A(z) - m.transition(0, z) * m.transition(1, z)) < 1e-15);
    CHECK(maxabs(m.transition_product(2, 2, z) - Mat::Identity(2, 2)) == 0.0);
    CHECK(std::holds_alternative<Periodic2x2>(m.family()));
    CHECK(std::holds_alternative<CyclicUniform>(HexagonModel::uniform(2, 2, 2, 2).family()));
    const HexagonModel h = HexagonModel::uniform(4, 2, 2);
    CHECK(h.column_range(0) == std::pair<int, int>{0, 1});
    CHECK(h.column_range(2) == std::pair<int, int>{0, 3});
    CHECK(h.column_range(4) == std::pair<int, int>{2, 3});
    CHECK_FALSE(h.in_hexagon(0, 2));
}

TEST_CASE("kernel factors: the correction term needs x1 > x2") {
    const HexagonModel m = HexagonModel::uniform(4, 2, 2, 2);
    const cplx z{0.4, 0.1}, w{-0.3, 0.8};
    CHECK_FALSE(kernel_factors(m, {1, 0, 3, 0}, z, w).chi);
    CHECK_FALSE(kernel_factors(m, {2, 0, 2, 0}, z, w).chi);
    CHECK(kernel_factors(m, {3, 0, 1, 0}, z, w).chi);
    CHECK(KernelQuery{1, 0, 3, 0}.L3(1) == 0);
    CHECK(KernelQuery{3, 0, 1, 0}.L3(1) == 2);
}

TEST_CASE("uniform r = 1 kernel against the scalar double contour integral") {
    const int L = 3, M = 2, N = 2;
    const HexagonModel m = HexagonModel::uniform(L, N, M, 1);
    const DKKernel dk(m, 64);
    const auto quad = unit_circle_quadrature(64);
    const ScalarWeight wt = [&](cplx z) { return ipow(1.0 + z, L) * ipow(z, -M - N); };
    const ScalarOPSystem ops = solve_scalar_ops(wt, quad, N);
    double worst = 0.0;
    for (int x1 = 1; x1 < L; ++x1)
        for (int x2 = 1; x2 < L; ++x2)
            for (int y1 = 0; y1 <= 3; ++y1)
                for (int y2 = 0; y2 <= 3; ++y2) {
                    cplx acc{0.0, 0.0};
                    for (std::size_t a = 0; a < quad.size(); ++a) {
                        const cplx w = quad.nodes[a];
                        const cplx left = ipow(1.0 + w, L - x2) * ipow(w, -(M + N - y2)) * quad.weights[a];
                        for (std::size_t b = 0; b < quad.size(); ++b) {
                            const cplx z = quad.nodes[b];
                            acc += left * scalar_cd_kernel(ops, w, z) * ipow(1.0 + z, x1) * ipow(z, -(y1 + 1)) *
                                   quad.weights[b];
                        }
                    }
                    acc /= two_pi_i;
                    if (x1 > x2)
                        acc -= quad.integrate([&](cplx z) { return ipow(1.0 + z, x1 - x2) * ipow(z, y2 - y1 - 1); }) /
                               two_pi_i;
                    worst = std::max(worst, std::abs(dk.entry(x1, y1, x2, y2) - acc));
                }
    CHECK(worst < 1e-10);
}

TEST_CASE("counting: MacMahon and enumeration") {
    CHECK(macmahon(1, 1, 1) == 2);
    CHECK(macmahon(2, 2, 2) == 20);
    CHECK(macmahon(3, 3, 3) == 980);
    CHECK(macmahon(1, 2, 3) == 10);
    CHECK(enumerate_path_systems(HexagonModel::uniform(2, 1, 1)).size() == 2);
    CHECK(enumerate_path_systems(HexagonModel::uniform(4, 2, 2)).size() == 20);
    CHECK(enumerate_path_systems(HexagonModel::uniform(5, 2, 3)).size() == macmahon(2, 3, 2));
    for (const HexagonModel& m : {HexagonModel::periodic_2x2(case_b()), three_periodic()}) {
        const auto s = enumerate_path_systems(m);
        CHECK(partition_function(s) == doctest::Approx(partition_function_lgv(m)).epsilon(1e-12));
    }
    CHECK(partition_function_lgv(HexagonModel::uniform(6, 3, 3)) == doctest::Approx(980.0));
    CHECK_THROWS_AS(enumerate_path_systems(HexagonModel::uniform(4, 2, 2), 10.0), GuardExceeded);
}

TEST_CASE("probabilities: small examples") {
    const HexagonModel m = HexagonModel::uniform(2, 1, 1);
    const DKKernel dk(m);
    const auto s = enumerate_path_systems(m);
    CHECK(probability_enumeration(s, {}) == 1.0);
    CHECK(probability_enumeration(s, {{1, 0}}) == doctest::Approx(0.5));
    CHECK(probability_determinantal(std::cref(dk), m, {{1, 0}}) == doctest::Approx(0.5).epsilon(1e-10));
    const PointProbability pp = point_probability(m, dk, {{1, 1}});
    REQUIRE(pp.determinantal);
    REQUIRE(pp.enumeration);
    CHECK(*pp.determinantal == doctest::Approx(*pp.enumeration).epsilon(1e-10));
    CHECK_FALSE(point_probability(m, dk, {{0, 0}}).determinantal);
}

TEST_CASE("property: determinantal probabilities match enumeration") {
    for (const HexagonModel& m :
         {HexagonModel::uniform(4, 2, 2), HexagonModel::uniform(4, 2, 2, 2), three_periodic(),
          HexagonModel::periodic_2x1(Periodic2x1{1, 2, 1, 2, 4, 2, 2}), HexagonModel::periodic_2x2(case_b())}) {
        const DKKernel dk(m);
        check_against_enumeration(m, std::cref(dk), 10, 1e-8);
    }
}

TEST_CASE("simplified kernels agree with the double contour kernel") {
    const auto quad = unit_circle_quadrature(256);
    for (const HexagonModel& m : {HexagonModel::uniform(4, 4, 2, 2), HexagonModel::uniform(4, 2, 2, 2),
                                  HexagonModel::periodic_2x1(Periodic2x1{1, 2, 1, 2, 4, 2, 2})}) {
        const MOPSystem sys = build_mops(m.weight(), quad, m.mop_size());
        const DKKernel dk(m, sys, quad);
        const SimplifiedKernel sk(m, sys, quad, build_chart(m.family(), m.mop_size()));
        REQUIRE(sk.has_plane());
        const auto ref = [&](const KernelQuery& q) { return dk.block(q); };
        CHECK(max_block_difference([&](const KernelQuery& q) { return sk.sheet_sum(q); }, ref, m.L) < 1e-7);
        CHECK(max_block_difference([&](const KernelQuery& q) { return sk.plane(q); }, ref, m.L) < 1e-7);
    }
}

TEST_CASE("explicit 2x1 and 2x2 formulas agree with the double contour kernel") {
    for (const Periodic2x1& f : {Periodic2x1{1, 2, 1, 2, 4, 2, 2}, Periodic2x1{1, 2, 1.5, 1.5, 4, 2, 2}}) {
        const HexagonModel m = HexagonModel::periodic_2x1(f);
        const DKKernel dk(m);
        const Kernel2x1 k(m);
        CHECK(max_block_difference([&](const KernelQuery& q) { return k.block(q); },
                                   [&](const KernelQuery& q) { return dk.block(q); }, m.L) < 1e-7);
    }
    for (const Periodic2x2& f : {case_a(), case_b()}) {
        const HexagonModel m = HexagonModel::periodic_2x2(f);
        const DKKernel dk(m);
        const Kernel2x2 k(m);
        CHECK(k.case_a() == (periodic2x2_constants(f).a_minus == 0.0));
        CHECK(max_block_difference([&](const KernelQuery& q) { return k.block(q); },
                                   [&](const KernelQuery& q) { return dk.block(q); }, m.L) < 1e-7);
    }
}

TEST_CASE("uniform r = 2 kernel equals the r = 1 kernel") {
    const DKKernel k2(HexagonModel::uniform(2, 2, 2, 2)), k1(HexagonModel::uniform(2, 2, 2, 1));
    double worst = 0.0;
    for (int y1 = -4; y1 <= 5; ++y1)
        for (int y2 = -4; y2 <= 5; ++y2) worst = std::max(worst, std::abs(k2(1, y1, 1, y2) - k1(1, y1, 1, y2)));
    CHECK(worst < 1e-8);
}

TEST_CASE("property: column sums equal the number of paths") {
    for (const HexagonModel& m :
         {HexagonModel::uniform(4, 2, 2), HexagonModel::uniform(4, 2, 2, 2), three_periodic(),
          HexagonModel::periodic_2x1(Periodic2x1{1, 2, 1, 2, 4, 2, 2}), HexagonModel::periodic_2x2(case_a()),
          HexagonModel::periodic_2x2(case_b())}) {
        const DKKernel dk(m);
        for (int x = 1; x < m.L; ++x) CHECK(std::abs(column_sum(std::cref(dk), m, x) - m.N) < 1e-7);
    }
}
