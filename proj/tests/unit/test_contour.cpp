#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "cdsurface/contour.hpp"

using namespace cdsurface;

namespace {

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

}  // namespace

TEST_CASE("unit circle: residue of 1/z with four nodes") {
    const auto q = unit_circle_quadrature(4);
    const cplx v = q.integrate([](cplx z) { return 1.0 / z; });
    CHECK(std::abs(v - two_pi_i) < 1e-14);
}

TEST_CASE("unit circle: z^3 vanishes with eight nodes") {
    const auto q = unit_circle_quadrature(8);
    CHECK(std::abs(q.integrate([](cplx z) { return z * z * z; })) < 1e-14);
}

TEST_CASE("unit circle: (1+z)^5 / z^3 picks the z^2 binomial coefficient") {
    const auto q = unit_circle_quadrature(64);
    const cplx v = q.integrate([](cplx z) { return ipow(1.0 + z, 5) / ipow(z, 3); });
    CHECK(std::abs(v - two_pi_i * binomial(5, 2)) < 1e-12);
}

TEST_CASE("unit circle: monomials are exact away from the aliased exponent") {
    for (std::size_t n : {std::size_t{5}, std::size_t{8}, std::size_t{16}}) {
        const auto q = unit_circle_quadrature(n);
        const int ni = static_cast<int>(n);
        for (int k = -ni + 1; k < ni - 1; ++k) {
            const cplx v = q.integrate([k](cplx z) { return ipow(z, k); });
            const cplx exact = k == -1 ? two_pi_i : cplx{};
            CHECK(std::abs(v - exact) < 1e-13);
        }
        // k = n - 1 aliases onto z^{-1}
        const cplx alias = q.integrate([ni](cplx z) { return ipow(z, ni - 1); });
        CHECK(std::abs(alias - two_pi_i) < 1e-12);
    }
}

TEST_CASE("unit circle: nodes and weights") {
    const auto q = unit_circle_quadrature(6);
    REQUIRE(q.size() == 6);
    for (std::size_t j = 0; j < 6; ++j) {
        const cplx z = std::polar(1.0, 2 * pi * j / 6.0);
        CHECK(std::abs(q.nodes[j] - z) < 1e-15);
        CHECK(std::abs(q.weights[j] - two_pi_i / 6.0 * z) < 1e-15);
    }
    CHECK_THROWS_AS(unit_circle_quadrature(0), InvalidArgument);
}

TEST_CASE("circle: enclosed and excluded poles") {
    const auto a = circle_quadrature(0.0, 2.0, 64);
    CHECK(std::abs(a.integrate([](cplx z) { return 1.0 / (z - 1.0); }) - two_pi_i) < 1e-12);
    const auto b = circle_quadrature(5.0, 1.0, 64);
    CHECK(std::abs(b.integrate([](cplx z) { return 1.0 / z; })) < 1e-12);
    CHECK_THROWS_AS(circle_quadrature(0.0, 0.0, 8), InvalidArgument);
    CHECK_THROWS_AS(circle_quadrature(0.0, -1.0, 8), InvalidArgument);
}

TEST_CASE("circle: center 0 radius 1 is the unit circle rule") {
    const auto a = circle_quadrature(0.0, 1.0, 32);
    const auto b = unit_circle_quadrature(32);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(a.nodes[j] == b.nodes[j]);
        CHECK(a.weights[j] == b.weights[j]);
    }
}

TEST_CASE("union: disjoint circles, doubling, cancelling residues") {
    const double c = 0.5;
    const auto left = circle_quadrature(-c, 0.2, 64);
    const auto right = circle_quadrature(c, 0.2, 64);
    const auto both = union_quadrature({left, right});
    CHECK(both.components() == 2);
    CHECK(both.component_ids.front() == 0);
    CHECK(both.component_ids.back() == 1);
    CHECK(std::abs(both.integrate([c](cplx z) { return 1.0 / (z - c); }) - two_pi_i) < 1e-12);

    const auto unit = unit_circle_quadrature(32);
    const auto twice = union_quadrature({unit, unit});
    const auto f = [](cplx z) { return std::exp(z) / z; };
    CHECK(std::abs(twice.integrate(f) - 2.0 * unit.integrate(f)) < 1e-13);

    const auto pair = union_quadrature({circle_quadrature(c, 0.1, 64), circle_quadrature(1.0 / c, 0.1, 64)});
    CHECK(std::abs(pair.integrate([c](cplx z) { return 1.0 / ((z - c) * (z - 1.0 / c)); })) < 1e-12);
    CHECK_THROWS_AS(union_quadrature({}), InvalidArgument);
}

TEST_CASE("orientation reversal negates integrals") {
    const auto q = circle_quadrature(0.3, 1.5, 48);
    const auto rq = q.reversed();
    const auto f = [](cplx z) { return std::cos(z) / (z - 0.1); };
    CHECK(std::abs(q.integrate(f) + rq.integrate(f)) < 1e-13);
    CHECK(q.winding(0.3) == 1);
    CHECK(rq.winding(0.3) == -1);
    CHECK(q.winding(3.0) == 0);
}

TEST_CASE("geometric convergence on a rational integrand") {
    // pole at 1.5 outside the unit circle: the exact integral of z^{-1} / (1.5 - z) is 2 pi i / 1.5
    const auto f = [](cplx z) { return 1.0 / (z * (1.5 - z)); };
    const cplx exact = two_pi_i / 1.5;
    const double e16 = std::abs(unit_circle_quadrature(16).integrate(f) - exact);
    const double e32 = std::abs(unit_circle_quadrature(32).integrate(f) - exact);
    const double e64 = std::abs(unit_circle_quadrature(64).integrate(f) - exact);
    CHECK(e32 * 10 < e16);
    CHECK(e64 < 1e-10);
}

TEST_CASE("cauchy integral stays accurate near the contour") {
    const auto q = unit_circle_quadrature(128);
    const auto f = [](cplx s) { return std::exp(s); };
    for (double rad : {0.5, 0.99, 0.9999}) {
        const cplx z = std::polar(rad, 0.4);
        CHECK(std::abs(cauchy_integral(q, f, z) - two_pi_i * std::exp(z)) < 1e-10);
    }
    const cplx out = std::polar(1.0001, 0.4);
    CHECK(std::abs(cauchy_integral(q, f, out)) < 1e-10);
}

TEST_CASE("distance to the contour") {
    const auto q = union_quadrature({circle_quadrature(0.0, 1.0, 8), circle_quadrature(4.0, 1.0, 8)});
    CHECK(q.distance(0.0) == doctest::Approx(1.0));
    CHECK(q.distance(2.5) == doctest::Approx(0.5));
}

TEST_CASE("node floor and default count") {
    CHECK(with_floor(3) == kNodeFloor);
    CHECK(with_floor(100) == 100);
    if (!std::getenv("CDSURFACE_QUAD_N")) CHECK(default_node_count() == 256);
}
