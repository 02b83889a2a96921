#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

#include "cdsurface/types.hpp"

namespace cdsurface {

namespace detail {
template <class T, class = void>
struct plain_of {
    using type = T;
};
template <class T>
struct plain_of<T, std::void_t<typename T::PlainObject>> {
    using type = typename T::PlainObject;
};
template <class T>
using plain_t = typename plain_of<std::decay_t<T>>::type;
}  // namespace detail

/// Quadrature rule for a finite union of oriented circles.
///
/// Weights absorb the complex measure dz, so an integral is the plain sum
/// sum_j weights[j] * f(nodes[j]).
struct ContourQuadrature {
    std::vector<cplx> nodes;
    std::vector<cplx> weights;
    std::vector<int> component_ids;
    std::vector<int> orientation;           // per component, +1 or -1
    std::vector<std::size_t> n_per_component;
    std::vector<cplx> centers;              // per component
    std::vector<double> radii;              // per component

    std::size_t size() const { return nodes.size(); }
    std::size_t components() const { return orientation.size(); }

    template <class F>
    auto integrate(F&& f) const {
        using R = detail::plain_t<decltype(f(nodes[0]) * weights[0])>;
        R acc = f(nodes[0]) * weights[0];
        for (std::size_t j = 1; j < nodes.size(); ++j) acc += f(nodes[j]) * weights[j];
        return acc;
    }

    /// Same nodes with the orientation of every component flipped.
    ContourQuadrature reversed() const;

    /// Euclidean distance from z to the nearest component.
    double distance(cplx z) const;

    /// Winding number of the contour around z (z must not lie on it).
    int winding(cplx z) const;
};

/// Nodes exp(2 pi i j / n) with trapezoid weights (2 pi i / n) z_j.
ContourQuadrature unit_circle_quadrature(std::size_t n);

/// Positively oriented circle with the same trapezoid construction.
ContourQuadrature circle_quadrature(cplx center, double radius, std::size_t n);

/// Concatenation of several rules; component ids are renumbered to stay distinct.
ContourQuadrature union_quadrature(const std::vector<ContourQuadrature>& parts);

/// Node count used when the caller does not ask for one: 256, or CDSURFACE_QUAD_N if set.
std::size_t default_node_count();

inline constexpr std::size_t kNodeFloor = 8;

/// Raises a requested node count to the configured floor.
inline std::size_t with_floor(std::size_t n, std::size_t floor = kNodeFloor) { return n < floor ? floor : n; }

/// Cauchy integral  int_gamma f(s) / (s - z) ds.
///
/// Close to the contour the value f(z) is subtracted from the integrand and
/// added back through the exact integral of 1/(s - z), which keeps the rule
/// spectrally accurate up to the contour. f must then be analytic between the
/// contour and z.
template <class F>
auto cauchy_integral(const ContourQuadrature& quad, F&& f, cplx z, double subtract_within = 0.25) {
    using R = detail::plain_t<decltype(f(z) * cplx{})>;
    if (quad.distance(z) >= subtract_within) {
        return quad.integrate([&](cplx s) -> R { return f(s) * (1.0 / (s - z)); });
    }
    const R fz = f(z);
    R acc = (f(quad.nodes[0]) - fz) * (quad.weights[0] / (quad.nodes[0] - z));
    for (std::size_t j = 1; j < quad.size(); ++j)
        acc += (f(quad.nodes[j]) - fz) * (quad.weights[j] / (quad.nodes[j] - z));
    R extra = fz * (two_pi_i * static_cast<double>(quad.winding(z)));
    return R(acc + extra);
}

}  // namespace cdsurface
