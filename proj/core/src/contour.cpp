#include "cdsurface/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace cdsurface {

cplx ipow(cplx z, int p) {
    if (p < 0) return 1.0 / ipow(z, -p);
    cplx result{1.0, 0.0};
    cplx base = z;
    while (p > 0) {
        if (p & 1) result *= base;
        base *= base;
        p >>= 1;
    }
    return result;
}

Mat matrix_power(const Mat& a, int p) {
    if (a.rows() != a.cols()) throw InvalidArgument("matrix_power: matrix must be square");
    if (p < 0) return matrix_power(a.inverse(), -p);
    Mat result = Mat::Identity(a.rows(), a.cols());
    Mat base = a;
    while (p > 0) {
        if (p & 1) result = result * base;
        p >>= 1;
        if (p > 0) base = base * base;
    }
    return result;
}

bool all_finite(const Mat& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!is_finite(m.data()[i])) return false;
    return true;
}

ContourQuadrature ContourQuadrature::reversed() const {
    ContourQuadrature out = *this;
    for (auto& w : out.weights) w = -w;
    for (auto& o : out.orientation) o = -o;
    return out;
}

double ContourQuadrature::distance(cplx z) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < components(); ++c)
        best = std::min(best, std::abs(std::abs(z - centers[c]) - radii[c]));
    return best;
}

int ContourQuadrature::winding(cplx z) const {
    int w = 0;
    for (std::size_t c = 0; c < components(); ++c)
        if (std::abs(z - centers[c]) < radii[c]) w += orientation[c];
    return w;
}

ContourQuadrature circle_quadrature(cplx center, double radius, std::size_t n) {
    if (n == 0) throw InvalidArgument("circle_quadrature: node count must be positive");
    if (!(radius > 0.0)) throw InvalidArgument("circle_quadrature: radius must be positive");
    ContourQuadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    q.component_ids.assign(n, 0);
    q.orientation = {1};
    q.n_per_component = {n};
    q.centers = {center};
    q.radii = {radius};
    const cplx step = two_pi_i / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
        const cplx u = std::polar(radius, theta);
        q.nodes[j] = center + u;
        q.weights[j] = step * u;
    }
    return q;
}

ContourQuadrature unit_circle_quadrature(std::size_t n) {
    if (n == 0) throw InvalidArgument("unit_circle_quadrature: node count must be positive");
    return circle_quadrature(cplx{0.0, 0.0}, 1.0, n);
}

ContourQuadrature union_quadrature(const std::vector<ContourQuadrature>& parts) {
    if (parts.empty()) throw InvalidArgument("union_quadrature: empty list");
    ContourQuadrature out;
    int offset = 0;
    for (const auto& p : parts) {
        out.nodes.insert(out.nodes.end(), p.nodes.begin(), p.nodes.end());
        out.weights.insert(out.weights.end(), p.weights.begin(), p.weights.end());
        for (int id : p.component_ids) out.component_ids.push_back(id + offset);
        out.orientation.insert(out.orientation.end(), p.orientation.begin(), p.orientation.end());
        out.n_per_component.insert(out.n_per_component.end(), p.n_per_component.begin(), p.n_per_component.end());
        out.centers.insert(out.centers.end(), p.centers.begin(), p.centers.end());
        out.radii.insert(out.radii.end(), p.radii.begin(), p.radii.end());
        offset += static_cast<int>(p.components());
    }
    return out;
}

std::size_t default_node_count() {
    if (const char* env = std::getenv("CDSURFACE_QUAD_N")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw InvalidArgument(std::string("CDSURFACE_QUAD_N is not a positive integer: ") + env);
    }
    return 256;
}

}  // namespace cdsurface
