#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "cdsurface/contour.hpp"
#include "cdsurface/mops.hpp"
#include "cdsurface/sops.hpp"
#include "cdsurface/surface.hpp"
#include "cdsurface/weights.hpp"

namespace cdsurface {

/// Lozenge tilings of a hexagon with an r x q periodic edge weighting.
///
/// Paths start at (0, j) and end at (L, M + j), j = 0..N-1. a[l][j], b[l][j]
/// are the weights of the up and horizontal edges leaving (l, j).
struct HexagonModel {
    int r = 1, q = 1;
    int L = 2, M = 1, N = 1;
    std::vector<std::vector<double>> a, b;

    static HexagonModel uniform(int L, int N, int M, int r = 1);
    static HexagonModel periodic_2x1(const Periodic2x1& f);
    static HexagonModel periodic_2x2(const Periodic2x2& f);

    void validate() const;
    int mop_size() const { return N / r; }

    /// A_l(z) with A_{l+q} = A_l.
    Mat transition(int ell, cplx z) const;
    /// A_from A_{from+1} ... A_{to-1}; the identity when to <= from.
    Mat transition_product(int from, int to, cplx z) const;
    /// A(z) = A_0 ... A_{q-1}.
    Mat A(cplx z) const { return transition_product(0, q, z); }
    /// z^{-(M+N)/r} A(z)^{L/q}.
    MatrixWeight weight() const;
    /// The named family of the weight. Throws UnsupportedFamily when none matches.
    WeightFamily family() const;

    bool in_hexagon(int x, int y) const;
    /// Inclusive range of heights inside the hexagon at column x.
    std::pair<int, int> column_range(int x) const;
};

struct Edge {
    int x = 0, y = 0;
    int delta = 0;  // 0 for (x,y)->(x+1,y), 1 for (x,y)->(x+1,y+1)
};

double edge_weight(const HexagonModel& model, const Edge& e);
/// The same weight recovered from the transition matrices by a contour integral.
cplx edge_weight_contour(const HexagonModel& model, const Edge& e, const ContourQuadrature& quad);

/// Block query [K(x1, r y1 + j, x2, r y2 + i)]_{i,j}.
struct KernelQuery {
    int x1 = 1, y1 = 0, x2 = 1, y2 = 0;

    int L1(int q) const { return x1 / q; }
    int L2(int L, int q) const { return L / q - (x2 + q - 1) / q; }
    int L3(int q) const { return std::max(x1 / q - (x2 + q - 1) / q, 0); }
    bool chi() const { return x1 > x2; }
};

/// Factors of the double contour formula for one query.
struct KernelFactors {
    Mat B1, B2, B3, B4;
    int L1 = 0, L2 = 0, L3 = 0;
    bool chi = false;
};

KernelFactors kernel_factors(const HexagonModel& model, const KernelQuery& query, cplx z, cplx w);

/// Correlation kernel from the matrix CD kernel on the unit circle.
///
/// The CD kernel is tabulated once on the node grid; every query is then two
/// small dense products.
class DKKernel {
public:
    explicit DKKernel(const HexagonModel& model, std::size_t nodes = 0);
    DKKernel(const HexagonModel& model, MOPSystem sys, ContourQuadrature quad);

    Mat block(const KernelQuery& query) const;
    /// K(x1, y1, x2, y2) for arbitrary heights.
    double operator()(int x1, int y1, int x2, int y2) const;
    cplx entry(int x1, int y1, int x2, int y2) const;

    const HexagonModel& model() const { return model_; }
    const MOPSystem& mops() const { return sys_; }
    const ContourQuadrature& quadrature() const { return quad_; }
    /// [R_N(w_a, z_b)] on the node grid.
    const Mat& kernel_grid() const { return grid_; }

private:
    HexagonModel model_;
    MOPSystem sys_;
    ContourQuadrature quad_;
    Mat grid_;
    mutable std::map<std::tuple<int, int, int, int>, Mat> cache_;
};

Mat dk_kernel(const HexagonModel& model, const MOPSystem& sys, const KernelQuery& query,
              const ContourQuadrature& quad);

/// Both simplified forms of the kernel: the sheet sum on the unit circle and,
/// for genus-0 surfaces, the plane form on gamma_C.
class SimplifiedKernel {
public:
    /// frak defaults to frak_R built from sys.
    SimplifiedKernel(const HexagonModel& model, MOPSystem sys, ContourQuadrature quad,
                     std::optional<Genus0Chart> chart, ScalarKernel frak = {});

    Mat sheet_sum(const KernelQuery& query) const;
    Mat plane(const KernelQuery& query) const;
    bool has_plane() const { return chart_.has_value(); }

private:
    HexagonModel model_;
    MOPSystem sys_;
    ContourQuadrature quad_;
    SpectralData spectral_;
    std::optional<Genus0Chart> chart_;
    Mat surface_grid_;  // [R^lambda(w_a^(k), z_b^(j))]
    Mat plane_grid_;    // [frak R(omega_a, zeta_b)]
};

struct SimplifiedResult {
    Mat sheet_sum;
    std::optional<Mat> plane;
};

SimplifiedResult simplified_kernel_general(const HexagonModel& model, const MOPSystem& sys,
                                           const std::optional<Genus0Chart>& chart, const KernelQuery& query,
                                           std::size_t nodes = 0);

/// Explicit scalar double contour formula of the 2 x 1 periodic model.
class Kernel2x1 {
public:
    explicit Kernel2x1(const HexagonModel& model, std::size_t nodes = 0, double radius = 0.0);

    /// Printed scalar weight (2 a0 a1)^{-1} ((b0+b1+z)/2)^L (4 a0 a1 / (z^2 - (b0-b1)^2))^{(M+N)/2}.
    cplx scalar_weight(cplx zeta) const;
    Mat block(const KernelQuery& query) const;
    const ContourQuadrature& contour() const { return gamma_; }
    const ScalarOPSystem& scalar_ops() const { return ops_; }

private:
    HexagonModel model_;
    ContourQuadrature gamma_;
    ScalarOPSystem ops_;
    Mat grid_;
};

/// Explicit scalar double contour formula of the 2 x 2 periodic model.
/// Query columns are absolute; the parity split x = 2x' + eps is done internally.
class Kernel2x2 {
public:
    explicit Kernel2x2(const HexagonModel& model, std::size_t nodes = 0, double margin = 0.0);

    Mat block(const KernelQuery& query) const;
    bool case_a() const { return case_a_; }
    const Genus0Chart& chart() const { return chart_; }
    const ScalarOPSystem& scalar_ops() const { return ops_; }
    /// lambda_hat in the printed form of each case.
    cplx lambda_hat(cplx zeta) const;

private:
    HexagonModel model_;
    Periodic2x2Constants k_;
    bool case_a_ = false;
    Genus0Chart chart_;
    ScalarOPSystem ops_;
    Mat grid_;
};

Mat simplified_kernel_2x1(const HexagonModel& model, const KernelQuery& query, std::size_t nodes = 0);
Mat simplified_kernel_2x2(const HexagonModel& model, const KernelQuery& query, std::size_t nodes = 0);

/// Heights of the N paths at columns 0..L, bottom path first.
struct PathSystem {
    std::vector<std::vector<int>> paths;
    double weight = 0.0;

    bool passes(int x, int y) const;
};

inline constexpr double kEnumerationGuard = 1e7;

/// Upper bound C(L, M)^N on the number of lattice configurations.
double configuration_count(const HexagonModel& model);

/// All systems of non-intersecting paths. Throws GuardExceeded above the guard.
std::vector<PathSystem> enumerate_path_systems(const HexagonModel& model, double guard = kEnumerationGuard);

double partition_function(const std::vector<PathSystem>& systems);
/// det[weight of all paths from (0, i) to (L, M + j) inside the hexagon].
double partition_function_lgv(const HexagonModel& model);
/// Number of lozenge tilings of an a x b x c hexagon.
std::uint64_t macmahon(int a, int b, int c);

using Point = std::pair<int, int>;
using PointKernel = std::function<double(int, int, int, int)>;

double probability_enumeration(const std::vector<PathSystem>& systems, const std::vector<Point>& points);
/// det[K(x_i, y_i, x_j, y_j)]; needs 1 <= x <= L-1 for every point.
double probability_determinantal(const PointKernel& kernel, const HexagonModel& model,
                                 const std::vector<Point>& points);

struct PointProbability {
    std::optional<double> determinantal;  // empty when a point lies on column 0 or L
    std::optional<double> enumeration;    // empty when the guard forbids enumeration
};

PointProbability point_probability(const HexagonModel& model, const DKKernel& kernel, const std::vector<Point>& points,
                                   double guard = kEnumerationGuard);

/// sum_y K(x, y, x, y) over the heights of column x.
double column_sum(const PointKernel& kernel, const HexagonModel& model, int x);

/// Adapts a block kernel to scalar heights.
PointKernel scalar_view(std::function<Mat(const KernelQuery&)> block, int r);

}  // namespace cdsurface
