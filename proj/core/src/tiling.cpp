#include "cdsurface/tiling.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace cdsurface {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int floor_mod(int a, int b) { return a - b * floor_div(a, b); }

std::size_t nodes_or_default(std::size_t n) { return n == 0 ? default_node_count() : with_floor(n); }

void require_interior(const HexagonModel& m, const KernelQuery& q) {
    if (q.x1 < 1 || q.x1 > m.L - 1 || q.x2 < 1 || q.x2 > m.L - 1)
        throw InvalidArgument("kernel query: x1, x2 must lie in 1..L-1");
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

}  // namespace

HexagonModel HexagonModel::uniform(int L, int N, int M, int r) {
    HexagonModel m;
    m.r = r;
    m.q = 1;
    m.L = L;
    m.N = N;
    m.M = M;
    m.a.assign(1, std::vector<double>(r, 1.0));
    m.b.assign(1, std::vector<double>(r, 1.0));
    return m;
}

HexagonModel HexagonModel::periodic_2x1(const Periodic2x1& f) {
    HexagonModel m;
    m.r = 2;
    m.q = 1;
    m.L = f.L;
    m.M = f.M;
    m.N = f.N;
    m.a = {{f.a0, f.a1}};
    m.b = {{f.b0, f.b1}};
    return m;
}

HexagonModel HexagonModel::periodic_2x2(const Periodic2x2& f) {
    HexagonModel m;
    m.r = 2;
    m.q = 2;
    m.L = f.L;
    m.M = f.M;
    m.N = f.N;
    m.a = {{f.a[0][0], f.a[0][1]}, {f.a[1][0], f.a[1][1]}};
    m.b = {{f.b[0][0], f.b[0][1]}, {f.b[1][0], f.b[1][1]}};
    return m;
}

void HexagonModel::validate() const {
    if (r < 1 || q < 1) throw InvalidArgument("hexagon: periods must be positive");
    if (L < 1 || N < 1 || M < 0 || M > L) throw InvalidArgument("hexagon: need L >= 1, N >= 1, 0 <= M <= L");
    if (L % q != 0) throw InvalidArgument("hexagon: L must be a multiple of q");
    if (M % r != 0 || N % r != 0) throw InvalidArgument("hexagon: M and N must be multiples of r");
    if (static_cast<int>(a.size()) != q || static_cast<int>(b.size()) != q)
        throw InvalidArgument("hexagon: need q rows of edge weights");
    for (int l = 0; l < q; ++l) {
        if (static_cast<int>(a[l].size()) != r || static_cast<int>(b[l].size()) != r)
            throw InvalidArgument("hexagon: need r edge weights per row");
        for (int j = 0; j < r; ++j)
            if (!(a[l][j] > 0.0) || !(b[l][j] > 0.0)) throw InvalidArgument("hexagon: edge weights must be positive");
    }
}

Mat HexagonModel::transition(int ell, cplx z) const {
    const int l = floor_mod(ell, q);
    Mat t = Mat::Zero(r, r);
    for (int j = 0; j < r; ++j) {
        t(j, j) = b[l][j];
        if (j + 1 < r) t(j, j + 1) = a[l][j];
    }
    t(r - 1, 0) += z * a[l][r - 1];
    return t;
}

Mat HexagonModel::transition_product(int from, int to, cplx z) const {
    Mat p = Mat::Identity(r, r);
    for (int l = from; l < to; ++l) p = p * transition(l, z);
    return p;
}

MatrixWeight HexagonModel::weight() const {
    validate();
    const int shift = (M + N) / r, power = L / q;
    const HexagonModel self = *this;
    return MatrixWeight{r, [self, shift, power](cplx z) -> Mat {
                            if (z == cplx{0.0, 0.0}) throw PoleError("hexagon weight: z = 0 is a pole");
                            return matrix_power(self.A(z), power) * ipow(z, -shift);
                        }};
}

WeightFamily HexagonModel::family() const {
    validate();
    bool ones = true;
    for (int l = 0; l < q; ++l)
        for (int j = 0; j < r; ++j) ones = ones && a[l][j] == 1.0 && b[l][j] == 1.0;
    if (q == 1 && ones && r >= 2) return CyclicUniform{r, L, (M + N) / r};
    if (r == 2 && q == 1) return Periodic2x1{a[0][0], a[0][1], b[0][0], b[0][1], L, M, N};
    if (r == 2 && q == 2) {
        Periodic2x2 f;
        for (int l = 0; l < 2; ++l)
            for (int j = 0; j < 2; ++j) {
                f.a[l][j] = a[l][j];
                f.b[l][j] = b[l][j];
            }
        f.L = L;
        f.M = M;
        f.N = N;
        return f;
    }
    throw UnsupportedFamily("hexagon: no closed-form spectral data for r = " + std::to_string(r) +
                            ", q = " + std::to_string(q));
}

bool HexagonModel::in_hexagon(int x, int y) const {
    return x >= 0 && x <= L && y >= 0 && y <= N + M - 1 && y - x >= -(L - M) && y - x <= N - 1;
}

std::pair<int, int> HexagonModel::column_range(int x) const {
    return {std::max(0, x - (L - M)), std::min(N + M - 1, x + N - 1)};
}

double edge_weight(const HexagonModel& model, const Edge& e) {
    if (e.delta != 0 && e.delta != 1) throw InvalidArgument("edge: delta must be 0 or 1");
    const int l = floor_mod(e.x, model.q), j = floor_mod(e.y, model.r);
    return e.delta == 0 ? model.b[l][j] : model.a[l][j];
}

cplx edge_weight_contour(const HexagonModel& model, const Edge& e, const ContourQuadrature& quad) {
    if (e.delta != 0 && e.delta != 1) throw InvalidArgument("edge: delta must be 0 or 1");
    const int r = model.r;
    const int y1 = floor_div(e.y, r), j = floor_mod(e.y, r);
    const int y2 = floor_div(e.y + e.delta, r), k = floor_mod(e.y + e.delta, r);
    const cplx v = quad.integrate([&](cplx z) { return model.transition(e.x, z)(j, k) * ipow(z, y1 - y2 - 1); });
    return v / two_pi_i;
}

KernelFactors kernel_factors(const HexagonModel& m, const KernelQuery& qy, cplx z, cplx w) {
    const int q = m.q;
    const int lo1 = q * (qy.x1 / q);
    const int hi2 = q * ((qy.x2 + q - 1) / q);
    KernelFactors f;
    f.L1 = qy.L1(q);
    f.L2 = qy.L2(m.L, q);
    f.L3 = qy.L3(q);
    f.chi = qy.chi();
    const bool same = qy.x1 / q >= (qy.x2 + q - 1) / q;
    f.B1 = ipow(z, -qy.y1 - 1) * m.transition_product(lo1, qy.x1, z);
    f.B2 = ipow(w, qy.y2 - (m.M + m.N) / m.r) * m.transition_product(qy.x2, hi2, w);
    f.B3 = ipow(z, -qy.y1 - 1) * (same ? m.transition_product(lo1, qy.x1, z) : Mat(Mat::Identity(m.r, m.r)));
    // the columns between x2 and x1 contribute A_{x2} ... A_{x1-1}
    f.B4 = ipow(z, qy.y2) * (same ? m.transition_product(qy.x2, hi2, z) : m.transition_product(qy.x2, qy.x1, z));
    return f;
}

DKKernel::DKKernel(const HexagonModel& model, std::size_t nodes)
    : model_(model), quad_(unit_circle_quadrature(nodes_or_default(nodes))) {
    model_.validate();
    sys_ = build_mops(model_.weight(), quad_, model_.mop_size());
    grid_ = cd_kernel_grid(sys_, quad_.nodes, quad_.nodes);
}

DKKernel::DKKernel(const HexagonModel& model, MOPSystem sys, ContourQuadrature quad)
    : model_(model), sys_(std::move(sys)), quad_(std::move(quad)) {
    model_.validate();
    if (sys_.r != model_.r || sys_.N != model_.mop_size())
        throw InvalidArgument("DKKernel: MOP system does not match the model");
    grid_ = cd_kernel_grid(sys_, quad_.nodes, quad_.nodes);
}

Mat DKKernel::block(const KernelQuery& qy) const {
    require_interior(model_, qy);
    const auto key = std::make_tuple(qy.x1, qy.y1, qy.x2, qy.y2);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const int r = model_.r;
    const std::size_t n = quad_.size();
    Mat F(r, r * n), G(r * n, r);
    Mat chi_sum = Mat::Zero(r, r);
    for (std::size_t a = 0; a < n; ++a) {
        const cplx z = quad_.nodes[a], wt = quad_.weights[a];
        const KernelFactors f = kernel_factors(model_, qy, z, z);
        const Mat A = model_.A(z);
        F.block(0, r * a, r, r) = f.B2 * matrix_power(A, f.L2) * wt;
        G.block(r * a, 0, r, r) = matrix_power(A, f.L1) * f.B1 * wt;
        if (f.chi) chi_sum += f.B4 * matrix_power(A, f.L3) * f.B3 * wt;
    }
    Mat k = (F * grid_ * G - chi_sum) / two_pi_i;
    cache_.emplace(key, k);
    return k;
}

cplx DKKernel::entry(int x1, int y1, int x2, int y2) const {
    const int r = model_.r;
    const Mat k = block({x1, floor_div(y1, r), x2, floor_div(y2, r)});
    return k(floor_mod(y2, r), floor_mod(y1, r));
}

double DKKernel::operator()(int x1, int y1, int x2, int y2) const { return entry(x1, y1, x2, y2).real(); }

Mat dk_kernel(const HexagonModel& model, const MOPSystem& sys, const KernelQuery& query,
              const ContourQuadrature& quad) {
    return DKKernel(model, sys, quad).block(query);
}

SimplifiedKernel::SimplifiedKernel(const HexagonModel& model, MOPSystem sys, ContourQuadrature quad,
                                   std::optional<Genus0Chart> chart, ScalarKernel frak)
    : model_(model),
      sys_(std::move(sys)),
      quad_(std::move(quad)),
      spectral_(model.family()),
      chart_(std::move(chart)) {
    const int r = model_.r;
    const std::size_t n = quad_.size();
    const Mat grid = cd_kernel_grid(sys_, quad_.nodes, quad_.nodes);
    std::vector<Mat> E(n), Einv(n);
    for (std::size_t a = 0; a < n; ++a) {
        E[a] = spectral_.E(quad_.nodes[a]);
        Einv[a] = spectral_.E_inv(quad_.nodes[a]);
    }
    surface_grid_.resize(r * n, r * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            surface_grid_.block(r * a, r * b, r, r) = Einv[a] * grid.block(r * a, r * b, r, r) * E[b];
    if (!chart_) return;
    const auto& g = chart_->gamma_C.nodes;
    const std::size_t m = g.size();
    plane_grid_.resize(m, m);
    if (frak) {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) plane_grid_(a, b) = frak(g[a], g[b]);
        return;
    }
    std::vector<cplx> ph(m);
    for (std::size_t a = 0; a < m; ++a) ph[a] = chart_->phi(g[a]);
    const Mat pg = cd_kernel_grid(sys_, ph, ph);
    Mat left(m, r), right(r, m);
    for (std::size_t a = 0; a < m; ++a) {
        left.row(a) = chart_->hhat_evec_inv(g[a]);
        right.col(a) = chart_->evec(g[a]) * chart_->h(g[a]);
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            plane_grid_(a, b) = (left.row(a) * pg.block(r * a, r * b, r, r) * right.col(b))(0, 0);
}

Mat SimplifiedKernel::sheet_sum(const KernelQuery& qy) const {
    require_interior(model_, qy);
    const int r = model_.r;
    const std::size_t n = quad_.size();
    Mat U(r, r * n), V(r * n, r);
    Mat chi_sum = Mat::Zero(r, r);
    for (std::size_t a = 0; a < n; ++a) {
        const cplx z = quad_.nodes[a], wt = quad_.weights[a];
        const KernelFactors f = kernel_factors(model_, qy, z, z);
        for (int k = 0; k < r; ++k) {
            const cplx lh = spectral_.lambda_hat(k, z);
            const Vec e = spectral_.evec(k, z);
            const RowVec ei = spectral_.evec_inv(k, z);
            U.col(r * a + k) = wt * ipow(lh, f.L2) * (f.B2 * e);
            V.row(r * a + k) = wt * ipow(lh, f.L1) * (ei * f.B1);
            if (f.chi) chi_sum += wt * ipow(lh, f.L3) * (f.B4 * e) * (ei * f.B3);
        }
    }
    return (U * surface_grid_ * V - chi_sum) / two_pi_i;
}

Mat SimplifiedKernel::plane(const KernelQuery& qy) const {
    if (!chart_) throw UnsupportedFamily("plane form needs a genus-0 chart");
    require_interior(model_, qy);
    const int r = model_.r;
    const auto& g = chart_->gamma_C;
    const std::size_t m = g.size();
    Mat U(r, m), V(m, r);
    Mat chi_sum = Mat::Zero(r, r);
    for (std::size_t a = 0; a < m; ++a) {
        const cplx zeta = g.nodes[a], wt = g.weights[a];
        const cplx z = chart_->phi(zeta), dz = chart_->dphi(zeta), lh = chart_->lambda_hat(zeta);
        const KernelFactors f = kernel_factors(model_, qy, z, z);
        const Vec e = chart_->evec(zeta);
        const RowVec ei = chart_->evec_inv(zeta);
        U.col(a) = wt * ipow(lh, f.L2) * dz / chart_->hhat(zeta) * (f.B2 * e);
        V.row(a) = wt * ipow(lh, f.L1) * dz / chart_->h(zeta) * (ei * f.B1);
        if (f.chi) chi_sum += wt * ipow(lh, f.L3) * dz * (f.B4 * e) * (ei * f.B3);
    }
    return (U * plane_grid_ * V - chi_sum) / two_pi_i;
}

SimplifiedResult simplified_kernel_general(const HexagonModel& model, const MOPSystem& sys,
                                           const std::optional<Genus0Chart>& chart, const KernelQuery& query,
                                           std::size_t nodes) {
    const SimplifiedKernel k(model, sys, unit_circle_quadrature(nodes_or_default(nodes)), chart);
    SimplifiedResult out;
    out.sheet_sum = k.sheet_sum(query);
    if (k.has_plane()) out.plane = k.plane(query);
    return out;
}

Kernel2x1::Kernel2x1(const HexagonModel& model, std::size_t nodes, double radius) : model_(model) {
    model_.validate();
    if (model_.r != 2 || model_.q != 1) throw UnsupportedFamily("Kernel2x1 needs a 2 x 1 periodic model");
    const double beta = std::abs(model_.b[0][0] - model_.b[0][1]);
    const double rad = radius > 0 ? radius : beta + 1.0;
    if (rad <= beta) throw InvalidArgument("Kernel2x1: contour must surround b0 - b1 and b1 - b0");
    gamma_ = circle_quadrature(0.0, rad, nodes_or_default(nodes));
    ops_ = solve_scalar_ops([this](cplx z) { return scalar_weight(z); }, gamma_, model_.N);
    grid_ = scalar_cd_kernel_grid(ops_, gamma_.nodes, gamma_.nodes);
}

cplx Kernel2x1::scalar_weight(cplx zeta) const {
    const double a0 = model_.a[0][0], a1 = model_.a[0][1], b0 = model_.b[0][0], b1 = model_.b[0][1];
    const cplx base = 4.0 * a0 * a1 / (zeta * zeta - (b0 - b1) * (b0 - b1));
    return ipow((b0 + b1 + zeta) / 2.0, model_.L) * ipow(base, (model_.M + model_.N) / 2) / (2.0 * a0 * a1);
}

Mat Kernel2x1::block(const KernelQuery& qy) const {
    require_interior(model_, qy);
    const double a0 = model_.a[0][0], a1 = model_.a[0][1], b0 = model_.b[0][0], b1 = model_.b[0][1];
    const int L = model_.L, half = (model_.M + model_.N) / 2;
    const std::size_t n = gamma_.size();
    auto lam = [&](cplx s) { return (b0 + b1 + s) / 2.0; };
    auto phi = [&](cplx s) { return (s * s - (b1 - b0) * (b1 - b0)) / (4.0 * a1 * a0); };
    std::vector<cplx> fw(n), fz(n);
    for (std::size_t a = 0; a < n; ++a) {
        const cplx s = gamma_.nodes[a];
        fw[a] = gamma_.weights[a] * ipow(lam(s), L - qy.x2) / ipow(phi(s), half - qy.y2);
        fz[a] = gamma_.weights[a] * ipow(lam(s), qy.x1) / ipow(phi(s), qy.y1 + 1);
    }
    Mat k = Mat::Zero(2, 2);
    for (std::size_t a = 0; a < n; ++a) {
        const cplx om = gamma_.nodes[a];
        for (std::size_t b = 0; b < n; ++b) {
            const cplx ze = gamma_.nodes[b];
            const cplx c = grid_(a, b) * fw[a] * fz[b];
            k(0, 0) += c * (ze - (b1 - b0)) / 2.0;
            k(0, 1) += c * a0;
            k(1, 0) += c * (ze - b1 + b0) * (om + b1 - b0) / (4.0 * a0);
            k(1, 1) += c * (om + b1 - b0) / 2.0;
        }
    }
    k /= 4.0 * a0 * a0 * a1 * a1;
    if (qy.chi()) {
        Mat s = Mat::Zero(2, 2);
        for (std::size_t b = 0; b < n; ++b) {
            const cplx ze = gamma_.nodes[b];
            const cplx c = gamma_.weights[b] * ipow(lam(ze), qy.x1 - qy.x2) / ipow(phi(ze), qy.y1 - qy.y2 + 1);
            s(0, 0) += c * (ze - b1 + b0) / 2.0;
            s(0, 1) += c * a0;
            s(1, 0) += c * (ze * ze - (b1 - b0) * (b1 - b0)) / (4.0 * a0);
            s(1, 1) += c * (ze + b1 - b0) / 2.0;
        }
        k -= s / (2.0 * a0 * a1);
    }
    return k / two_pi_i;
}

Kernel2x2::Kernel2x2(const HexagonModel& model, std::size_t nodes, double margin) : model_(model) {
    model_.validate();
    if (model_.r != 2 || model_.q != 2) throw UnsupportedFamily("Kernel2x2 needs a 2 x 2 periodic model");
    const auto f = std::get<Periodic2x2>(model_.family());
    k_ = periodic2x2_constants(f);
    case_a_ = k_.a_minus == 0.0;
    ChartOptions opt;
    opt.nodes = nodes;
    opt.margin = margin;
    chart_ = build_chart(f, model_.mop_size(), opt);
    const int half = (model_.M + model_.N) / 2, lp = model_.L / 2;
    ops_ = solve_scalar_ops(
        [this, half, lp](cplx w) {
            return ipow(lambda_hat(w), lp) * chart_.dphi(w) / (ipow(chart_.phi(w), half) * chart_.h(w) * chart_.hhat(w));
        },
        chart_.gamma_C, model_.N);
    grid_ = scalar_cd_kernel_grid(ops_, chart_.gamma_C.nodes, chart_.gamma_C.nodes);
}

cplx Kernel2x2::lambda_hat(cplx zeta) const {
    if (case_a_) {
        const double a00 = model_.a[0][0], a10 = model_.a[1][0];
        const double b00 = model_.b[0][0], b01 = model_.b[0][1], b10 = model_.b[1][0], b11 = model_.b[1][1];
        const double z1 = -k_.b_plus - 2.0 * a10 * b00 * b01 / a00;
        const double z2 = -k_.b_plus - 2.0 * a00 * b10 * b11 / a10;
        return k_.a_plus * (zeta - z1) * (zeta - z2) / (4.0 * (k_.c0 + k_.c1));
    }
    return (k_.a_plus * chart_.phi(zeta) + k_.b_plus + chart_.eta(zeta)) / 2.0;
}

Mat Kernel2x2::block(const KernelQuery& qy) const {
    require_interior(model_, qy);
    const int x1 = qy.x1 / 2, e1 = qy.x1 % 2;
    const int x2 = (qy.x2 + 1) / 2, e2 = 2 * x2 - qy.x2;
    const int half = (model_.M + model_.N) / 2, lp = model_.L / 2;
    const auto& g = chart_.gamma_C;
    const std::size_t n = g.size();
    Mat U(2, n), V(n, 2);
    Mat chi_sum = Mat::Zero(2, 2);
    for (std::size_t a = 0; a < n; ++a) {
        const cplx s = g.nodes[a], wt = g.weights[a];
        const cplx ph = chart_.phi(s), dph = chart_.dphi(s), lh = lambda_hat(s);
        const Mat A0 = e1 ? model_.transition(0, ph) : Mat(Mat::Identity(2, 2));
        const Mat A1 = e2 ? model_.transition(1, ph) : Mat(Mat::Identity(2, 2));
        const Vec e = chart_.evec(s);
        const RowVec ei = chart_.evec_inv(s);
        U.col(a) = wt * ipow(lh, lp - x2) / ipow(ph, half - qy.y2) * dph / chart_.hhat(s) * (A1 * e);
        V.row(a) = wt * ipow(lh, x1) / ipow(ph, qy.y1 + 1) * dph / chart_.h(s) * (ei * A0);
        if (qy.x1 > qy.x2) chi_sum += wt * ipow(lh, x1 - x2) * ipow(ph, qy.y2 - qy.y1 - 1) * dph * (A1 * e) * (ei * A0);
    }
    return (U * grid_ * V - chi_sum) / two_pi_i;
}

Mat simplified_kernel_2x1(const HexagonModel& model, const KernelQuery& query, std::size_t nodes) {
    return Kernel2x1(model, nodes).block(query);
}

Mat simplified_kernel_2x2(const HexagonModel& model, const KernelQuery& query, std::size_t nodes) {
    return Kernel2x2(model, nodes).block(query);
}

bool PathSystem::passes(int x, int y) const {
    for (const auto& p : paths)
        if (p[x] == y) return true;
    return false;
}

double configuration_count(const HexagonModel& model) { return std::pow(binomial(model.L, model.M), model.N); }

std::vector<PathSystem> enumerate_path_systems(const HexagonModel& model, double guard) {
    model.validate();
    if (configuration_count(model) > guard)
        throw GuardExceeded("enumeration: " + std::to_string(configuration_count(model)) +
                            " configurations exceed the guard");
    const int L = model.L, M = model.M, N = model.N;
    std::vector<PathSystem> out;
    std::vector<std::vector<int>> paths(N, std::vector<int>(L + 1));
    std::vector<double> weights(N + 1, 1.0);

    // extend path i column by column, then move on to path i + 1
    std::function<void(int, int)> step = [&](int i, int x) {
        auto& p = paths[i];
        if (x == L) {
            if (p[L] != M + i) return;
            if (i + 1 == N) {
                out.push_back({paths, weights[N]});
                return;
            }
            weights[i + 2] = weights[i + 1];
            paths[i + 1][0] = i + 1;
            step(i + 1, 0);
            return;
        }
        const double base = weights[i + 1];
        for (int d = 0; d <= 1; ++d) {
            const int y = p[x] + d;
            if (M + i - y < 0 || M + i - y > L - x - 1) continue;
            if (i > 0 && y <= paths[i - 1][x + 1]) continue;
            if (!model.in_hexagon(x + 1, y)) continue;
            p[x + 1] = y;
            weights[i + 1] = base * edge_weight(model, {x, p[x], d});
            step(i, x + 1);
        }
        weights[i + 1] = base;
    };
    paths[0][0] = 0;
    weights[1] = 1.0;
    step(0, 0);
    return out;
}

double partition_function(const std::vector<PathSystem>& systems) {
    double z = 0.0;
    for (const auto& s : systems) z += s.weight;
    return z;
}

double partition_function_lgv(const HexagonModel& model) {
    model.validate();
    const int L = model.L, M = model.M, N = model.N, H = N + M;
    Eigen::MatrixXd P(N, N);
    for (int i = 0; i < N; ++i) {
        std::vector<double> f(H + 1, 0.0);
        f[i] = 1.0;
        for (int x = 0; x < L; ++x) {
            std::vector<double> g(H + 1, 0.0);
            for (int y = 0; y < H; ++y) {
                if (f[y] == 0.0 || !model.in_hexagon(x, y)) continue;
                if (model.in_hexagon(x + 1, y)) g[y] += f[y] * edge_weight(model, {x, y, 0});
                if (model.in_hexagon(x + 1, y + 1)) g[y + 1] += f[y] * edge_weight(model, {x, y, 1});
            }
            f = std::move(g);
        }
        for (int j = 0; j < N; ++j) P(i, j) = f[M + j];
    }
    return P.determinant();
}

std::uint64_t macmahon(int a, int b, int c) {
    long double v = 1.0L;
    for (int i = 1; i <= a; ++i)
        for (int j = 1; j <= b; ++j)
            for (int k = 1; k <= c; ++k) v *= static_cast<long double>(i + j + k - 1) / (i + j + k - 2);
    return static_cast<std::uint64_t>(std::llround(v));
}

double probability_enumeration(const std::vector<PathSystem>& systems, const std::vector<Point>& points) {
    double hit = 0.0, total = 0.0;
    for (const auto& s : systems) {
        total += s.weight;
        bool all = true;
        for (const auto& [x, y] : points) all = all && x >= 0 && x < static_cast<int>(s.paths[0].size()) && s.passes(x, y);
        if (all) hit += s.weight;
    }
    return hit / total;
}

double probability_determinantal(const PointKernel& kernel, const HexagonModel& model,
                                 const std::vector<Point>& points) {
    const int k = static_cast<int>(points.size());
    if (k == 0) return 1.0;
    for (const auto& [x, y] : points)
        if (x < 1 || x > model.L - 1) throw InvalidArgument("determinantal probability needs 1 <= x <= L-1");
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = kernel(points[i].first, points[i].second, points[j].first, points[j].second);
    return m.determinant();
}

PointProbability point_probability(const HexagonModel& model, const DKKernel& kernel, const std::vector<Point>& points,
                                   double guard) {
    PointProbability out;
    bool interior = true;
    for (const auto& [x, y] : points) interior = interior && x >= 1 && x <= model.L - 1;
    if (interior) out.determinantal = probability_determinantal(std::cref(kernel), model, points);
    if (configuration_count(model) <= guard)
        out.enumeration = probability_enumeration(enumerate_path_systems(model, guard), points);
    return out;
}

double column_sum(const PointKernel& kernel, const HexagonModel& model, int x) {
    const auto [lo, hi] = model.column_range(x);
    double s = 0.0;
    for (int y = lo; y <= hi; ++y) s += kernel(x, y, x, y);
    return s;
}

PointKernel scalar_view(std::function<Mat(const KernelQuery&)> block, int r) {
    auto cache = std::make_shared<std::map<std::tuple<int, int, int, int>, Mat>>();
    return [block = std::move(block), r, cache](int x1, int y1, int x2, int y2) {
        const auto key = std::make_tuple(x1, floor_div(y1, r), x2, floor_div(y2, r));
        auto it = cache->find(key);
        if (it == cache->end()) it = cache->emplace(key, block({x1, std::get<1>(key), x2, std::get<3>(key)})).first;
        return it->second(floor_mod(y2, r), floor_mod(y1, r)).real();
    };
}

}  // namespace cdsurface
