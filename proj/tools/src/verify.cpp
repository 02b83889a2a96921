#include <random>

#include "cdsurface_tools/cli.hpp"

namespace cdsurface::cli {

using nlohmann::json;

namespace {

struct CheckRow {
    std::string check;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// pass means residual < tolerance, or residual > tolerance for a witness check.
CheckRow row(std::string name, double residual, double tol, bool above = false) {
    const bool ok = std::isfinite(residual) && (above ? residual > tol : residual < tol);
    return {std::move(name), residual, tol, ok};
}

class Probe {
public:
    explicit Probe(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    cplx coeff() { return {uniform(-1, 1), uniform(-1, 1)}; }
    /// A point off the unit circle: |z| in [0.3, 0.8] or [1.25, 2].
    cplx off_circle() {
        const double rad = pick(2) ? uniform(0.3, 0.8) : uniform(1.25, 2.0);
        return std::polar(rad, uniform(0, 2 * pi));
    }
    MatrixPolynomial poly(int rows, int cols, int degree) {
        std::vector<Mat> c(degree + 1, Mat(rows, cols));
        for (auto& m : c)
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) m(i, j) = coeff();
        return MatrixPolynomial(std::move(c));
    }

private:
    std::mt19937_64 rng_;
};

std::vector<WeightFamily> default_families() {
    Periodic2x2 a, b;
    for (int l = 0; l < 2; ++l)
        for (int j = 0; j < 2; ++j) a.b[l][j] = b.b[l][j] = (l == 0 && j == 1) ? 2.0 : 1.0;
    b.a[0][1] = 2.0;
    return {CyclicUniform{2, 2, 2}, CyclicUniform{3, 1, 1}, TwoByTwoRootK{1, 1, 1}, TwoByTwoRootK{3, 1, 2},
            Periodic2x1{1, 2, 1, 2, 2, 2, 2}, a, b};
}

void suite_quadrature(const RunConfig& cfg, std::vector<CheckRow>& out) {
    const double tol = cfg.tolerance("quadrature", 1e-13);
    for (std::size_t n : {std::size_t{8}, std::size_t{64}}) {
        const ContourQuadrature q = unit_circle_quadrature(n);
        double worst = 0.0;
        for (int k = -6; k <= 6; ++k) {
            const cplx v = q.integrate([k](cplx z) { return ipow(z, k); });
            const int m = (((k + 1) % static_cast<int>(n)) + static_cast<int>(n)) % static_cast<int>(n);
            const cplx exact = m == 0 ? two_pi_i : cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(v - exact));
        }
        out.push_back(row("quadrature.monomials.n" + std::to_string(n), worst, tol));
    }
}

void suite_spectral(const RunConfig& cfg, std::vector<CheckRow>& out) {
    const double tol = cfg.tolerance("spectral", 1e-12);
    Probe probe(cfg.seed);
    const auto families = cfg.family ? std::vector<WeightFamily>{*cfg.family} : default_families();
    for (const auto& f : families) {
        const SpectralData s(f);
        double worst = 0.0;
        int taken = 0;
        while (taken < 100) {
            const cplx z = std::polar(probe.uniform(0.2, 3.0), probe.uniform(0, 2 * pi));
            const SpectralCheck c = check_spectral(s, f, z);
            if (c.near_cut) continue;
            worst = std::max(worst, c.residual);
            ++taken;
        }
        out.push_back(row("spectral." + family_name(f), worst, tol));
    }
}

void suite_mops(const RunConfig& cfg, std::vector<CheckRow>& out) {
    if (!cfg.family) throw ConfigError("config: the mops suite needs --family");
    const MatrixWeight w = as_matrix_weight(*cfg.family);
    const ContourQuadrature quad = unit_circle_quadrature(cfg.nodes());
    const MOPSystem sys = build_mops(w, quad, cfg.N);
    const int r = sys.r;
    Probe probe(cfg.seed);

    std::vector<Mat> wq(quad.size());
    for (std::size_t j = 0; j < quad.size(); ++j) wq[j] = w.eval(quad.nodes[j]) * quad.weights[j];
    double left = 0.0, right = 0.0;
    for (int t = 0; t < 20; ++t) {
        const MatrixPolynomial p = probe.poly(r, r, cfg.N - 1);
        const cplx z = probe.off_circle();
        Mat a = Mat::Zero(r, r), b = Mat::Zero(r, r);
        for (std::size_t j = 0; j < quad.size(); ++j) {
            const cplx s = quad.nodes[j];
            a += p(s) * wq[j] * cd_kernel_formula(sys, s, z);
            b += cd_kernel_formula(sys, z, s) * wq[j] * p(s);
        }
        left = std::max(left, (a - p(z)).cwiseAbs().maxCoeff());
        right = std::max(right, (b - p(z)).cwiseAbs().maxCoeff());
    }
    out.push_back(row("mops.reproducing_left", left, cfg.tolerance("reproducing", 1e-8)));
    out.push_back(row("mops.reproducing_right", right, cfg.tolerance("reproducing", 1e-8)));

    double sum_formula = 0.0, formula_y = 0.0;
    for (int t = 0; t < 50; ++t) {
        const cplx a = probe.off_circle(), b = probe.off_circle();
        const Mat f = cd_kernel_formula(sys, a, b);
        const Mat s = sys.complete ? cd_kernel_sum(sys, a, b) : cd_kernel_moment(sys, a, b);
        sum_formula = std::max(sum_formula, (s - f).cwiseAbs().maxCoeff());
        formula_y = std::max(formula_y, (f - kernel_from_Y(sys, w, quad, a, b)).cwiseAbs().maxCoeff());
    }
    out.push_back(row(sys.complete ? "mops.sum_vs_formula" : "mops.moment_vs_formula", sum_formula,
                      cfg.tolerance("cd_formula", 1e-10)));
    out.push_back(row("mops.formula_vs_Y", formula_y, cfg.tolerance("cd_Y", 1e-7)));

    double det = 0.0, jump = 0.0;
    for (int t = 0; t < 20; ++t) det = std::max(det, std::abs(assemble_Y(sys, w, quad, probe.off_circle()).value.determinant() - 1.0));
    const double eps = 1e-10;
    for (int t = 0; t < 10; ++t) {
        const cplx z0 = std::polar(1.0, probe.uniform(0, 2 * pi));
        const Mat plus = assemble_Y(sys, w, quad, z0 * (1.0 - eps)).value;
        const Mat minus = assemble_Y(sys, w, quad, z0 * (1.0 + eps)).value;
        jump = std::max(jump, (plus - minus * jump_matrix(w, z0)).cwiseAbs().maxCoeff());
    }
    out.push_back(row("mops.detY", det, cfg.tolerance("detY", 1e-8)));
    out.push_back(row("mops.jump", jump, cfg.tolerance("jump", 1e-6)));
}

void suite_surface(const RunConfig& cfg, std::vector<CheckRow>& out) {
    if (!cfg.family) throw ConfigError("config: the surface suite needs --family");
    const WeightFamily& f = *cfg.family;
    const Genus0Chart chart = build_chart(f, cfg.N, ChartOptions{cfg.nodes()});
    const ContourQuadrature quad = unit_circle_quadrature(cfg.nodes());
    const MOPSystem sys = build_mops(as_matrix_weight(f), quad, cfg.N);
    const SpectralData spectral(f);
    const int r = chart.r;
    const double tol = cfg.tolerance("surface", 1e-8);
    Probe probe(cfg.seed);
    const ScalarKernel frak = [&](cplx a, cplx b) { return frak_R(chart, sys, a, b); };

    // sheet sums over the lifted unit circle
    double prim = 0.0, dual = 0.0;
    for (int t = 0; t < 20; ++t) {
        cplx z = probe.off_circle();
        while (spectral.distance_to_cut(z) < 1e-3) z = probe.off_circle();
        prim = std::max(prim, check_reproducing_surface(spectral, sys, quad, probe.poly(1, r, cfg.N - 1), probe.pick(r), z));
        dual = std::max(dual, check_reproducing_surface_dual(spectral, sys, quad, probe.poly(r, 1, cfg.N - 1), probe.pick(r), z));
    }
    out.push_back(row("surface.sheet_sum", prim, tol));
    out.push_back(row("surface.sheet_sum_dual", dual, tol));

    // plane form on V and V*
    const auto rows = chart.row_basis();
    const auto cols = chart.column_basis();
    double v = 0.0, vs = 0.0;
    for (int t = 0; t < 10; ++t) {
        std::vector<cplx> c(rows.size()), d(cols.size());
        for (auto& x : c) x = probe.coeff();
        for (auto& x : d) x = probe.coeff();
        const auto p = [&](cplx s) {
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < rows.size(); ++i) acc += c[i] * chart.v_element(rows[i], s);
            return acc;
        };
        const auto q = [&](cplx s) {
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < cols.size(); ++i) acc += d[i] * chart.vstar_element(cols[i], s);
            return acc;
        };
        const cplx zeta = chart.gamma_C.centers[0] +
                         std::polar(chart.gamma_C.radii[0] * probe.uniform(0.2, 0.9), probe.uniform(0, 2 * pi));
        v = std::max(v, check_reproducing_plane(chart, frak, p, zeta));
        vs = std::max(vs, check_reproducing_plane_dual(chart, frak, q, zeta));
    }
    out.push_back(row("surface.plane_V", v, tol));
    out.push_back(row("surface.plane_Vstar", vs, tol));

    if (cfg.expect_not_cd) {
        out.push_back(row("surface.V_is_full", chart.V_is_full ? 1.0 : 0.0, 0.5));
        const cplx zeta = chart.gamma_C.centers[0] + std::polar(0.5 * chart.gamma_C.radii[0], 0.7);
        out.push_back(row("surface.not_cd_witness", check_reproducing_plane(chart, frak, [](cplx s) { return s; }, zeta),
                          cfg.tolerance("not_cd", 1e-2), true));
    } else if (chart.V_is_full) {
        const ScalarOPSystem ops =
            solve_scalar_ops([&](cplx s) { return chart.scalar_weight(s); }, chart.gamma_C, r * cfg.N);
        double worst = 0.0;
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b) {
                const cplx om = chart.gamma_C.centers[0] + std::polar(0.6 * chart.gamma_C.radii[0], 2 * pi * (a + 0.3) / 10);
                const cplx ze = chart.gamma_C.centers[0] + std::polar(0.8 * chart.gamma_C.radii[0], 2 * pi * (b + 0.7) / 10);
                worst = std::max(worst, std::abs(frak(om, ze) - scalar_cd_kernel(ops, om, ze)));
            }
        out.push_back(row("surface.cd_equivalence", worst, cfg.tolerance("genus0", 1e-7)));
    }
}

void suite_tiling(const RunConfig& cfg, std::vector<CheckRow>& out) {
    const HexagonModel model = model_from_config(cfg);
    const double tol = cfg.tolerance("tiling", 1e-8);
    const auto systems = enumerate_path_systems(model);
    const bool uniform = !cfg.family || !(std::holds_alternative<Periodic2x1>(*cfg.family) ||
                                          std::holds_alternative<Periodic2x2>(*cfg.family));
    if (uniform) {
        const double mac = static_cast<double>(macmahon(model.N, model.M, model.L - model.M));
        out.push_back(row("tiling.count_vs_macmahon", std::abs(double(systems.size()) - mac), 0.5));
    }
    const double z = partition_function(systems);
    out.push_back(row("tiling.partition_vs_lgv", std::abs(z - partition_function_lgv(model)) / z, tol));

    const DKKernel k(model, cfg.nodes());
    std::vector<Point> pts;
    for (int x = 1; x < model.L; ++x) {
        const auto [lo, hi] = model.column_range(x);
        for (int y = lo; y <= hi; ++y) pts.emplace_back(x, y);
    }
    double single = 0.0, pairs = 0.0, sums = 0.0;
    for (const auto& p : pts)
        single = std::max(single, std::abs(probability_determinantal(std::cref(k), model, {p}) -
                                           probability_enumeration(systems, {p})));
    Probe probe(cfg.seed);
    for (int t = 0; t < 10 && pts.size() > 1; ++t) {
        const Point a = pts[probe.pick(static_cast<int>(pts.size()))];
        Point b = a;
        while (b == a) b = pts[probe.pick(static_cast<int>(pts.size()))];
        pairs = std::max(pairs, std::abs(probability_determinantal(std::cref(k), model, {a, b}) -
                                         probability_enumeration(systems, {a, b})));
    }
    for (int x = 1; x < model.L; ++x) sums = std::max(sums, std::abs(column_sum(std::cref(k), model, x) - model.N));
    out.push_back(row("tiling.single_points", single, tol));
    if (pts.size() > 1) out.push_back(row("tiling.pairs", pairs, tol));
    out.push_back(row("tiling.column_sums", sums, cfg.tolerance("column_sum", 1e-7)));
}

}  // namespace

CommandResult cmd_verify(const RunConfig& cfg) {
    std::vector<CheckRow> rows;
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "quadrature") suite_quadrature(cfg, rows);
    if (all || cfg.suite == "spectral") suite_spectral(cfg, rows);
    if (cfg.suite == "mops" || (all && cfg.family && !std::holds_alternative<ScalarMonomial>(*cfg.family)))
        suite_mops(cfg, rows);
    if (cfg.suite == "surface" || (all && cfg.family && !std::holds_alternative<ScalarMonomial>(*cfg.family)))
        suite_surface(cfg, rows);
    const bool has_model = cfg.hexagon || (cfg.family && (std::holds_alternative<Periodic2x1>(*cfg.family) ||
                                                          std::holds_alternative<Periodic2x2>(*cfg.family)));
    if (cfg.suite == "tiling-oracle" || (all && has_model)) suite_tiling(cfg, rows);

    CommandResult res;
    bool ok = true;
    if (cfg.format == "csv") {
        std::string s = "check,residual,tolerance,pass\n";
        for (const auto& r : rows)
            s += r.check + "," + format_double(r.residual) + "," + format_double(r.tolerance) + "," +
                 (r.pass ? "true" : "false") + "\n";
        res.text = s;
    } else {
        json j = json::array();
        for (const auto& r : rows)
            j.push_back({{"check", r.check},
                         {"residual", std::isfinite(r.residual) ? json(r.residual) : json(nullptr)},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
        res.text = j.dump(2) + "\n";
    }
    for (const auto& r : rows) ok = ok && r.pass;
    res.exit_code = ok ? kExitOk : kExitCheckFailed;
    return res;
}

}  // namespace cdsurface::cli
