#include <sstream>

#include "cdsurface_tools/cli.hpp"

namespace cdsurface::cli {

using nlohmann::json;

namespace {

/// Column names plus rows of already formatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::vector<double>> values;  // same cells as numbers, for JSON

    void add(std::vector<double> row) {
        std::vector<std::string> cells;
        for (double v : row) cells.push_back(format_double(v));
        rows.push_back(std::move(cells));
        values.push_back(std::move(row));
    }

    std::string render(const std::string& format) const {
        if (format == "json") {
            json j{{"columns", columns}, {"rows", values}};
            return j.dump(2) + "\n";
        }
        std::ostringstream out;
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
        out << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
            out << "\n";
        }
        return out.str();
    }
};

const WeightFamily& need_family(const RunConfig& cfg) {
    if (!cfg.family) throw ConfigError("config: this command needs --family");
    return *cfg.family;
}

/// (w, z) probe pairs: --at, or a G x G grid with w on |w| = 0.7 and z on |z| = 1.3.
std::vector<std::pair<cplx, cplx>> probe_pairs(const RunConfig& cfg) {
    if (!cfg.at.empty()) return {{cfg.at[0], cfg.at[1]}};
    const int g = cfg.grid > 0 ? cfg.grid : 5;
    std::vector<std::pair<cplx, cplx>> out;
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            out.emplace_back(std::polar(0.7, 2.0 * pi * (a + 0.5) / g), std::polar(1.3, 2.0 * pi * (b + 0.25) / g));
    return out;
}

Table kernel_cd(const RunConfig& cfg) {
    const auto& f = need_family(cfg);
    const MOPSystem sys = build_mops(as_matrix_weight(f), unit_circle_quadrature(cfg.nodes()), cfg.N);
    const int r = sys.r;
    Table t;
    t.columns = {"w_re", "w_im", "z_re", "z_im"};
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (const char* part : {"_re", "_im"}) t.columns.push_back("k" + std::to_string(i) + std::to_string(j) + part);
    for (const auto& [w, z] : probe_pairs(cfg)) {
        const Mat k = cd_kernel_formula(sys, w, z);
        std::vector<double> row{w.real(), w.imag(), z.real(), z.imag()};
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                row.push_back(k(i, j).real());
                row.push_back(k(i, j).imag());
            }
        t.add(std::move(row));
    }
    return t;
}

Table kernel_frak(const RunConfig& cfg) {
    const auto& f = need_family(cfg);
    const Genus0Chart chart = build_chart(f, cfg.N, ChartOptions{cfg.nodes()});
    const MOPSystem sys = build_mops(as_matrix_weight(f), unit_circle_quadrature(cfg.nodes()), cfg.N);
    Table t;
    t.columns = {"omega_re", "omega_im", "zeta_re", "zeta_im", "frak_re", "frak_im"};
    for (const auto& [w, z] : probe_pairs(cfg)) {
        const cplx v = frak_R(chart, sys, w, z);
        t.add({w.real(), w.imag(), z.real(), z.imag(), v.real(), v.imag()});
    }
    return t;
}

Table kernel_tiling(const RunConfig& cfg) {
    const HexagonModel model = model_from_config(cfg);
    const DKKernel k(model, cfg.nodes());
    std::vector<Point> pts;
    for (int x = 1; x < model.L; ++x) {
        const auto [lo, hi] = model.column_range(x);
        for (int y = lo; y <= hi; ++y) pts.emplace_back(x, y);
    }
    Table t;
    t.columns = {"x1", "y1", "x2", "y2", "k_re", "k_im"};
    for (const auto& [x1, y1] : pts)
        for (const auto& [x2, y2] : pts) {
            const cplx v = k.entry(x1, y1, x2, y2);
            t.add({double(x1), double(y1), double(x2), double(y2), v.real(), v.imag()});
        }
    return t;
}

}  // namespace

CommandResult cmd_kernel(const RunConfig& cfg) {
    Table t;
    if (cfg.what == "cd")
        t = kernel_cd(cfg);
    else if (cfg.what == "frak")
        t = kernel_frak(cfg);
    else
        t = kernel_tiling(cfg);
    return {t.render(cfg.format.empty() ? "csv" : cfg.format), kExitOk, {}};
}

CommandResult cmd_prob(const RunConfig& cfg) {
    const HexagonModel model = model_from_config(cfg);
    model.validate();
    CommandResult res;
    json out{{"hexagon", {model.L, model.N, model.M}}};
    json pts = json::array();
    for (const auto& [x, y] : cfg.points) pts.push_back({x, y});
    out["points"] = pts;

    bool interior = true;
    for (const auto& [x, y] : cfg.points) interior = interior && x >= 1 && x <= model.L - 1;
    const bool need_kernel = (interior && !cfg.points.empty()) || cfg.column_sums;
    std::optional<DKKernel> kernel;
    if (need_kernel) kernel.emplace(model, cfg.nodes());

    std::vector<std::string> notices;
    if (cfg.points.empty())
        out["determinantal"] = 1.0;
    else if (interior)
        out["determinantal"] = probability_determinantal(std::cref(*kernel), model, cfg.points);
    else {
        out["determinantal"] = nullptr;
        notices.push_back("determinantal route needs 1 <= x <= L-1; reporting enumeration only");
    }
    if (configuration_count(model) <= kEnumerationGuard) {
        out["enumeration"] = probability_enumeration(enumerate_path_systems(model), cfg.points);
    } else {
        out["enumeration"] = nullptr;
        notices.push_back("enumeration guard exceeded; reporting the determinantal value only");
    }
    if (cfg.column_sums) {
        json sums = json::array();
        for (int x = 1; x < model.L; ++x) sums.push_back({{"x", x}, {"sum", column_sum(std::cref(*kernel), model, x)}});
        out["column_sums"] = sums;
    }
    std::string notice;
    for (const auto& n : notices) notice += n + "\n";
    out["notice"] = notices;
    res.notice = notice;

    if (cfg.format == "csv") {
        std::ostringstream s;
        s << "quantity,value\n";
        auto cell = [](const json& v) { return v.is_null() ? std::string("nan") : format_double(v.get<double>()); };
        s << "determinantal," << cell(out["determinantal"]) << "\n";
        s << "enumeration," << cell(out["enumeration"]) << "\n";
        if (cfg.column_sums)
            for (const auto& e : out["column_sums"])
                s << "column_sum_" << e["x"].get<int>() << "," << format_double(e["sum"].get<double>()) << "\n";
        res.text = s.str();
    } else {
        res.text = out.dump(2) + "\n";
    }
    return res;
}

}  // namespace cdsurface::cli
