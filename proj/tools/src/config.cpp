#include <cstdio>
#include <set>

#include "cdsurface_tools/cli.hpp"

namespace cdsurface::cli {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded_json : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded_json(Ts...) -> overloaded_json<Ts...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

int get_int(const json& p, const char* key, int fallback) {
    if (!p.contains(key)) return fallback;
    require(p[key].is_number_integer(), std::string("config: '") + key + "' must be an integer");
    return p[key].get<int>();
}

double get_double(const json& p, const char* key, double fallback) {
    if (!p.contains(key)) return fallback;
    require(p[key].is_number(), std::string("config: '") + key + "' must be a number");
    return p[key].get<double>();
}

void check_keys(const json& p, const std::set<std::string>& allowed, const std::string& where) {
    require(p.is_object(), "config: " + where + " must be an object");
    for (const auto& [k, v] : p.items()) require(allowed.count(k) != 0, "config: unknown key '" + k + "' in " + where);
}

void read_matrix(const json& p, const char* key, double (&m)[2][2]) {
    const std::string name(key);
    if (p.contains(key)) {
        const auto& v = p[key];
        require(v.is_array() && v.size() == 2, "config: '" + name + "' must be a 2 x 2 array");
        for (int l = 0; l < 2; ++l) {
            require(v[l].is_array() && v[l].size() == 2, "config: '" + name + "' must be a 2 x 2 array");
            for (int j = 0; j < 2; ++j) {
                require(v[l][j].is_number(), "config: '" + name + "' entries must be numbers");
                m[l][j] = v[l][j].get<double>();
            }
        }
    }
    for (int l = 0; l < 2; ++l)
        for (int j = 0; j < 2; ++j) {
            const std::string k = name + std::to_string(l) + std::to_string(j);
            m[l][j] = get_double(p, k.c_str(), m[l][j]);
        }
}

cplx complex_from_json(const json& v) {
    if (v.is_string()) {
        double re = 0, im = 0;
        char tail = 0;
        require(std::sscanf(v.get<std::string>().c_str(), "%lf,%lf%c", &re, &im, &tail) == 2,
                "config: complex values are written re,im");
        return {re, im};
    }
    require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
            "config: complex values are [re, im] or \"re,im\"");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

double RunConfig::tolerance(const std::string& name, double fallback) const {
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

WeightFamily family_from_json(const json& j) {
    check_keys(j, {"family", "params"}, "family");
    require(j.contains("family") && j["family"].is_string(), "config: family.family must be a string");
    const std::string name = j["family"].get<std::string>();
    const json p = j.value("params", json::object());
    WeightFamily f;
    if (name == "cyclic") {
        check_keys(p, {"r", "L", "R"}, "cyclic params");
        CyclicUniform c;
        c.r = get_int(p, "r", c.r);
        c.L = get_int(p, "L", c.L);
        c.R = get_int(p, "R", c.R);
        f = c;
    } else if (name == "root-k") {
        check_keys(p, {"k", "L", "M"}, "root-k params");
        TwoByTwoRootK c;
        c.k = get_int(p, "k", c.k);
        c.L = get_int(p, "L", c.L);
        c.M = get_int(p, "M", c.M);
        f = c;
    } else if (name == "periodic-2x1") {
        check_keys(p, {"a0", "a1", "b0", "b1", "L", "M", "N"}, "periodic-2x1 params");
        Periodic2x1 c;
        c.a0 = get_double(p, "a0", c.a0);
        c.a1 = get_double(p, "a1", c.a1);
        c.b0 = get_double(p, "b0", c.b0);
        c.b1 = get_double(p, "b1", c.b1);
        c.L = get_int(p, "L", c.L);
        c.M = get_int(p, "M", c.M);
        c.N = get_int(p, "N", c.N);
        f = c;
    } else if (name == "periodic-2x2") {
        check_keys(p, {"a", "b", "a00", "a01", "a10", "a11", "b00", "b01", "b10", "b11", "L", "M", "N"},
                   "periodic-2x2 params");
        Periodic2x2 c;
        read_matrix(p, "a", c.a);
        read_matrix(p, "b", c.b);
        c.L = get_int(p, "L", c.L);
        c.M = get_int(p, "M", c.M);
        c.N = get_int(p, "N", c.N);
        f = c;
    } else if (name == "scalar-monomial") {
        check_keys(p, {"r", "N"}, "scalar-monomial params");
        ScalarMonomial c;
        c.r = get_int(p, "r", c.r);
        c.N = get_int(p, "N", c.N);
        f = c;
    } else {
        throw ConfigError("config: unknown family '" + name + "'");
    }
    try {
        validate(f);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return f;
}

json family_to_json(const WeightFamily& family) {
    return std::visit(
        overloaded_json{
            [](const CyclicUniform& f) { return json{{"family", "cyclic"}, {"params", {{"r", f.r}, {"L", f.L}, {"R", f.R}}}}; },
            [](const TwoByTwoRootK& f) {
                return json{{"family", "root-k"}, {"params", {{"k", f.k}, {"L", f.L}, {"M", f.M}}}};
            },
            [](const Periodic2x1& f) {
                return json{{"family", "periodic-2x1"},
                            {"params",
                             {{"a0", f.a0}, {"a1", f.a1}, {"b0", f.b0}, {"b1", f.b1}, {"L", f.L}, {"M", f.M}, {"N", f.N}}}};
            },
            [](const Periodic2x2& f) {
                return json{{"family", "periodic-2x2"},
                            {"params",
                             {{"a", {{f.a[0][0], f.a[0][1]}, {f.a[1][0], f.a[1][1]}}},
                              {"b", {{f.b[0][0], f.b[0][1]}, {f.b[1][0], f.b[1][1]}}},
                              {"L", f.L},
                              {"M", f.M},
                              {"N", f.N}}}};
            },
            [](const ScalarMonomial& f) { return json{{"family", "scalar-monomial"}, {"params", {{"r", f.r}, {"N", f.N}}}}; },
        },
        family);
}

void apply_config_json(const json& j, RunConfig& cfg) {
    check_keys(j,
               {"command", "family", "N", "quad_n", "tolerances", "seed", "output", "format", "what", "grid", "at",
                "suite", "expect_not_cd", "hexagon", "points", "column_sums"},
               "config");
    if (j.contains("command")) {
        require(j["command"].is_string(), "config: 'command' must be a string");
        cfg.command = j["command"].get<std::string>();
    }
    if (j.contains("family")) cfg.family = family_from_json(j["family"]);
    cfg.N = get_int(j, "N", cfg.N);
    if (j.contains("quad_n")) {
        require(j["quad_n"].is_number_unsigned(), "config: 'quad_n' must be a positive integer");
        cfg.quad_n = j["quad_n"].get<std::size_t>();
    }
    if (j.contains("tolerances")) {
        require(j["tolerances"].is_object(), "config: 'tolerances' must be an object");
        for (const auto& [k, v] : j["tolerances"].items()) {
            require(v.is_number(), "config: tolerance '" + k + "' must be a number");
            cfg.tolerances[k] = v.get<double>();
        }
    }
    if (j.contains("seed")) {
        require(j["seed"].is_number_unsigned(), "config: 'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    for (const char* key : {"output", "format", "what", "suite"}) {
        if (!j.contains(key)) continue;
        require(j[key].is_string(), std::string("config: '") + key + "' must be a string");
        const std::string v = j[key].get<std::string>();
        if (std::string(key) == "output") cfg.output = v;
        if (std::string(key) == "format") cfg.format = v;
        if (std::string(key) == "what") cfg.what = v;
        if (std::string(key) == "suite") cfg.suite = v;
    }
    cfg.grid = get_int(j, "grid", cfg.grid);
    if (j.contains("at")) {
        require(j["at"].is_array(), "config: 'at' must be an array");
        cfg.at.clear();
        for (const auto& v : j["at"]) cfg.at.push_back(complex_from_json(v));
    }
    for (const char* key : {"expect_not_cd", "column_sums"}) {
        if (!j.contains(key)) continue;
        require(j[key].is_boolean(), std::string("config: '") + key + "' must be a boolean");
        (std::string(key) == "expect_not_cd" ? cfg.expect_not_cd : cfg.column_sums) = j[key].get<bool>();
    }
    if (j.contains("hexagon")) {
        const auto& h = j["hexagon"];
        require(h.is_array() && h.size() == 3, "config: 'hexagon' must be [L, N, M]");
        std::array<int, 3> v{};
        for (int i = 0; i < 3; ++i) {
            require(h[i].is_number_integer(), "config: 'hexagon' entries must be integers");
            v[i] = h[i].get<int>();
        }
        cfg.hexagon = v;
    }
    if (j.contains("points")) {
        require(j["points"].is_array(), "config: 'points' must be an array");
        cfg.points.clear();
        for (const auto& p : j["points"]) {
            require(p.is_array() && p.size() == 2 && p[0].is_number_integer() && p[1].is_number_integer(),
                    "config: points are [x, y] integer pairs");
            cfg.points.emplace_back(p[0].get<int>(), p[1].get<int>());
        }
    }
}

void check_config(const RunConfig& cfg) {
    require(cfg.N >= 1, "config: N must be at least 1");
    require(!cfg.quad_n || *cfg.quad_n >= 1, "config: quad_n must be positive");
    for (const auto& [k, v] : cfg.tolerances) require(v > 0.0, "config: tolerance '" + k + "' must be positive");
    require(cfg.format.empty() || cfg.format == "csv" || cfg.format == "json", "config: format must be csv or json");
    require(cfg.what == "cd" || cfg.what == "frak" || cfg.what == "tiling", "config: what must be cd, frak or tiling");
    require(cfg.grid >= 0, "config: grid must be non-negative");
    require(cfg.at.empty() || cfg.at.size() == 2, "config: at takes exactly two points w z");
    static const std::set<std::string> suites{"quadrature", "spectral", "mops", "surface", "tiling-oracle", "all"};
    require(suites.count(cfg.suite) != 0, "config: unknown suite '" + cfg.suite + "'");
    if (cfg.hexagon) {
        const auto [L, N, M] = *cfg.hexagon;
        require(L >= 1 && N >= 1 && M >= 0 && M <= L, "config: hexagon needs L >= 1, N >= 1, 0 <= M <= L");
    }
}

HexagonModel model_from_config(const RunConfig& cfg) {
    if (cfg.family) {
        if (const auto* f = std::get_if<Periodic2x1>(&*cfg.family)) return HexagonModel::periodic_2x1(*f);
        if (const auto* f = std::get_if<Periodic2x2>(&*cfg.family)) return HexagonModel::periodic_2x2(*f);
    }
    require(cfg.hexagon.has_value(), "config: a tiling command needs --hexagon or a periodic family");
    const auto [L, N, M] = *cfg.hexagon;
    return HexagonModel::uniform(L, N, M);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace cdsurface::cli
