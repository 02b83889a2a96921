#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cdsurface_tools/cli.hpp"

namespace cdsurface::cli {

using nlohmann::json;

namespace {

std::vector<int> split_ints(const std::string& s, std::size_t count, const std::string& what) {
    std::vector<int> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size()) throw ConfigError(what + ": expected integers separated by commas");
        out.push_back(v);
    }
    if (out.size() != count) throw ConfigError(what + ": expected " + std::to_string(count) + " values");
    return out;
}

cplx parse_complex(const std::string& s) {
    double re = 0, im = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &re, &im, &tail) != 2)
        throw ConfigError("--at: points are written re,im");
    return {re, im};
}

json parse_json_text(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(where + ": malformed JSON (" + e.what() + ")");
    }
}

/// Flags shared by every subcommand.
struct Flags {
    std::string config, family, family_json, output, format, hexagon, what, suite;
    std::vector<std::string> params, at, points;
    int N = 2, r = 0, L = 0, R = 0, M = 0, k = 0, grid = 0;
    std::size_t quad_n = 0;
    std::uint64_t seed = 1;
    std::vector<std::string> tol;
    bool expect_not_cd = false, column_sums = false;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON run configuration");
    app->add_option("--family", f.family, "cyclic, root-k, periodic-2x1, periodic-2x2 or scalar-monomial");
    app->add_option("--family-json", f.family_json, "family as {\"family\": ..., \"params\": {...}}");
    app->add_option("--param", f.params, "family parameter key=value")->take_all();
    app->add_option("--r", f.r, "matrix size of the cyclic family");
    app->add_option("--L", f.L, "power L");
    app->add_option("--R", f.R, "shift R of the cyclic family");
    app->add_option("--M", f.M, "shift M of the root-k family");
    app->add_option("--k", f.k, "odd exponent k of the root-k family");
    app->add_option("--N", f.N, "matrix polynomial size");
    app->add_option("--quad-n", f.quad_n, "quadrature nodes per circle");
    app->add_option("--tol", f.tol, "tolerance override name=value")->take_all();
    app->add_option("--seed", f.seed, "probe seed");
    app->add_option("--output,-o", f.output, "output file (stdout when omitted)");
    app->add_option("--format", f.format, "csv or json");
    app->add_option("--hexagon", f.hexagon, "uniform hexagon L,N,M");
}

bool given(CLI::App* app, const std::string& name) {
    const CLI::Option* o = app->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
}

json family_flags_json(CLI::App* app, const Flags& f) {
    json p = json::object();
    auto set_int = [&](const char* flag, const char* key, int v) {
        if (given(app, flag)) p[key] = v;
    };
    set_int("--r", "r", f.r);
    set_int("--L", "L", f.L);
    set_int("--R", "R", f.R);
    set_int("--M", "M", f.M);
    set_int("--k", "k", f.k);
    for (const auto& kv : f.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--param: expected key=value");
        p[kv.substr(0, eq)] = parse_json_text(kv.substr(eq + 1), "--param " + kv.substr(0, eq));
    }
    if (f.family == "scalar-monomial" && !p.contains("N")) p["N"] = f.N;
    return json{{"family", f.family}, {"params", p}};
}

RunConfig build_config(CLI::App* app, const std::string& command, const Flags& f) {
    RunConfig cfg;
    cfg.command = command;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("--config: cannot read " + f.config);
        std::stringstream buf;
        buf << in.rdbuf();
        apply_config_json(parse_json_text(buf.str(), f.config), cfg);
    }
    if (given(app, "--N")) cfg.N = f.N;
    if (!f.family_json.empty()) cfg.family = family_from_json(parse_json_text(f.family_json, "--family-json"));
    if (!f.family.empty()) cfg.family = family_from_json(family_flags_json(app, f));
    if (given(app, "--quad-n")) cfg.quad_n = f.quad_n;
    for (const auto& kv : f.tol) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--tol: expected name=value");
        try {
            cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--tol: value must be a number");
        }
    }
    if (given(app, "--seed")) cfg.seed = f.seed;
    if (!f.output.empty()) cfg.output = f.output;
    if (!f.format.empty()) cfg.format = f.format;
    if (!f.hexagon.empty()) {
        const auto v = split_ints(f.hexagon, 3, "--hexagon");
        cfg.hexagon = std::array<int, 3>{v[0], v[1], v[2]};
    }
    if (!f.what.empty()) cfg.what = f.what;
    if (given(app, "--grid")) cfg.grid = f.grid;
    if (!f.at.empty()) {
        cfg.at.clear();
        for (const auto& s : f.at) cfg.at.push_back(parse_complex(s));
    }
    if (!f.suite.empty()) cfg.suite = f.suite;
    if (f.expect_not_cd) cfg.expect_not_cd = true;
    for (const auto& s : f.points) {
        const auto v = split_ints(s, 2, "--point");
        cfg.points.emplace_back(v[0], v[1]);
    }
    if (f.column_sums) cfg.column_sums = true;
    check_config(cfg);
    return cfg;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Christoffel-Darboux kernels on spectral surfaces and tiling correlation kernels"};
    app.require_subcommand(1);
    Flags f;
    auto* kernel = app.add_subcommand("kernel", "tabulate a CD kernel, the surface kernel or a tiling kernel");
    auto* verify = app.add_subcommand("verify", "run verification checks and report residuals");
    auto* prob = app.add_subcommand("prob", "point probabilities of a tiling model");
    for (auto* s : {kernel, verify, prob}) add_common(s, f);
    kernel->add_option("--what", f.what, "cd, frak or tiling");
    kernel->add_option("--grid", f.grid, "G; tabulates G x G probe pairs");
    kernel->add_option("--at", f.at, "one pair: w z, each written re,im")->expected(2);
    verify->add_option("--suite", f.suite, "quadrature, spectral, mops, surface, tiling-oracle or all");
    verify->add_flag("--expect-not-cd", f.expect_not_cd, "assert that the surface kernel is not a CD kernel");
    prob->add_option("--point", f.points, "x,y")->take_all();
    prob->add_flag("--column-sums", f.column_sums, "report sum_y K(x, y, x, y) for every interior column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        const RunConfig cfg = build_config(sub, sub->get_name(), f);
        CommandResult res;
        if (cfg.command == "kernel")
            res = cmd_kernel(cfg);
        else if (cfg.command == "verify")
            res = cmd_verify(cfg);
        else
            res = cmd_prob(cfg);
        if (!res.notice.empty()) std::cerr << res.notice;
        if (cfg.output.empty()) {
            std::cout << res.text;
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            out << res.text;
            if (!out) {
                std::cerr << "error: cannot write " << cfg.output << "\n";
                return kExitCheckFailed;
            }
        }
        return res.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnsupportedFamily& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SingularSystem& e) {
        std::cerr << "error: orthogonal polynomials do not exist: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace cdsurface::cli
