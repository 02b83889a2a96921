#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdsurface/tiling.hpp"

namespace cdsurface::cli {

/// Bad flags or a config that violates docs/config.schema.json.
struct ConfigError : Error {
    using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string command;
    std::optional<WeightFamily> family;
    int N = 2;                           // matrix polynomial size
    std::optional<std::size_t> quad_n;   // CDSURFACE_QUAD_N or 256 when empty
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 1;
    std::string output;                  // empty writes to stdout
    std::string format;                  // csv or json; empty picks the command default

    // kernel
    std::string what = "cd";             // cd, frak or tiling
    int grid = 0;
    std::vector<cplx> at;                // a (w, z) pair

    // verify
    std::string suite = "all";
    bool expect_not_cd = false;

    // prob and tiling
    std::optional<std::array<int, 3>> hexagon;  // L, N, M
    std::vector<Point> points;
    bool column_sums = false;

    std::size_t nodes() const { return quad_n ? with_floor(*quad_n) : default_node_count(); }
    double tolerance(const std::string& name, double fallback) const;
};

/// {"family": name, "params": {...}}.
WeightFamily family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const WeightFamily& family);

/// Overlays a JSON config on top of cfg.
void apply_config_json(const nlohmann::json& j, RunConfig& cfg);
/// Rejects out-of-range values; throws ConfigError.
void check_config(const RunConfig& cfg);

/// Uniform hexagon from --hexagon, or the periodic model of the family.
HexagonModel model_from_config(const RunConfig& cfg);

struct CommandResult {
    std::string text;    // file or stdout contents
    int exit_code = kExitOk;
    std::string notice;  // printed on stderr
};

CommandResult cmd_kernel(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_prob(const RunConfig& cfg);

/// Parses argv, runs the command and writes its output once at the end.
int run(int argc, const char* const* argv);

/// "%.16e" formatting used by every table.
std::string format_double(double v);

}  // namespace cdsurface::cli
