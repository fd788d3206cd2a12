#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "report.hpp"
#include "sargcert/keyrate.hpp"
#include "sargcert/protocol_sim.hpp"
#include "sargcert/qmath.hpp"

namespace sargcert::cli {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2 };

/// Bad arguments or a config file violating its schema (exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::optional<Format> format;
    std::string out_path;
};

struct GridSpec {
    double x_min = 0.0;
    double x_max = 10.0;
    double x_step = 0.25;

    std::vector<double> points() const;  // throws UsageError when malformed
};

SimConfig parse_sim_config(const nlohmann::json& j);
/// Accepts {"decoy": {...}}, {"simulation": "<path to simulate JSON>"} or a
/// simulate JSON report itself. Relative paths resolve against base_dir.
DecoyInputs parse_keyrate_config(const nlohmann::json& j, const std::string& base_dir);
DecoyInputs decoy_from_simulation(const nlohmann::json& report);
nlohmann::json load_json_file(const std::string& path);

Report build_verify(Protocol protocol, int nu);
Report build_thresholds(Protocol protocol);
Report build_frontier(Protocol protocol, int nu, const GridSpec& grid);
Report build_simulate(const SimConfig& config, unsigned threads = 0);
Report build_keyrate(const DecoyInputs& inputs, const nlohmann::ordered_json& source);
Report build_constants_check();

/// Writes the report per OutputOptions and maps its summary to an exit code.
int finish(Report& report, const OutputOptions& options, std::ostream& out);

int cmd_verify(Protocol protocol, int nu, const OutputOptions& o, std::ostream& out);
int cmd_thresholds(Protocol protocol, const OutputOptions& o, std::ostream& out);
int cmd_frontier(Protocol protocol, int nu, const GridSpec& grid, const OutputOptions& o, std::ostream& out);
int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, const OutputOptions& o,
                 std::ostream& out);
int cmd_keyrate(const std::string& config_path, const OutputOptions& o, std::ostream& out);
int cmd_constants_check(const OutputOptions& o, std::ostream& out);

}  // namespace sargcert::cli
