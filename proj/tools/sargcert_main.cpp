#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "sargcert/attack_forms.hpp"

using namespace sargcert;
using namespace sargcert::cli;

namespace {

const std::map<std::string, Protocol> kProtocols{{"four-state", Protocol::FourState},
                                                 {"six-state", Protocol::SixState}};
const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}, {"text", Format::Text}};

void add_output(CLI::App* sub, OutputOptions& o) {
    sub->add_option("--out", o.out_path, "Write the report to this file (.json or .csv)");
    sub->add_option("--format", o.format, "Report format")->transform(CLI::CheckedTransformer(kFormats));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Security bound verification and key-rate tools for SARG04-type QKD"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Protocol protocol = Protocol::FourState;
    int nu = 1;
    GridSpec grid;
    std::string config;
    std::optional<std::uint64_t> seed;
    OutputOptions out;

    auto protocol_opt = [&](CLI::App* sub) {
        sub->add_option("--protocol", protocol, "four-state or six-state")
            ->transform(CLI::CheckedTransformer(kProtocols))
            ->required();
    };
    auto nu_opt = [&](CLI::App* sub) {
        sub->add_option("--nu", nu, "Photon number")->check(CLI::Range(1, kMaxPhotons))->required();
    };

    auto* verify = app.add_subcommand("verify", "Check operator inequalities for one photon number");
    protocol_opt(verify);
    nu_opt(verify);
    add_output(verify, out);

    auto* thresholds = app.add_subcommand("thresholds", "Error-rate thresholds for key generation");
    protocol_opt(thresholds);
    add_output(thresholds, out);

    auto* frontier = app.add_subcommand("frontier", "Tabulate the bound frontier y*(x)");
    protocol_opt(frontier);
    nu_opt(frontier);
    frontier->add_option("--x-min", grid.x_min);
    frontier->add_option("--x-max", grid.x_max);
    frontier->add_option("--x-step", grid.x_step);
    add_output(frontier, out);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the protocol over a noisy channel");
    simulate->add_option("--config", config, "Simulation config (JSON)")->required();
    simulate->add_option("--seed", seed, "Override the config seed");
    add_output(simulate, out);

    auto* keyrate = app.add_subcommand("keyrate", "Decoy-state key rate");
    keyrate->add_option("--config", config, "Decoy inputs or simulation report (JSON)")->required();
    add_output(keyrate, out);

    auto* check = app.add_subcommand("constants-check", "Structural identities of the protocol constants");
    add_output(check, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(protocol, nu, out, std::cout);
        if (*thresholds) return cmd_thresholds(protocol, out, std::cout);
        if (*frontier) return cmd_frontier(protocol, nu, grid, out, std::cout);
        if (*simulate) return cmd_simulate(config, seed, out, std::cout);
        if (*keyrate) return cmd_keyrate(config, out, std::cout);
        return cmd_constants_check(out, std::cout);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}
