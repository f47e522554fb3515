// visclab <command> --config PATH [--seed N] [--out DIR]

#include "visclab/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Monotone schemes and property checks for Neumann-type HJB problems"};
    std::string command, config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    app.add_option("command", command, "solve | vv-rate | cont-dep | lemma-check | holder | probe")->required();
    app.add_option("--config", config, "JSON configuration")->required();
    app.add_option("--seed", seed, "override the configured seed");
    app.add_option("--out", out, "override the output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : visclab::kConfigError;
    }
    return visclab::dispatch(command, config, seed, out, std::cout, std::cerr);
}
