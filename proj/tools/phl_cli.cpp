// phl — run the nanomachine simulator from a key=value config file.

#include "phl/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"phl — Lindblad simulator for a heat-driven two-phonon nanomachine"};

    std::string config_path;
    std::string mode_override, out_override, format_override;
    int workers_override = 0;

    app.add_option("--config", config_path, "path to a key=value config file")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--mode", mode_override, "override mode: dynamics|steady|sweep");
    app.add_option("--out", out_override, "override output path ('-' = stdout)");
    app.add_option("--format", format_override, "override format: csv|json-lines");
    app.add_option("--workers", workers_override, "override sweep worker count");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot read config file '" << config_path << "'\n";
        return phl::cli::kExitIo;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    phl::cli::RunConfig cfg;
    try {
        std::string text = buffer.str();
        if (!mode_override.empty()) text += "\nmode = " + mode_override + "\n";
        if (!format_override.empty()) text += "\nformat = " + format_override + "\n";
        cfg = phl::cli::parse_config(text);
        if (!out_override.empty()) cfg.out = out_override;
        if (workers_override > 0) cfg.workers = workers_override;
    } catch (const phl::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return phl::cli::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return phl::cli::kExitConfig;
    }

    return phl::cli::run(cfg);
}
