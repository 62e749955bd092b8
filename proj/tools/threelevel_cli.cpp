// Command-line runner for the three-level Wei-Norman engine.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "threelevel/runner.hpp"

using namespace threelevel;

int main(int argc, char** argv) {
    CLI::App app{"Three-level time evolution by ordered exponential factorization"};
    app.require_subcommand(0, 1);

    bool list = false;
    app.add_flag("--list", list, "List the available presets");

    auto* run_cmd = app.add_subcommand("run", "Run a preset or a JSON config");
    std::string preset_name, config_path, format, out;
    double t_end = 0, dt_out = 0, tol = 0, t_start = 0;
    bool oracle = false, run_list = false;
    auto* preset_opt = run_cmd->add_option("--preset", preset_name, "Preset name");
    auto* config_opt = run_cmd->add_option("--config", config_path, "JSON run configuration");
    preset_opt->excludes(config_opt);
    auto* t_start_opt = run_cmd->add_option("--t-start", t_start, "Start time");
    auto* t_end_opt = run_cmd->add_option("--t-end", t_end, "End time");
    auto* dt_opt = run_cmd->add_option("--dt-out", dt_out, "Output grid step");
    auto* tol_opt = run_cmd->add_option("--tol", tol, "Integrator tolerance (abs and rel)");
    run_cmd->add_flag("--oracle", oracle, "Compare against direct integration");
    auto* format_opt = run_cmd->add_option("--format", format, "Output format")
                           ->check(CLI::IsMember({"csv", "json"}));
    auto* out_opt = run_cmd->add_option("--out", out, "Output path (default stdout)");
    run_cmd->add_flag("--list", run_list, "List the available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (list || run_list) {
        std::cout << list_presets();
        return 0;
    }
    if (!run_cmd->parsed()) {
        std::cerr << app.help();
        return 1;
    }

    RunConfig config;
    try {
        if (*config_opt) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config file '" << config_path << "'\n";
                return 1;
            }
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::parse_error& e) {
                std::cerr << "error: malformed config file: " << e.what() << '\n';
                return 1;
            }
            config = RunConfig::from_json(j);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid configuration: " << e.what() << '\n';
        return 1;
    }
    if (*preset_opt) {
        config.preset = preset_name;
        config.scenario.reset();
    }
    if (*t_start_opt) config.t_start = t_start;
    if (*t_end_opt) config.t_end = t_end;
    if (*dt_opt) config.dt_out = dt_out;
    if (*tol_opt) config.tol = tol;
    if (oracle) config.oracle = true;
    if (*format_opt) config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (*out_opt) config.out = out;

    return run(config, std::cerr);
}
