// starkbat — Stark-tilted Hubbard quantum battery simulator CLI.
//
// Subcommands:
//   simulate <config.json>   time-series run, CSV to stdout or --out
//   sweep <config.json>      parameter sweep, CSV to stdout or --out
//   oracle <case> [flags]    numeric vs closed-form comparison
//   preset <name>            run a figure preset (one CSV per curve),
//                            or print its configs with --emit-config
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 oracle failure.

#include <clocale>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "starkbat/presets.hpp"
#include "starkbat/runner.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;
constexpr int kExitOracleFailure = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw starkbat::config_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"Stark-tilted Hubbard quantum battery simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    auto* simulate = app.add_subcommand("simulate", "run one configuration, emit a CSV series");
    simulate->add_option("config", config_path, "JSON run configuration")->required();
    simulate->add_option("--out", out_path, "output CSV path (default: stdout)");

    std::string sweep_config_path, sweep_out_path;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep, emit a CSV grid");
    sweep->add_option("config", sweep_config_path, "JSON sweep configuration")->required();
    sweep->add_option("--out", sweep_out_path, "output CSV path (default: stdout)");

    std::string oracle_case;
    starkbat::OracleOptions oracle_opts;
    auto* oracle = app.add_subcommand("oracle", "check numerics against a closed-form case");
    oracle->add_option("case", oracle_case,
                       "prop1 | prop2_boson | prop2_fermion | prop2_stark_battery | prop3 | eq8")
        ->required();
    oracle->add_option("--rc", oracle_opts.r_c, "charging tilt strength");
    oracle->add_option("--Uc", oracle_opts.U_c, "charging onsite strength");
    oracle->add_option("--Jc", oracle_opts.J_c, "charging hopping strength");
    oracle->add_option("--J", oracle_opts.J, "battery hopping strength");
    oracle->add_option("--N", oracle_opts.sites, "lattice size");
    oracle->add_option("--n", oracle_opts.n, "boson number (fermions split ceil/floor)");
    oracle->add_option("--nup", oracle_opts.n_up, "explicit up-spin count");
    oracle->add_option("--ndown", oracle_opts.n_down, "explicit down-spin count");
    oracle->add_option("--t-max", oracle_opts.t_max, "comparison horizon");
    oracle->add_option("--points", oracle_opts.points, "comparison sample count");

    std::string preset_name, preset_outdir = ".";
    bool emit_config = false;
    auto* preset = app.add_subcommand("preset", "figure-class experiment presets");
    preset->add_option("name", preset_name, "fig2 .. fig9")->required();
    preset->add_flag("--emit-config", emit_config, "print the preset configs instead of running");
    preset->add_option("--outdir", preset_outdir, "directory for the per-curve CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        if (*simulate) {
            const auto j = starkbat::cfg::parse_text(read_file(config_path));
            const starkbat::RunConfig cfg = starkbat::cfg::parse_run_config(j);
            write_output(starkbat::run_csv(cfg), out_path);
            return 0;
        }
        if (*sweep) {
            const auto j = starkbat::cfg::parse_text(read_file(sweep_config_path));
            const starkbat::SweepConfig cfg = starkbat::cfg::parse_sweep_config(j);
            write_output(starkbat::sweep_csv(cfg), sweep_out_path);
            return 0;
        }
        if (*oracle) {
            const starkbat::OracleCase c = starkbat::oracle_case_from_string(oracle_case);
            const starkbat::OracleReport report = starkbat::run_oracle(c, oracle_opts);
            std::cout << starkbat::oracle_report_text(report);
            return report.pass ? 0 : kExitOracleFailure;
        }
        if (*preset) {
            const starkbat::PresetBundle bundle = starkbat::figure_preset(preset_name);
            if (emit_config) {
                std::cout << starkbat::serialize(bundle).dump(2) << "\n";
                return 0;
            }
            std::filesystem::create_directories(preset_outdir);
            for (const auto& entry : bundle.entries) {
                const std::string path =
                    (std::filesystem::path(preset_outdir) /
                     (bundle.name + "_" + entry.name + ".csv")).string();
                if (std::holds_alternative<starkbat::RunConfig>(entry.config)) {
                    write_output(starkbat::run_csv(std::get<starkbat::RunConfig>(entry.config)),
                                 path);
                } else {
                    write_output(
                        starkbat::sweep_csv(std::get<starkbat::SweepConfig>(entry.config)), path);
                }
                std::cout << "wrote " << path << "\n";
            }
            return 0;
        }
    } catch (const starkbat::config_error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalError;
    }
    return 0;
}
