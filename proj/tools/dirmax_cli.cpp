// Command-line front end: dirmax <command> [--config PATH] [--seed INT] [--out DIR] [--grid INT] [--threads INT]

#include "dirmax/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInvocation = 2;

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional maximal operator experiments"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    int grid = 0;
    int threads = -1;
    bool dump_config = false;
    app.add_option("--config", config_path, "Configuration file (sectioned key = value)")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Base random seed");
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");
    auto* grid_opt = app.add_option("--grid", grid, "Grid size n for norm experiments")->check(CLI::PositiveNumber);
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    app.add_flag("--dump-config", dump_config, "Print the effective configuration and exit");

    std::vector<CLI::App*> subs;
    for (const std::string& name : dirmax::command_names()) subs.push_back(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInvocation;
    }

    dirmax::ExperimentConfig config;
    try {
        if (!config_path.empty()) config = dirmax::load_config(config_path);
        if (*seed_opt) config.seed = seed;
        if (*out_opt) config.out = out_dir;
        if (*grid_opt) config.grid = grid;
        if (*threads_opt) config.threads = threads;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitBadInvocation;
    }

    if (dump_config) {
        std::cout << dirmax::config_to_text(config);
        return 0;
    }
    std::string command;
    for (CLI::App* s : subs)
        if (s->parsed()) command = s->get_name();
    if (command.empty()) {
        std::cerr << app.help();
        return kExitBadInvocation;
    }

#ifdef _OPENMP
    omp_set_num_threads(config.threads > 0 ? config.threads : omp_get_num_procs());
#endif

    try {
        const dirmax::CommandOutput result = dirmax::run_command(command, config);
        const std::filesystem::path dir(config.out);
        std::filesystem::create_directories(dir);
        write_file(dir / (command + ".csv"), result.csv);
        if (!result.timing.empty()) write_file(dir / (command + ".timing.csv"), result.timing);
        std::cout << result.csv;
        return result.ok ? 0 : kExitCheckFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInvocation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
