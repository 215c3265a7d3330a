#include "lesys/cli.hpp"
#include "lesys/mc.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"lesys: Lane-Emden system bubbles, nonlinear Green functions and concentration rates"};
    std::string config;
    std::uint64_t seed = 0;
    int threads = lesys::default_threads();
    std::string out;
    app.add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides mc.seed)");
    auto* thr_opt = app.add_option("--threads", threads, "worker threads (default: LESYS_THREADS or 1)")->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out", out, "output directory (overrides out_dir)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    lesys::RunOverrides ov;
    if (*seed_opt) ov.seed = seed;
    if (*thr_opt) ov.threads = threads;
    if (*out_opt) ov.out_dir = out;
    return lesys::run_config_file(config, ov, std::cerr);
}
