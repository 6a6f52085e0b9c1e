#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pend3d/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"3D pendulum simulation and analysis toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;

    const char* tasks[] = {"simulate",  "equilibria",  "linearize",
                           "poincare",  "reconstruct", "phase"};
    for (const char* task : tasks) {
        CLI::App* sub = app.add_subcommand(task);
        sub->add_option("--config", config_path, "scenario config file")
            ->required();
        sub->add_option("--out-dir", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for random-state generators")
            ->each([&](const std::string&) { seed_given = true; });
    }

    CLI11_PARSE(app, argc, argv);
    const std::string task = app.get_subcommands().front()->get_name();

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "pend3d: cannot read config '%s'\n",
                     config_path.c_str());
        return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();

    try {
        pend3d::Scenario s = pend3d::parse_config(text.str());
        s.task = task; // the subcommand wins over any `task =` line
        if (seed_given) s.seed = seed;
        for (const std::string& w : s.warnings) {
            std::fprintf(stderr, "pend3d: warning: %s\n", w.c_str());
        }
        return pend3d::run(s, out_dir);
    } catch (const pend3d::IoError& e) {
        std::fprintf(stderr, "pend3d: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pend3d: %s\n", e.what());
        return 1;
    }
}
