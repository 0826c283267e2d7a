#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "vdlab/cli.hpp"
#include "vdlab/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"vdlab - hyperbolic van Diejen system laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> t0, t1, out_dt, tol;

    const std::vector<std::string> modes = {"simulate", "project",  "scatter",
                                            "invariants", "verify", "conjectures"};
    std::vector<CLI::App*> subs;
    for (const auto& m : modes) {
        CLI::App* sub = app.add_subcommand(m);
        sub->add_option("--config", config_path, "TOML or JSON experiment file");
        sub->add_option("--out", out_dir, "output directory (default: out)");
        sub->add_option("--seed", seed, "override the seed");
        sub->add_option("--t0", t0, "override window start");
        sub->add_option("--t1", t1, "override window end");
        sub->add_option("--out-dt", out_dt, "override sample spacing");
        sub->add_option("--tol", tol, "override integrator tolerance");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    vdlab::ExperimentConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = vdlab::load_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (subs[i]->parsed()) cfg.mode = modes[i];
    if (seed) cfg.seed = *seed;
    if (t0) cfg.t0 = *t0;
    if (t1) cfg.t1 = *t1;
    if (out_dt) cfg.out_dt = *out_dt;
    if (tol) cfg.tol = *tol;

    return vdlab::run_experiment(cfg, out_dir);
}
