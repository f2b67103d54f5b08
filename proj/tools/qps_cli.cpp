/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qps/experiments.hpp"

namespace {

const char* const kKeys[] = {"n_total",      "n_mixed",       "n_measured", "source",
                             "normal_mean",  "normal_std",    "normal_count",
                             "explicit_values", "p_star_grid", "p_m",        "p_star",
                             "delta",        "budget",        "instances",  "seed", "out"};

struct SubArgs {
    std::string config;
    std::string preset;
    std::map<std::string, std::string> overrides;
};

void attach(CLI::App* sub, SubArgs& args) {
    sub->add_option("--config", args.config, "flat key = value config file");
    sub->add_option("--preset", args.preset, "desk or paper qubit counts")
        ->check(CLI::IsMember({"desk", "paper"}));
    for (const char* key : kKeys)
        sub->add_option("--" + std::string(key), args.overrides[key]);
}

// precedence: preset, then config file, then explicit flags
qps::ExperimentConfig resolve(const CLI::App* sub, const SubArgs& args) {
    qps::ExperimentConfig cfg;
    if (!args.preset.empty()) cfg.apply_preset(args.preset);
    if (!args.config.empty()) cfg = qps::load_config(args.config, cfg);
    for (const char* key : kKeys)
        if (sub->count("--" + std::string(key)) > 0) cfg.set(key, args.overrides.at(key));
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"post-selection-free state preparation experiments"};
    app.require_subcommand(1);

    const char* const names[] = {"fig4", "fig6", "fpaa", "gadget-check", "bounds", "protocol"};
    const char* const blurbs[] = {
        "mixed-state amplification metric curves",
        "pseudoinverse decoder curves",
        "fixed-point amplification guarantee suite",
        "measurement-deferral equivalence suite",
        "theorem bound checks",
        "post-selection-free purity estimation",
    };
    std::map<std::string, SubArgs> args;
    for (int i = 0; i < 6; ++i) attach(app.add_subcommand(names[i], blurbs[i]), args[names[i]]);

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    try {
        return qps::run_experiment(sub->get_name(), resolve(sub, args[sub->get_name()]));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
