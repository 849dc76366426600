// Copyright 2026 The selfcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include "CLI11.hpp"
#include "lab/commands.h"

int main(int argc, char **argv) {
    using namespace selfcorr::lab;
    CLI::App app{"selfcorr: code construction, analysis and Glauber-dynamics experiments"};
    app.require_subcommand(1, 1);
    GlobalOptions opts;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    auto *seed_opt = app.add_option("--seed", seed, "Master seed (required by stochastic commands)");
    app.add_option("--workers", opts.workers, "Worker threads for trajectory-parallel stages")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", opts.out_dir, "Output directory");
    auto *budget_opt = app.add_option("--budget", budget, "Overrides the command's work budget");
    seed_opt->configurable(false);
    budget_opt->configurable(false);
    static const std::map<std::string, std::string> help = {
        {"build", "Instantiate a code spec and write its check matrices"},
        {"validate", "Check the CSS condition symbolically and on instances"},
        {"params", "Compute n, k, d and energy barrier per system size"},
        {"fractal", "Build fractal words c_l and their low-energy walks"},
        {"expansion", "Minimum of |Hc|/|c|^nu over small words"},
        {"simulate", "Estimate memory time under Glauber dynamics"},
        {"sweep", "Memory-time scaling sweep over L and beta with fits"},
    };
    for (const auto &name : command_names()) {
        auto *sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", opts.config_path, "JSON config file")->required();
        sub->fallthrough();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }
    if (seed_opt->count() > 0) opts.seed = seed;
    if (budget_opt->count() > 0) opts.budget = budget;
    const std::string command = app.get_subcommands().front()->get_name();
    return run_command(command, opts, std::cout, std::cerr);
}
