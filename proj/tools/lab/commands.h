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

#ifndef SELFCORR_LAB_COMMANDS_H
#define SELFCORR_LAB_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace selfcorr::lab {

using nlohmann::json;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    std::string out_dir = "selfcorr_out";
    std::optional<std::uint64_t> budget;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitBudget = 2,
    kExitInternal = 3,
};

const std::vector<std::string> &command_names();

/// Loads the config file named in `opts` and runs the command. Never throws: errors are
/// reported on `err` with the failing stage and mapped to an exit code. A manifest.json is
/// written to the output directory whenever the directory can be created.
int run_command(const std::string &command, const GlobalOptions &opts, std::ostream &out,
                std::ostream &err);

/// Same, with an in-memory config.
int run_command_json(const std::string &command, const json &config, const GlobalOptions &opts,
                     std::ostream &out, std::ostream &err);

}  // namespace selfcorr::lab

#endif
