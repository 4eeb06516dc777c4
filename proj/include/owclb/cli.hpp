// SPDX-License-Identifier: Apache-2.0
//
// owclb - bandwidth-limited optical wireless link modelling and spectrum optimization
// Copyright (C) 2026 The owclb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace owclb::cli
{
    enum class Command
    {
        gnr_eval,
        rate_curve,
        optimize_newton,
        optimize_hh,
        fit,
        compare,
    };

    std::optional<Command> parse_command(std::string_view name);
    std::string_view command_name(Command c);

    /// VAR:FROM:TO:POINTS[:log] with VAR one of fmax, power.
    struct Sweep
    {
        enum class Variable
        {
            fmax,
            power,
        };
        Variable variable = Variable::fmax;
        double from = 0.0;
        double to = 0.0;
        int points = 1;
        bool log_spaced = false;

        std::vector<double> values() const;
    };

    Sweep parse_sweep(std::string_view text);

    struct RunConfig
    {
        Command command = Command::gnr_eval;
        std::filesystem::path channel_path;
        std::filesystem::path output_path; ///< empty: write to stdout
        std::filesystem::path data_path;   ///< fit input; falls back to channel_path
        std::optional<Sweep> sweep;
        std::size_t k = 64;
        double f_chip = 200e6;
        double gamma_db = 0.0;
        std::optional<double> budget;
        bool naive = false;
        int zeros = 0;
        int poles = 1;
        std::uint64_t seed = 1;
        bool db = false;
        int scan_orders = 0; ///< fit: refit every order up to this many poles
        unsigned threads = 0; ///< sweep workers; 0 picks the hardware concurrency
    };

    /// Validates the configuration, runs the command and returns the text it
    /// produced (CSV, or channel JSON for fit). The text is also written to
    /// output_path when set. Errors surface as owclb::Error subclasses.
    std::string run(const RunConfig &cfg);

    /// Command-line entry point; returns the process exit status.
    int main(int argc, char **argv);
}
