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

#include "owclb/bitload.hpp"
#include "owclb/fit.hpp"
#include "owclb/linkchain.hpp"
#include "owclb/response_table.hpp"
#include "owclb/waterfill.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace owclb::io
{
    /// Shortest round-trip decimal form of a double. Output is identical for
    /// identical inputs on every platform.
    std::string format_number(double v);

    // -- channel files ---------------------------------------------------------------------------

    /// Parses a channel document:
    ///
    ///     {"stages": [{"kind": "first_order_low_pass", "params": {"dc_gain": 0.9, "corner": 2.3e6}}, ...],
    ///      "noise": {"floor": 4.4e-18, "uplift_zero": 3.5e6, "rolloff_poles": [...], "rolloff_zeros": [...]}}
    ///
    /// A tabulated stage takes either an inline "table" array of [f, value]
    /// pairs or a CSV path, resolved against base_dir. ParseError names the
    /// offending field.
    LinkChain parse_chain_json(std::string_view text, const std::filesystem::path &base_dir = {});
    LinkChain load_chain(const std::filesystem::path &path);

    /// Inverse of parse_chain_json(); tabulated stages are written inline.
    std::string chain_to_json(const LinkChain &chain);

    /// Channel document with one rational_pole_zero stage (dc_gain = sqrt(gnr0))
    /// and unit flat noise, so that gnr_eval reproduces the model.
    std::string model_to_chain_json(const MagSqPoleZeroGnr &model);

    // -- CSV -------------------------------------------------------------------------------------

    /// Parsed CSV: '#' comment lines (without the marker), header fields and numeric rows.
    struct CsvTable
    {
        std::vector<std::string> comments;
        std::vector<std::string> header;
        std::vector<std::vector<double>> rows;

        std::size_t column(std::string_view name) const;
    };

    CsvTable parse_csv(std::string_view text);
    CsvTable read_csv(const std::filesystem::path &path);
    std::string format_csv(const CsvTable &table);

    /// frequency_hz,value CSV. With from_db the values are converted from dB (10 log10).
    ResponseTable parse_response_csv(std::string_view text, bool from_db = false);
    ResponseTable read_response_csv(const std::filesystem::path &path, bool from_db = false);
    std::string response_csv(const ResponseTable &table);

    /// f_hz,psd_v2_per_hz,gnr_linear with a '# f_max_hz=... sigma2_v2=... rate_bps=...' line.
    std::string waterfill_csv(const WaterfillSolution &s);

    /// k,f_hz,bits,power_v2 with a '# algorithm=... total_power_v2=... rate_bps=... flops=...' line.
    std::string bitload_csv(const BitLoadPlan &plan);

    /// key=value pairs of a summary comment line.
    std::vector<std::pair<std::string, std::string>> parse_summary(std::string_view comment);

    void write_file(const std::filesystem::path &path, std::string_view contents);
    std::string read_file(const std::filesystem::path &path);
}
