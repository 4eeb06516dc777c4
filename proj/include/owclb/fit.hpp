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

#include "owclb/gnr_model.hpp"
#include "owclb/response_table.hpp"
#include "owclb/units.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace owclb
{
    struct FitConfig
    {
        int n_zeros = 0;
        int n_poles = 1;
        FrequencyHz f_lo;       ///< rows outside [f_lo, f_hi] are ignored
        FrequencyHz f_hi;
        int max_iters = 2000;   ///< per start
        int multistarts = 16;
        std::uint64_t seed = 1;
    };

    struct FitResult
    {
        MagSqPoleZeroGnr model;
        double rms_db_error = 0.0;
        std::vector<double> per_point_residuals; ///< dB, one per row inside the fit range
        std::vector<std::string> notes;          ///< order-mismatch hints
        int converged_starts = 0;
    };

    /// Least-squares fit of an M-zero / N-pole GNR to tabulated data in dB.
    ///
    /// Parameters are log(gnr0) and the log corner frequencies, which keeps
    /// them positive without constraints. Each start runs a Levenberg-damped
    /// Gauss-Newton iteration; starts draw corners log-uniformly over the fit
    /// range from a generator seeded with cfg.seed, and the lowest-cost start
    /// wins. Corners the data cannot pin down drift outside the range and are
    /// reported in FitResult::notes.
    FitResult fit_polezero(const ResponseTable &data, const FitConfig &cfg);

    /// 10 log10(model(f_i)) - 10 log10(data_i) for every row.
    std::vector<double> residual_scan(const ResponseTable &data, const MagSqPoleZeroGnr &model);

    struct OrderScanEntry
    {
        int n_zeros;
        int n_poles;
        double rms_db_error;
    };

    /// Refits for every 0 <= M < N <= max_poles and reports the rms error per order.
    std::vector<OrderScanEntry> scan_orders(const ResponseTable &data, const FitConfig &base, int max_poles);
}
