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

#include "owclb/units.hpp"

#include <span>
#include <vector>

namespace owclb
{
    /// Canonical magnitude-squared M-zero / N-pole gain-to-noise ratio
    ///
    ///     GNR(f) = gnr0 * prod_m (1 + f^2/fz_m^2) / prod_n (1 + f^2/fp_n^2)
    ///
    /// All optimizers in the library consume this form. Corner lists are kept
    /// sorted ascending; repeated corners are allowed.
    class MagSqPoleZeroGnr
    {
    public:
        MagSqPoleZeroGnr(double gnr0, std::vector<double> zeros_hz, std::vector<double> poles_hz);

        double gnr0() const noexcept { return gnr0_; }
        std::span<const double> zeros() const noexcept { return zeros_; }
        std::span<const double> poles() const noexcept { return poles_; }
        std::size_t n_zeros() const noexcept { return zeros_.size(); }
        std::size_t n_poles() const noexcept { return poles_.size(); }

        /// GNR(f), linear.
        double operator()(double f_hz) const noexcept;
        double eval(FrequencyHz f) const noexcept { return (*this)(f.value()); }

        /// 1/GNR(f), evaluated as a product without forming GNR first.
        double inverse(double f_hz) const noexcept;

        /// sum_m 1/(fz_m^2 + f^2) - sum_n 1/(fp_n^2 + f^2).
        ///
        /// Proportional to d log GNR / d(f^2); GNR is non-increasing at f
        /// exactly when this is <= 0.
        double log_slope(double f_hz) const noexcept;

        /// Same model with gnr0 replaced.
        MagSqPoleZeroGnr with_gnr0(double gnr0) const { return {gnr0, zeros_, poles_}; }

    private:
        double gnr0_;
        std::vector<double> zeros_;
        std::vector<double> poles_;
    };

    /// True iff GNR is non-increasing on (0, f_hi].
    ///
    /// Checks the sign of log_slope() at f -> 0, at f_hi and on a dense
    /// logarithmic grid in between. A flat model (M = N = 0) counts as
    /// non-increasing.
    bool is_monotone_decreasing(const MagSqPoleZeroGnr &g, FrequencyHz f_hi);
}
