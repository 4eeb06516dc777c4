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
#include <utility>
#include <vector>

namespace owclb
{
    /// Frequency/value samples from a measurement or circuit simulation.
    ///
    /// Frequencies are strictly increasing and strictly positive (interpolation
    /// happens on log-frequency); values are strictly positive. Values are
    /// magnitude-squared gains, noise PSDs or GNRs depending on the source.
    class ResponseTable
    {
    public:
        struct Row
        {
            double frequency_hz;
            double value;
        };

        ResponseTable() = default;
        explicit ResponseTable(std::vector<Row> rows);

        std::span<const Row> rows() const noexcept { return rows_; }
        std::size_t size() const noexcept { return rows_.size(); }
        bool empty() const noexcept { return rows_.empty(); }

        double f_min() const { return rows_.front().frequency_hz; }
        double f_max() const { return rows_.back().frequency_hz; }

        /// Log-log linear interpolation. Throws RangeError outside [f_min, f_max].
        double interpolate(double f_hz) const;

    private:
        std::vector<Row> rows_;
    };
}
