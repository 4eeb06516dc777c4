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

#include "owclb/response_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace owclb
{
    ResponseTable::ResponseTable(std::vector<Row> rows) : rows_(std::move(rows))
    {
        if (rows_.size() < 2)
            throw InvalidArgument("response table needs at least 2 rows");
        for (std::size_t i = 0; i < rows_.size(); ++i)
        {
            const auto &r = rows_[i];
            if (!std::isfinite(r.frequency_hz) || r.frequency_hz <= 0.0)
                throw InvalidArgument("response table row " + std::to_string(i) + ": frequency must be > 0 Hz");
            if (!std::isfinite(r.value) || r.value <= 0.0)
                throw InvalidArgument("response table row " + std::to_string(i) + ": value must be > 0");
            if (i > 0 && !(r.frequency_hz > rows_[i - 1].frequency_hz))
                throw InvalidArgument("response table row " + std::to_string(i) + ": frequencies must be strictly increasing");
        }
    }

    double ResponseTable::interpolate(double f_hz) const
    {
        if (rows_.empty())
            throw RangeError("empty response table");
        if (!(f_hz >= f_min() && f_hz <= f_max()))
            throw RangeError("frequency " + std::to_string(f_hz) + " Hz outside table range [" +
                             std::to_string(f_min()) + ", " + std::to_string(f_max()) + "] Hz");

        auto hi = std::lower_bound(rows_.begin(), rows_.end(), f_hz,
                                   [](const Row &r, double f) { return r.frequency_hz < f; });
        if (hi->frequency_hz == f_hz)
            return hi->value;
        auto lo = std::prev(hi);

        const double t = std::log(f_hz / lo->frequency_hz) / std::log(hi->frequency_hz / lo->frequency_hz);
        return std::exp(std::log(lo->value) + t * std::log(hi->value / lo->value));
    }
}
