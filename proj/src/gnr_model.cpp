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

#include "owclb/gnr_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace owclb
{
    MagSqPoleZeroGnr::MagSqPoleZeroGnr(double gnr0, std::vector<double> zeros_hz, std::vector<double> poles_hz)
        : gnr0_(gnr0), zeros_(std::move(zeros_hz)), poles_(std::move(poles_hz))
    {
        if (!std::isfinite(gnr0_) || gnr0_ <= 0.0)
            throw InvalidArgument("gnr0 must be finite and > 0, got " + std::to_string(gnr0_));
        for (double z : zeros_)
            checked_corner(z, "zero frequency");
        for (double p : poles_)
            checked_corner(p, "pole frequency");
        std::sort(zeros_.begin(), zeros_.end());
        std::sort(poles_.begin(), poles_.end());
    }

    double MagSqPoleZeroGnr::operator()(double f_hz) const noexcept
    {
        const double f2 = f_hz * f_hz;
        double g = gnr0_;
        for (double z : zeros_)
            g *= 1.0 + f2 / (z * z);
        for (double p : poles_)
            g /= 1.0 + f2 / (p * p);
        return g;
    }

    double MagSqPoleZeroGnr::inverse(double f_hz) const noexcept
    {
        const double f2 = f_hz * f_hz;
        double w = 1.0 / gnr0_;
        for (double p : poles_)
            w *= 1.0 + f2 / (p * p);
        for (double z : zeros_)
            w /= 1.0 + f2 / (z * z);
        return w;
    }

    double MagSqPoleZeroGnr::log_slope(double f_hz) const noexcept
    {
        const double f2 = f_hz * f_hz;
        double s = 0.0;
        for (double z : zeros_)
            s += 1.0 / (z * z + f2);
        for (double p : poles_)
            s -= 1.0 / (p * p + f2);
        return s;
    }

    namespace
    {
        // Magnitude scale of log_slope() at f, used to make the sign test relative.
        double slope_scale(const MagSqPoleZeroGnr &g, double f_hz)
        {
            const double f2 = f_hz * f_hz;
            double s = 0.0;
            for (double z : g.zeros())
                s += 1.0 / (z * z + f2);
            for (double p : g.poles())
                s += 1.0 / (p * p + f2);
            return s;
        }

        bool slope_non_positive(const MagSqPoleZeroGnr &g, double f_hz)
        {
            return g.log_slope(f_hz) <= 1e-12 * slope_scale(g, f_hz);
        }
    }

    bool is_monotone_decreasing(const MagSqPoleZeroGnr &g, FrequencyHz f_hi)
    {
        if (g.n_zeros() == 0)
            return true;
        const double hi = f_hi.value();
        if (hi == 0.0)
            return true;

        // Sufficient everywhere: the i-th zero sits at or above the i-th pole, so each
        // pole/zero pair is a non-increasing factor.
        if (g.n_poles() >= g.n_zeros())
        {
            bool paired = true;
            for (std::size_t i = 0; i < g.n_zeros() && paired; ++i)
                paired = g.zeros()[i] >= g.poles()[i];
            if (paired)
                return true;
        }

        // Endpoint analysis: the DC limit and the upper band edge.
        if (!slope_non_positive(g, 0.0) || !slope_non_positive(g, hi))
            return false;

        double lowest = g.zeros().front();
        if (g.n_poles() > 0)
            lowest = std::min(lowest, g.poles().front());
        const double lo = std::min(hi, lowest) * 1e-4;
        if (lo >= hi)
            return true;

        constexpr int points = 4096;
        const double step = std::log(hi / lo) / (points - 1);
        for (int i = 0; i < points; ++i)
        {
            const double f = lo * std::exp(step * i);
            if (!slope_non_positive(g, f))
                return false;
        }
        return true;
    }
}
