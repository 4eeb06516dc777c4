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

#include "owclb/errors.hpp"

#include <cmath>
#include <compare>
#include <string>

namespace owclb
{
    /// Non-negative, finite frequency in hertz.
    class FrequencyHz
    {
    public:
        constexpr FrequencyHz() = default;

        explicit FrequencyHz(double hz) : hz_(hz)
        {
            if (!std::isfinite(hz) || hz < 0.0)
                throw InvalidArgument("frequency must be finite and >= 0 Hz, got " + std::to_string(hz));
        }

        constexpr double value() const noexcept { return hz_; }

        friend constexpr auto operator<=>(const FrequencyHz &, const FrequencyHz &) = default;

    private:
        double hz_ = 0.0;
    };

    /// Requires a strictly positive corner frequency; used for poles and zeros.
    inline double checked_corner(double hz, const char *what)
    {
        if (!std::isfinite(hz) || hz <= 0.0)
            throw InvalidArgument(std::string(what) + " must be a finite frequency > 0 Hz, got " + std::to_string(hz));
        return hz;
    }

    /// Modulation gap, linear. Gamma >= 1.
    class ModulationGap
    {
    public:
        explicit ModulationGap(double linear = 1.0) : linear_(linear)
        {
            if (!std::isfinite(linear) || linear < 1.0)
                throw InvalidArgument("modulation gap must be >= 1 (linear), got " + std::to_string(linear));
        }

        static ModulationGap from_db(double db)
        {
            if (!std::isfinite(db) || db < 0.0)
                throw InvalidArgument("modulation gap must be >= 0 dB, got " + std::to_string(db));
            return ModulationGap(std::pow(10.0, db / 10.0));
        }

        double linear() const noexcept { return linear_; }
        double db() const { return 10.0 * std::log10(linear_); }

    private:
        double linear_;
    };

    namespace literals
    {
        inline FrequencyHz operator""_Hz(long double v) { return FrequencyHz(static_cast<double>(v)); }
        inline FrequencyHz operator""_kHz(long double v) { return FrequencyHz(static_cast<double>(v) * 1e3); }
        inline FrequencyHz operator""_MHz(long double v) { return FrequencyHz(static_cast<double>(v) * 1e6); }
        inline FrequencyHz operator""_GHz(long double v) { return FrequencyHz(static_cast<double>(v) * 1e9); }
        inline FrequencyHz operator""_Hz(unsigned long long v) { return FrequencyHz(static_cast<double>(v)); }
        inline FrequencyHz operator""_kHz(unsigned long long v) { return FrequencyHz(static_cast<double>(v) * 1e3); }
        inline FrequencyHz operator""_MHz(unsigned long long v) { return FrequencyHz(static_cast<double>(v) * 1e6); }
        inline FrequencyHz operator""_GHz(unsigned long long v) { return FrequencyHz(static_cast<double>(v) * 1e9); }
    }
}
