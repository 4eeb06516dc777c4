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
#include "owclb/units.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace owclb
{
    /// K OFDM subcarriers at f_k = k * f_chip/K (k = 1..K), each of width f_chip/K.
    /// Index 0 in the vectors below is subcarrier k = 1.
    class SubcarrierGrid
    {
    public:
        SubcarrierGrid(FrequencyHz f_chip, std::vector<double> gnr_k);

        static SubcarrierGrid sample(const MagSqPoleZeroGnr &g, std::size_t count, FrequencyHz f_chip);
        static SubcarrierGrid sample(const std::function<double(double)> &gnr, std::size_t count, FrequencyHz f_chip);

        std::size_t size() const noexcept { return gnr_.size(); }
        double f_chip() const noexcept { return f_chip_; }
        double delta_b() const noexcept { return delta_b_; }
        double frequency(std::size_t index) const noexcept { return static_cast<double>(index + 1) * delta_b_; }
        const std::vector<double> &gnr() const noexcept { return gnr_; }

        bool is_non_increasing() const noexcept;

    private:
        double f_chip_;
        double delta_b_;
        std::vector<double> gnr_;
    };

    /// Default per-subcarrier bit cap (4096-QAM).
    inline constexpr int default_bit_cap = 12;

    struct BitLoadOptions
    {
        int bit_cap = default_bit_cap;
    };

    /// Result of one bit-loading run.
    struct BitLoadPlan
    {
        std::vector<int> bits;        ///< b(k)
        std::vector<double> power_k;  ///< delta_b * Gamma * (2^b - 1) / GNR(f_k), V^2
        double total_power = 0.0;     ///< sum of power_k in index order
        double rate_bps = 0.0;        ///< delta_b * sum(bits)
        double delta_b = 0.0;
        std::uint64_t flops = 0;      ///< see flop_report() for the counting convention
        std::uint64_t setup_flops = 0;
        std::uint64_t iterations = 0; ///< candidate searches performed
        std::uint64_t candidates_scanned = 0;
        int populated_levels = 0;     ///< occupied bit levels at termination (accelerated only)
        std::string algorithm;        ///< "hh_naive" or "hh_accelerated"
        double budget = 0.0;
    };

    /// Power needed to load one more bit on subcarrier `index` currently
    /// carrying `bits`: delta_b * Gamma * 2^bits / GNR(f_k).
    double marginal_power(const SubcarrierGrid &grid, ModulationGap gap, std::size_t index, int bits);

    /// Reference Hughes-Hartogs: every iteration scans all subcarriers for the
    /// cheapest next bit (ties to the lowest index) and loads it while the
    /// total stays within budget.
    BitLoadPlan hh_naive(const SubcarrierGrid &grid, ModulationGap gap, double sigma2_budget, BitLoadOptions options = {});

    /// Lookup table of the accelerated algorithm: slot b holds the lowest
    /// subcarrier index currently carrying b bits, or nothing. Slot 0 tracks
    /// the first unloaded subcarrier.
    class GroupTable
    {
    public:
        explicit GroupTable(int bit_cap) : slots_(static_cast<std::size_t>(bit_cap) + 1) {}

        const std::optional<std::size_t> &at(int level) const { return slots_.at(static_cast<std::size_t>(level)); }
        void set(int level, std::optional<std::size_t> index) { slots_.at(static_cast<std::size_t>(level)) = index; }
        int bit_cap() const noexcept { return static_cast<int>(slots_.size()) - 1; }
        int populated() const noexcept;

    private:
        std::vector<std::optional<std::size_t>> slots_;
    };

    /// Observer called after each accelerated load with the loaded index, the
    /// bit vector and the lookup table. Used by tests.
    using GroupTableObserver = std::function<void(std::size_t, const std::vector<int> &, const GroupTable &)>;

    /// Accelerated Hughes-Hartogs for a non-increasing GNR.
    ///
    /// Equal-bit subcarriers form contiguous groups, and within a group the
    /// lowest-frequency one is cheapest, so only the group leaders in the
    /// GroupTable are searched. Produces the same plan as hh_naive(). Throws
    /// InvalidArgument if the grid GNR increases anywhere.
    BitLoadPlan hh_accelerated(const SubcarrierGrid &grid, ModulationGap gap, double sigma2_budget,
                               BitLoadOptions options = {}, const GroupTableObserver &observer = {});

    /// Side-by-side FLOP accounting of two plans produced on the same input.
    ///
    /// Counting convention: every floating-point add, multiply, divide or
    /// comparison is one FLOP, table lookups and integer bookkeeping of loop
    /// indices are free. Setup computes delta_b * Gamma once and divides it by
    /// each GNR(f_k) (K + 1 FLOPs). A candidate search over c candidates costs
    /// c - 1 comparisons; the budget test costs one add and one comparison; a
    /// load updates the subcarrier power, the running total and the next
    /// increment (3 adds). The accelerated table maintenance adds one
    /// comparison per load, plus one add when the next subcarrier's increment
    /// is refreshed.
    struct FlopComparison
    {
        std::uint64_t flops_a = 0;
        std::uint64_t flops_b = 0;
        std::uint64_t iterations_a = 0;
        std::uint64_t iterations_b = 0;
        std::int64_t saving = 0;           ///< flops_a - flops_b
        double saving_per_iteration = 0.0; ///< saving / iterations
        int populated_levels = 0;          ///< of the accelerated plan, if any
        std::string convention;
    };

    FlopComparison flop_report(const BitLoadPlan &plan_a, const BitLoadPlan &plan_b);
}
