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

#include "owclb/bitload.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace owclb
{
    SubcarrierGrid::SubcarrierGrid(FrequencyHz f_chip, std::vector<double> gnr_k)
        : f_chip_(checked_corner(f_chip.value(), "f_chip")), delta_b_(0.0), gnr_(std::move(gnr_k))
    {
        if (gnr_.empty())
            throw InvalidArgument("subcarrier grid needs at least one subcarrier");
        for (std::size_t i = 0; i < gnr_.size(); ++i)
            if (!std::isfinite(gnr_[i]) || gnr_[i] <= 0.0)
                throw InvalidArgument("subcarrier " + std::to_string(i + 1) + ": GNR must be finite and > 0");
        delta_b_ = f_chip_ / static_cast<double>(gnr_.size());
    }

    SubcarrierGrid SubcarrierGrid::sample(const MagSqPoleZeroGnr &g, std::size_t count, FrequencyHz f_chip)
    {
        return sample([&g](double f) { return g(f); }, count, f_chip);
    }

    SubcarrierGrid SubcarrierGrid::sample(const std::function<double(double)> &gnr, std::size_t count,
                                          FrequencyHz f_chip)
    {
        if (count == 0)
            throw InvalidArgument("subcarrier count must be positive");
        const double delta = f_chip.value() / static_cast<double>(count);
        std::vector<double> v(count);
        for (std::size_t k = 0; k < count; ++k)
            v[k] = gnr(static_cast<double>(k + 1) * delta);
        return SubcarrierGrid(f_chip, std::move(v));
    }

    bool SubcarrierGrid::is_non_increasing() const noexcept
    {
        return std::is_sorted(gnr_.rbegin(), gnr_.rend());
    }

    int GroupTable::populated() const noexcept
    {
        return static_cast<int>(std::count_if(slots_.begin(), slots_.end(), [](const auto &s) { return s.has_value(); }));
    }

    double marginal_power(const SubcarrierGrid &grid, ModulationGap gap, std::size_t index, int bits)
    {
        if (index >= grid.size())
            throw InvalidArgument("subcarrier index out of range");
        if (bits < 0)
            throw InvalidArgument("bit level must be >= 0");
        return std::ldexp(grid.delta_b() * gap.linear() / grid.gnr()[index], bits);
    }

    namespace
    {
        // Shared state of both greedy variants. Increments are W_k * 2^b, formed
        // with ldexp so both algorithms see bit-identical costs.
        struct Loader
        {
            Loader(const SubcarrierGrid &grid, ModulationGap gap, double budget, int cap, const char *name)
                : grid(grid), budget(budget), cap(cap), unit(grid.size()), bits(grid.size(), 0)
            {
                if (!std::isfinite(budget) || budget < 0.0)
                    throw InvalidArgument("sigma2 budget must be finite and >= 0");
                if (cap < 1)
                    throw InvalidArgument("bit cap must be >= 1");
                const double scale = grid.delta_b() * gap.linear();
                for (std::size_t k = 0; k < grid.size(); ++k)
                    unit[k] = scale / grid.gnr()[k];
                plan.setup_flops = grid.size() + 1;
                plan.flops = plan.setup_flops;
                plan.algorithm = name;
                plan.budget = budget;
                plan.delta_b = grid.delta_b();
            }

            double increment(std::size_t k) const { return std::ldexp(unit[k], bits[k]); }

            // Budget test and load; returns false when the bit does not fit.
            bool try_load(std::size_t k)
            {
                const double inc = increment(k);
                plan.flops += 2;
                if (running + inc > budget)
                    return false;
                running += inc;
                ++bits[k];
                plan.flops += 3;
                return true;
            }

            BitLoadPlan finish()
            {
                plan.bits = bits;
                plan.power_k.resize(bits.size());
                plan.total_power = 0.0;
                long long total_bits = 0;
                for (std::size_t k = 0; k < bits.size(); ++k)
                {
                    plan.power_k[k] = unit[k] * (std::ldexp(1.0, bits[k]) - 1.0);
                    plan.total_power += plan.power_k[k];
                    total_bits += bits[k];
                }
                plan.rate_bps = grid.delta_b() * static_cast<double>(total_bits);
                return std::move(plan);
            }

            const SubcarrierGrid &grid;
            double budget;
            int cap;
            std::vector<double> unit;
            std::vector<int> bits;
            double running = 0.0;
            BitLoadPlan plan;
        };
    }

    BitLoadPlan hh_naive(const SubcarrierGrid &grid, ModulationGap gap, double sigma2_budget, BitLoadOptions options)
    {
        Loader ld(grid, gap, sigma2_budget, options.bit_cap, "hh_naive");
        if (sigma2_budget == 0.0)
            return ld.finish();

        const std::size_t K = grid.size();
        for (;;)
        {
            std::size_t best = K;
            double best_cost = 0.0;
            std::uint64_t candidates = 0;
            for (std::size_t k = 0; k < K; ++k)
            {
                if (ld.bits[k] >= ld.cap)
                    continue;
                ++candidates;
                const double c = ld.increment(k);
                if (best == K || c < best_cost)
                {
                    best = k;
                    best_cost = c;
                }
            }
            ++ld.plan.iterations;
            if (candidates == 0)
                break;
            ld.plan.candidates_scanned += candidates;
            ld.plan.flops += candidates - 1;
            if (!ld.try_load(best))
                break;
        }
        return ld.finish();
    }

    BitLoadPlan hh_accelerated(const SubcarrierGrid &grid, ModulationGap gap, double sigma2_budget,
                               BitLoadOptions options, const GroupTableObserver &observer)
    {
        if (!grid.is_non_increasing())
            throw InvalidArgument("hh_accelerated needs a non-increasing GNR over the subcarriers; "
                                  "sort the subcarriers by GNR or use hh_naive");
        Loader ld(grid, gap, sigma2_budget, options.bit_cap, "hh_accelerated");
        GroupTable table(options.bit_cap);
        table.set(0, std::size_t{0});
        if (sigma2_budget == 0.0)
        {
            auto plan = ld.finish();
            plan.populated_levels = table.populated();
            return plan;
        }

        const std::size_t K = grid.size();
        for (;;)
        {
            std::size_t best = K;
            double best_cost = 0.0;
            std::uint64_t candidates = 0;
            for (int b = 0; b < ld.cap; ++b)
            {
                const auto &slot = table.at(b);
                if (!slot)
                    continue;
                ++candidates;
                const std::size_t k = *slot;
                const double c = ld.increment(k);
                if (best == K || c < best_cost || (c == best_cost && k < best))
                {
                    best = k;
                    best_cost = c;
                }
            }
            ++ld.plan.iterations;
            if (candidates == 0)
                break;
            ld.plan.candidates_scanned += candidates;
            ld.plan.flops += candidates - 1;

            const int old_level = ld.bits[best];
            if (!ld.try_load(best))
                break;

            if (!table.at(old_level + 1))
                table.set(old_level + 1, best); // new bit level
            ld.plan.flops += 1;
            if (best + 1 < K && ld.bits[best + 1] == old_level)
            {
                table.set(old_level, best + 1); // leader of the old level moves up by one
                ld.plan.flops += 1;
            }
            else
            {
                table.set(old_level, std::nullopt); // old level emptied
            }

            if (observer)
                observer(best, ld.bits, table);
        }
        auto plan = ld.finish();
        plan.populated_levels = table.populated();
        return plan;
    }

    FlopComparison flop_report(const BitLoadPlan &a, const BitLoadPlan &b)
    {
        if (a.bits.size() != b.bits.size() || a.delta_b != b.delta_b || a.budget != b.budget)
            throw InvalidArgument("flop_report needs plans computed on the same grid and budget");
        FlopComparison r;
        r.flops_a = a.flops;
        r.flops_b = b.flops;
        r.iterations_a = a.iterations;
        r.iterations_b = b.iterations;
        r.saving = static_cast<std::int64_t>(a.flops) - static_cast<std::int64_t>(b.flops);
        r.saving_per_iteration =
            a.iterations > 0 ? static_cast<double>(r.saving) / static_cast<double>(a.iterations) : 0.0;
        r.populated_levels = a.algorithm == "hh_accelerated" ? a.populated_levels : b.populated_levels;
        r.convention = "1 FLOP per floating add/mul/div/compare; setup K+1; search c-1; budget test 2; "
                       "load 3; table maintenance 1 (+1 on leader shift); lookups free";
        return r;
    }
}
