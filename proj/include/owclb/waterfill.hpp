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

#include <functional>
#include <string>
#include <vector>

namespace owclb
{
    /// Closed frequency interval [lo_hz, hi_hz] spanned by grid points.
    struct FrequencyInterval
    {
        double lo_hz;
        double hi_hz;
    };

    /// Sample frequencies with the bandwidth each sample stands for.
    class SpectralGrid
    {
    public:
        SpectralGrid(std::vector<double> freqs_hz, std::vector<double> weights_hz);

        /// OFDM subcarriers f_k = k * f_chip/K, k = 1..K, each of width f_chip/K.
        static SpectralGrid subcarriers(std::size_t count, FrequencyHz f_chip);

        const std::vector<double> &freqs() const noexcept { return freqs_; }
        const std::vector<double> &weights() const noexcept { return weights_; }
        std::size_t size() const noexcept { return freqs_.size(); }

    private:
        std::vector<double> freqs_;
        std::vector<double> weights_;
    };

    /// Diagnostics of the iterative solvers.
    struct SolverStats
    {
        int iterations = 0;
        int polish_steps = 0;            ///< grid steps taken after Newton stopped
        bool saturated = false;          ///< budget reaches beyond f_chip; clamped there
        bool bisection_fallback = false; ///< a Newton iterate left the feasibility bracket and was replaced by its midpoint
        std::vector<double> trace;       ///< f_max iterates, Hz
    };

    /// Optimal transmit PSD sampled on a grid.
    struct WaterfillSolution
    {
        double f_max_hz = 0.0;    ///< highest frequency carrying power
        double water_level = 0.0; ///< v, V^2/Hz
        std::vector<double> freqs_hz;
        std::vector<double> weights_hz;
        std::vector<double> psd;          ///< S(f_i), V^2/Hz
        std::vector<double> gnr;          ///< GNR(f_i), linear
        double sigma2 = 0.0;              ///< sum_i w_i S(f_i), V^2
        double rate_bps = 0.0;            ///< sum_i w_i log2(1 + S GNR / Gamma)
        std::vector<FrequencyInterval> island; ///< zero-power runs below f_max
        SolverStats stats;
    };

    /// Monotone map between signal variance and electrical power consumption.
    /// Budgets throughout the library are signal variances; the identity map is
    /// the default.
    struct PowerMap
    {
        std::function<double(double)> sigma2_to_power;
        std::function<double(double)> power_to_sigma2;

        static PowerMap identity();
    };

    // ---------------------------------------------------------------------------------------------
    // Continuous-spectrum closed forms. All require a GNR that is non-increasing on [0, f_max] and
    // throw NonMonotoneError otherwise; waterlevel_solve() handles the general case.
    // ---------------------------------------------------------------------------------------------

    /// S_opt(f) = Gamma/GNR(f_max) - Gamma/GNR(f) for f < f_max, else 0.
    /// A flat GNR gives 0 everywhere: the f_max parameterisation degenerates and
    /// waterlevel_solve() is the path to use.
    double psd_opt(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max, FrequencyHz f);

    /// sigma_x^2(f_max) = integral_0^f_max S_opt(f) df.
    ///
    /// Uses an exact partial-fraction antiderivative when the zeros are
    /// distinct and the expansion is well conditioned, adaptive Gauss-Kronrod
    /// quadrature otherwise.
    double sigma2_of_fmax(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max);

    /// Reference path of sigma2_of_fmax(): adaptive quadrature only.
    double sigma2_of_fmax_quadrature(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max);

    /// Optimal rate in bit/s as a function of f_max:
    ///
    ///     R = 2/ln2 * { (N-M) f_max + sum fz atan(f_max/fz) - sum fp atan(f_max/fp) }
    ///
    /// Independent of Gamma and gnr0.
    double rate_closed_form(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max);

    /// d sigma_x^2 / d f_max = 2 Gamma f^2 (sum 1/(fp^2+f^2) - sum 1/(fz^2+f^2)) / GNR(f).
    double dsigma2_dfmax(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max);

    /// Rate of a flat PSD sigma2/band spread over [0, band]:
    /// integral_0^band log2(1 + sigma2/band * GNR(f)/Gamma) df. Baseline for the optimizers.
    double flat_spectrum_rate(const MagSqPoleZeroGnr &g, ModulationGap gap, double sigma2_budget, FrequencyHz band);

    /// Continuous f_max whose sigma2_of_fmax() equals the budget, searched on
    /// (0, f_hi]. Returns f_hi if the budget is not reached there.
    FrequencyHz fmax_for_sigma2(const MagSqPoleZeroGnr &g, ModulationGap gap, double sigma2_budget, FrequencyHz f_hi);

    // ---------------------------------------------------------------------------------------------
    // Discrete solvers
    // ---------------------------------------------------------------------------------------------

    struct NewtonOptions
    {
        int max_iterations = 100;
    };

    /// Newton search for f_max on the K-subcarrier grid of width f_chip/K.
    ///
    /// Starts at f_chip, takes Newton steps on the grid power using the
    /// analytic derivative, snaps each iterate to the nearest subcarrier (ties
    /// to the lower index) and stops once a step lands on the same subcarrier
    /// with the grid power within budget. Every evaluated subcarrier narrows a
    /// bracket [feasible, over budget]; iterates outside it are replaced by the
    /// bracket midpoint, which also rules out two-point cycles. A final polish
    /// moves up while the next subcarrier still fits, so the result is the
    /// largest grid f_max with sigma2 <= budget. Saturates at f_chip. Throws
    /// ConvergenceError after options.max_iterations.
    WaterfillSolution newton_fmax(const MagSqPoleZeroGnr &g, ModulationGap gap, double sigma2_budget,
                                  std::size_t subcarrier_count, FrequencyHz f_chip, NewtonOptions options = {});

    /// Grid power of the f_max parameterisation: sum_{k<=k_max} w (W(f_kmax) - W(f_k))^+.
    double grid_sigma2(const MagSqPoleZeroGnr &g, ModulationGap gap, std::size_t k_max, std::size_t subcarrier_count,
                       FrequencyHz f_chip);

    using GnrFunction = std::function<double(double)>;

    /// Water-level bisection for an arbitrary GNR shape.
    ///
    /// S(f) = max(0, v - Gamma/GNR(f)) on the grid, with v chosen so that the
    /// grid power matches the budget to 1e-9 relative. Zero-power runs below
    /// f_max are reported as islands. Non-positive or non-finite GNR samples
    /// never receive power.
    WaterfillSolution waterlevel_solve(const GnrFunction &gnr, ModulationGap gap, double sigma2_budget,
                                       const SpectralGrid &grid);

    /// Pointwise KKT residuals of a solution.
    struct KktReport
    {
        double min_psd = 0.0;              ///< smallest S(f_i); >= 0 when primal feasible
        double max_level_error = 0.0;      ///< max |S + Gamma/GNR - v| / v over the support
        double max_slackness = 0.0;        ///< max |S (v - Gamma/GNR - S)| / v^2
        double max_dual_violation = 0.0;   ///< max (v - Gamma/GNR)/v over zero-power points
        bool satisfied(double tol) const
        {
            return min_psd >= 0.0 && max_level_error <= tol && max_slackness <= tol && max_dual_violation <= tol;
        }
    };

    KktReport check_kkt(const WaterfillSolution &s, ModulationGap gap);
}
