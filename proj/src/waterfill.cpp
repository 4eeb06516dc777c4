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

#include "owclb/waterfill.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace owclb
{
    namespace
    {
        void require_monotone(const MagSqPoleZeroGnr &g, FrequencyHz f_max)
        {
            if (!is_monotone_decreasing(g, f_max))
                throw NonMonotoneError("GNR is not monotonically non-increasing up to f_max = " +
                                       std::to_string(f_max.value()) +
                                       " Hz; the f_max parameterisation does not apply, use waterlevel_solve");
        }

        // x - atan(x) without cancellation for small x.
        double x_minus_atan(double x)
        {
            if (x < 0.1)
            {
                const double x2 = x * x;
                double term = x * x2; // x^3
                double sum = 0.0;
                for (int n = 1; n < 12; ++n)
                {
                    sum += ((n % 2) ? 1.0 : -1.0) * term / (2 * n + 1);
                    term *= x2;
                }
                return sum;
            }
            return x - std::atan(x);
        }

        // x/(1+x^2) - atan(x) without cancellation for small x.
        long double lorentz_minus_atan(long double x)
        {
            if (x < 0.1L)
            {
                const long double x2 = x * x;
                long double term = x * x2;
                long double sum = 0.0L;
                for (int n = 1; n < 14; ++n)
                {
                    sum += ((n % 2) ? -1.0L : 1.0L) * term * (2.0L * n) / (2 * n + 1);
                    term *= x2;
                }
                return sum;
            }
            return x / (1.0L + x * x) - std::atan(x);
        }

        // Coefficients (ascending powers of u) of prod_i (1 + u / r_i).
        std::vector<long double> product_poly(const std::vector<long double> &roots)
        {
            std::vector<long double> c{1.0L};
            for (long double r : roots)
            {
                std::vector<long double> next(c.size() + 1, 0.0L);
                for (std::size_t i = 0; i < c.size(); ++i)
                {
                    next[i] += c[i];
                    next[i + 1] += c[i] / r;
                }
                c = std::move(next);
            }
            return c;
        }

        // integral_0^F (W(F) - W(f)) df / W0 via partial fractions in u = (f/s)^2, evaluated in
        // extended precision. Returns NaN when the expansion is unusable (repeated zeros, ill
        // conditioning).
        double sigma2_unit_partial_fraction(const MagSqPoleZeroGnr &g, double F)
        {
            std::vector<double> all(g.zeros().begin(), g.zeros().end());
            all.insert(all.end(), g.poles().begin(), g.poles().end());
            double log_sum = 0.0;
            for (double c : all)
                log_sum += std::log(c);
            const long double s = all.empty() ? 1.0L : std::exp(log_sum / static_cast<double>(all.size()));

            std::vector<long double> alpha, beta;
            for (double p : g.poles())
                alpha.push_back((p / s) * (p / s));
            for (double z : g.zeros())
                beta.push_back((z / s) * (z / s));

            for (std::size_t i = 0; i < beta.size(); ++i)
                for (std::size_t j = i + 1; j < beta.size(); ++j)
                    if (std::abs(beta[i] - beta[j]) <= 1e-6L * std::max(beta[i], beta[j]))
                        return std::numeric_limits<double>::quiet_NaN();

            const auto num = product_poly(alpha);
            const auto den = product_poly(beta);

            // Long division num = quot * den + rem; only the quotient is needed.
            std::vector<long double> rem = num;
            std::vector<long double> quot;
            if (num.size() >= den.size())
            {
                quot.assign(num.size() - den.size() + 1, 0.0L);
                for (std::size_t k = quot.size(); k-- > 0;)
                {
                    const long double c = rem[k + den.size() - 1] / den.back();
                    quot[k] = c;
                    for (std::size_t j = 0; j < den.size(); ++j)
                        rem[k + j] -= c * den[j];
                }
            }

            long double result = 0.0L;
            long double magnitude = 0.0L;
            const long double Fl = F;
            const long double ratio2 = (Fl / s) * (Fl / s);
            long double upow = ratio2;
            for (std::size_t j = 1; j < quot.size(); ++j)
            {
                const long double term = quot[j] * (2.0L * j / (2.0L * j + 1.0L)) * Fl * upow;
                result += term;
                magnitude += std::abs(term);
                upow *= ratio2;
            }
            for (std::size_t m = 0; m < beta.size(); ++m)
            {
                // residue at u = -beta_m; rem(-beta_m) = num(-beta_m), taken in product form
                long double a = 1.0L;
                for (long double al : alpha)
                    a *= 1.0L - beta[m] / al;
                for (std::size_t j = 0; j < beta.size(); ++j)
                    if (j != m)
                        a /= 1.0L - beta[m] / beta[j];
                const long double fz = g.zeros()[m];
                const long double term = a * fz * lorentz_minus_atan(Fl / fz);
                result += term;
                magnitude += std::abs(term);
            }
            if (!std::isfinite(static_cast<double>(result)) || magnitude > 1e8L * std::abs(result))
                return std::numeric_limits<double>::quiet_NaN();
            return static_cast<double>(result);
        }

        double sigma2_unit_quadrature(const MagSqPoleZeroGnr &g, double F)
        {
            const double w0 = g.gnr0();
            const double top = g.inverse(F) * w0;
            auto integrand = [&](double f) { return top - g.inverse(f) * w0; };
            // Split at corners inside the band so each panel is smooth on its own scale.
            std::vector<double> cuts{0.0};
            for (double c : g.zeros())
                if (c < F)
                    cuts.push_back(c);
            for (double c : g.poles())
                if (c < F)
                    cuts.push_back(c);
            cuts.push_back(F);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1],
                                                                                      20, 1e-12);
            return total;
        }

        double inverse_gnr_scaled(const MagSqPoleZeroGnr &g, double gamma, double f) { return gamma * g.inverse(f); }
    }

    // -- grid -------------------------------------------------------------------------------------

    SpectralGrid::SpectralGrid(std::vector<double> freqs_hz, std::vector<double> weights_hz)
        : freqs_(std::move(freqs_hz)), weights_(std::move(weights_hz))
    {
        if (freqs_.empty() || freqs_.size() != weights_.size())
            throw InvalidArgument("spectral grid needs matching, non-empty frequency and weight lists");
        for (std::size_t i = 0; i < freqs_.size(); ++i)
        {
            if (!std::isfinite(freqs_[i]) || freqs_[i] < 0.0 || (i > 0 && !(freqs_[i] > freqs_[i - 1])))
                throw InvalidArgument("spectral grid frequencies must be finite, >= 0 and strictly increasing");
            if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0)
                throw InvalidArgument("spectral grid weights must be finite and > 0");
        }
    }

    SpectralGrid SpectralGrid::subcarriers(std::size_t count, FrequencyHz f_chip)
    {
        if (count == 0)
            throw InvalidArgument("subcarrier count must be positive");
        checked_corner(f_chip.value(), "f_chip");
        const double delta = f_chip.value() / static_cast<double>(count);
        std::vector<double> f(count), w(count, delta);
        for (std::size_t k = 0; k < count; ++k)
            f[k] = static_cast<double>(k + 1) * delta;
        return {std::move(f), std::move(w)};
    }

    PowerMap PowerMap::identity()
    {
        return {[](double s) { return s; }, [](double p) { return p; }};
    }

    // -- closed forms -----------------------------------------------------------------------------

    double psd_opt(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max, FrequencyHz f)
    {
        require_monotone(g, f_max);
        if (f >= f_max)
            return 0.0;
        const double s = gap.linear() * (g.inverse(f_max.value()) - g.inverse(f.value()));
        return std::max(0.0, s);
    }

    double sigma2_of_fmax(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max)
    {
        require_monotone(g, f_max);
        const double F = f_max.value();
        if (F == 0.0)
            return 0.0;
        const double w0 = gap.linear() / g.gnr0();
        const double unit = sigma2_unit_partial_fraction(g, F);
        if (std::isfinite(unit))
            return w0 * unit;
        return w0 * sigma2_unit_quadrature(g, F);
    }

    double sigma2_of_fmax_quadrature(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max)
    {
        require_monotone(g, f_max);
        if (f_max.value() == 0.0)
            return 0.0;
        return gap.linear() / g.gnr0() * sigma2_unit_quadrature(g, f_max.value());
    }

    double rate_closed_form(const MagSqPoleZeroGnr &g, ModulationGap, FrequencyHz f_max)
    {
        require_monotone(g, f_max);
        const double F = f_max.value();
        // (N-M) F is distributed over the corners so each term is c (x - atan x) >= 0.
        double acc = 0.0;
        for (double p : g.poles())
            acc += p * x_minus_atan(F / p);
        for (double z : g.zeros())
            acc -= z * x_minus_atan(F / z);
        return 2.0 / std::numbers::ln2 * acc;
    }

    double dsigma2_dfmax(const MagSqPoleZeroGnr &g, ModulationGap gap, FrequencyHz f_max)
    {
        require_monotone(g, f_max);
        const double F = f_max.value();
        return -2.0 * gap.linear() * F * F * g.log_slope(F) * g.inverse(F);
    }

    double flat_spectrum_rate(const MagSqPoleZeroGnr &g, ModulationGap gap, double sigma2_budget, FrequencyHz band)
    {
        if (!(sigma2_budget >= 0.0) || !std::isfinite(sigma2_budget))
            throw InvalidArgument("sigma2 budget must be finite and >= 0");
        const double B = band.value();
        if (B == 0.0 || sigma2_budget == 0.0)
            return 0.0;
        const double snr_scale = sigma2_budget / B / gap.linear();
        auto integrand = [&](double f) { return std::log2(1.0 + snr_scale * g(f)); };
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, B, 20, 1e-12);
    }

    FrequencyHz fmax_for_sigma2(const MagSqPoleZeroGnr &g, ModulationGap gap, double sigma2_budget, FrequencyHz f_hi)
    {
        if (!(sigma2_budget >= 0.0))
            throw InvalidArgument("sigma2 budget must be >= 0");
        require_monotone(g, f_hi);
        if (sigma2_budget == 0.0)
            return FrequencyHz(0.0);
        if (sigma2_of_fmax(g, gap, f_hi) <= sigma2_budget)
            return f_hi;

        auto residual = [&](double f) { return sigma2_of_fmax(g, gap, FrequencyHz(f)) - sigma2_budget; };
        std::uintmax_t max_iter = 200;
        auto tol = boost::math::tools::eps_tolerance<double>(50);
        auto [lo, hi] = boost::math::tools::toms748_solve(residual, 0.0, f_hi.value(), -sigma2_budget,
                                                          residual(f_hi.value()), tol, max_iter);
        return FrequencyHz(0.5 * (lo + hi));
    }

    // -- Newton on the subcarrier grid ------------------------------------------------------------

    double grid_sigma2(const MagSqPoleZeroGnr &g, ModulationGap gap, std::size_t k_max, std::size_t subcarrier_count,
                       FrequencyHz f_chip)
    {
        const double delta = f_chip.value() / static_cast<double>(subcarrier_count);
        const double top = inverse_gnr_scaled(g, gap.linear(), static_cast<double>(k_max) * delta);
        double s = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k)
            s += delta * std::max(0.0, top - inverse_gnr_scaled(g, gap.linear(), static_cast<double>(k) * delta));
        return s;
    }

    namespace
    {
        WaterfillSolution grid_solution(const MagSqPoleZeroGnr &g, ModulationGap gap, std::size_t k_star,
                                        std::size_t K, double delta)
        {
            WaterfillSolution sol;
            sol.freqs_hz.resize(K);
            sol.weights_hz.assign(K, delta);
            sol.psd.assign(K, 0.0);
            sol.gnr.resize(K);
            sol.f_max_hz = static_cast<double>(k_star) * delta;
            sol.water_level = gap.linear() * g.inverse(sol.f_max_hz);
            for (std::size_t i = 0; i < K; ++i)
            {
                const double f = static_cast<double>(i + 1) * delta;
                sol.freqs_hz[i] = f;
                sol.gnr[i] = g(f);
                const double w = gap.linear() * g.inverse(f);
                if (i + 1 <= k_star)
                    sol.psd[i] = std::max(0.0, sol.water_level - w);
                sol.sigma2 += delta * sol.psd[i];
                sol.rate_bps += delta * std::log2(1.0 + sol.psd[i] / w);
            }
            return sol;
        }

        std::size_t nearest_subcarrier(double f, double delta, std::size_t K)
        {
            // Ties resolve to the lower index.
            const double x = f / delta;
            double k = std::ceil(x - 0.5);
            k = std::clamp(k, 1.0, static_cast<double>(K));
            return static_cast<std::size_t>(k);
        }
    }

    WaterfillSolution newton_fmax(const MagSqPoleZeroGnr &g, ModulationGap gap, double sigma2_budget,
                                  std::size_t K, FrequencyHz f_chip, NewtonOptions options)
    {
        if (K < 2)
            throw InvalidArgument("newton_fmax needs at least 2 subcarriers");
        checked_corner(f_chip.value(), "f_chip");
        if (!std::isfinite(sigma2_budget) || sigma2_budget <= 0.0)
            throw InvalidArgument("sigma2 budget must be finite and > 0");
        require_monotone(g, f_chip);

        const double delta = f_chip.value() / static_cast<double>(K);
        auto power_at = [&](std::size_t k) { return grid_sigma2(g, gap, k, K, f_chip); };

        SolverStats stats;
        double f_cur = f_chip.value();
        double s_cur = power_at(K);
        stats.trace.push_back(f_cur);

        if (s_cur <= sigma2_budget)
        {
            stats.saturated = true;
            auto sol = grid_solution(g, gap, K, K, delta);
            sol.stats = std::move(stats);
            return sol;
        }

        // Grid power is non-decreasing in k, so every evaluation tightens the
        // bracket (k_lo feasible, k_hi over budget). power_at(1) is always 0.
        std::size_t k_lo = 1, k_hi = K;
        std::size_t k_cur = K;
        std::size_t k_star = 0;
        while (k_hi - k_lo > 1)
        {
            if (stats.iterations >= options.max_iterations)
                throw ConvergenceError("newton_fmax did not converge in " + std::to_string(options.max_iterations) +
                                           " iterations",
                                       stats.trace);
            ++stats.iterations;

            const double slope = -2.0 * gap.linear() * f_cur * f_cur * g.log_slope(f_cur) * g.inverse(f_cur);
            const double f_next = f_cur - (s_cur - sigma2_budget) / slope;
            std::size_t k = 0;
            if (std::isfinite(f_next) && f_next > 0.0 && f_next <= f_chip.value())
                k = nearest_subcarrier(f_next, delta, K);
            if (k == k_cur)
            {
                if (s_cur <= sigma2_budget)
                {
                    k_star = k_cur;
                    break;
                }
                // snapped back onto an over-budget point: move one subcarrier down
                k = k_cur - 1;
            }
            if (k <= k_lo || k >= k_hi)
            {
                stats.bisection_fallback = true;
                k = k_lo + (k_hi - k_lo) / 2;
            }

            const double s_next = power_at(k);
            stats.trace.push_back(static_cast<double>(k) * delta);
            (s_next <= sigma2_budget ? k_lo : k_hi) = k;
            k_cur = k;
            f_cur = static_cast<double>(k) * delta;
            s_cur = s_next;
        }
        if (k_star == 0)
            k_star = k_lo;

        while (k_star + 1 < k_hi && power_at(k_star + 1) <= sigma2_budget)
        {
            ++k_star;
            ++stats.polish_steps;
        }

        auto sol = grid_solution(g, gap, k_star, K, delta);
        sol.stats = std::move(stats);
        return sol;
    }

    // -- water-level bisection --------------------------------------------------------------------

    WaterfillSolution waterlevel_solve(const GnrFunction &gnr, ModulationGap gap, double sigma2_budget,
                                       const SpectralGrid &grid)
    {
        if (!std::isfinite(sigma2_budget) || sigma2_budget <= 0.0)
            throw InvalidArgument("sigma2 budget must be finite and > 0");

        const std::size_t n = grid.size();
        const auto &f = grid.freqs();
        const auto &w = grid.weights();
        std::vector<double> gv(n), level(n);
        constexpr double inf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
        {
            gv[i] = gnr(f[i]);
            level[i] = (std::isfinite(gv[i]) && gv[i] > 0.0) ? gap.linear() / gv[i] : inf;
        }

        const auto imin = static_cast<std::size_t>(std::min_element(level.begin(), level.end()) - level.begin());
        if (!std::isfinite(level[imin]))
            throw InvalidArgument("GNR is not positive anywhere on the grid");

        auto power = [&](double v)
        {
            double p = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (level[i] < v)
                    p += w[i] * (v - level[i]);
            return p;
        };

        double lo = level[imin];
        double hi = level[imin] + sigma2_budget / w[imin];
        SolverStats stats;
        for (int it = 0; it < 400 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it)
        {
            ++stats.iterations;
            const double mid = 0.5 * (lo + hi);
            if (power(mid) < sigma2_budget)
                lo = mid;
            else
                hi = mid;
        }
        double v = 0.5 * (lo + hi);

        // Power is linear in v on a fixed support; solve it exactly there.
        {
            double wsum = 0.0, wlevel = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (level[i] < v)
                {
                    wsum += w[i];
                    wlevel += w[i] * level[i];
                }
            const double exact = (sigma2_budget + wlevel) / wsum;
            bool same_support = true;
            for (std::size_t i = 0; i < n && same_support; ++i)
                same_support = (level[i] < v) == (level[i] < exact);
            if (same_support && std::abs(power(exact) - sigma2_budget) <= std::abs(power(v) - sigma2_budget))
                v = exact;
        }

        WaterfillSolution sol;
        sol.freqs_hz = f;
        sol.weights_hz = w;
        sol.gnr = gv;
        sol.psd.assign(n, 0.0);
        sol.water_level = v;
        std::size_t last = 0;
        bool any = false;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (level[i] < v)
            {
                sol.psd[i] = v - level[i];
                sol.sigma2 += w[i] * sol.psd[i];
                sol.rate_bps += w[i] * std::log2(v / level[i]);
                last = i;
                any = true;
            }
        }
        sol.f_max_hz = any ? f[last] : 0.0;
        for (std::size_t i = 0; any && i < last;)
        {
            if (sol.psd[i] == 0.0)
            {
                std::size_t j = i;
                while (j + 1 < last && sol.psd[j + 1] == 0.0)
                    ++j;
                sol.island.push_back({f[i], f[j]});
                i = j + 1;
            }
            else
                ++i;
        }

        if (std::abs(sol.sigma2 - sigma2_budget) > 1e-9 * sigma2_budget)
            throw ConvergenceError("water-level bisection missed the power budget", {v});
        sol.stats = std::move(stats);
        return sol;
    }

    KktReport check_kkt(const WaterfillSolution &s, ModulationGap gap)
    {
        KktReport r;
        r.min_psd = s.psd.empty() ? 0.0 : *std::min_element(s.psd.begin(), s.psd.end());
        const double v = s.water_level;
        for (std::size_t i = 0; i < s.psd.size(); ++i)
        {
            const double level = (s.gnr[i] > 0.0 && std::isfinite(s.gnr[i]))
                                     ? gap.linear() / s.gnr[i]
                                     : std::numeric_limits<double>::infinity();
            const double S = s.psd[i];
            if (S > 0.0)
            {
                r.max_level_error = std::max(r.max_level_error, std::abs(S + level - v) / v);
                r.max_slackness = std::max(r.max_slackness, std::abs(S * (v - level - S)) / (v * v));
            }
            else
            {
                r.max_dual_violation = std::max(r.max_dual_violation, (v - level) / v);
            }
        }
        return r;
    }
}
