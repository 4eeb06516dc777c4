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

#include "owclb/linkchain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace owclb
{
    namespace
    {
        template <class... Ts>
        struct overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        overloaded(Ts...) -> overloaded<Ts...>;

        void require_gain(double g, const char *what)
        {
            if (!std::isfinite(g) || g <= 0.0)
                throw InvalidArgument(std::string(what) + " must be finite and > 0, got " + std::to_string(g));
        }

        double corner_factor(double f, double corner)
        {
            const double r = f / corner;
            return 1.0 + r * r;
        }

        double sinc(double x)
        {
            if (std::abs(x) < 1e-4)
                return 1.0 - x * x / 6.0;
            return std::sin(x) / x;
        }
    }

    // -- validation -------------------------------------------------------------------------------

    FlatGain ComponentResponse::validate(FlatGain s)
    {
        require_gain(s.gain, "flat_gain.gain");
        return s;
    }

    FirstOrderLowPass ComponentResponse::validate(FirstOrderLowPass s)
    {
        require_gain(s.dc_gain, "first_order_low_pass.dc_gain");
        checked_corner(s.corner.value(), "first_order_low_pass.corner");
        return s;
    }

    RationalPoleZero ComponentResponse::validate(RationalPoleZero s)
    {
        require_gain(s.dc_gain, "rational_pole_zero.dc_gain");
        for (auto z : s.zeros)
            checked_corner(z.value(), "rational_pole_zero.zeros");
        for (auto p : s.poles)
            checked_corner(p.value(), "rational_pole_zero.poles");
        return s;
    }

    LaserSecondOrder ComponentResponse::validate(LaserSecondOrder s)
    {
        require_gain(s.dc_gain, "laser_second_order.dc_gain");
        checked_corner(s.relaxation_freq.value(), "laser_second_order.relaxation_freq");
        require_gain(s.damping, "laser_second_order.damping");
        return s;
    }

    GaussianLowPass ComponentResponse::validate(GaussianLowPass s)
    {
        require_gain(s.dc_gain, "gaussian_low_pass.dc_gain");
        checked_corner(s.corner.value(), "gaussian_low_pass.corner");
        return s;
    }

    BeamSquintSinc ComponentResponse::validate(BeamSquintSinc s)
    {
        require_gain(s.element_gain, "beam_squint_sinc.element_gain");
        if (s.elements < 1)
            throw InvalidArgument("beam_squint_sinc.elements must be >= 1");
        require_gain(s.spacing_delay, "beam_squint_sinc.spacing_delay");
        return s;
    }

    Tabulated ComponentResponse::validate(Tabulated s)
    {
        if (s.table.empty())
            throw InvalidArgument("tabulated.table must not be empty");
        return s;
    }

    // -- ComponentResponse ------------------------------------------------------------------------

    std::string_view ComponentResponse::kind() const noexcept
    {
        return std::visit(overloaded{
                              [](const FlatGain &) { return std::string_view("flat_gain"); },
                              [](const FirstOrderLowPass &) { return std::string_view("first_order_low_pass"); },
                              [](const RationalPoleZero &) { return std::string_view("rational_pole_zero"); },
                              [](const LaserSecondOrder &) { return std::string_view("laser_second_order"); },
                              [](const GaussianLowPass &) { return std::string_view("gaussian_low_pass"); },
                              [](const BeamSquintSinc &) { return std::string_view("beam_squint_sinc"); },
                              [](const Tabulated &) { return std::string_view("tabulated"); },
                          },
                          v_);
    }

    double ComponentResponse::dc_magsq() const
    {
        return std::visit(overloaded{
                              [](const FlatGain &s) { return s.gain * s.gain; },
                              [](const FirstOrderLowPass &s) { return s.dc_gain * s.dc_gain; },
                              [](const RationalPoleZero &s) { return s.dc_gain * s.dc_gain; },
                              [](const LaserSecondOrder &s) { return s.dc_gain * s.dc_gain; },
                              [](const GaussianLowPass &s) { return s.dc_gain * s.dc_gain; },
                              [](const BeamSquintSinc &s)
                              {
                                  const double a = s.element_gain * s.elements * speed_of_light * s.spacing_delay;
                                  return a * a;
                              },
                              [](const Tabulated &) -> double
                              { throw InvalidArgument("tabulated stage has no analytic DC gain"); },
                          },
                          v_);
    }

    bool ComponentResponse::is_monotone() const noexcept
    {
        if (const auto *l = std::get_if<LaserSecondOrder>(&v_))
            return l->relaxation_freq.value() <= l->damping / std::numbers::sqrt2;
        if (const auto *r = std::get_if<RationalPoleZero>(&v_))
        {
            std::vector<double> z, p;
            for (auto f : r->zeros)
                z.push_back(f.value());
            for (auto f : r->poles)
                p.push_back(f.value());
            double hi = 1.0;
            for (double c : z)
                hi = std::max(hi, c);
            for (double c : p)
                hi = std::max(hi, c);
            return is_monotone_decreasing(MagSqPoleZeroGnr(1.0, z, p), FrequencyHz(hi * 1e3));
        }
        return !std::holds_alternative<Tabulated>(v_);
    }

    bool ComponentResponse::is_reducible() const noexcept
    {
        return std::visit(overloaded{
                              [](const FlatGain &) { return true; },
                              [](const FirstOrderLowPass &) { return true; },
                              [](const RationalPoleZero &) { return true; },
                              [](const LaserSecondOrder &s) { return laser_real_poles(s).has_value(); },
                              [](const GaussianLowPass &) { return false; },
                              [](const BeamSquintSinc &) { return false; },
                              [](const Tabulated &) { return false; },
                          },
                          v_);
    }

    std::optional<std::pair<double, double>> laser_real_poles(const LaserSecondOrder &laser)
    {
        // |H|^2 denominator in u = f^2: u^2 + (gamma^2 - 2 fR^2) u + fR^4.
        const double fr2 = laser.relaxation_freq.value() * laser.relaxation_freq.value();
        const double b = laser.damping * laser.damping - 2.0 * fr2;
        const double disc = b * b - 4.0 * fr2 * fr2;
        if (b <= 0.0 || disc < 0.0)
            return std::nullopt;
        const double sq = std::sqrt(disc);
        // Roots -a^2, -c^2 with a^2 + c^2 = b and a^2 c^2 = fR^4; the product form avoids cancellation.
        const double big = 0.5 * (b + sq);
        const double small = fr2 * fr2 / big;
        return std::pair{std::sqrt(small), std::sqrt(big)};
    }

    double eval_component_magsq(const ComponentResponse &c, FrequencyHz freq)
    {
        const double f = freq.value();
        return std::visit(overloaded{
                              [](const FlatGain &s) { return s.gain * s.gain; },
                              [f](const FirstOrderLowPass &s)
                              { return s.dc_gain * s.dc_gain / corner_factor(f, s.corner.value()); },
                              [f](const RationalPoleZero &s)
                              {
                                  double h = s.dc_gain * s.dc_gain;
                                  for (auto z : s.zeros)
                                      h *= corner_factor(f, z.value());
                                  for (auto p : s.poles)
                                      h /= corner_factor(f, p.value());
                                  return h;
                              },
                              [f](const LaserSecondOrder &s)
                              {
                                  const double fr2 = s.relaxation_freq.value() * s.relaxation_freq.value();
                                  const double d = fr2 - f * f;
                                  const double gf = s.damping * f;
                                  return s.dc_gain * s.dc_gain * fr2 * fr2 / (d * d + gf * gf);
                              },
                              [f](const GaussianLowPass &s)
                              {
                                  const double r = f / s.corner.value();
                                  return s.dc_gain * s.dc_gain * std::exp(-2.0 * r * r);
                              },
                              [f](const BeamSquintSinc &s)
                              {
                                  const double a = s.element_gain * s.elements * speed_of_light * s.spacing_delay;
                                  const double sc = sinc(std::numbers::pi * f * s.elements * s.spacing_delay);
                                  return a * a * sc * sc;
                              },
                              [f](const Tabulated &s) { return s.table.interpolate(f); },
                          },
                          c.variant());
    }

    // -- noise ------------------------------------------------------------------------------------

    NoiseSpectrum::NoiseSpectrum(double floor_v2_per_hz, std::optional<FrequencyHz> uplift_zero,
                                 std::vector<FrequencyHz> rolloff_poles, std::vector<FrequencyHz> rolloff_zeros)
        : floor_(floor_v2_per_hz), uplift_zero_(uplift_zero), rolloff_poles_(std::move(rolloff_poles)),
          rolloff_zeros_(std::move(rolloff_zeros))
    {
        require_gain(floor_, "noise.floor");
        if (uplift_zero_)
            checked_corner(uplift_zero_->value(), "noise.uplift_zero");
        for (auto p : rolloff_poles_)
            checked_corner(p.value(), "noise.rolloff_poles");
        for (auto z : rolloff_zeros_)
            checked_corner(z.value(), "noise.rolloff_zeros");
    }

    double eval_noise_psd(const NoiseSpectrum &n, FrequencyHz freq)
    {
        const double f = freq.value();
        double s = n.floor();
        if (n.uplift_zero())
            s *= corner_factor(f, n.uplift_zero()->value());
        for (auto z : n.rolloff_zeros())
            s *= corner_factor(f, z.value());
        for (auto p : n.rolloff_poles())
            s /= corner_factor(f, p.value());
        return s;
    }

    // -- chain ------------------------------------------------------------------------------------

    LinkChain::LinkChain(std::vector<ComponentResponse> stages, NoiseSpectrum noise)
        : stages_(std::move(stages)), noise_(std::move(noise))
    {
        if (stages_.empty())
            throw InvalidArgument("link chain needs at least one stage");
    }

    double chain_gain_magsq(const LinkChain &chain, FrequencyHz f)
    {
        double h = 1.0;
        for (const auto &s : chain.stages())
            h *= eval_component_magsq(s, f);
        return h;
    }

    double gnr_eval(const LinkChain &chain, FrequencyHz f)
    {
        return chain_gain_magsq(chain, f) / eval_noise_psd(chain.noise(), f);
    }

    MagSqPoleZeroGnr reduce_to_polezero(const LinkChain &chain)
    {
        std::vector<double> zeros;
        std::vector<double> poles;
        double gain = 1.0;

        for (const auto &stage : chain.stages())
        {
            std::visit(overloaded{
                           [&](const FlatGain &s) { gain *= s.gain * s.gain; },
                           [&](const FirstOrderLowPass &s)
                           {
                               gain *= s.dc_gain * s.dc_gain;
                               poles.push_back(s.corner.value());
                           },
                           [&](const RationalPoleZero &s)
                           {
                               gain *= s.dc_gain * s.dc_gain;
                               for (auto z : s.zeros)
                                   zeros.push_back(z.value());
                               for (auto p : s.poles)
                                   poles.push_back(p.value());
                           },
                           [&](const LaserSecondOrder &s)
                           {
                               auto rp = laser_real_poles(s);
                               if (!rp)
                                   throw NotReducibleError(
                                       "laser_second_order with complex poles (fR > gamma/2) is not reducible; "
                                       "sample it and use the fit module");
                               gain *= s.dc_gain * s.dc_gain;
                               poles.push_back(rp->first);
                               poles.push_back(rp->second);
                           },
                           [&](const auto &)
                           {
                               throw NotReducibleError(std::string(stage.kind()) +
                                                       " stage is not reducible to poles and zeros; "
                                                       "sample it and use the fit module");
                           },
                       },
                       stage.variant());
        }

        const auto &noise = chain.noise();
        gain /= noise.floor();
        if (noise.uplift_zero())
            poles.push_back(noise.uplift_zero()->value());
        for (auto z : noise.rolloff_zeros())
            poles.push_back(z.value());
        for (auto p : noise.rolloff_poles())
            zeros.push_back(p.value());

        // Multiset cancellation of matching pole/zero pairs.
        std::sort(zeros.begin(), zeros.end());
        std::sort(poles.begin(), poles.end());
        std::vector<bool> pole_used(poles.size(), false);
        std::vector<double> kept_zeros;
        for (double z : zeros)
        {
            bool cancelled = false;
            for (std::size_t j = 0; j < poles.size(); ++j)
            {
                if (!pole_used[j] && std::abs(poles[j] - z) <= cancellation_rel_tol * std::max(poles[j], z))
                {
                    pole_used[j] = true;
                    cancelled = true;
                    break;
                }
            }
            if (!cancelled)
                kept_zeros.push_back(z);
        }
        std::vector<double> kept_poles;
        for (std::size_t j = 0; j < poles.size(); ++j)
            if (!pole_used[j])
                kept_poles.push_back(poles[j]);

        return MagSqPoleZeroGnr(gain, std::move(kept_zeros), std::move(kept_poles));
    }
}
