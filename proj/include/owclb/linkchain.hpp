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
#include "owclb/response_table.hpp"
#include "owclb/units.hpp"

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace owclb
{
    // ---------------------------------------------------------------------------------------------
    // Link stages. All responses are handled as magnitude-squared quantities; phase is not modelled.
    // ---------------------------------------------------------------------------------------------

    /// Frequency-flat amplitude gain (free-space path loss, element gain, ...).
    struct FlatGain
    {
        double gain = 1.0;
    };

    /// dc_gain / (1 + j f/corner): LED, phosphor, diffuse channel, photodiode.
    struct FirstOrderLowPass
    {
        double dc_gain = 1.0;
        FrequencyHz corner;
    };

    /// dc_gain * prod(1 + j f/fz) / prod(1 + j f/fp): high-order LED or modulator
    /// models, PD-TIA front ends.
    struct RationalPoleZero
    {
        double dc_gain = 1.0;
        std::vector<FrequencyHz> zeros;
        std::vector<FrequencyHz> poles;
    };

    /// dc_gain * fR^2 / (fR^2 - f^2 - j*gamma*f).
    struct LaserSecondOrder
    {
        double dc_gain = 1.0;
        FrequencyHz relaxation_freq;
        double damping = 0.0; ///< gamma, in Hz
    };

    /// dc_gain * exp(-(f/corner)^2): plastic optical fibre.
    struct GaussianLowPass
    {
        double dc_gain = 1.0;
        FrequencyHz corner;
    };

    /// Beam squint of an X-element phased array or reflective surface.
    ///
    /// |H|^2 = (element_gain * X * c * spacing_delay)^2 * sinc^2(pi f X spacing_delay),
    /// where spacing_delay = delta_d * phi(theta) / c in seconds and
    /// sinc(x) = sin(x)/x. The whole prefactor is treated as one linear gain.
    struct BeamSquintSinc
    {
        double element_gain = 1.0;
        int elements = 1;
        double spacing_delay = 0.0; ///< seconds
    };

    /// Measured or simulated magnitude-squared response, interpolated log-log.
    struct Tabulated
    {
        ResponseTable table;
    };

    /// Speed of light used by BeamSquintSinc, m/s.
    inline constexpr double speed_of_light = 299792458.0;

    /// One stage of the link. Validated on construction.
    class ComponentResponse
    {
    public:
        using Variant = std::variant<FlatGain, FirstOrderLowPass, RationalPoleZero, LaserSecondOrder,
                                     GaussianLowPass, BeamSquintSinc, Tabulated>;

        ComponentResponse(FlatGain s) : v_(validate(s)) {}
        ComponentResponse(FirstOrderLowPass s) : v_(validate(s)) {}
        ComponentResponse(RationalPoleZero s) : v_(validate(std::move(s))) {}
        ComponentResponse(LaserSecondOrder s) : v_(validate(s)) {}
        ComponentResponse(GaussianLowPass s) : v_(validate(s)) {}
        ComponentResponse(BeamSquintSinc s) : v_(validate(s)) {}
        ComponentResponse(Tabulated s) : v_(validate(std::move(s))) {}

        const Variant &variant() const noexcept { return v_; }

        /// Stable identifier used in channel files ("first_order_low_pass", ...).
        std::string_view kind() const noexcept;

        /// |H(0)|^2 (sinc: the f -> 0 limit). Not defined for Tabulated.
        double dc_magsq() const;

        /// False for an under-damped laser with a resonant peak (fR > gamma/sqrt(2)),
        /// and for Tabulated data, whose shape is unknown.
        bool is_monotone() const noexcept;

        /// True if the stage factors into real first-order poles and zeros.
        bool is_reducible() const noexcept;

    private:
        static FlatGain validate(FlatGain s);
        static FirstOrderLowPass validate(FirstOrderLowPass s);
        static RationalPoleZero validate(RationalPoleZero s);
        static LaserSecondOrder validate(LaserSecondOrder s);
        static GaussianLowPass validate(GaussianLowPass s);
        static BeamSquintSinc validate(BeamSquintSinc s);
        static Tabulated validate(Tabulated s);

        Variant v_;
    };

    /// |H(f)|^2 of one stage. Tabulated stages throw RangeError outside their table.
    double eval_component_magsq(const ComponentResponse &c, FrequencyHz f);

    /// Real corner frequencies of a critically- or over-damped laser (fR <= gamma/2).
    /// Returns nullopt when the poles are complex.
    std::optional<std::pair<double, double>> laser_real_poles(const LaserSecondOrder &laser);

    // ---------------------------------------------------------------------------------------------
    // Receiver noise
    // ---------------------------------------------------------------------------------------------

    /// Output noise PSD in V^2/Hz:
    ///
    ///     floor * (1 + f^2/uplift^2) * prod(1 + f^2/rz^2) / prod(1 + f^2/rp^2)
    ///
    /// The uplift zero models the capacitive noise boost of a PD-TIA front end,
    /// rolloff_poles the amplifier bandwidth limit. rolloff_zeros carries zeros
    /// of the amplifier response that also shape the noise; leave empty when the
    /// noise has only the one uplift zero.
    class NoiseSpectrum
    {
    public:
        NoiseSpectrum(double floor_v2_per_hz, std::optional<FrequencyHz> uplift_zero = std::nullopt,
                      std::vector<FrequencyHz> rolloff_poles = {}, std::vector<FrequencyHz> rolloff_zeros = {});

        double floor() const noexcept { return floor_; }
        const std::optional<FrequencyHz> &uplift_zero() const noexcept { return uplift_zero_; }
        const std::vector<FrequencyHz> &rolloff_poles() const noexcept { return rolloff_poles_; }
        const std::vector<FrequencyHz> &rolloff_zeros() const noexcept { return rolloff_zeros_; }

    private:
        double floor_;
        std::optional<FrequencyHz> uplift_zero_;
        std::vector<FrequencyHz> rolloff_poles_;
        std::vector<FrequencyHz> rolloff_zeros_;
    };

    double eval_noise_psd(const NoiseSpectrum &n, FrequencyHz f);

    // ---------------------------------------------------------------------------------------------
    // Cascade
    // ---------------------------------------------------------------------------------------------

    class LinkChain
    {
    public:
        LinkChain(std::vector<ComponentResponse> stages, NoiseSpectrum noise);

        const std::vector<ComponentResponse> &stages() const noexcept { return stages_; }
        const NoiseSpectrum &noise() const noexcept { return noise_; }

    private:
        std::vector<ComponentResponse> stages_;
        NoiseSpectrum noise_;
    };

    /// prod_i |H_i(f)|^2.
    double chain_gain_magsq(const LinkChain &chain, FrequencyHz f);

    /// GNR(f) = prod_i |H_i(f)|^2 / S_N(f), linear.
    double gnr_eval(const LinkChain &chain, FrequencyHz f);

    /// Relative tolerance under which a pole and a zero are considered equal and cancelled.
    inline constexpr double cancellation_rel_tol = 1e-9;

    /// Collects every stage and noise corner into one MagSqPoleZeroGnr.
    ///
    /// Stage zeros and noise poles become GNR zeros; stage poles and noise zeros
    /// become GNR poles. Pole/zero pairs whose corners agree to
    /// cancellation_rel_tol are removed. Throws NotReducibleError for Gaussian,
    /// sinc, tabulated and under-damped laser stages.
    MagSqPoleZeroGnr reduce_to_polezero(const LinkChain &chain);
}
