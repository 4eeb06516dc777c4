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

#include "oracles.hpp"

#include "owclb/gnr_model.hpp"
#include "owclb/linkchain.hpp"
#include "owclb/response_table.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>
#include <numeric>

using namespace owclb;
using namespace owclb::literals;
using owclb::testing::rel_err;
using Catch::Approx;

TEST_CASE("FrequencyHz rejects negative and non-finite values")
{
    CHECK_THROWS_AS(FrequencyHz(-1.0), InvalidArgument);
    CHECK_THROWS_AS(FrequencyHz(std::numeric_limits<double>::infinity()), InvalidArgument);
    CHECK_THROWS_AS(FrequencyHz(std::nan("")), InvalidArgument);
    CHECK(FrequencyHz(0.0).value() == 0.0);
    CHECK((2.5_MHz).value() == 2.5e6);
    CHECK(1_kHz < 1_MHz);
}

TEST_CASE("ModulationGap converts dB once and enforces gamma >= 1")
{
    CHECK(ModulationGap::from_db(0.0).linear() == 1.0);
    CHECK(ModulationGap::from_db(6.06).linear() == Approx(std::pow(10.0, 0.606)).epsilon(1e-15));
    CHECK(ModulationGap::from_db(6.06).db() == Approx(6.06).epsilon(1e-14));
    CHECK_THROWS_AS(ModulationGap(0.5), InvalidArgument);
    CHECK_THROWS_AS(ModulationGap::from_db(-1.0), InvalidArgument);
}

TEST_CASE("ResponseTable interpolates log-log and forbids extrapolation")
{
    ResponseTable t({{1e3, 1.0}, {1e5, 1e-4}});
    CHECK(t.interpolate(1e3) == 1.0);
    CHECK(t.interpolate(1e5) == Approx(1e-4).epsilon(1e-14));
    // a power law is reproduced exactly between the nodes
    CHECK(t.interpolate(1e4) == Approx(1e-2).epsilon(1e-12));
    CHECK_THROWS_AS(t.interpolate(999.0), RangeError);
    CHECK_THROWS_AS(t.interpolate(1.1e5), RangeError);

    CHECK_THROWS_AS(ResponseTable({{1e3, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(ResponseTable({{1e3, 1.0}, {1e3, 2.0}}), InvalidArgument);
    CHECK_THROWS_AS(ResponseTable({{1e3, 1.0}, {1e4, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(ResponseTable({{0.0, 1.0}, {1e4, 1.0}}), InvalidArgument);
}

TEST_CASE("eval_component_magsq examples")
{
    SECTION("first-order low-pass is 3 dB down at its corner")
    {
        CHECK(eval_component_magsq(FirstOrderLowPass{1.0, 5_MHz}, 5_MHz) == Approx(0.5).epsilon(1e-15));
    }
    SECTION("laser DC value")
    {
        CHECK(eval_component_magsq(LaserSecondOrder{1.0, 2_GHz, 3e9}, 0_Hz) == 1.0);
    }
    SECTION("laser formula")
    {
        const LaserSecondOrder l{2.0, 1_GHz, 0.5e9};
        const double f = 0.7e9, fr = 1e9, g = 0.5e9;
        const double expect = 4.0 * std::pow(fr, 4) / (std::pow(fr * fr - f * f, 2) + g * g * f * f);
        CHECK(eval_component_magsq(l, FrequencyHz(f)) == Approx(expect).epsilon(1e-14));
    }
    SECTION("beam squint first sinc null")
    {
        const BeamSquintSinc s{1.0, 16, 1e-10};
        const double f_null = 1.0 / (16 * 1e-10);
        CHECK(eval_component_magsq(s, FrequencyHz(f_null)) < 1e-25);
        const double dc = std::pow(16 * speed_of_light * 1e-10, 2);
        CHECK(eval_component_magsq(s, 0_Hz) == Approx(dc).epsilon(1e-15));
    }
    SECTION("gaussian")
    {
        CHECK(eval_component_magsq(GaussianLowPass{1.0, 1_GHz}, 1_GHz) == Approx(std::exp(-2.0)).epsilon(1e-15));
    }
    SECTION("tabulated interpolates and propagates range errors")
    {
        const Tabulated t{ResponseTable({{1e3, 4.0}, {1e6, 4e-6}})};
        CHECK(eval_component_magsq(t, 1_kHz) == 4.0);
        CHECK_THROWS_AS(eval_component_magsq(t, 1_GHz), RangeError);
    }
}

TEST_CASE("every variant evaluates to dc_gain^2 at f = 0")
{
    using F = FrequencyHz;
    const std::vector<ComponentResponse> stages{
        FlatGain{3.0},
        FirstOrderLowPass{0.9, F(2e6)},
        RationalPoleZero{1.7, {F(1e7), F(3e7)}, {F(1e6), F(2e6), F(5e8)}},
        LaserSecondOrder{1.3, F(4e9), 2e9},
        LaserSecondOrder{0.4, F(4e9), 1e10},
        GaussianLowPass{0.8, F(1e8)},
        BeamSquintSinc{0.3, 8, 2e-10},
    };
    for (const auto &s : stages)
    {
        INFO(s.kind());
        CHECK(eval_component_magsq(s, F(0.0)) == s.dc_magsq());
    }
    CHECK(stages[0].dc_magsq() == 9.0);
    CHECK(stages[6].dc_magsq() == Approx(std::pow(0.3 * 8 * speed_of_light * 2e-10, 2)).epsilon(1e-15));
}

TEST_CASE("stage invariants are enforced on construction")
{
    CHECK_THROWS_AS(ComponentResponse(FlatGain{0.0}), InvalidArgument);
    CHECK_THROWS_AS(ComponentResponse(FirstOrderLowPass{1.0, 0_Hz}), InvalidArgument);
    CHECK_THROWS_AS(ComponentResponse(FirstOrderLowPass{-1.0, 1_MHz}), InvalidArgument);
    CHECK_THROWS_AS(ComponentResponse(RationalPoleZero{1.0, {0_Hz}, {1_MHz}}), InvalidArgument);
    CHECK_THROWS_AS(ComponentResponse(BeamSquintSinc{1.0, 0, 1e-9}), InvalidArgument);
    CHECK_THROWS_AS(ComponentResponse(LaserSecondOrder{1.0, 1_GHz, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(LinkChain({}, NoiseSpectrum(1.0)), InvalidArgument);
    CHECK_THROWS_AS(NoiseSpectrum(0.0), InvalidArgument);
}

TEST_CASE("laser monotone flag and reducibility")
{
    // fR <= gamma/sqrt(2): no resonant peak
    const ComponentResponse flat_top(LaserSecondOrder{1.0, 1_GHz, 1.5e9});
    CHECK(flat_top.is_monotone());
    CHECK_FALSE(flat_top.is_reducible()); // complex poles: gamma/2 < fR
    const ComponentResponse peaked(LaserSecondOrder{1.0, 1_GHz, 1.0e9});
    CHECK_FALSE(peaked.is_monotone());
    const ComponentResponse overdamped(LaserSecondOrder{1.0, 1_GHz, 3e9});
    CHECK(overdamped.is_reducible());

    // the real-pole factorisation reproduces the second-order response
    const auto l = std::get<LaserSecondOrder>(overdamped.variant());
    const auto poles = laser_real_poles(l);
    REQUIRE(poles);
    for (double f : {1e7, 3e8, 1e9, 5e9, 2e10})
    {
        const double fact = 1.0 / ((1 + std::pow(f / poles->first, 2)) * (1 + std::pow(f / poles->second, 2)));
        CHECK(eval_component_magsq(overdamped, FrequencyHz(f)) == Approx(fact).epsilon(1e-12));
    }
    CHECK_FALSE(laser_real_poles(std::get<LaserSecondOrder>(flat_top.variant())));

    // a peaked laser shows the resonance numerically
    CHECK(eval_component_magsq(peaked, 0.9_GHz) > 1.0);
}

TEST_CASE("eval_noise_psd examples")
{
    const NoiseSpectrum white(4.4e-18);
    CHECK(eval_noise_psd(white, 0_Hz) == 4.4e-18);
    CHECK(eval_noise_psd(white, 1_GHz) == 4.4e-18);

    const NoiseSpectrum uplift(4.4e-18, 3.5_MHz);
    CHECK(eval_noise_psd(uplift, 0_Hz) == 4.4e-18);
    CHECK(eval_noise_psd(uplift, 3.5_MHz) == Approx(8.8e-18).epsilon(1e-15));

    // the full receiver noise adds rolloff factors that are within 1% of unity at 3.5 MHz
    const auto chain = owclb::testing::led_link_chain();
    const double n = eval_noise_psd(chain.noise(), 3.5_MHz);
    CHECK(n == Approx(8.8e-18).epsilon(0.01));
    const double rolloff = std::pow(1 + std::pow(3.5 / 430.0, 2), 4) / std::pow(1 + std::pow(3.5 / 100.0, 2), 5);
    CHECK(n == Approx(8.8e-18 * rolloff).epsilon(1e-14));
}

TEST_CASE("gnr_eval on the reference LED link")
{
    const auto chain = owclb::testing::led_link_chain();
    CHECK(rel_err(gnr_eval(chain, 0_Hz), 4.602e10) < 1e-3);
    CHECK(gnr_eval(chain, 0_Hz) == Approx(owclb::testing::led_link_gnr0).epsilon(1e-14));

    // stage by stage at the first LED pole
    const double f = 2.3e6;
    const double tx = 0.81 * (1 + std::pow(f / 14.5e6, 2)) /
                      ((1 + std::pow(f / 2.3e6, 2)) * (1 + std::pow(f / 3.1e6, 2)) * (1 + std::pow(f / 9.4e6, 2)));
    const double rx = 2500.0 * std::pow(1 + std::pow(f / 430e6, 2), 4) / std::pow(1 + std::pow(f / 100e6, 2), 5);
    const double noise = 4.4e-18 * (1 + std::pow(f / 3.5e6, 2)) * std::pow(1 + std::pow(f / 430e6, 2), 4) /
                         std::pow(1 + std::pow(f / 100e6, 2), 5);
    CHECK(gnr_eval(chain, FrequencyHz(f)) == Approx(tx * 1e-10 * rx / noise).epsilon(1e-13));
}

TEST_CASE("flat chain over white noise")
{
    const LinkChain chain({FlatGain{1e-5}}, NoiseSpectrum(4.4e-18));
    for (double f : {0.0, 1e3, 1e6, 1e9})
        CHECK(gnr_eval(chain, FrequencyHz(f)) == Approx(1e-10 / 4.4e-18).epsilon(1e-15));
}

TEST_CASE("reduce_to_polezero")
{
    SECTION("the LED link reproduces the single-zero, four-pole GNR")
    {
        const auto g = reduce_to_polezero(owclb::testing::led_link_chain());
        REQUIRE(g.n_zeros() == 1);
        REQUIRE(g.n_poles() == 4);
        CHECK(g.zeros()[0] == 14.5e6);
        const std::vector<double> poles(g.poles().begin(), g.poles().end());
        CHECK(poles == std::vector<double>{2.3e6, 3.1e6, 3.5e6, 9.4e6});
        CHECK(rel_err(g.gnr0(), 4.602e10) < 1e-3);
        CHECK(g.gnr0() == Approx(owclb::testing::led_link_gnr0).epsilon(1e-14));
    }
    SECTION("equal pole and zero cancel")
    {
        const LinkChain chain({RationalPoleZero{2.0, {7_MHz}, {7_MHz}}}, NoiseSpectrum(0.5));
        const auto g = reduce_to_polezero(chain);
        CHECK(g.n_zeros() == 0);
        CHECK(g.n_poles() == 0);
        CHECK(g.gnr0() == 8.0);
    }
    SECTION("near-cancellations beyond the tolerance are kept")
    {
        const LinkChain chain({RationalPoleZero{1.0, {FrequencyHz(7e6 * (1 + 1e-7))}, {7_MHz}}}, NoiseSpectrum(1.0));
        const auto g = reduce_to_polezero(chain);
        CHECK(g.n_zeros() == 1);
        CHECK(g.n_poles() == 1);
    }
    SECTION("two cascaded first-order stages over white noise")
    {
        const LinkChain chain({FirstOrderLowPass{1.0, 20_MHz}, FirstOrderLowPass{1.0, 5_MHz}}, NoiseSpectrum(1.0));
        const auto g = reduce_to_polezero(chain);
        CHECK(g.n_zeros() == 0);
        REQUIRE(g.n_poles() == 2);
        CHECK(g.poles()[0] == 5e6);
        CHECK(g.poles()[1] == 20e6);
    }
    SECTION("non-rational stages are rejected with a pointer to the fit module")
    {
        for (const ComponentResponse &s : std::vector<ComponentResponse>{
                 GaussianLowPass{1.0, 1_GHz}, BeamSquintSinc{1.0, 4, 1e-10},
                 LaserSecondOrder{1.0, 1_GHz, 1e9}, Tabulated{ResponseTable({{1.0, 1.0}, {2.0, 1.0}})}})
        {
            INFO(s.kind());
            const LinkChain chain({s}, NoiseSpectrum(1.0));
            CHECK_THROWS_AS(reduce_to_polezero(chain), NotReducibleError);
            try
            {
                reduce_to_polezero(chain);
            }
            catch (const NotReducibleError &e)
            {
                CHECK(std::string(e.what()).find("fit") != std::string::npos);
            }
        }
    }
    SECTION("an over-damped laser reduces to two real poles")
    {
        const LinkChain chain({LaserSecondOrder{1.0, 1_GHz, 3e9}}, NoiseSpectrum(1.0));
        CHECK(reduce_to_polezero(chain).n_poles() == 2);
    }
}

TEST_CASE("reduced model agrees with gnr_eval on 1 kHz - 10 GHz")
{
    owclb::testing::Rng rng(11);
    std::vector<LinkChain> chains{owclb::testing::led_link_chain()};
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<ComponentResponse> stages;
        const int n = rng.integer(1, 4);
        for (int i = 0; i < n; ++i)
        {
            switch (rng.integer(0, 3))
            {
            case 0:
                stages.emplace_back(FlatGain{rng.log_uniform(1e-3, 1e3)});
                break;
            case 1:
                stages.emplace_back(FirstOrderLowPass{rng.log_uniform(0.1, 10), FrequencyHz(rng.log_uniform(1e5, 1e9))});
                break;
            case 2:
                stages.emplace_back(RationalPoleZero{rng.log_uniform(0.1, 10),
                                                     {FrequencyHz(rng.log_uniform(1e5, 1e9))},
                                                     {FrequencyHz(rng.log_uniform(1e5, 1e9)),
                                                      FrequencyHz(rng.log_uniform(1e5, 1e9))}});
                break;
            default:
                stages.emplace_back(LaserSecondOrder{rng.log_uniform(0.1, 10), FrequencyHz(rng.log_uniform(1e8, 1e9)),
                                                     rng.log_uniform(2.5e9, 1e10)});
                break;
            }
        }
        chains.emplace_back(std::move(stages),
                            NoiseSpectrum(rng.log_uniform(1e-20, 1e-10), FrequencyHz(rng.log_uniform(1e5, 1e9)),
                                          {FrequencyHz(rng.log_uniform(1e7, 1e10))}));
    }
    for (const auto &chain : chains)
    {
        const auto g = reduce_to_polezero(chain);
        for (int i = 0; i <= 140; ++i)
        {
            const double f = std::pow(10.0, 3.0 + 7.0 * i / 140.0);
            const double direct = gnr_eval(chain, FrequencyHz(f));
            INFO("f = " << f);
            CHECK(rel_err(g(f), direct) <= 1e-12);
        }
    }
}

TEST_CASE("cascade order does not matter")
{
    auto chain = owclb::testing::led_link_chain();
    std::vector<ComponentResponse> stages = chain.stages();
    std::vector<std::size_t> perm(stages.size());
    std::iota(perm.begin(), perm.end(), 0);
    const double base = gnr_eval(chain, 7_MHz);
    do
    {
        std::vector<ComponentResponse> s;
        for (auto i : perm)
            s.push_back(stages[i]);
        const LinkChain permuted(s, chain.noise());
        CHECK(rel_err(gnr_eval(permuted, 7_MHz), base) <= 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("MagSqPoleZeroGnr basics")
{
    const MagSqPoleZeroGnr g(5.0, {3e6, 1e6}, {2e6, 5e5, 8e6});
    CHECK(std::is_sorted(g.zeros().begin(), g.zeros().end()));
    CHECK(std::is_sorted(g.poles().begin(), g.poles().end()));
    for (double f : {0.0, 1e5, 1e6, 1e7, 1e9})
    {
        CHECK(g(f) == Approx(owclb::testing::gnr_direct(5.0, {1e6, 3e6}, {5e5, 2e6, 8e6}, f)).epsilon(1e-14));
        CHECK(g.inverse(f) * g(f) == Approx(1.0).epsilon(1e-14));
        CHECK(g(f) == g(-f)); // even in f
        CHECK(g(f) > 0.0);
    }
    CHECK_THROWS_AS(MagSqPoleZeroGnr(0.0, {}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(MagSqPoleZeroGnr(1.0, {-1.0}, {1.0}), InvalidArgument);
    CHECK(g.with_gnr0(7.0).gnr0() == 7.0);
}

TEST_CASE("log_slope is the derivative of log GNR with respect to f^2")
{
    const auto g = owclb::testing::led_link_model();
    for (double f : {1e5, 1e6, 5e6, 2e7, 1e8})
    {
        const double h = f * 1e-5;
        const double d = (std::log(g(f + h)) - std::log(g(f - h))) / (2 * h); // d/df
        CHECK(g.log_slope(f) * 2 * f == Approx(d).epsilon(1e-7));
    }
}

TEST_CASE("is_monotone_decreasing examples")
{
    CHECK(is_monotone_decreasing(MagSqPoleZeroGnr(1.0, {}, {1e6}), 1_Hz));
    CHECK(is_monotone_decreasing(MagSqPoleZeroGnr(1.0, {}, {1e6}), 1000_GHz));
    CHECK(is_monotone_decreasing(MagSqPoleZeroGnr(1.0, {}, {}), 1_GHz));
    CHECK_FALSE(is_monotone_decreasing(owclb::testing::bump_model(), 1_GHz));
    // a zero below the first pole rises immediately
    CHECK_FALSE(is_monotone_decreasing(MagSqPoleZeroGnr(1.0, {1e6}, {1e7, 1e8}), 1_GHz));
    // the bump model is still decreasing below its first local minimum
    CHECK(is_monotone_decreasing(owclb::testing::bump_model(), 10_MHz));
}

TEST_CASE("LED link model is monotone, confirmed by a dense scan")
{
    const auto g = reduce_to_polezero(owclb::testing::led_link_chain());
    CHECK(is_monotone_decreasing(g, 10_GHz));
    double prev = g(0.0);
    for (int i = 0; i <= 100000; ++i)
    {
        const double f = std::pow(10.0, 2.0 + 8.0 * i / 100000.0);
        const double v = g(f);
        REQUIRE(v <= prev);
        prev = v;
    }
}

TEST_CASE("monotonicity check agrees with a dense scan on random models")
{
    owclb::testing::Rng rng(5);
    int rising = 0;
    for (int trial = 0; trial < 300; ++trial)
    {
        std::vector<double> z, p;
        const int n = rng.integer(1, 5);
        const int m = rng.integer(0, n);
        for (int i = 0; i < n; ++i)
            p.push_back(rng.log_uniform(1e5, 1e9));
        for (int i = 0; i < m; ++i)
            z.push_back(rng.log_uniform(1e5, 1e9));
        const MagSqPoleZeroGnr g(1.0, z, p);
        bool scan = true;
        for (int i = 1; i <= 20000 && scan; ++i)
        {
            const double f = std::pow(10.0, 3.0 + 6.0 * i / 20000.0);
            scan = g.log_slope(f) <= 0.0;
        }
        const bool fast = is_monotone_decreasing(g, 1_GHz);
        rising += !fast;
        INFO("trial " << trial);
        CHECK(fast == scan);
    }
    CHECK(rising > 10);
}
