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

#include "owclb/fit.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace owclb;
using namespace owclb::literals;
using owclb::testing::rel_err;
using Catch::Approx;

namespace
{
    ResponseTable sample(const MagSqPoleZeroGnr &g, double lo, double hi, int n, double fscale = 1.0)
    {
        std::vector<ResponseTable::Row> rows;
        for (int i = 0; i < n; ++i)
        {
            const double f = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
            rows.push_back({f * fscale, g(f)});
        }
        return ResponseTable(rows);
    }

    FitConfig config(const ResponseTable &t, int m, int n)
    {
        FitConfig c;
        c.n_zeros = m;
        c.n_poles = n;
        c.f_lo = FrequencyHz(t.f_min());
        c.f_hi = FrequencyHz(t.f_max());
        return c;
    }
}

TEST_CASE("two-pole round trip")
{
    const MagSqPoleZeroGnr truth(3e4, {}, {2e6, 40e6});
    const auto data = sample(truth, 1e4, 1e9, 120);
    const auto r = fit_polezero(data, config(data, 0, 2));
    REQUIRE(r.model.n_poles() == 2);
    CHECK(rel_err(r.model.poles()[0], 2e6) < 1e-3);
    CHECK(rel_err(r.model.poles()[1], 40e6) < 1e-3);
    CHECK(r.rms_db_error < 1e-6);
    CHECK(r.per_point_residuals.size() == data.size());
    CHECK(r.notes.empty());
}

TEST_CASE("synthetic LED link data recovers the one-zero, four-pole model")
{
    const auto truth = owclb::testing::led_link_model();
    const auto data = sample(truth, 1e3, 1e9, 301);
    const auto r = fit_polezero(data, config(data, 1, 4));
    REQUIRE(r.model.n_zeros() == 1);
    REQUIRE(r.model.n_poles() == 4);
    CHECK(rel_err(r.model.zeros()[0], 14.5e6) < 0.01);
    const double expect[] = {2.3e6, 3.1e6, 3.5e6, 9.4e6};
    for (int i = 0; i < 4; ++i)
        CHECK(rel_err(r.model.poles()[static_cast<std::size_t>(i)], expect[i]) < 0.01);
    CHECK(rel_err(r.model.gnr0(), truth.gnr0()) < 0.005);
    double worst = 0.0;
    for (double e : residual_scan(data, r.model))
        worst = std::max(worst, std::abs(e));
    CHECK(worst < 0.1);
}

TEST_CASE("flat data with a one-pole model pushes the pole out of range and says so")
{
    std::vector<ResponseTable::Row> rows;
    for (int i = 0; i < 50; ++i)
        rows.push_back({std::pow(10.0, 3.0 + 5.0 * i / 49.0), 7.0});
    const ResponseTable data(rows);
    const auto r = fit_polezero(data, config(data, 0, 1));
    CHECK(r.model.poles()[0] > data.f_max());
    REQUIRE_FALSE(r.notes.empty());
    CHECK(r.notes[0].find("outside the fit range") != std::string::npos);
    CHECK(r.model.gnr0() == Approx(7.0).epsilon(1e-3));
}

TEST_CASE("residual_scan examples")
{
    const auto truth = owclb::testing::led_link_model();
    const auto data = sample(truth, 1e3, 1e9, 50);
    for (double e : residual_scan(data, truth))
        CHECK(std::abs(e) < 1e-12);
    for (double e : residual_scan(data, truth.with_gnr0(2.0 * truth.gnr0())))
        CHECK(e == Approx(3.0103).epsilon(1e-5));
}

TEST_CASE("fit input validation")
{
    const auto data = sample(MagSqPoleZeroGnr(1.0, {}, {1e6}), 1e4, 1e8, 5);
    CHECK_THROWS_AS(fit_polezero(data, config(data, 1, 2)), InvalidArgument); // needs 8 rows
    CHECK_THROWS_AS(fit_polezero(data, config(data, 0, 0)), InvalidArgument);
    CHECK_THROWS_AS(fit_polezero(data, config(data, 3, 2)), InvalidArgument);
    auto c = config(data, 0, 1);
    c.f_lo = 1_GHz;
    c.f_hi = 2_GHz;
    CHECK_THROWS_AS(fit_polezero(data, c), InvalidArgument);
}

TEST_CASE("round trip on random well-separated models")
{
    owclb::testing::Rng rng(2024);
    for (int trial = 0; trial < 8; ++trial)
    {
        const int n = rng.integer(1, 4);
        const int m = rng.integer(0, n - 1);
        // corners at least a factor 3 apart, alternating so the model is low-pass
        std::vector<double> corners;
        double c = rng.log_uniform(1e4, 1e5);
        for (int i = 0; i < n + m; ++i)
        {
            corners.push_back(c);
            c *= rng.uniform(3.0, 10.0);
        }
        std::vector<double> zeros, poles;
        for (std::size_t i = 0; i < corners.size(); ++i)
            (i % 2 == 1 && static_cast<int>(zeros.size()) < m ? zeros : poles).push_back(corners[i]);
        const MagSqPoleZeroGnr truth(rng.log_uniform(1.0, 1e10), zeros, poles);
        const auto data = sample(truth, corners.front() / 100, corners.back() * 100, 200);
        const auto r = fit_polezero(data, config(data, m, n));
        INFO("trial " << trial);
        for (std::size_t i = 0; i < zeros.size(); ++i)
            CHECK(rel_err(r.model.zeros()[i], zeros[i]) < 0.01);
        for (std::size_t i = 0; i < poles.size(); ++i)
            CHECK(rel_err(r.model.poles()[i], poles[i]) < 0.01);
    }
}

TEST_CASE("fit is equivariant under value and frequency scaling")
{
    const MagSqPoleZeroGnr truth(50.0, {30e6}, {1e6, 8e6});
    const auto data = sample(truth, 1e4, 1e9, 150);
    const auto base = fit_polezero(data, config(data, 1, 2));

    std::vector<ResponseTable::Row> scaled;
    for (const auto &row : data.rows())
        scaled.push_back({row.frequency_hz, 1e3 * row.value});
    const ResponseTable up(scaled);
    const auto r = fit_polezero(up, config(up, 1, 2));
    CHECK(rel_err(r.model.gnr0(), 1e3 * base.model.gnr0()) < 1e-9);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(rel_err(r.model.poles()[i], base.model.poles()[i]) < 1e-9);
    CHECK(rel_err(r.model.zeros()[0], base.model.zeros()[0]) < 1e-9);

    const auto shifted = sample(truth, 1e4, 1e9, 150, 10.0);
    const auto s = fit_polezero(shifted, config(shifted, 1, 2));
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(rel_err(s.model.poles()[i], 10.0 * base.model.poles()[i]) < 1e-6);
    CHECK(rel_err(s.model.zeros()[0], 10.0 * base.model.zeros()[0]) < 1e-6);
}

TEST_CASE("fits are deterministic for a fixed seed")
{
    const auto data = sample(owclb::testing::led_link_model(), 1e3, 1e9, 80);
    auto c = config(data, 1, 3);
    c.seed = 17;
    const auto a = fit_polezero(data, c);
    const auto b = fit_polezero(data, c);
    CHECK(a.model.gnr0() == b.model.gnr0());
    CHECK(std::equal(a.model.poles().begin(), a.model.poles().end(), b.model.poles().begin()));
    CHECK(a.per_point_residuals == b.per_point_residuals);
}

TEST_CASE("scan_orders reports every order and improves with the true order")
{
    const auto data = sample(MagSqPoleZeroGnr(10.0, {}, {1e6, 20e6}), 1e4, 1e9, 60);
    const auto scan = scan_orders(data, config(data, 0, 1), 2);
    REQUIRE(scan.size() == 3); // (0,1), (0,2), (1,2)
    CHECK(scan[0].n_poles == 1);
    CHECK(scan[1].n_zeros == 0);
    CHECK(scan[1].n_poles == 2);
    CHECK(scan[1].rms_db_error < 1e-6);
    CHECK(scan[0].rms_db_error > 1.0);
}
