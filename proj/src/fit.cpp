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

#include "owclb/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace owclb
{
    namespace
    {
        constexpr double db_per_neper = 10.0 / std::numbers::ln10;

        struct Problem
        {
            std::vector<double> f2;      // squared frequencies in range
            std::vector<double> data_db; // 10 log10(data)
            int n_zeros;
            int n_poles;
            double theta_lo; // log-corner clamp
            double theta_hi;

            std::size_t n_params() const { return 1 + static_cast<std::size_t>(n_zeros + n_poles); }

            void residuals(const Eigen::VectorXd &theta, Eigen::VectorXd &r, Eigen::MatrixXd *jac) const
            {
                const std::size_t n = f2.size();
                r.resize(static_cast<Eigen::Index>(n));
                if (jac)
                    jac->resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_params()));
                for (std::size_t i = 0; i < n; ++i)
                {
                    const auto row = static_cast<Eigen::Index>(i);
                    double model = theta(0);
                    if (jac)
                        (*jac)(row, 0) = db_per_neper;
                    for (int c = 0; c < n_zeros + n_poles; ++c)
                    {
                        const auto col = static_cast<Eigen::Index>(1 + c);
                        const double t = f2[i] * std::exp(-2.0 * theta(col));
                        const double sign = c < n_zeros ? 1.0 : -1.0;
                        model += sign * std::log1p(t);
                        if (jac)
                            (*jac)(row, col) = -sign * db_per_neper * 2.0 * t / (1.0 + t);
                    }
                    r(row) = db_per_neper * model - data_db[i];
                }
            }

            void clamp(Eigen::VectorXd &theta) const
            {
                for (Eigen::Index c = 1; c < theta.size(); ++c)
                    theta(c) = std::clamp(theta(c), theta_lo, theta_hi);
            }
        };

        struct StartResult
        {
            Eigen::VectorXd theta;
            double cost = std::numeric_limits<double>::infinity();
            bool converged = false;
        };

        StartResult levenberg(const Problem &pb, Eigen::VectorXd theta, int max_iters)
        {
            Eigen::VectorXd r, r_try;
            Eigen::MatrixXd J;
            pb.residuals(theta, r, &J);
            double cost = r.squaredNorm();
            double lambda = 1e-3;
            StartResult out;

            for (int it = 0; it < max_iters && std::isfinite(cost); ++it)
            {
                const Eigen::MatrixXd JtJ = J.transpose() * J;
                const Eigen::VectorXd g = J.transpose() * r;
                const double scale = std::max(JtJ.diagonal().mean(), 1e-300);

                bool accepted = false;
                while (!accepted && lambda < 1e16)
                {
                    Eigen::MatrixXd A = JtJ;
                    A.diagonal().array() += lambda * scale;
                    const Eigen::VectorXd step = A.ldlt().solve(-g);
                    Eigen::VectorXd trial = theta + step;
                    pb.clamp(trial);
                    pb.residuals(trial, r_try, nullptr);
                    const double trial_cost = r_try.squaredNorm();
                    if (std::isfinite(trial_cost) && trial_cost < cost)
                    {
                        const double decrease = cost - trial_cost;
                        const double step_size = (trial - theta).lpNorm<Eigen::Infinity>();
                        theta = trial;
                        cost = trial_cost;
                        lambda = std::max(lambda / 10.0, 1e-15);
                        accepted = true;
                        pb.residuals(theta, r, &J);
                        if (decrease <= 1e-15 * cost + 1e-30 || step_size < 1e-12)
                        {
                            out.converged = true;
                            it = max_iters;
                        }
                    }
                    else
                    {
                        lambda *= 10.0;
                    }
                }
                if (!accepted)
                {
                    out.converged = true; // no descent direction left at machine precision
                    break;
                }
            }
            out.theta = std::move(theta);
            out.cost = cost;
            return out;
        }

        double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

        std::string fmt_hz(double hz)
        {
            std::ostringstream s;
            s.precision(4);
            s << hz;
            return s.str();
        }
    }

    FitResult fit_polezero(const ResponseTable &data, const FitConfig &cfg)
    {
        if (cfg.n_zeros < 0 || cfg.n_poles < 1)
            throw InvalidArgument("fit needs n_zeros >= 0 and n_poles >= 1");
        if (cfg.n_poles < cfg.n_zeros)
            throw InvalidArgument("fit needs n_poles >= n_zeros for a low-pass model");
        if (!(cfg.f_lo.value() > 0.0) || !(cfg.f_hi > cfg.f_lo))
            throw InvalidArgument("fit range must satisfy 0 < f_lo < f_hi");
        if (cfg.multistarts < 1 || cfg.max_iters < 1)
            throw InvalidArgument("fit needs multistarts >= 1 and max_iters >= 1");

        Problem pb;
        pb.n_zeros = cfg.n_zeros;
        pb.n_poles = cfg.n_poles;
        for (const auto &row : data.rows())
        {
            if (row.frequency_hz < cfg.f_lo.value() || row.frequency_hz > cfg.f_hi.value())
                continue;
            pb.f2.push_back(row.frequency_hz * row.frequency_hz);
            pb.data_db.push_back(10.0 * std::log10(row.value));
        }
        const std::size_t needed = 2 * static_cast<std::size_t>(cfg.n_zeros + cfg.n_poles + 1);
        if (pb.f2.size() < needed)
            throw InvalidArgument("fit needs at least " + std::to_string(needed) + " rows inside the fit range, got " +
                                  std::to_string(pb.f2.size()));

        const double log_lo = std::log(cfg.f_lo.value());
        const double log_hi = std::log(cfg.f_hi.value());
        pb.theta_lo = log_lo - std::log(1e3);
        pb.theta_hi = log_hi + std::log(1e3);

        std::mt19937_64 rng(cfg.seed);
        StartResult best;
        int converged = 0;
        for (int s = 0; s < cfg.multistarts; ++s)
        {
            Eigen::VectorXd theta(static_cast<Eigen::Index>(pb.n_params()));
            theta(0) = pb.data_db.front() / db_per_neper;
            for (Eigen::Index c = 1; c < theta.size(); ++c)
                theta(c) = log_lo + (log_hi - log_lo) * uniform01(rng);
            auto res = levenberg(pb, theta, cfg.max_iters);
            if (res.converged && std::isfinite(res.cost))
                ++converged;
            if (res.cost < best.cost)
                best = std::move(res);
        }
        if (!std::isfinite(best.cost))
            throw ConvergenceError("all fit starts diverged", {best.cost});

        std::vector<double> zeros, poles;
        for (int c = 0; c < cfg.n_zeros + cfg.n_poles; ++c)
        {
            const double hz = std::exp(best.theta(1 + c));
            (c < cfg.n_zeros ? zeros : poles).push_back(hz);
        }

        FitResult out{MagSqPoleZeroGnr(std::exp(best.theta(0)), zeros, poles), 0.0, {}, {}, converged};
        Eigen::VectorXd r;
        pb.residuals(best.theta, r, nullptr);
        out.per_point_residuals.assign(r.data(), r.data() + r.size());
        out.rms_db_error = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));

        auto note_outside = [&](double hz, const char *what)
        {
            if (hz < cfg.f_lo.value() || hz > cfg.f_hi.value())
                out.notes.push_back(std::string(what) + " at " + fmt_hz(hz) + " Hz lies outside the fit range [" +
                                    fmt_hz(cfg.f_lo.value()) + ", " + fmt_hz(cfg.f_hi.value()) +
                                    "] Hz; the data do not constrain it (model order may be too high)");
        };
        for (double z : out.model.zeros())
            note_outside(z, "zero");
        for (double p : out.model.poles())
            note_outside(p, "pole");
        return out;
    }

    std::vector<double> residual_scan(const ResponseTable &data, const MagSqPoleZeroGnr &model)
    {
        std::vector<double> out;
        out.reserve(data.size());
        for (const auto &row : data.rows())
            out.push_back(10.0 * std::log10(model(row.frequency_hz)) - 10.0 * std::log10(row.value));
        return out;
    }

    std::vector<OrderScanEntry> scan_orders(const ResponseTable &data, const FitConfig &base, int max_poles)
    {
        std::vector<OrderScanEntry> out;
        for (int n = 1; n <= max_poles; ++n)
            for (int m = 0; m < n; ++m)
            {
                FitConfig cfg = base;
                cfg.n_zeros = m;
                cfg.n_poles = n;
                try
                {
                    out.push_back({m, n, fit_polezero(data, cfg).rms_db_error});
                }
                catch (const InvalidArgument &)
                {
                    // not enough rows for this order
                }
            }
        return out;
    }
}
