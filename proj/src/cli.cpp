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

#include "owclb/cli.hpp"

#include "owclb/bitload.hpp"
#include "owclb/fit.hpp"
#include "owclb/io.hpp"
#include "owclb/linkchain.hpp"
#include "owclb/waterfill.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <future>
#include <iostream>
#include <thread>

namespace owclb::cli
{
    namespace
    {
        constexpr std::pair<std::string_view, Command> command_names[] = {
            {"gnr-eval", Command::gnr_eval},         {"rate-curve", Command::rate_curve},
            {"optimize-newton", Command::optimize_newton}, {"optimize-hh", Command::optimize_hh},
            {"fit", Command::fit},                   {"compare", Command::compare},
        };

        std::shared_ptr<spdlog::logger> log()
        {
            static const auto logger = []
            {
                auto l = spdlog::stderr_color_mt("owclb");
                l->set_pattern("owclb [%l] %v");
                l->set_level(spdlog::level::warn);
                if (const char *env = std::getenv("OWCLB_LOG"))
                    l->set_level(spdlog::level::from_str(env));
                return l;
            }();
            return logger;
        }

        double parse_number(std::string_view s, const char *what)
        {
            try
            {
                std::size_t used = 0;
                const std::string str(s);
                const double v = std::stod(str, &used);
                if (used == str.size())
                    return v;
            }
            catch (const std::exception &)
            {
            }
            throw ParseError(std::string("--sweep ") + what + ": '" + std::string(s) + "' is not a number");
        }

        /// Evaluates f at every x on a small worker pool; results keep the input order.
        template <class R, class F>
        std::vector<R> parallel_map(const std::vector<double> &xs, unsigned threads, F f)
        {
            std::vector<R> out(xs.size());
            std::vector<std::exception_ptr> errors(xs.size());
            std::atomic<std::size_t> next{0};
            auto worker = [&]
            {
                for (std::size_t i = next++; i < xs.size(); i = next++)
                {
                    try
                    {
                        out[i] = f(xs[i]);
                    }
                    catch (...)
                    {
                        errors[i] = std::current_exception();
                    }
                }
            };
            if (threads == 0)
                threads = std::max(1u, std::thread::hardware_concurrency());
            threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(xs.size(), 1)));
            std::vector<std::future<void>> pool;
            for (unsigned t = 1; t < threads; ++t)
                pool.push_back(std::async(std::launch::async, worker));
            worker();
            for (auto &p : pool)
                p.get();
            for (const auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
            return out;
        }

        double required_budget(const RunConfig &cfg)
        {
            if (!cfg.budget)
                throw InvalidArgument("--budget is required for " + std::string(command_name(cfg.command)));
            return *cfg.budget;
        }

        std::vector<double> power_points(const RunConfig &cfg)
        {
            if (cfg.sweep)
            {
                if (cfg.sweep->variable != Sweep::Variable::power)
                    throw InvalidArgument("--sweep: " + std::string(command_name(cfg.command)) +
                                          " sweeps the power budget (power:FROM:TO:POINTS)");
                return cfg.sweep->values();
            }
            return {required_budget(cfg)};
        }

        std::string gnr_eval_cmd(const RunConfig &cfg, const LinkChain &chain)
        {
            const Sweep sweep = cfg.sweep.value_or(Sweep{Sweep::Variable::fmax, 1e3, 1e9, 301, true});
            if (sweep.variable != Sweep::Variable::fmax)
                throw InvalidArgument("--sweep: gnr-eval sweeps frequency (fmax:FROM:TO:POINTS[:log])");
            std::optional<MagSqPoleZeroGnr> model;
            try
            {
                model = reduce_to_polezero(chain);
            }
            catch (const NotReducibleError &e)
            {
                log()->info("no pole-zero column: {}", e.what());
            }
            io::CsvTable t;
            t.header = {"f_hz", "gain_magsq", "noise_psd_v2_per_hz", "gnr_linear"};
            if (model)
                t.header.push_back("gnr_polezero");
            t.rows = parallel_map<std::vector<double>>(sweep.values(), cfg.threads,
                                                      [&](double f)
                                                      {
                                                          const FrequencyHz fh(f);
                                                          std::vector<double> row{f, chain_gain_magsq(chain, fh),
                                                                                  eval_noise_psd(chain.noise(), fh),
                                                                                  gnr_eval(chain, fh)};
                                                          if (model)
                                                              row.push_back((*model)(f));
                                                          return row;
                                                      });
            return io::format_csv(t);
        }

        std::string rate_curve_cmd(const RunConfig &cfg, const LinkChain &chain, ModulationGap gap)
        {
            const auto g = reduce_to_polezero(chain);
            if (g.poles().empty())
                throw InvalidArgument("rate-curve needs a GNR with at least one pole");
            const Sweep sweep = cfg.sweep.value_or(Sweep{Sweep::Variable::fmax, 1e6, cfg.f_chip, 200, false});
            io::CsvTable t;
            if (sweep.variable == Sweep::Variable::fmax)
            {
                t.header = {"f_max_hz", "rate_mbit_s", "sigma2_v2"};
                t.rows = parallel_map<std::vector<double>>(sweep.values(), cfg.threads,
                                                          [&](double f)
                                                          {
                                                              const FrequencyHz fh(f);
                                                              return std::vector<double>{f, rate_closed_form(g, gap, fh) / 1e6,
                                                                                         sigma2_of_fmax(g, gap, fh)};
                                                          });
                return io::format_csv(t);
            }
            const FrequencyHz f_chip(cfg.f_chip);
            const auto grid = SubcarrierGrid::sample(g, cfg.k, f_chip);
            t.comments.push_back("k=" + std::to_string(cfg.k) + " f_chip_hz=" + io::format_number(cfg.f_chip) +
                                 " gamma_db=" + io::format_number(cfg.gamma_db) +
                                 " flat_fmax_hz=" + io::format_number(g.poles().front()));
            t.header = {"sigma2_v2", "rate_newton_mbit_s", "rate_hh_mbit_s", "rate_flat_mbit_s"};
            t.rows = parallel_map<std::vector<double>>(
                sweep.values(), cfg.threads,
                [&](double budget)
                {
                    const auto newton = newton_fmax(g, gap, budget, cfg.k, f_chip);
                    const auto hh = hh_accelerated(grid, gap, budget);
                    return std::vector<double>{budget, newton.rate_bps / 1e6, hh.rate_bps / 1e6,
                                               flat_spectrum_rate(g, gap, budget, FrequencyHz(g.poles().front())) / 1e6};
                });
            return io::format_csv(t);
        }

        std::string optimize_newton_cmd(const RunConfig &cfg, const LinkChain &chain, ModulationGap gap)
        {
            const double budget = required_budget(cfg);
            const FrequencyHz f_chip(cfg.f_chip);
            try
            {
                const auto g = reduce_to_polezero(chain);
                if (is_monotone_decreasing(g, f_chip))
                {
                    const auto s = newton_fmax(g, gap, budget, cfg.k, f_chip);
                    log()->info("newton: {} iterations, {} polish steps, f_max = {} Hz", s.stats.iterations,
                                s.stats.polish_steps, s.f_max_hz);
                    return io::waterfill_csv(s);
                }
                log()->info("GNR is not monotone below f_chip; using water-level bisection");
            }
            catch (const NotReducibleError &e)
            {
                log()->info("{}; using water-level bisection", e.what());
            }
            const auto s = waterlevel_solve([&](double f) { return gnr_eval(chain, FrequencyHz(f)); }, gap, budget,
                                            SpectralGrid::subcarriers(cfg.k, f_chip));
            if (!s.island.empty())
                log()->info("{} zero-power island(s) below f_max", s.island.size());
            return io::waterfill_csv(s);
        }

        SubcarrierGrid chain_grid(const RunConfig &cfg, const LinkChain &chain)
        {
            return SubcarrierGrid::sample([&](double f) { return gnr_eval(chain, FrequencyHz(f)); }, cfg.k,
                                          FrequencyHz(cfg.f_chip));
        }

        std::string optimize_hh_cmd(const RunConfig &cfg, const LinkChain &chain, ModulationGap gap)
        {
            const double budget = required_budget(cfg);
            const auto grid = chain_grid(cfg, chain);
            const auto plan = cfg.naive ? hh_naive(grid, gap, budget) : hh_accelerated(grid, gap, budget);
            log()->info("{}: {} bit/s, {} FLOPs", plan.algorithm, plan.rate_bps, plan.flops);
            return io::bitload_csv(plan);
        }

        std::string compare_cmd(const RunConfig &cfg, const LinkChain &chain, ModulationGap gap)
        {
            const auto grid = chain_grid(cfg, chain);
            io::CsvTable t;
            t.comments.push_back("convention: " + flop_report(hh_naive(grid, gap, 0.0), hh_accelerated(grid, gap, 0.0))
                                                      .convention);
            t.header = {"k",       "budget_v2",  "rate_mbit_s", "flops_naive", "flops_accelerated", "saving",
                        "iterations", "saving_per_iteration", "populated_levels"};
            t.rows = parallel_map<std::vector<double>>(
                power_points(cfg), cfg.threads,
                [&](double budget)
                {
                    const auto a = hh_naive(grid, gap, budget);
                    const auto b = hh_accelerated(grid, gap, budget);
                    if (a.bits != b.bits)
                        throw Error("naive and accelerated bit loading disagree at budget " + io::format_number(budget));
                    const auto r = flop_report(a, b);
                    return std::vector<double>{static_cast<double>(cfg.k),
                                               budget,
                                               a.rate_bps / 1e6,
                                               static_cast<double>(r.flops_a),
                                               static_cast<double>(r.flops_b),
                                               static_cast<double>(r.saving),
                                               static_cast<double>(r.iterations_a),
                                               r.saving_per_iteration,
                                               static_cast<double>(r.populated_levels)};
                });
            return io::format_csv(t);
        }

        std::string fit_cmd(const RunConfig &cfg)
        {
            const auto path = cfg.data_path.empty() ? cfg.channel_path : cfg.data_path;
            if (path.empty())
                throw InvalidArgument("fit needs --data PATH (frequency_hz,value CSV)");
            const auto data = io::read_response_csv(path, cfg.db);
            FitConfig fc;
            fc.n_zeros = cfg.zeros;
            fc.n_poles = cfg.poles;
            fc.f_lo = FrequencyHz(data.f_min());
            fc.f_hi = FrequencyHz(data.f_max());
            fc.seed = cfg.seed;
            if (cfg.scan_orders > 0)
            {
                io::CsvTable t;
                t.header = {"n_zeros", "n_poles", "rms_db_error"};
                for (const auto &e : scan_orders(data, fc, cfg.scan_orders))
                    t.rows.push_back({static_cast<double>(e.n_zeros), static_cast<double>(e.n_poles), e.rms_db_error});
                return io::format_csv(t);
            }
            const auto r = fit_polezero(data, fc);
            log()->info("fit: rms error {} dB, {} of {} starts converged", r.rms_db_error, r.converged_starts,
                        fc.multistarts);
            for (const auto &n : r.notes)
                log()->warn("{}", n);
            return io::model_to_chain_json(r.model);
        }

        void validate(const RunConfig &cfg)
        {
            if (!std::isfinite(cfg.gamma_db) || cfg.gamma_db < 0.0)
                throw InvalidArgument("--gamma-db must be >= 0");
            if (cfg.k == 0)
                throw InvalidArgument("--k must be >= 1");
            if (!std::isfinite(cfg.f_chip) || cfg.f_chip <= 0.0)
                throw InvalidArgument("--fchip must be > 0 Hz");
            if (cfg.budget && (!std::isfinite(*cfg.budget) || *cfg.budget < 0.0))
                throw InvalidArgument("--budget must be >= 0");
            if (cfg.command != Command::fit)
            {
                if (cfg.channel_path.empty())
                    throw InvalidArgument("--channel is required for " + std::string(command_name(cfg.command)));
                if (!std::filesystem::exists(cfg.channel_path))
                    throw ParseError("--channel: file '" + cfg.channel_path.string() + "' does not exist");
            }
            if (cfg.sweep && cfg.sweep->variable == Sweep::Variable::power && cfg.sweep->from < 0.0)
                throw InvalidArgument("--sweep: power values must be >= 0");
        }
    }

    std::optional<Command> parse_command(std::string_view name)
    {
        for (const auto &[n, c] : command_names)
            if (n == name)
                return c;
        return std::nullopt;
    }

    std::string_view command_name(Command c)
    {
        for (const auto &[n, cc] : command_names)
            if (cc == c)
                return n;
        return "?";
    }

    std::vector<double> Sweep::values() const
    {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
        {
            const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            out.push_back(log_spaced ? std::pow(10.0, std::log10(from) + t * (std::log10(to) - std::log10(from)))
                                     : from + t * (to - from));
        }
        if (!out.empty())
        {
            out.front() = from;
            if (points > 1)
                out.back() = to;
        }
        return out;
    }

    Sweep parse_sweep(std::string_view text)
    {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (;;)
        {
            const auto pos = text.find(':', start);
            parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        if (parts.size() != 4 && parts.size() != 5)
            throw ParseError("--sweep: expected VAR:FROM:TO:POINTS[:log], got '" + std::string(text) + "'");
        Sweep s;
        if (parts[0] == "fmax")
            s.variable = Sweep::Variable::fmax;
        else if (parts[0] == "power")
            s.variable = Sweep::Variable::power;
        else
            throw ParseError("--sweep VAR: expected 'fmax' or 'power', got '" + std::string(parts[0]) + "'");
        s.from = parse_number(parts[1], "FROM");
        s.to = parse_number(parts[2], "TO");
        const double pts = parse_number(parts[3], "POINTS");
        if (pts < 1 || pts != std::floor(pts) || pts > 1e7)
            throw ParseError("--sweep POINTS: expected a positive integer");
        s.points = static_cast<int>(pts);
        if (parts.size() == 5)
        {
            if (parts[4] != "log")
                throw ParseError("--sweep: the optional fifth field must be 'log'");
            s.log_spaced = true;
        }
        if (!std::isfinite(s.from) || !std::isfinite(s.to) || !(s.from < s.to || (s.points == 1 && s.from == s.to)))
            throw ParseError("--sweep: range must be ascending (FROM < TO)");
        if (s.log_spaced && s.from <= 0.0)
            throw ParseError("--sweep: log spacing needs FROM > 0");
        return s;
    }

    std::string run(const RunConfig &cfg)
    {
        validate(cfg);
        const auto gap = ModulationGap::from_db(cfg.gamma_db);
        std::string out;
        if (cfg.command == Command::fit)
            out = fit_cmd(cfg);
        else
        {
            const auto chain = io::load_chain(cfg.channel_path);
            switch (cfg.command)
            {
            case Command::gnr_eval:
                out = gnr_eval_cmd(cfg, chain);
                break;
            case Command::rate_curve:
                out = rate_curve_cmd(cfg, chain, gap);
                break;
            case Command::optimize_newton:
                out = optimize_newton_cmd(cfg, chain, gap);
                break;
            case Command::optimize_hh:
                out = optimize_hh_cmd(cfg, chain, gap);
                break;
            case Command::compare:
                out = compare_cmd(cfg, chain, gap);
                break;
            case Command::fit:
                break;
            }
        }
        if (!cfg.output_path.empty())
            io::write_file(cfg.output_path, out);
        return out;
    }

    int main(int argc, char **argv)
    {
        CLI::App app{"owclb: optical wireless link GNR modelling and transmit spectrum optimization"};
        RunConfig cfg;
        std::string command, sweep, channel, out, data;
        double budget = -1.0;

        std::vector<std::string> names;
        for (const auto &[n, c] : command_names)
            names.emplace_back(n);
        app.add_option("command", command, "gnr-eval | rate-curve | optimize-newton | optimize-hh | fit | compare")
            ->required()
            ->check(CLI::IsMember(names));
        app.add_option("--channel", channel, "channel JSON");
        app.add_option("--out", out, "output file (default: stdout)");
        app.add_option("--data", data, "fit input CSV (frequency_hz,value)");
        app.add_option("--k", cfg.k, "number of subcarriers")->capture_default_str();
        app.add_option("--fchip", cfg.f_chip, "chip rate / bandwidth, Hz")->capture_default_str();
        app.add_option("--gamma-db", cfg.gamma_db, "modulation gap, dB")->capture_default_str();
        app.add_option("--budget", budget, "signal variance budget, V^2");
        app.add_option("--sweep", sweep, "VAR:FROM:TO:POINTS[:log], VAR = fmax | power");
        app.add_flag("--naive", cfg.naive, "optimize-hh: reference Hughes-Hartogs");
        app.add_option("--zeros", cfg.zeros, "fit: number of zeros")->capture_default_str();
        app.add_option("--poles", cfg.poles, "fit: number of poles")->capture_default_str();
        app.add_option("--seed", cfg.seed, "fit: multistart seed")->capture_default_str();
        app.add_flag("--db", cfg.db, "fit: input values are in dB");
        app.add_option("--scan-orders", cfg.scan_orders, "fit: report rms error for every order up to N poles");
        app.add_option("--threads", cfg.threads, "sweep workers (0 = all cores)")->capture_default_str();

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError &e)
        {
            return app.exit(e);
        }

        try
        {
            cfg.command = *parse_command(command);
            cfg.channel_path = channel;
            cfg.output_path = out;
            cfg.data_path = data;
            if (app.count("--budget"))
                cfg.budget = budget;
            if (!sweep.empty())
                cfg.sweep = parse_sweep(sweep);
            const auto text = run(cfg);
            if (out.empty())
                std::cout << text;
            return 0;
        }
        catch (const Error &e)
        {
            std::cerr << "owclb " << command << ": error: " << e.what() << "\n";
            return 2;
        }
    }
}
