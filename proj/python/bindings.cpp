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
#include "owclb/cli.hpp"
#include "owclb/errors.hpp"
#include "owclb/fit.hpp"
#include "owclb/io.hpp"
#include "owclb/linkchain.hpp"
#include "owclb/waterfill.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace owclb;

namespace
{
    // Python passes frequencies as plain floats in Hz and the modulation gap in dB.
    FrequencyHz hz(double v) { return FrequencyHz(v); }
    ModulationGap gap_db(double db) { return ModulationGap::from_db(db); }

    std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

    ResponseTable table_from(const std::vector<double> &f, const std::vector<double> &v)
    {
        if (f.size() != v.size())
            throw InvalidArgument("frequency and value lists differ in length");
        std::vector<ResponseTable::Row> rows;
        rows.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            rows.push_back({f[i], v[i]});
        return ResponseTable(std::move(rows));
    }
}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Link modelling, water-filling and bit loading for bandwidth-limited optical wireless links";

    auto base = py::register_exception<Error>(m, "OwclbError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<NotReducibleError>(m, "NotReducibleError", base.ptr());
    py::register_exception<NonMonotoneError>(m, "NonMonotoneError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::class_<MagSqPoleZeroGnr>(m, "PoleZeroGnr")
        .def(py::init<double, std::vector<double>, std::vector<double>>(), py::arg("gnr0"),
             py::arg("zeros_hz") = std::vector<double>{}, py::arg("poles_hz") = std::vector<double>{})
        .def_property_readonly("gnr0", &MagSqPoleZeroGnr::gnr0)
        .def_property_readonly("zeros_hz", [](const MagSqPoleZeroGnr &g) { return to_vector(g.zeros()); })
        .def_property_readonly("poles_hz", [](const MagSqPoleZeroGnr &g) { return to_vector(g.poles()); })
        .def("__call__", [](const MagSqPoleZeroGnr &g, double f) { return g(f); }, py::arg("f_hz"))
        .def("inverse", &MagSqPoleZeroGnr::inverse, py::arg("f_hz"))
        .def("log_slope", &MagSqPoleZeroGnr::log_slope, py::arg("f_hz"))
        .def("is_monotone", [](const MagSqPoleZeroGnr &g, double f_hi) { return is_monotone_decreasing(g, hz(f_hi)); },
             py::arg("f_hi_hz"))
        .def("__repr__",
             [](const MagSqPoleZeroGnr &g)
             {
                 return "PoleZeroGnr(gnr0=" + io::format_number(g.gnr0()) + ", zeros=" +
                        std::to_string(g.n_zeros()) + ", poles=" + std::to_string(g.n_poles()) + ")";
             });

    // -- link chain
    py::class_<LinkChain>(m, "LinkChain")
        .def_property_readonly("stage_kinds",
                               [](const LinkChain &c)
                               {
                                   std::vector<std::string> out;
                                   for (const auto &s : c.stages())
                                       out.emplace_back(s.kind());
                                   return out;
                               })
        .def("gain_magsq", [](const LinkChain &c, double f) { return chain_gain_magsq(c, hz(f)); }, py::arg("f_hz"))
        .def("noise_psd", [](const LinkChain &c, double f) { return eval_noise_psd(c.noise(), hz(f)); }, py::arg("f_hz"))
        .def("gnr", [](const LinkChain &c, double f) { return gnr_eval(c, hz(f)); }, py::arg("f_hz"))
        .def("reduce", &reduce_to_polezero)
        .def("to_json", &io::chain_to_json);
    m.def("load_chain", &io::load_chain, py::arg("path"));
    m.def("parse_chain_json", &io::parse_chain_json, py::arg("text"), py::arg("base_dir") = std::filesystem::path{});

    // -- continuous closed forms
    m.def("psd_opt", [](const MagSqPoleZeroGnr &g, double f_max, double f, double gamma_db)
          { return psd_opt(g, gap_db(gamma_db), hz(f_max), hz(f)); },
          py::arg("model"), py::arg("f_max_hz"), py::arg("f_hz"), py::arg("gamma_db") = 0.0);
    m.def("sigma2_of_fmax", [](const MagSqPoleZeroGnr &g, double f_max, double gamma_db)
          { return sigma2_of_fmax(g, gap_db(gamma_db), hz(f_max)); },
          py::arg("model"), py::arg("f_max_hz"), py::arg("gamma_db") = 0.0);
    m.def("rate_closed_form", [](const MagSqPoleZeroGnr &g, double f_max)
          { return rate_closed_form(g, ModulationGap(), hz(f_max)); },
          py::arg("model"), py::arg("f_max_hz"));
    m.def("dsigma2_dfmax", [](const MagSqPoleZeroGnr &g, double f_max, double gamma_db)
          { return dsigma2_dfmax(g, gap_db(gamma_db), hz(f_max)); },
          py::arg("model"), py::arg("f_max_hz"), py::arg("gamma_db") = 0.0);
    m.def("fmax_for_sigma2", [](const MagSqPoleZeroGnr &g, double budget, double f_hi, double gamma_db)
          { return fmax_for_sigma2(g, gap_db(gamma_db), budget, hz(f_hi)).value(); },
          py::arg("model"), py::arg("sigma2"), py::arg("f_hi_hz"), py::arg("gamma_db") = 0.0);
    m.def("flat_spectrum_rate", [](const MagSqPoleZeroGnr &g, double budget, double band, double gamma_db)
          { return flat_spectrum_rate(g, gap_db(gamma_db), budget, hz(band)); },
          py::arg("model"), py::arg("sigma2"), py::arg("band_hz"), py::arg("gamma_db") = 0.0);

    // -- discrete water-filling
    py::class_<FrequencyInterval>(m, "FrequencyInterval")
        .def_readonly("lo_hz", &FrequencyInterval::lo_hz)
        .def_readonly("hi_hz", &FrequencyInterval::hi_hz);
    py::class_<SolverStats>(m, "SolverStats")
        .def_readonly("iterations", &SolverStats::iterations)
        .def_readonly("polish_steps", &SolverStats::polish_steps)
        .def_readonly("saturated", &SolverStats::saturated)
        .def_readonly("bisection_fallback", &SolverStats::bisection_fallback)
        .def_readonly("trace", &SolverStats::trace);
    py::class_<WaterfillSolution>(m, "WaterfillSolution")
        .def_readonly("f_max_hz", &WaterfillSolution::f_max_hz)
        .def_readonly("water_level", &WaterfillSolution::water_level)
        .def_readonly("freqs_hz", &WaterfillSolution::freqs_hz)
        .def_readonly("weights_hz", &WaterfillSolution::weights_hz)
        .def_readonly("psd", &WaterfillSolution::psd)
        .def_readonly("gnr", &WaterfillSolution::gnr)
        .def_readonly("sigma2", &WaterfillSolution::sigma2)
        .def_readonly("rate_bps", &WaterfillSolution::rate_bps)
        .def_readonly("island", &WaterfillSolution::island)
        .def_readonly("stats", &WaterfillSolution::stats)
        .def("to_csv", &io::waterfill_csv);
    py::class_<KktReport>(m, "KktReport")
        .def_readonly("min_psd", &KktReport::min_psd)
        .def_readonly("max_level_error", &KktReport::max_level_error)
        .def_readonly("max_slackness", &KktReport::max_slackness)
        .def_readonly("max_dual_violation", &KktReport::max_dual_violation)
        .def("satisfied", &KktReport::satisfied, py::arg("tol"));

    m.def("newton_fmax", [](const MagSqPoleZeroGnr &g, double budget, std::size_t k, double f_chip, double gamma_db)
          { return newton_fmax(g, gap_db(gamma_db), budget, k, hz(f_chip)); },
          py::arg("model"), py::arg("sigma2"), py::arg("subcarriers"), py::arg("f_chip_hz"), py::arg("gamma_db") = 0.0);
    m.def("waterlevel_solve",
          [](const GnrFunction &gnr, double budget, std::size_t k, double f_chip, double gamma_db)
          { return waterlevel_solve(gnr, gap_db(gamma_db), budget, SpectralGrid::subcarriers(k, hz(f_chip))); },
          py::arg("gnr"), py::arg("sigma2"), py::arg("subcarriers"), py::arg("f_chip_hz"), py::arg("gamma_db") = 0.0,
          "gnr is any callable f_hz -> linear GNR, e.g. a PoleZeroGnr or LinkChain.gnr");
    m.def("check_kkt", [](const WaterfillSolution &s, double gamma_db) { return check_kkt(s, gap_db(gamma_db)); },
          py::arg("solution"), py::arg("gamma_db") = 0.0);

    // -- bit loading
    py::class_<BitLoadPlan>(m, "BitLoadPlan")
        .def_readonly("bits", &BitLoadPlan::bits)
        .def_readonly("power_k", &BitLoadPlan::power_k)
        .def_readonly("total_power", &BitLoadPlan::total_power)
        .def_readonly("rate_bps", &BitLoadPlan::rate_bps)
        .def_readonly("delta_b", &BitLoadPlan::delta_b)
        .def_readonly("flops", &BitLoadPlan::flops)
        .def_readonly("iterations", &BitLoadPlan::iterations)
        .def_readonly("populated_levels", &BitLoadPlan::populated_levels)
        .def_readonly("algorithm", &BitLoadPlan::algorithm)
        .def("to_csv", &io::bitload_csv);
    py::class_<FlopComparison>(m, "FlopComparison")
        .def_readonly("flops_a", &FlopComparison::flops_a)
        .def_readonly("flops_b", &FlopComparison::flops_b)
        .def_readonly("saving", &FlopComparison::saving)
        .def_readonly("saving_per_iteration", &FlopComparison::saving_per_iteration)
        .def_readonly("populated_levels", &FlopComparison::populated_levels)
        .def_readonly("convention", &FlopComparison::convention);

    auto grid_of = [](const std::vector<double> &gnr_k, double f_chip) { return SubcarrierGrid(hz(f_chip), gnr_k); };
    m.def("hh_naive",
          [grid_of](const std::vector<double> &gnr_k, double f_chip, double budget, double gamma_db, int cap)
          { return hh_naive(grid_of(gnr_k, f_chip), gap_db(gamma_db), budget, {cap}); },
          py::arg("gnr_k"), py::arg("f_chip_hz"), py::arg("sigma2"), py::arg("gamma_db") = 0.0,
          py::arg("bit_cap") = default_bit_cap);
    m.def("hh_accelerated",
          [grid_of](const std::vector<double> &gnr_k, double f_chip, double budget, double gamma_db, int cap)
          { return hh_accelerated(grid_of(gnr_k, f_chip), gap_db(gamma_db), budget, {cap}); },
          py::arg("gnr_k"), py::arg("f_chip_hz"), py::arg("sigma2"), py::arg("gamma_db") = 0.0,
          py::arg("bit_cap") = default_bit_cap);
    m.def("sample_subcarriers",
          [](const GnrFunction &gnr, std::size_t k, double f_chip)
          { return SubcarrierGrid::sample(gnr, k, hz(f_chip)).gnr(); },
          py::arg("gnr"), py::arg("subcarriers"), py::arg("f_chip_hz"));
    m.def("flop_report", &flop_report, py::arg("plan_a"), py::arg("plan_b"));

    // -- fitting
    py::class_<FitResult>(m, "FitResult")
        .def_readonly("model", &FitResult::model)
        .def_readonly("rms_db_error", &FitResult::rms_db_error)
        .def_readonly("per_point_residuals", &FitResult::per_point_residuals)
        .def_readonly("notes", &FitResult::notes)
        .def_readonly("converged_starts", &FitResult::converged_starts);
    m.def(
        "fit_polezero",
        [](const std::vector<double> &f, const std::vector<double> &v, int n_zeros, int n_poles,
           std::optional<double> f_lo, std::optional<double> f_hi, int multistarts, std::uint64_t seed)
        {
            const auto data = table_from(f, v);
            FitConfig cfg;
            cfg.n_zeros = n_zeros;
            cfg.n_poles = n_poles;
            cfg.f_lo = hz(f_lo.value_or(data.f_min()));
            cfg.f_hi = hz(f_hi.value_or(data.f_max()));
            cfg.multistarts = multistarts;
            cfg.seed = seed;
            return fit_polezero(data, cfg);
        },
        py::arg("freqs_hz"), py::arg("values"), py::arg("n_zeros") = 0, py::arg("n_poles") = 1,
        py::arg("f_lo_hz") = py::none(), py::arg("f_hi_hz") = py::none(), py::arg("multistarts") = 16,
        py::arg("seed") = 1);
    m.def("model_to_chain_json", &io::model_to_chain_json, py::arg("model"));

    // -- command line
    m.def(
        "cli_main",
        [](const std::vector<std::string> &args)
        {
            std::vector<std::string> owned{"owclb"};
            owned.insert(owned.end(), args.begin(), args.end());
            std::vector<char *> argv;
            for (auto &a : owned)
                argv.push_back(a.data());
            return cli::main(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Runs the owclb command line with the given arguments; returns the exit status.");
}
