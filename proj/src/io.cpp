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

#include "owclb/io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace owclb::io
{
    using nlohmann::json;

    std::string format_number(double v)
    {
        std::array<char, 64> buf{};
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        if (ec != std::errc{})
            throw Error("number formatting failed");
        return std::string(buf.data(), end);
    }

    namespace
    {
        double parse_double(std::string_view s, const std::string &where)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            if (!s.empty() && s.front() == '+')
                s.remove_prefix(1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
                throw ParseError(where + ": '" + std::string(s) + "' is not a number");
            return v;
        }

        std::vector<std::string_view> split(std::string_view line, char sep)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            for (;;)
            {
                const auto pos = line.find(sep, start);
                out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
                if (pos == std::string_view::npos)
                    return out;
                start = pos + 1;
            }
        }

        std::string trim(std::string_view s)
        {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                s.remove_suffix(1);
            return std::string(s);
        }

        // -- JSON helpers ---------------------------------------------------------------------------

        const json &field(const json &obj, const char *name, const std::string &where)
        {
            if (!obj.is_object() || !obj.contains(name))
                throw ParseError(where + ": missing field '" + name + "'");
            return obj.at(name);
        }

        double number(const json &obj, const char *name, const std::string &where)
        {
            const auto &v = field(obj, name, where);
            if (!v.is_number())
                throw ParseError(where + "." + name + ": expected a number");
            return v.get<double>();
        }

        double number_or(const json &obj, const char *name, double fallback, const std::string &where)
        {
            return obj.contains(name) ? number(obj, name, where) : fallback;
        }

        std::vector<FrequencyHz> freq_list(const json &obj, const char *name, const std::string &where,
                                           bool required = true)
        {
            if (!obj.contains(name))
            {
                if (required)
                    throw ParseError(where + ": missing field '" + name + "'");
                return {};
            }
            const auto &arr = obj.at(name);
            if (!arr.is_array())
                throw ParseError(where + "." + name + ": expected an array of frequencies");
            std::vector<FrequencyHz> out;
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                if (!arr[i].is_number())
                    throw ParseError(where + "." + name + "[" + std::to_string(i) + "]: expected a number");
                out.emplace_back(arr[i].get<double>());
            }
            return out;
        }

        json freq_array(const std::vector<FrequencyHz> &fs)
        {
            json arr = json::array();
            for (auto f : fs)
                arr.push_back(f.value());
            return arr;
        }

        ComponentResponse parse_stage(const json &stage, const std::string &where,
                                      const std::filesystem::path &base_dir)
        {
            const auto &kind_j = field(stage, "kind", where);
            if (!kind_j.is_string())
                throw ParseError(where + ".kind: expected a string");
            const auto kind = kind_j.get<std::string>();
            const json empty = json::object();
            const json &p = stage.contains("params") ? stage.at("params") : empty;
            const std::string pw = where + ".params";

            if (kind == "flat_gain")
                return FlatGain{number(p, "gain", pw)};
            if (kind == "first_order_low_pass")
                return FirstOrderLowPass{number_or(p, "dc_gain", 1.0, pw), FrequencyHz(number(p, "corner", pw))};
            if (kind == "rational_pole_zero")
                return RationalPoleZero{number_or(p, "dc_gain", 1.0, pw), freq_list(p, "zeros", pw, false),
                                        freq_list(p, "poles", pw)};
            if (kind == "laser_second_order")
                return LaserSecondOrder{number_or(p, "dc_gain", 1.0, pw),
                                        FrequencyHz(number(p, "relaxation_freq", pw)), number(p, "damping", pw)};
            if (kind == "gaussian_low_pass")
                return GaussianLowPass{number_or(p, "dc_gain", 1.0, pw), FrequencyHz(number(p, "corner", pw))};
            if (kind == "beam_squint_sinc")
            {
                const auto &x = field(p, "elements", pw);
                if (!x.is_number_integer())
                    throw ParseError(pw + ".elements: expected an integer");
                return BeamSquintSinc{number_or(p, "element_gain", 1.0, pw), x.get<int>(),
                                      number(p, "spacing_delay", pw)};
            }
            if (kind == "tabulated")
            {
                const auto &t = field(p, "table", pw);
                if (t.is_string())
                {
                    std::filesystem::path path = t.get<std::string>();
                    if (path.is_relative())
                        path = base_dir / path;
                    return Tabulated{read_response_csv(path)};
                }
                if (!t.is_array())
                    throw ParseError(pw + ".table: expected a CSV path or an array of [frequency_hz, value] pairs");
                std::vector<ResponseTable::Row> rows;
                for (std::size_t i = 0; i < t.size(); ++i)
                {
                    const auto &r = t[i];
                    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
                        throw ParseError(pw + ".table[" + std::to_string(i) + "]: expected [frequency_hz, value]");
                    rows.push_back({r[0].get<double>(), r[1].get<double>()});
                }
                return Tabulated{ResponseTable(std::move(rows))};
            }
            throw ParseError(where + ".kind: unknown stage kind '" + kind + "'");
        }

        json stage_to_json(const ComponentResponse &c)
        {
            json params = std::visit(
                [](const auto &s) -> json
                {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, FlatGain>)
                        return {{"gain", s.gain}};
                    else if constexpr (std::is_same_v<T, FirstOrderLowPass> || std::is_same_v<T, GaussianLowPass>)
                        return {{"dc_gain", s.dc_gain}, {"corner", s.corner.value()}};
                    else if constexpr (std::is_same_v<T, RationalPoleZero>)
                        return {{"dc_gain", s.dc_gain}, {"zeros", freq_array(s.zeros)}, {"poles", freq_array(s.poles)}};
                    else if constexpr (std::is_same_v<T, LaserSecondOrder>)
                        return {{"dc_gain", s.dc_gain},
                                {"relaxation_freq", s.relaxation_freq.value()},
                                {"damping", s.damping}};
                    else if constexpr (std::is_same_v<T, BeamSquintSinc>)
                        return {{"element_gain", s.element_gain},
                                {"elements", s.elements},
                                {"spacing_delay", s.spacing_delay}};
                    else
                    {
                        json rows = json::array();
                        for (const auto &r : s.table.rows())
                            rows.push_back({r.frequency_hz, r.value});
                        return {{"table", rows}};
                    }
                },
                c.variant());
            return {{"kind", std::string(c.kind())}, {"params", params}};
        }

        json noise_to_json(const NoiseSpectrum &n)
        {
            json out = {{"floor", n.floor()}};
            if (n.uplift_zero())
                out["uplift_zero"] = n.uplift_zero()->value();
            out["rolloff_poles"] = freq_array(n.rolloff_poles());
            if (!n.rolloff_zeros().empty())
                out["rolloff_zeros"] = freq_array(n.rolloff_zeros());
            return out;
        }
    }

    LinkChain parse_chain_json(std::string_view text, const std::filesystem::path &base_dir)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ParseError(std::string("channel JSON: ") + e.what());
        }
        try
        {
            const auto &stages_j = field(doc, "stages", "channel");
            if (!stages_j.is_array())
                throw ParseError("channel.stages: expected an array");
            std::vector<ComponentResponse> stages;
            for (std::size_t i = 0; i < stages_j.size(); ++i)
                stages.push_back(parse_stage(stages_j[i], "channel.stages[" + std::to_string(i) + "]", base_dir));

            const auto &n = field(doc, "noise", "channel");
            std::optional<FrequencyHz> uplift;
            if (n.contains("uplift_zero") && !n.at("uplift_zero").is_null())
                uplift = FrequencyHz(number(n, "uplift_zero", "channel.noise"));
            NoiseSpectrum noise(number(n, "floor", "channel.noise"), uplift,
                                freq_list(n, "rolloff_poles", "channel.noise", false),
                                freq_list(n, "rolloff_zeros", "channel.noise", false));
            return LinkChain(std::move(stages), std::move(noise));
        }
        catch (const ParseError &)
        {
            throw;
        }
        catch (const json::exception &e)
        {
            throw ParseError(std::string("channel JSON: ") + e.what());
        }
        catch (const InvalidArgument &e)
        {
            throw ParseError(std::string("channel JSON: ") + e.what());
        }
    }

    LinkChain load_chain(const std::filesystem::path &path)
    {
        return parse_chain_json(read_file(path), path.parent_path());
    }

    std::string chain_to_json(const LinkChain &chain)
    {
        json stages = json::array();
        for (const auto &s : chain.stages())
            stages.push_back(stage_to_json(s));
        json doc = {{"stages", stages}, {"noise", noise_to_json(chain.noise())}};
        return doc.dump(2) + "\n";
    }

    std::string model_to_chain_json(const MagSqPoleZeroGnr &model)
    {
        json zeros = json::array(), poles = json::array();
        for (double z : model.zeros())
            zeros.push_back(z);
        for (double p : model.poles())
            poles.push_back(p);
        json doc = {{"stages",
                     json::array({{{"kind", "rational_pole_zero"},
                                   {"params", {{"dc_gain", std::sqrt(model.gnr0())}, {"zeros", zeros}, {"poles", poles}}}}})},
                    {"noise", {{"floor", 1.0}, {"rolloff_poles", json::array()}}}};
        return doc.dump(2) + "\n";
    }

    // -- CSV -------------------------------------------------------------------------------------

    std::size_t CsvTable::column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw ParseError("CSV: missing column '" + std::string(name) + "'");
    }

    CsvTable parse_csv(std::string_view text)
    {
        CsvTable out;
        std::size_t line_no = 0;
        for (auto line : split(text, '\n'))
        {
            ++line_no;
            const auto t = trim(line);
            if (t.empty())
                continue;
            if (t.front() == '#')
            {
                out.comments.push_back(trim(std::string_view(t).substr(1)));
                continue;
            }
            const auto cells = split(t, ',');
            if (out.header.empty())
            {
                for (auto c : cells)
                    out.header.push_back(trim(c));
                continue;
            }
            if (cells.size() != out.header.size())
                throw ParseError("CSV line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(out.header.size()) + " fields, got " + std::to_string(cells.size()));
            std::vector<double> row;
            for (std::size_t i = 0; i < cells.size(); ++i)
                row.push_back(parse_double(cells[i], "CSV line " + std::to_string(line_no) + " column '" +
                                                         out.header[i] + "'"));
            out.rows.push_back(std::move(row));
        }
        if (out.header.empty())
            throw ParseError("CSV: missing header row");
        return out;
    }

    CsvTable read_csv(const std::filesystem::path &path) { return parse_csv(read_file(path)); }

    std::string format_csv(const CsvTable &table)
    {
        std::string out;
        for (const auto &c : table.comments)
            out += "# " + c + "\n";
        for (std::size_t i = 0; i < table.header.size(); ++i)
            out += (i ? "," : "") + table.header[i];
        out += "\n";
        for (const auto &row : table.rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                if (i)
                    out += ',';
                out += format_number(row[i]);
            }
            out += "\n";
        }
        return out;
    }

    ResponseTable parse_response_csv(std::string_view text, bool from_db)
    {
        const auto t = parse_csv(text);
        if (t.header.size() != 2)
            throw ParseError("response CSV: expected the header 'frequency_hz,value'");
        const auto fc = t.column("frequency_hz");
        const auto vc = t.column("value");
        std::vector<ResponseTable::Row> rows;
        for (const auto &r : t.rows)
            rows.push_back({r[fc], from_db ? std::pow(10.0, r[vc] / 10.0) : r[vc]});
        try
        {
            return ResponseTable(std::move(rows));
        }
        catch (const InvalidArgument &e)
        {
            throw ParseError(std::string("response CSV: ") + e.what());
        }
    }

    ResponseTable read_response_csv(const std::filesystem::path &path, bool from_db)
    {
        return parse_response_csv(read_file(path), from_db);
    }

    std::string response_csv(const ResponseTable &table)
    {
        CsvTable t{{}, {"frequency_hz", "value"}, {}};
        for (const auto &r : table.rows())
            t.rows.push_back({r.frequency_hz, r.value});
        return format_csv(t);
    }

    std::string waterfill_csv(const WaterfillSolution &s)
    {
        CsvTable t;
        t.comments.push_back("f_max_hz=" + format_number(s.f_max_hz) + " sigma2_v2=" + format_number(s.sigma2) +
                             " rate_bps=" + format_number(s.rate_bps) + " water_level=" +
                             format_number(s.water_level));
        t.header = {"f_hz", "psd_v2_per_hz", "gnr_linear"};
        for (std::size_t i = 0; i < s.freqs_hz.size(); ++i)
            t.rows.push_back({s.freqs_hz[i], s.psd[i], s.gnr[i]});
        return format_csv(t);
    }

    std::string bitload_csv(const BitLoadPlan &plan)
    {
        CsvTable t;
        t.comments.push_back("algorithm=" + plan.algorithm + " total_power_v2=" + format_number(plan.total_power) +
                             " rate_bps=" + format_number(plan.rate_bps) + " flops=" + std::to_string(plan.flops) +
                             " budget_v2=" + format_number(plan.budget));
        t.header = {"k", "f_hz", "bits", "power_v2"};
        for (std::size_t i = 0; i < plan.bits.size(); ++i)
            t.rows.push_back({static_cast<double>(i + 1), static_cast<double>(i + 1) * plan.delta_b,
                              static_cast<double>(plan.bits[i]), plan.power_k[i]});
        return format_csv(t);
    }

    std::vector<std::pair<std::string, std::string>> parse_summary(std::string_view comment)
    {
        std::vector<std::pair<std::string, std::string>> out;
        std::istringstream in{std::string(comment)};
        std::string tok;
        while (in >> tok)
        {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw ParseError("summary line: '" + tok + "' is not key=value");
            out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
        return out;
    }

    void write_file(const std::filesystem::path &path, std::string_view contents)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw Error("cannot open '" + path.string() + "' for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f)
            throw Error("failed writing '" + path.string() + "'");
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw ParseError("cannot open '" + path.string() + "'");
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }
}
