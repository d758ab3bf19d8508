/*
   Copyright 2026 The mcvd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mcvd/channel.hpp"
#include "mcvd/detection.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/link.hpp"

namespace mcvd::harness {

enum class Scheme { conventional_ook, optimal_window, proposed_numerical, proposed_theoretical, ideal };

inline constexpr Scheme all_schemes[] = {Scheme::conventional_ook, Scheme::optimal_window,
                                         Scheme::proposed_numerical, Scheme::proposed_theoretical, Scheme::ideal};

inline std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::conventional_ook: return "conventional_ook";
    case Scheme::optimal_window: return "optimal_window";
    case Scheme::proposed_numerical: return "proposed_numerical";
    case Scheme::proposed_theoretical: return "proposed_theoretical";
    case Scheme::ideal: return "ideal";
    }
    return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (Scheme s : all_schemes)
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

struct GridConfig {
    int tu_points = 400;
    int threshold_points = 2048;
    int window_steps = 2000;

    bool operator==(const GridConfig&) const = default;
};

/// Experiment description. Lengths are kept in the configured micrometres;
/// channel() and link() give the SI view used by the library.
struct ExperimentConfig {
    ReceiverKind receiver = ReceiverKind::absorbing;
    double d_um = 5.0;
    double r_um = 5.0;
    double D_um2_per_s = 79.4;
    double Ts_s = 0.2;
    int L = 3;
    std::vector<double> Q{1e2, 3e2, 1e3, 3e3, 1e4, 3e4, 1e5};
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    SimulationMode mode = SimulationMode::gaussian;
    std::vector<Scheme> schemes{all_schemes, all_schemes + 5};
    GridConfig grid{};
    double delta_t_s = 1e-4;
    bool override_validity = false;
    bool override_symbol_time = false;
    unsigned workers = 1;

    bool operator==(const ExperimentConfig&) const = default;

    ChannelParams channel() const
    {
        const double d = d_um * 1e-6, r = r_um * 1e-6, D = D_um2_per_s * 1e-12;
        return receiver == ReceiverKind::absorbing ? absorbing_receiver(d, r, D) : passive_receiver(d, r, D);
    }

    LinkConfig link() const
    {
        if (receiver == ReceiverKind::absorbing)
            return LinkConfig::uniform(Ts_s, L);
        return passive_link(channel(), Ts_s, L);
    }

    bool has(Scheme s) const
    {
        for (Scheme x : schemes)
            if (x == s)
                return true;
        return false;
    }
};

inline constexpr std::uint64_t min_trials = 10'000;

/// Receiver-specific defaults.
inline ExperimentConfig default_config(ReceiverKind kind)
{
    ExperimentConfig c;
    c.receiver = kind;
    if (kind == ReceiverKind::passive) {
        c.d_um = 10.0;
        c.r_um = 1.5;
        c.Ts_s = 1.0;
    }
    return c;
}

/// Every invariant violation, empty when valid.
inline std::vector<std::string> check_config(const ExperimentConfig& c)
{
    std::vector<std::string> out;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok)
            out.push_back(msg);
    };
    need(c.d_um > 0.0 && std::isfinite(c.d_um), "d_um must be positive");
    need(c.r_um > 0.0 && std::isfinite(c.r_um), "r_um must be positive");
    need(c.D_um2_per_s > 0.0 && std::isfinite(c.D_um2_per_s), "D_um2_per_s must be positive");
    need(c.Ts_s > 0.0 && std::isfinite(c.Ts_s), "Ts_s must be positive");
    need(c.L >= 0 && c.L <= max_enumerated_isi, "L must be in [0, " + std::to_string(max_enumerated_isi) + "]");
    need(!c.Q.empty(), "Q list must be nonempty");
    for (double q : c.Q) {
        need(q > 0.0 && std::isfinite(q), "Q values must be positive");
        if (c.mode == SimulationMode::binomial)
            need(q == std::floor(q), "binomial mode needs integer Q values");
    }
    need(c.trials >= min_trials, "trials must be >= " + std::to_string(min_trials));
    need(!c.schemes.empty(), "schemes must be nonempty");
    for (std::size_t i = 0; i < c.schemes.size(); ++i)
        for (std::size_t j = i + 1; j < c.schemes.size(); ++j)
            need(c.schemes[i] != c.schemes[j], "duplicate scheme " + std::string(to_string(c.schemes[i])));
    need(c.grid.tu_points >= 1, "grid.tu_points must be >= 1");
    need(c.grid.threshold_points >= 2, "grid.threshold_points must be >= 2");
    need(c.grid.window_steps >= 1, "grid.window_steps must be >= 1");
    need(c.delta_t_s > 0.0 && std::isfinite(c.delta_t_s), "delta_t_s must be positive");
    if (!out.empty())
        return out;

    const ChannelParams p = c.channel();
    for (auto& m : check_params(p, c.override_validity))
        out.push_back(m);
    if (!out.empty())
        return out;
    for (auto& m : check_link(c.link(), p, c.override_symbol_time))
        out.push_back(m);
    return out;
}

namespace detail {

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& dst, std::vector<std::string>& problems)
{
    if (!j.contains(key))
        return;
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        problems.push_back(std::string("key '") + key + "' has the wrong type");
    }
}

} // namespace detail

/// Parse and validate a JSON document. Unknown keys are rejected.
inline ExperimentConfig parse_config(const nlohmann::json& j)
{
    std::vector<std::string> problems;
    if (!j.is_object())
        throw ConfigError({"configuration must be a JSON object"});

    ReceiverKind kind = ReceiverKind::absorbing;
    if (j.contains("receiver")) {
        const auto& v = j.at("receiver");
        const auto parsed = v.is_string() ? parse_receiver(v.get<std::string>()) : std::nullopt;
        if (parsed)
            kind = *parsed;
        else
            problems.push_back("receiver must be \"absorbing\" or \"passive\"");
    }
    ExperimentConfig c = default_config(kind);

    static const char* known[] = {"receiver", "d_um", "r_um", "D_um2_per_s", "Ts_s", "L", "Q", "trials",
                                  "seed", "mode", "schemes", "grid", "delta_t_s", "override_validity",
                                  "override_symbol_time", "workers"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || it.key() == k;
        if (!ok)
            problems.push_back("unknown key '" + it.key() + "'");
    }

    detail::read_key(j, "d_um", c.d_um, problems);
    detail::read_key(j, "r_um", c.r_um, problems);
    detail::read_key(j, "D_um2_per_s", c.D_um2_per_s, problems);
    detail::read_key(j, "Ts_s", c.Ts_s, problems);
    detail::read_key(j, "L", c.L, problems);
    detail::read_key(j, "Q", c.Q, problems);
    detail::read_key(j, "trials", c.trials, problems);
    detail::read_key(j, "seed", c.seed, problems);
    detail::read_key(j, "delta_t_s", c.delta_t_s, problems);
    detail::read_key(j, "override_validity", c.override_validity, problems);
    detail::read_key(j, "override_symbol_time", c.override_symbol_time, problems);
    detail::read_key(j, "workers", c.workers, problems);

    if (j.contains("mode")) {
        const auto& v = j.at("mode");
        const auto parsed = v.is_string() ? parse_mode(v.get<std::string>()) : std::nullopt;
        if (parsed)
            c.mode = *parsed;
        else
            problems.push_back("mode must be \"gaussian\" or \"binomial\"");
    }
    if (j.contains("schemes")) {
        const auto& v = j.at("schemes");
        if (!v.is_array()) {
            problems.push_back("schemes must be a list");
        } else {
            c.schemes.clear();
            for (const auto& s : v) {
                const auto parsed = s.is_string() ? parse_scheme(s.get<std::string>()) : std::nullopt;
                if (parsed)
                    c.schemes.push_back(*parsed);
                else
                    problems.push_back("unknown scheme " + s.dump());
            }
        }
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object()) {
            problems.push_back("grid must be an object");
        } else {
            for (auto it = g.begin(); it != g.end(); ++it)
                if (it.key() != "tu_points" && it.key() != "threshold_points" && it.key() != "window_steps")
                    problems.push_back("unknown key 'grid." + it.key() + "'");
            detail::read_key(g, "tu_points", c.grid.tu_points, problems);
            detail::read_key(g, "threshold_points", c.grid.threshold_points, problems);
            detail::read_key(g, "window_steps", c.grid.window_steps, problems);
        }
    }

    if (problems.empty())
        problems = check_config(c);
    if (!problems.empty())
        throw ConfigError(problems);
    return c;
}

inline ExperimentConfig parse_config_text(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({std::string("parse error: ") + e.what()});
    }
    return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Canonical JSON form; every key is written.
inline nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json schemes = nlohmann::json::array();
    for (Scheme s : c.schemes)
        schemes.push_back(std::string(to_string(s)));
    return {
        {"receiver", std::string(to_string(c.receiver))},
        {"d_um", c.d_um},
        {"r_um", c.r_um},
        {"D_um2_per_s", c.D_um2_per_s},
        {"Ts_s", c.Ts_s},
        {"L", c.L},
        {"Q", c.Q},
        {"trials", c.trials},
        {"seed", c.seed},
        {"mode", std::string(to_string(c.mode))},
        {"schemes", schemes},
        {"grid",
         {{"tu_points", c.grid.tu_points},
          {"threshold_points", c.grid.threshold_points},
          {"window_steps", c.grid.window_steps}}},
        {"delta_t_s", c.delta_t_s},
        {"override_validity", c.override_validity},
        {"override_symbol_time", c.override_symbol_time},
        {"workers", c.workers},
    };
}

inline std::string serialize_config(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

} // namespace mcvd::harness
