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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mcvd/errors.hpp"
#include "mcvd/harness/cir.hpp"
#include "mcvd/harness/config.hpp"
#include "mcvd/harness/csv.hpp"
#include "mcvd/harness/sweep.hpp"
#include "mcvd/optimizer.hpp"

namespace {

using namespace mcvd;
using namespace mcvd::harness;
using nlohmann::json;

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct Common {
    std::string config;
    bool override_validity = false;
    std::optional<unsigned> workers;
};

ExperimentConfig load(const Common& common)
{
    std::ifstream in(common.config);
    if (!in)
        throw IoError("cannot open config file " + common.config);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("parse error: ") + e.what()});
    }
    if (j.is_object() && common.override_validity)
        j["override_validity"] = true;
    if (j.is_object() && common.workers)
        j["workers"] = *common.workers;
    return parse_config(j);
}

json window_json(const DetectionWindow& w)
{
    if (const auto* tw = std::get_if<TimeWindow>(&w))
        return {{"t1_s", tw->t1}, {"t2_s", tw->t2}};
    const auto& sw = std::get<SampleWindow>(w);
    return {{"n1", sw.n1}, {"n2", sw.n2}};
}

json reuse_json(const ReusableWindow& r)
{
    if (const auto* tr = std::get_if<TimeReuse>(&r))
        return {{"tu_s", tr->tu}};
    if (const auto* sr = std::get_if<SampleReuse>(&r))
        return {{"nu", sr->nu}};
    return nullptr;
}

json optimization_json(const OptimizationResult& r)
{
    json j;
    j["Q"] = r.q;
    j["window"] = window_json(r.window.window);
    j["window_objective"] = r.window.objective;
    j["q_cutoff"] = r.window.q_cutoff;
    j["frozen"] = r.window.frozen;
    if (r.kind == ReceiverKind::absorbing) {
        j["bar_t1_s"] = r.bar_t1;
        j["root"] = {{"tu_s", r.root.value},
                     {"bracket_lo_s", r.root.bracket_lo},
                     {"bracket_hi_s", r.root.bracket_hi},
                     {"clamp_applied", r.root.clamp_applied}};
    } else {
        j["bar_n1"] = r.bar_n1;
        j["root"] = {{"nu", r.root_samples.value}, {"clamp_applied", r.root_samples.clamp_applied}};
    }
    if (r.closed_form) {
        json cf = r.closed_form->as_map();
        cf["clamp_applied"] = r.closed_form->clamp_applied;
        if (r.kind == ReceiverKind::absorbing)
            cf["tu_s"] = r.closed_form->value;
        else
            cf["nu"] = r.closed_form->samples;
        j["closed_form"] = cf;
    } else {
        j["closed_form"] = {{"error", r.closed_form_error},
                            {"intermediates", r.closed_form_error_intermediates}};
    }
    j["numerical"] = {{"reuse", reuse_json(r.numerical.reuse)}, {"msinar_objective", r.numerical.objective}};
    if (r.ideal)
        j["ideal"] = {{"reuse", reuse_json(r.ideal->reuse)},
                      {"threshold", r.ideal->threshold.threshold},
                      {"pe", r.ideal->threshold.pe},
                      {"log_pe", r.ideal->threshold.log_pe}};
    json cands = json::object();
    for (const auto& [name, reuse] : r.candidates)
        cands[name] = reuse_json(reuse);
    j["candidates"] = cands;
    j["clamp_applied"] = r.clamp_applied;
    j["warnings"] = r.warnings;
    return j;
}

json intermediates_json(const std::vector<SweepRow>& rows)
{
    json out = json::array();
    for (const auto& row : rows) {
        json j;
        j["scheme"] = std::string(to_string(row.scheme));
        j["Q"] = row.ber.q;
        j["ok"] = row.ok;
        if (!row.ok)
            j["error"] = row.error;
        j["errors"] = row.ber.errors;
        j["intermediates"] = row.intermediates;
        out.push_back(j);
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    body(out);
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

int cmd_run(const Common& common, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::optional<std::uint64_t> trials, std::optional<std::string> mode)
{
    ExperimentConfig c = load(common);
    if (seed)
        c.seed = *seed;
    if (trials)
        c.trials = *trials;
    if (mode) {
        const auto parsed = parse_mode(*mode);
        if (!parsed)
            throw ConfigError({"mode must be gaussian or binomial"});
        c.mode = *parsed;
    }
    if (auto problems = check_config(c); !problems.empty())
        throw ConfigError(problems);

    const auto rows = run_sweep(c);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    const std::filesystem::path dir(out_dir);
    write_file(dir / "sweep.csv", [&](std::ostream& o) { write_csv(rows, o); });
    write_file(dir / "plotdata.dat", [&](std::ostream& o) { emit_plotdata(rows, o); });
    write_file(dir / "intermediates.json", [&](std::ostream& o) { o << intermediates_json(rows).dump(2) << '\n'; });
    write_file(dir / "config.json", [&](std::ostream& o) { o << serialize_config(c); });

    int failed = 0;
    for (const auto& row : rows) {
        if (!row.ok) {
            ++failed;
            std::cerr << "point " << to_string(row.scheme) << " Q=" << row.ber.q << " failed: " << row.error << '\n';
        }
    }
    std::cout << "wrote " << rows.size() << " rows to " << (dir / "sweep.csv").string() << '\n';
    return failed > 0 ? exit_numerical : 0;
}

int cmd_cir(const Common& common, const std::string& out_file)
{
    const ExperimentConfig c = load(common);
    const CirTable table = export_cir(c);
    write_file(out_file, [&](std::ostream& o) { write_cir(table, o); });
    return 0;
}

int cmd_optimize(const Common& common)
{
    const ExperimentConfig c = load(common);
    const ChannelParams p = c.channel();
    const LinkConfig cfg = c.link();
    OptimizeOptions opt;
    opt.window.time_steps = c.grid.window_steps;
    opt.reuse = ReuseSearch{c.grid.tu_points, ThresholdGrid{c.grid.threshold_points}, c.workers};
    opt.with_ideal = c.has(Scheme::ideal);

    json out;
    out["receiver"] = std::string(to_string(p.kind));
    out["Ts_s"] = cfg.symbol_time;
    out["L"] = cfg.isi_length;
    out["peak_time_s"] = peak_time(p);
    if (p.kind == ReceiverKind::passive) {
        out["sample_interval_s"] = cfg.sample_interval;
        out["samples"] = cfg.samples;
    }
    std::vector<double> qs = c.Q;
    std::sort(qs.begin(), qs.end());
    bool numerical_failure = false;
    out["points"] = json::array();
    for (double q : qs) {
        const auto r = optimize(cfg, p, q, opt);
        numerical_failure = numerical_failure || !r.closed_form_error.empty();
        out["points"].push_back(optimization_json(r));
    }
    std::cout << out.dump(2) << '\n';
    return numerical_failure ? exit_numerical : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mcvd: molecular communication link simulator with ISI-reuse detection"};
    app.require_subcommand(1);

    Common common;
    unsigned workers = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "experiment configuration (JSON)")->required();
        sub->add_flag("--override-validity", common.override_validity,
                      "accept passive receivers with r/(r+d) >= 0.15");
        sub->add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
    };

    auto* run = app.add_subcommand("run", "scheme comparison sweep to CSV");
    add_common(run);
    std::string out_dir = "results";
    std::optional<std::uint64_t> seed, trials;
    std::optional<std::string> mode;
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "base seed");
    run->add_option("--trials", trials, "Monte Carlo trials per point");
    run->add_option("--mode", mode, "gaussian or binomial")->check(CLI::IsMember({"gaussian", "binomial"}));

    auto* cir = app.add_subcommand("cir", "export desired and ISI impulse responses");
    add_common(cir);
    std::string cir_out;
    cir->add_option("--out", cir_out, "output file")->required();

    auto* opt = app.add_subcommand("optimize", "print window and reusable-duration optimization");
    add_common(opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }
    for (auto* sub : {run, cir, opt})
        if (sub->count("--workers") > 0)
            common.workers = workers;

    try {
        if (*run)
            return cmd_run(common, out_dir, seed, trials, mode);
        if (*cir)
            return cmd_cir(common, cir_out);
        return cmd_optimize(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ArgumentError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        for (const auto& [k, v] : e.intermediates())
            std::cerr << "  " << k << " = " << v << '\n';
        return exit_numerical;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
