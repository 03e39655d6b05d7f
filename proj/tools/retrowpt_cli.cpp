// retrowpt — retrodirective wireless power transfer simulator for ambient backscatter receivers
// Copyright (C) 2026 the retrowpt authors
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
// -------------------------------------------------------------------------
//
// Subcommands:
//   validate-seq  check a chip sequence against the per-symbol balance rule
//   average       analytic average harvested power (quadrature)
//   simulate      Monte Carlo over quasi-static blocks, CSV/JSON output
//   reproduce     preset sweeps: fig3 (power vs T_b), fig4 (power vs M), baseline
//   rerun         replay a previous run from its manifest, byte-for-byte
//
// Exit codes: 0 success, 1 validation failure, 2 input error, 3 numerical
// non-convergence.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "retrowpt/retrowpt.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace retrowpt;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::uint64_t default_seed()
{
    if (const char *env = std::getenv("RETROWPT_SEED"))
    {
        try
        {
            return std::stoull(env);
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument("RETROWPT_SEED is not an unsigned integer: " +
                                        std::string(env));
        }
    }
    return kDefaultSeed;
}

unsigned default_threads()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::string utc_timestamp()
{
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_file(const fs::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot write '" + path.string() + "'");
    out << content;
}

ordered_json config_json(const ScenarioConfig &cfg)
{
    ordered_json j;
    j["d0"] = cfg.d0;
    j["d1"] = cfg.d1;
    j["d2"] = cfg.d2;
    j["d3"] = cfg.d3;
    j["k0"] = cfg.k0;
    j["alpha"] = cfg.alpha;
    j["Ps"] = cfg.Ps;
    j["Pt"] = cfg.Pt;
    j["sigma_n2"] = cfg.sigma_n2;
    j["M"] = cfg.M;
    j["Ts"] = cfg.Ts;
    j["Tc"] = cfg.Tc;
    j["Ns"] = cfg.Ns;
    j["zeta"] = cfg.zeta;
    j["Tp"] = cfg.Tp;
    return j;
}

ScenarioConfig config_from_json(const ordered_json &j)
{
    std::ostringstream kv;
    for (const auto &[key, value] : j.items())
        kv << key << " = " << value.dump() << "\n";
    std::istringstream in(kv.str());
    return parse_scenario(in);
}

/// Everything needed to reproduce a run; written next to every output file.
struct RunManifest
{
    std::string subcommand;
    std::string figure; // reproduce only
    ScenarioConfig config;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t trials = 10000;
    unsigned threads = 1;
    bool no_training = false;
    bool waveform = false;
    bool dump = false;
    std::vector<std::string> outputs;
};

void write_manifest(const RunManifest &m, const fs::path &path)
{
    ordered_json j;
    j["tool"] = "retrowpt";
    j["version"] = version;
    j["subcommand"] = m.subcommand;
    if (!m.figure.empty())
        j["figure"] = m.figure;
    j["seed"] = m.seed;
    j["trials"] = m.trials;
    j["threads"] = m.threads;
    j["no_training"] = m.no_training;
    j["waveform"] = m.waveform;
    j["dump"] = m.dump;
    j["config"] = config_json(m.config);
    j["outputs"] = m.outputs;
    j["timestamp"] = utc_timestamp();
    write_file(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open manifest '" + path.string() + "'");
    ordered_json j;
    try
    {
        in >> j;
    }
    catch (const std::exception &e)
    {
        throw std::invalid_argument("manifest parse error: " + std::string(e.what()));
    }
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    if (j.contains("figure"))
        m.figure = j.at("figure").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.trials = j.at("trials").get<std::uint64_t>();
    m.threads = j.at("threads").get<unsigned>();
    m.no_training = j.at("no_training").get<bool>();
    m.waveform = j.at("waveform").get<bool>();
    m.dump = j.value("dump", false);
    m.config = config_from_json(j.at("config"));
    return m;
}

void print_power(const char *label, double watts)
{
    std::printf("%s = %.17g W (%.4g uW)\n", label, watts, watts * 1e6);
}

ordered_json cvec_json(const cvec &v)
{
    ordered_json arr = ordered_json::array();
    for (const auto &x : v)
        arr.push_back({x.real(), x.imag()});
    return arr;
}

// ---------------------------------------------------------------- simulate

void save_table(const ResultTable &table, const fs::path &dir, const std::string &stem,
                RunManifest &manifest)
{
    write_file(dir / (stem + ".csv"), to_csv(table));
    write_file(dir / (stem + ".json"), to_json_string(table));
    manifest.outputs.push_back(stem + ".csv");
    manifest.outputs.push_back(stem + ".json");
}

int run_simulate(RunManifest m, const fs::path &out_dir)
{
    fs::create_directories(out_dir);
    const ScenarioConfig &cfg = m.config;
    const TrainingSequence seq =
        m.no_training ? constant_sequence(cfg.Ns, cfg.half_chips_per_symbol(), cfg.Tc)
                      : default_sequence(cfg);
    const CorrelatorPath path = m.waveform ? CorrelatorPath::waveform : CorrelatorPath::closed_form;

    const PowerEstimate est = monte_carlo(cfg, seq, m.trials, m.seed, m.threads, path);
    const ResultTable table = single_row_table("T_b", cfg.Tb(), est, m.seed);
    save_table(table, out_dir, "simulate", m);

    if (m.dump)
    {
        // decomposition of the first trial, for inspection
        RandomStream rng(RandomStream::substream_seed(m.seed, 0));
        const ChannelRealization ch = draw_channels(cfg, rng);
        const AmbientFrame frame = draw_ambient_frame(cfg, rng);
        const CorrelatorOutput corr = path == CorrelatorPath::closed_form
                                          ? correlate_closed_form(cfg, ch, frame, seq, rng)
                                          : correlate_waveform(cfg, ch, frame, seq, rng);
        const PowerSample sample = harvested_power_components(ch, corr, cfg);
        ordered_json dump;
        dump["trial_seed"] = RandomStream::substream_seed(m.seed, 0);
        dump["x_s"] = cvec_json(corr.x_s);
        dump["x_i"] = cvec_json(corr.x_i);
        dump["n_tilde"] = cvec_json(corr.n_tilde);
        dump["x_r"] = cvec_json(corr.x_r);
        dump["q_W"] = sample.q;
        dump["q_components_W"] = {{"beamformed", sample.components->beamformed},
                                  {"leakage", sample.components->leakage},
                                  {"noise", sample.components->noise}};
        write_file(out_dir / "simulate_dump.json", dump.dump(2) + "\n");
        m.outputs.push_back("simulate_dump.json");
    }

    write_manifest(m, out_dir / "simulate.manifest.json");
    print_power("Q_avg", est.mean);
    if (est.std_error)
        std::printf("std_error = %.4g uW over %llu trials\n", *est.std_error * 1e6,
                    static_cast<unsigned long long>(est.trials));
    std::printf("wrote %s\n", (out_dir / "simulate.csv").string().c_str());
    return 0;
}

// --------------------------------------------------------------- reproduce

/// T_b grid for the fig3 preset, snapped to integer symbol counts when Ts
/// does not divide a grid point exactly.
std::vector<double> fig3_tb_grid(double ts)
{
    std::vector<double> grid;
    for (const double tb : {0.25e-3, 0.5e-3, 1.0e-3})
    {
        const long long ns = std::max(1ll, std::llround(tb / ts));
        grid.push_back(static_cast<double>(ns) * ts);
    }
    return grid;
}

int run_reproduce(RunManifest m, const fs::path &out_dir)
{
    fs::create_directories(out_dir);
    if (m.figure == "fig3")
    {
        for (const double ts_us : {5.0, 10.0, 20.0})
        {
            ScenarioConfig cfg = m.config;
            cfg.Ts = ts_us * 1e-6;
            cfg.Ns = 100; // sweep overrides per point
            const SweepResult sweep =
                sweep_tb(cfg, fig3_tb_grid(cfg.Ts), m.trials, m.seed, m.threads);
            char stem[32];
            std::snprintf(stem, sizeof(stem), "fig3_ts%gus", ts_us);
            save_table(to_table(sweep, m.seed), out_dir, stem, m);
        }
        write_manifest(m, out_dir / "fig3.manifest.json");
    }
    else if (m.figure == "fig4")
    {
        const SweepResult sweep =
            sweep_m(m.config, {50, 100, 200, 500, 1000}, m.trials, m.seed, m.threads);
        save_table(to_table(sweep, m.seed), out_dir, "fig4", m);
        write_manifest(m, out_dir / "fig4.manifest.json");
    }
    else if (m.figure == "baseline")
    {
        const PowerEstimate est =
            no_training_baseline(m.config, m.trials, m.seed, m.threads);
        save_table(single_row_table("T_b", m.config.Tb(), est, m.seed), out_dir, "baseline", m);
        write_manifest(m, out_dir / "baseline.manifest.json");
        print_power("Q_avg (no training)", est.mean);
    }
    else
    {
        throw std::invalid_argument("unknown figure id '" + m.figure +
                                    "' (expected fig3, fig4 or baseline)");
    }
    std::printf("wrote outputs to %s\n", out_dir.string().c_str());
    return 0;
}

// ------------------------------------------------------------ validate-seq

int run_validate_seq(const std::string &file, const std::string &inline_chips, int symbols)
{
    std::string text = inline_chips;
    if (!file.empty())
    {
        std::ifstream in(file);
        if (!in)
            throw std::invalid_argument("cannot open '" + file + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    const TrainingSequence seq = parse_chips(text, symbols); // throws on bad tokens -> exit 2
    const SequenceValidation report = validate_design_criterion(seq);
    if (!report.structure_ok)
        throw std::invalid_argument("sequence is malformed: " + report.error);

    std::printf("chips: %zu, symbols: %d, chips per symbol: %d\n", seq.chips.size(), seq.Ns,
                seq.chips_per_symbol());
    for (int i = 0; i < seq.Ns; ++i)
    {
        const int sum = report.symbol_sums[i];
        const int plus = (seq.chips_per_symbol() + sum) / 2;
        std::printf("symbol %d: +1 chips %d, -1 chips %d%s\n", i + 1, plus,
                    seq.chips_per_symbol() - plus, sum == 0 ? "" : "  <- unbalanced");
    }
    if (report.balanced)
    {
        std::printf("sequence is valid: every symbol block is balanced\n");
        return 0;
    }
    std::printf("sequence is INVALID: unbalanced symbol blocks leave ambient interference\n");
    return 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"retrodirective wireless power transfer simulator for ambient backscatter receivers"};
    app.require_subcommand(1);

    // validate-seq
    std::string seq_file, seq_inline;
    int seq_symbols = 1;
    auto *validate = app.add_subcommand("validate-seq",
                                        "check a +/-1 chip sequence against the balance rule");
    validate->add_option("--file", seq_file, "file with whitespace-separated +1/-1 tokens");
    validate->add_option("--chips", seq_inline, "inline +1/-1 tokens");
    validate->add_option("--symbols", seq_symbols, "ambient symbols covered")->required();

    // average
    std::string avg_config;
    std::string avg_out;
    double avg_rel_tol = 1e-8;
    auto *average = app.add_subcommand("average", "analytic average harvested power");
    average->add_option("--config", avg_config, "scenario file")->required();
    average->add_option("--rel-tol", avg_rel_tol, "quadrature relative tolerance");
    average->add_option("--out", avg_out, "also write average.csv/.json and a manifest here");

    // common simulate/reproduce options
    std::string sim_config, out_dir = ".";
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = default_threads();
    bool no_training = false, waveform = false, dump = false;

    auto *simulate = app.add_subcommand("simulate", "Monte Carlo harvested power");
    simulate->add_option("--config", sim_config, "scenario file")->required();
    simulate->add_option("--trials", trials, "Monte Carlo trials");
    simulate->add_option("--seed", seed, "master seed")->each([&](const std::string &) {
        seed_given = true;
    });
    simulate->add_option("--threads", threads, "worker threads (does not affect results)");
    simulate->add_flag("--no-training", no_training, "constant reflection coefficient baseline");
    simulate->add_flag("--waveform", waveform, "chip-resolution correlator instead of closed form");
    simulate->add_flag("--dump", dump, "write the first trial's correlator decomposition");
    simulate->add_option("--out", out_dir, "output directory");

    std::string figure, rep_config;
    auto *reproduce = app.add_subcommand("reproduce", "preset sweeps (fig3, fig4, baseline)");
    reproduce->add_option("figure", figure, "fig3 | fig4 | baseline")->required();
    reproduce->add_option("--config", rep_config, "scenario file (default: built-in scenario)");
    reproduce->add_option("--trials", trials, "Monte Carlo trials per point");
    reproduce->add_option("--seed", seed, "master seed")->each([&](const std::string &) {
        seed_given = true;
    });
    reproduce->add_option("--threads", threads, "worker threads (does not affect results)");
    reproduce->add_option("--out", out_dir, "output directory");

    std::string manifest_path;
    auto *rerun = app.add_subcommand("rerun", "replay a run from its manifest");
    rerun->add_option("manifest", manifest_path, "manifest JSON written by a previous run")
        ->required();
    rerun->add_option("--out", out_dir, "output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (validate->parsed())
        {
            if (seq_file.empty() == seq_inline.empty())
                throw std::invalid_argument("provide exactly one of --file and --chips");
            return run_validate_seq(seq_file, seq_inline, seq_symbols);
        }

        if (average->parsed())
        {
            const ScenarioConfig cfg = load_scenario(avg_config);
            QuadratureSpec spec;
            spec.rel_tol = avg_rel_tol;
            const PowerEstimate est = average_q_quadrature(cfg, spec);
            print_power("Q_avg", est.mean);
            if (!avg_out.empty())
            {
                RunManifest m;
                m.subcommand = "average";
                m.config = cfg;
                m.trials = 0;
                m.threads = 1;
                const fs::path dir(avg_out);
                fs::create_directories(dir);
                save_table(single_row_table("T_b", cfg.Tb(), est, 0), dir, "average", m);
                write_manifest(m, dir / "average.manifest.json");
            }
            return 0;
        }

        if (simulate->parsed())
        {
            RunManifest m;
            m.subcommand = "simulate";
            m.config = load_scenario(sim_config);
            m.seed = seed_given ? seed : default_seed();
            m.trials = trials;
            m.threads = threads;
            m.no_training = no_training;
            m.waveform = waveform;
            m.dump = dump;
            return run_simulate(std::move(m), out_dir);
        }

        if (reproduce->parsed())
        {
            RunManifest m;
            m.subcommand = "reproduce";
            m.figure = figure;
            m.config = rep_config.empty() ? ScenarioConfig{} : load_scenario(rep_config);
            m.config.validate();
            m.seed = seed_given ? seed : default_seed();
            m.trials = trials;
            m.threads = threads;
            return run_reproduce(std::move(m), out_dir);
        }

        if (rerun->parsed())
        {
            RunManifest m = read_manifest(manifest_path);
            if (m.subcommand == "simulate")
                return run_simulate(std::move(m), out_dir);
            if (m.subcommand == "reproduce")
                return run_reproduce(std::move(m), out_dir);
            if (m.subcommand == "average")
            {
                const PowerEstimate est = average_q_quadrature(m.config);
                const fs::path dir(out_dir);
                fs::create_directories(dir);
                save_table(single_row_table("T_b", m.config.Tb(), est, 0), dir, "average", m);
                write_manifest(m, dir / "average.manifest.json");
                print_power("Q_avg", est.mean);
                return 0;
            }
            throw std::invalid_argument("manifest has unknown subcommand '" + m.subcommand + "'");
        }
    }
    catch (const std::runtime_error &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3; // numerical non-convergence
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2; // input error
    }
    return 2;
}
