// mimo-rfsel  RF-chain activation and antenna selection for downlink massive MIMO
// Copyright (C) 2026 mimo-rfsel contributors
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

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rfsel/channel.hpp"
#include "rfsel/config.hpp"
#include "rfsel/csv.hpp"
#include "rfsel/errors.hpp"
#include "rfsel/experiments.hpp"
#include "rfsel/precoder.hpp"
#include "rfsel/selection.hpp"

namespace fs = std::filesystem;
using namespace rfsel;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> users, antennas, trials, threads, chains;
    std::optional<double> p_max, p_c, alpha, cell_radius, min_distance;
    std::optional<std::string> equal_power_variant, random_power;
    std::string out_dir;
};

void add_common_flags(CLI::App *cmd, CommonFlags &f)
{
    cmd->add_option("--config", f.config_path, "flat key = value config file");
    cmd->add_option("--seed", f.seed, "master seed (fallback: MIMO_RFSEL_SEED)");
    cmd->add_option("--users", f.users, "number of single-antenna users K");
    cmd->add_option("--antennas", f.antennas, "number of BS antennas N");
    cmd->add_option("--p-max", f.p_max, "total power budget (noise-normalized)");
    cmd->add_option("--p-c", f.p_c, "per-RF-chain circuit power");
    cmd->add_option("--alpha", f.alpha, "path loss exponent");
    cmd->add_option("--cell-radius", f.cell_radius, "cell radius in meters");
    cmd->add_option("--min-distance", f.min_distance, "minimum user distance in meters");
    cmd->add_option("--trials", f.trials, "Monte-Carlo trials per sweep point");
    cmd->add_option("--threads", f.threads, "worker threads (1 = serial)");
    cmd->add_option("--chains", f.chains, "fixed S for the random baseline");
    cmd->add_option("--equal-power-variant", f.equal_power_variant,
                    "equal-received-power variant: paper|feasible");
    cmd->add_option("--random-power", f.random_power,
                    "allocation for the random baseline: waterfill|equal_received");
    cmd->add_option("--out", f.out_dir, "output directory for CSV files and the manifest");
}

// True when the config file itself assigns the given key.
bool config_file_sets(const std::string &path, const std::string &key)
{
    if (path.empty())
        return false;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line))
    {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        std::string k = line.substr(0, eq);
        k.erase(0, k.find_first_not_of(" \t"));
        const auto end = k.find_last_not_of(" \t");
        if (end != std::string::npos)
            k.erase(end + 1);
        if (k == key)
            return true;
    }
    return false;
}

ExperimentConfig resolve_config(const CommonFlags &f)
{
    ExperimentConfig cfg;
    if (!f.config_path.empty())
        cfg = load_config_file(f.config_path);

    if (f.seed)
        cfg.master_seed = *f.seed;
    else if (!config_file_sets(f.config_path, "seed"))
    {
        if (const char *env = std::getenv("MIMO_RFSEL_SEED"))
            cfg.master_seed = std::stoull(env);
    }

    if (f.users)
        cfg.users = *f.users;
    if (f.antennas)
        cfg.antennas = *f.antennas;
    if (f.p_max)
        cfg.p_max = *f.p_max;
    if (f.p_c)
        cfg.p_c = *f.p_c;
    if (f.alpha)
        cfg.alpha = *f.alpha;
    if (f.cell_radius)
        cfg.cell_radius = *f.cell_radius;
    if (f.min_distance)
        cfg.min_distance = *f.min_distance;
    if (f.trials)
        cfg.trials = *f.trials;
    if (f.threads)
        cfg.threads = *f.threads;
    if (f.chains)
        cfg.random_chains = *f.chains;
    if (f.equal_power_variant)
        apply_config_key(cfg, "equal_power_variant", *f.equal_power_variant);
    if (f.random_power)
        apply_config_key(cfg, "random_power", *f.random_power);
    return cfg;
}

fs::path prepare_out_dir(const std::string &dir)
{
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_lines(const fs::path &file, const std::vector<std::string> &lines)
{
    std::ofstream out(file);
    if (!out)
        throw std::runtime_error("cannot write " + file.string());
    for (const std::string &line : lines)
        out << line << '\n';
}

std::vector<std::string> sweep_csv_lines(const std::vector<SweepRow> &rows)
{
    std::vector<std::string> lines;
    lines.push_back("axis_value,algorithm,mean_rate,stderr_rate,mean_S,mean_pout,trials,skipped");
    for (const SweepRow &r : rows)
        lines.push_back(format_float(r.axis_value) + "," + r.algorithm + "," +
                        format_float(r.mean_rate) + "," + format_float(r.stderr_rate) + "," +
                        format_float(r.mean_chains) + "," + format_float(r.mean_pout) + "," +
                        format_u64(r.trials) + "," + format_u64(r.skipped));
    return lines;
}

// ---------------------------------------------------------------- analytic

int cmd_analytic(const CommonFlags &flags)
{
    const ExperimentConfig cfg = resolve_config(flags);
    CircuitBudget budget_cfg(cfg.p_max, cfg.p_c);

    int s_star = 0;
    try
    {
        s_star = optimal_rf_count_analytic(cfg.users, budget_cfg);
    }
    catch (const infeasible_budget_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    const double phi = rf_count_threshold(cfg.users, budget_cfg);
    std::cout << "phi = " << format_float(phi) << '\n';
    std::cout << "S_star = " << s_star << '\n';
    std::cout << "max_chains = " << budget_cfg.max_chains << '\n';
    std::cout << "S,avg_rate\n";
    std::vector<std::string> csv{"S,avg_rate"};
    for (int s = cfg.users; s <= budget_cfg.max_chains; ++s)
    {
        const double r = average_sum_rate_closed_form(s, cfg.users, budget_cfg);
        std::cout << s << ',' << format_float(r) << '\n';
        csv.push_back(std::to_string(s) + "," + format_float(r));
    }

    if (!flags.out_dir.empty())
    {
        const fs::path dir = prepare_out_dir(flags.out_dir);
        RunManifest manifest;
        manifest.command = "analytic";
        manifest.config = cfg;
        manifest.started_at = manifest.finished_at = utc_timestamp_now();
        manifest.outputs = {"analytic.csv"};
        write_lines(dir / "analytic.csv", csv);
        write_manifest(dir / "manifest.json", manifest);
    }
    return kExitOk;
}

// ------------------------------------------------------------------ select

int cmd_select(const CommonFlags &flags, const std::string &algo_name, bool dump_geometry)
{
    ExperimentConfig cfg = resolve_config(flags);
    cfg.axis = SweepAxis::none;
    cfg.validate();
    const Algorithm algo = parse_algorithm(algo_name);
    if (algo == Algorithm::analytic)
        throw std::invalid_argument("select: --algo must be greedy, bfs, or random");

    const CircuitBudget budget_cfg(cfg.p_max, cfg.p_c);

    // Same draw as experiments trial 0: geometry substream {0,0}, fading {0,1}.
    Rng geo_rng = substream(cfg.master_seed, {0, 0});
    const UserGeometry geo =
        draw_user_positions(cfg.users, cfg.cell_radius, cfg.min_distance, geo_rng);
    Rng ch_rng = substream(cfg.master_seed, {0, 1});
    ChannelRealization ch =
        draw_small_scale(cfg.users, cfg.antennas, ch_rng, substream_seed(cfg.master_seed, {0, 1}));
    ch.large_scale = path_loss(geo, cfg.alpha);

    SelectionResult res;
    switch (algo)
    {
    case Algorithm::greedy:
    {
        GreedyOptions opts;
        opts.initial_bfs_cap = cfg.initial_bfs_cap;
        opts.threads = cfg.threads;
        res = greedy_select(ch, budget_cfg, opts);
        break;
    }
    case Algorithm::bfs:
    {
        BfsOptions opts;
        opts.subset_cap = cfg.bfs_subset_cap;
        opts.threads = cfg.threads;
        res = bfs_select(ch, budget_cfg, opts);
        break;
    }
    default:
    {
        int s = cfg.random_chains;
        if (s == 0)
            s = std::clamp(optimal_rf_count_analytic(cfg.users, budget_cfg), cfg.users,
                           std::min(cfg.antennas, budget_cfg.max_chains));
        Rng rng = substream(cfg.master_seed, {0, 2, 0});
        res = random_select(ch, budget_cfg, s, rng);
        break;
    }
    }

    std::cout << "algorithm = " << algo_name << '\n';
    if (algo == Algorithm::greedy)
        std::cout << "initial_strategy = " << to_string(res.initial_strategy) << '\n';
    std::cout << "chains = " << res.chains << '\n';
    std::cout << "rate = " << format_float(res.rate) << '\n';
    std::cout << "p_out = " << format_float(res.allocation.total()) << '\n';
    std::cout << "water_level = " << format_float(res.allocation.water_level) << '\n';
    std::cout << "subset =";
    for (int n : res.subset)
        std::cout << ' ' << n;
    std::cout << '\n';
    std::cout << "counters: gram_builds = " << res.counters.gram_builds
              << ", rank1_updates = " << res.counters.rank1_updates
              << ", inversions = " << res.counters.inversions
              << ", subsets_enumerated = " << res.counters.subsets_enumerated
              << ", candidate_evaluations = " << res.counters.candidate_evaluations << '\n';

    if (!flags.out_dir.empty())
    {
        const fs::path dir = prepare_out_dir(flags.out_dir);
        std::vector<std::string> selection{"user,distance,gain,power"};
        for (int k = 0; k < cfg.users; ++k)
            selection.push_back(std::to_string(k) + "," + format_float(geo.distances[k]) + "," +
                                format_float(ch.large_scale.gains[k]) + "," +
                                format_float(res.allocation.powers[k]));
        write_lines(dir / "selection.csv", selection);

        std::vector<std::string> trajectory{"chains,rate"};
        for (const auto &[s, rate] : res.trajectory)
            trajectory.push_back(std::to_string(s) + "," + format_float(rate));
        write_lines(dir / "trajectory.csv", trajectory);

        RunManifest manifest;
        manifest.command = "select --algo " + algo_name;
        manifest.config = cfg;
        manifest.started_at = manifest.finished_at = utc_timestamp_now();
        manifest.outputs = {"selection.csv", "trajectory.csv"};

        if (dump_geometry)
        {
            std::vector<std::string> gcsv{"trial,user,distance,gain"};
            for (int k = 0; k < cfg.users; ++k)
                gcsv.push_back("0," + std::to_string(k) + "," + format_float(geo.distances[k]) +
                               "," + format_float(ch.large_scale.gains[k]));
            write_lines(dir / "geometry.csv", gcsv);
            manifest.outputs.push_back("geometry.csv");
        }
        write_manifest(dir / "manifest.json", manifest);
    }
    return kExitOk;
}

// ------------------------------------------------------------------- sweep

int cmd_sweep(CommonFlags &flags, const std::string &axis_name, const std::string &values_text,
              const std::string &algos_text, const std::string &from_manifest)
{
    ExperimentConfig cfg;
    if (!from_manifest.empty())
    {
        cfg = load_manifest(from_manifest).config;
        if (flags.seed)
            cfg.master_seed = *flags.seed;
        if (flags.trials)
            cfg.trials = *flags.trials;
        if (flags.threads)
            cfg.threads = *flags.threads;
    }
    else
    {
        cfg = resolve_config(flags);
        if (!axis_name.empty())
            cfg.axis = parse_axis(axis_name);
        if (!values_text.empty())
            cfg.sweep_values = parse_value_list(values_text);
        if (!algos_text.empty())
            cfg.algorithms = parse_algorithm_list(algos_text);
    }
    cfg.validate();

    const std::string started = utc_timestamp_now();
    const SweepResult res = run_sweep(cfg);

    bool any_attempted = false;
    bool any_success = false;
    for (const SweepRow &row : res.rows)
    {
        if (row.algorithm == "analytic")
        {
            if (row.skipped == 0)
                any_success = true;
            continue;
        }
        any_attempted = true;
        if (row.trials > 0)
            any_success = true;
    }

    const fs::path dir = prepare_out_dir(flags.out_dir.empty() ? "." : flags.out_dir);
    write_lines(dir / "sweep.csv", sweep_csv_lines(res.rows));

    RunManifest manifest;
    manifest.command = "sweep";
    manifest.config = cfg;
    manifest.started_at = started;
    manifest.finished_at = utc_timestamp_now();
    manifest.outputs = {"sweep.csv"};
    for (const auto &[key, count] : res.stats.skips)
        manifest.skips.emplace_back(key.first, key.second, count);
    write_manifest(dir / "manifest.json", manifest);

    std::uint64_t total_skips = 0;
    for (const auto &[key, count] : res.stats.skips)
        total_skips += count;
    std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << res.rows.size()
              << " rows, " << total_skips << " skipped trials)\n";
    if (any_attempted && !any_success)
    {
        std::cerr << "error: every sweep trial failed\n";
        return kExitRuntime;
    }
    return kExitOk;
}

// -------------------------------------------------------------- complexity

int cmd_complexity(const CommonFlags &flags, bool measure)
{
    const ExperimentConfig cfg = resolve_config(flags);
    const CircuitBudget budget_cfg(cfg.p_max, cfg.p_c);
    const int mc = budget_cfg.max_chains;

    const BigInt bfs = complexity_estimate(cfg.antennas, cfg.users, mc, SelectionAlgo::bfs);
    const BigInt greedy = complexity_estimate(cfg.antennas, cfg.users, mc, SelectionAlgo::greedy);
    const BigInt subsets = bfs_subset_count(cfg.antennas, cfg.users, mc);

    std::cout << "N = " << cfg.antennas << ", K = " << cfg.users << ", max_chains = " << mc
              << '\n';
    std::cout << "bfs_ops = " << bfs << " (~" << format_float(bfs.convert_to<double>()) << ")\n";
    std::cout << "greedy_ops = " << greedy << " (~" << format_float(greedy.convert_to<double>())
              << ")\n";
    std::cout << "bfs_subsets_standard = " << subsets << " (~"
              << format_float(subsets.convert_to<double>()) << ")\n";

    if (measure)
    {
        Rng geo_rng = substream(cfg.master_seed, {0, 0});
        const UserGeometry geo =
            draw_user_positions(cfg.users, cfg.cell_radius, cfg.min_distance, geo_rng);
        Rng ch_rng = substream(cfg.master_seed, {0, 1});
        ChannelRealization ch = draw_small_scale(cfg.users, cfg.antennas, ch_rng);
        ch.large_scale = path_loss(geo, cfg.alpha);

        GreedyOptions opts;
        opts.initial_bfs_cap = cfg.initial_bfs_cap;
        const SelectionResult res = greedy_select(ch, budget_cfg, opts);
        std::uint64_t expected = 0;
        for (const auto &[s, rate] : res.trajectory)
            if (s > cfg.users)
                expected += static_cast<std::uint64_t>(cfg.antennas - s + 1);
        std::cout << "measured: chains = " << res.chains
                  << ", candidate_evaluations = " << res.counters.candidate_evaluations
                  << " (series value " << expected << ")"
                  << ", rank1_updates = " << res.counters.rank1_updates
                  << ", gram_builds = " << res.counters.gram_builds
                  << ", inversions = " << res.counters.inversions
                  << ", subsets_enumerated = " << res.counters.subsets_enumerated << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"RF-chain activation and antenna subset selection for downlink massive MIMO"};
    app.require_subcommand(1);

    CommonFlags analytic_flags, select_flags, sweep_flags, complexity_flags;

    CLI::App *analytic = app.add_subcommand(
        "analytic", "closed-form optimal RF-chain count and average sum-rate table");
    add_common_flags(analytic, analytic_flags);

    CLI::App *select =
        app.add_subcommand("select", "run one algorithm on a single channel realization");
    add_common_flags(select, select_flags);
    std::string select_algo = "greedy";
    bool dump_geometry = false;
    select->add_option("--algo", select_algo, "greedy|bfs|random");
    select->add_flag("--dump-geometry", dump_geometry, "also write geometry.csv");

    CLI::App *sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep to CSV");
    add_common_flags(sweep, sweep_flags);
    std::string axis_name, values_text, algos_text, from_manifest;
    sweep->add_option("--axis", axis_name, "antennas|rf_chains|p_max|users");
    sweep->add_option("--values", values_text, "comma-separated sweep values");
    sweep->add_option("--algo", algos_text, "comma-separated algorithms");
    sweep->add_option("--from-manifest", from_manifest, "re-run a previous sweep's manifest");

    CLI::App *complexity =
        app.add_subcommand("complexity", "operation-count estimates for BFS and greedy");
    add_common_flags(complexity, complexity_flags);
    bool measure = false;
    complexity->add_flag("--measure", measure, "also run an instrumented greedy realization");

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
        return kExitConfig;
    }

    try
    {
        if (analytic->parsed())
            return cmd_analytic(analytic_flags);
        if (select->parsed())
            return cmd_select(select_flags, select_algo, dump_geometry);
        if (sweep->parsed())
            return cmd_sweep(sweep_flags, axis_name, values_text, algos_text, from_manifest);
        if (complexity->parsed())
            return cmd_complexity(complexity_flags, measure);
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
