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

#include "rfsel/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rfsel/errors.hpp"
#include "rfsel/precoder.hpp"

namespace rfsel
{

SweepAxis parse_axis(const std::string &name)
{
    if (name == "none")
        return SweepAxis::none;
    if (name == "antennas")
        return SweepAxis::antennas;
    if (name == "rf_chains")
        return SweepAxis::rf_chains;
    if (name == "p_max")
        return SweepAxis::p_max;
    if (name == "users")
        return SweepAxis::users;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

Algorithm parse_algorithm(const std::string &name)
{
    if (name == "greedy")
        return Algorithm::greedy;
    if (name == "bfs")
        return Algorithm::bfs;
    if (name == "random")
        return Algorithm::random;
    if (name == "analytic")
        return Algorithm::analytic;
    throw std::invalid_argument("unknown algorithm: " + name);
}

const char *to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::antennas:
        return "antennas";
    case SweepAxis::rf_chains:
        return "rf_chains";
    case SweepAxis::p_max:
        return "p_max";
    case SweepAxis::users:
        return "users";
    default:
        return "none";
    }
}

const char *to_string(Algorithm algo)
{
    switch (algo)
    {
    case Algorithm::greedy:
        return "greedy";
    case Algorithm::bfs:
        return "bfs";
    case Algorithm::random:
        return "random";
    default:
        return "analytic";
    }
}

namespace
{

int resolve_threads(int requested)
{
    if (requested >= 1)
        return requested;
    return omp_get_max_threads();
}

std::string random_label(const ExperimentConfig &cfg)
{
    if (cfg.random_power == RandomPower::waterfill)
        return "random";
    return cfg.erp_variant == EqualPowerVariant::paper ? "random_erp_paper"
                                                       : "random_erp_feasible";
}

std::string label_of(const ExperimentConfig &cfg, Algorithm algo)
{
    return algo == Algorithm::random ? random_label(cfg) : to_string(algo);
}

struct PointParams
{
    int users;
    int antennas;
    double p_max;
    double value;
};

PointParams point_params(const ExperimentConfig &cfg, int point_index)
{
    PointParams p{cfg.users, cfg.antennas, cfg.p_max, 0.0};
    if (cfg.axis == SweepAxis::none || cfg.axis == SweepAxis::rf_chains)
        return p;
    p.value = cfg.sweep_values.at(static_cast<std::size_t>(point_index));
    switch (cfg.axis)
    {
    case SweepAxis::antennas:
        p.antennas = static_cast<int>(std::lround(p.value));
        break;
    case SweepAxis::users:
        p.users = static_cast<int>(std::lround(p.value));
        break;
    case SweepAxis::p_max:
        p.p_max = p.value;
        break;
    default:
        break;
    }
    return p;
}

struct DrawDims
{
    int users;
    int antennas;
};

DrawDims draw_dims(const ExperimentConfig &cfg)
{
    DrawDims d{cfg.users, cfg.antennas};
    if (cfg.axis == SweepAxis::users || cfg.axis == SweepAxis::antennas)
    {
        int m = 0;
        for (double v : cfg.sweep_values)
            m = std::max(m, static_cast<int>(std::lround(v)));
        (cfg.axis == SweepAxis::users ? d.users : d.antennas) = m;
    }
    return d;
}

struct FullDraw
{
    UserGeometry geo;
    arma::cx_mat H;
    std::uint64_t seed_tag;
};

// All points of a trial share one drop; axes that vary K or N slice leading
// rows/columns of the full-size draw (common random numbers across points).
FullDraw draw_full(const ExperimentConfig &cfg, int trial_index)
{
    const DrawDims dims = draw_dims(cfg);
    const std::uint64_t t = static_cast<std::uint64_t>(trial_index);
    FullDraw full;
    Rng geo_rng = substream(cfg.master_seed, {t, 0});
    full.geo = draw_user_positions(dims.users, cfg.cell_radius, cfg.min_distance, geo_rng);
    Rng ch_rng = substream(cfg.master_seed, {t, 1});
    full.seed_tag = substream_seed(cfg.master_seed, {t, 1});
    full.H = draw_small_scale(dims.users, dims.antennas, ch_rng, full.seed_tag).H;
    return full;
}

ChannelRealization slice_draw(const FullDraw &full, const ExperimentConfig &cfg, int users,
                              int antennas)
{
    ChannelRealization ch;
    ch.H = full.H.submat(0, 0, users - 1, antennas - 1);
    UserGeometry sub;
    sub.distances = full.geo.distances.head(users);
    sub.cell_radius = full.geo.cell_radius;
    sub.min_distance = full.geo.min_distance;
    ch.large_scale = path_loss(sub, cfg.alpha);
    ch.seed_tag = full.seed_tag;
    return ch;
}

arma::vec effective_gains(const LargeScale &ls, double eta_sq)
{
    return ls.gains / (ls.sigma_sq * eta_sq);
}

// Integer S grid a curve-producing algorithm is evaluated on.
std::vector<int> curve_grid(const ExperimentConfig &cfg, const PointParams &p, int s_hi)
{
    std::vector<int> grid;
    if (cfg.axis == SweepAxis::rf_chains)
    {
        for (double v : cfg.sweep_values)
            grid.push_back(static_cast<int>(std::lround(v)));
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    else
    {
        for (int s = p.users; s <= s_hi; ++s)
            grid.push_back(s);
    }
    return grid;
}

std::tuple<int, double, double> rate_record(const ChannelRealization &ch,
                                            const CircuitBudget &budget_cfg, int chains,
                                            double eta_sq, const ExperimentConfig &cfg,
                                            bool use_erp)
{
    const LargeScale &ls = ch.large_scale;
    PowerAllocation alloc;
    if (use_erp)
        alloc = equal_received_power(chains, budget_cfg, static_cast<int>(ls.users()), ls,
                                     cfg.erp_variant);
    else
        alloc = waterfill(effective_gains(ls, eta_sq),
                          std::max(0.0, budget_cfg.transmit_budget(chains)));
    const double rate = sum_rate(ls, eta_sq, alloc);
    return {chains, rate, alloc.total()};
}

// Rates over the S grid for nested uniformly-random subsets: one random
// permutation per trial, grown one antenna at a time with rank-1 updates.
// Each prefix is marginally a uniform S-subset.
std::vector<std::tuple<int, double, double>> random_curve(const ChannelRealization &ch,
                                                          const CircuitBudget &budget_cfg,
                                                          const std::vector<int> &grid,
                                                          const ExperimentConfig &cfg, Rng &rng)
{
    const int N = static_cast<int>(ch.antennas());
    const int K = static_cast<int>(ch.users());
    const int s_max = grid.back();
    const bool use_erp = cfg.random_power == RandomPower::equal_received;

    std::vector<int> deck(N);
    std::iota(deck.begin(), deck.end(), 0);
    for (int i = 0; i < s_max; ++i)
    {
        const int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(N - i)));
        std::swap(deck[i], deck[j]);
    }
    // A singular K-prefix throws; the caller retries with a fresh permutation.
    GramState state = GramState::build(ch.H, std::span<const int>(deck.data(), K));
    std::vector<std::tuple<int, double, double>> out;
    std::size_t g = 0;
    for (int s = K; s <= s_max; ++s)
    {
        if (s > K)
            state.add_antenna(deck[s - 1], ch.H.col(deck[s - 1]));
        if (g < grid.size() && grid[g] == s)
        {
            out.push_back(rate_record(ch, budget_cfg, s, state.eta_sq(), cfg, use_erp));
            ++g;
        }
    }
    return out;
}

std::vector<std::tuple<int, double, double>> random_curve_retrying(
    const ChannelRealization &ch, const CircuitBudget &budget_cfg, const std::vector<int> &grid,
    const ExperimentConfig &cfg, Rng &rng)
{
    for (int attempt = 0; attempt < 100; ++attempt)
    {
        try
        {
            return random_curve(ch, budget_cfg, grid, cfg, rng);
        }
        catch (const singular_gram_error &)
        {
            continue;
        }
    }
    throw singular_gram_error("random_curve: 100 singular draws in a row");
}

} // namespace

void ExperimentConfig::validate() const
{
    if (users < 1)
        throw std::invalid_argument("config: users must be >= 1");
    if (axis != SweepAxis::users && antennas < users)
        throw std::invalid_argument("config: antennas must be >= users");
    if (!(p_max > 0.0) || !(p_c > 0.0))
        throw std::invalid_argument("config: p_max and p_c must be positive");
    if (!(alpha > 0.0))
        throw std::invalid_argument("config: alpha must be positive");
    if (!(min_distance > 0.0) || !(cell_radius >= min_distance))
        throw std::invalid_argument("config: require 0 < min_distance <= cell_radius");
    if (trials < 1)
        throw std::invalid_argument("config: trials must be >= 1");
    if (algorithms.empty())
        throw std::invalid_argument("config: no algorithms requested");
    if (axis != SweepAxis::none && sweep_values.empty())
        throw std::invalid_argument("config: sweep axis set but no values given");
    if (axis == SweepAxis::none && !sweep_values.empty())
        throw std::invalid_argument("config: sweep values given without an axis");

    for (double v : sweep_values)
    {
        switch (axis)
        {
        case SweepAxis::antennas:
            if (std::lround(v) < users)
                throw std::invalid_argument("config: antenna sweep value below user count");
            break;
        case SweepAxis::users:
            if (std::lround(v) < 1 || std::lround(v) > antennas)
                throw std::invalid_argument("config: user sweep value out of [1, antennas]");
            break;
        case SweepAxis::p_max:
            if (!(v > 0.0))
                throw std::invalid_argument("config: p_max sweep value must be positive");
            break;
        case SweepAxis::rf_chains:
        {
            const CircuitBudget b(p_max, p_c);
            const long s = std::lround(v);
            if (s < users || s > std::min(antennas, b.max_chains))
                throw std::invalid_argument(
                    "config: rf_chains sweep value outside [users, min(antennas, max_chains)]");
            break;
        }
        default:
            break;
        }
    }
    if (threads < 0 || random_chains < 0)
        throw std::invalid_argument("config: threads and random_chains must be non-negative");
}

void Moments::add(double x)
{
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void Moments::merge(const Moments &other)
{
    if (other.count == 0)
        return;
    if (count == 0)
    {
        *this = other;
        return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double n = n1 + n2;
    mean += delta * (n2 / n);
    m2 += other.m2 + delta * delta * (n1 * n2 / n);
    count += other.count;
}

double Moments::variance() const
{
    return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1);
}

double Moments::std_error() const
{
    return count < 1 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
}

std::string schema_of(const ExperimentConfig &cfg)
{
    std::ostringstream os;
    os << "axis=" << to_string(cfg.axis) << ";K=" << cfg.users << ";N=" << cfg.antennas
       << ";p_max=" << cfg.p_max << ";p_c=" << cfg.p_c << ";values=";
    for (double v : cfg.sweep_values)
        os << v << ",";
    os << ";algos=";
    for (Algorithm a : cfg.algorithms)
        os << label_of(cfg, a) << ",";
    return os.str();
}

void AggregateStats::fold(int point_index, const TrialOutcome &outcome)
{
    for (const AlgoTrialOutcome &rec : outcome.algos)
    {
        if (rec.skipped)
        {
            ++skips[{point_index, rec.label}];
            continue;
        }
        for (const auto &[s, rate, pout] : rec.points)
        {
            CellStats &cell = cells[{point_index, rec.label, rec.curve ? s : -1}];
            cell.rate.add(rate);
            cell.chains.add(static_cast<double>(s));
            cell.pout.add(pout);
        }
    }
}

AggregateStats AggregateStats::merged(const AggregateStats &a, const AggregateStats &b)
{
    if (a.schema != b.schema)
        throw merge_error("AggregateStats: schema mismatch");
    AggregateStats out = a;
    for (const auto &[key, cell] : b.cells)
    {
        CellStats &dst = out.cells[key];
        dst.rate.merge(cell.rate);
        dst.chains.merge(cell.chains);
        dst.pout.merge(cell.pout);
    }
    for (const auto &[key, n] : b.skips)
        out.skips[key] += n;
    return out;
}

TrialOutcome run_trial(const ExperimentConfig &cfg, int point_index, int trial_index)
{
    const PointParams p = point_params(cfg, point_index);
    TrialOutcome out;

    const auto skip_all = [&](const std::string &reason) {
        for (Algorithm a : cfg.algorithms)
        {
            if (a == Algorithm::analytic)
                continue;
            out.algos.push_back({label_of(cfg, a), true, reason, false, {}});
        }
    };

    if (p.users > p.antennas)
    {
        skip_all("infeasible point: more users than antennas");
        return out;
    }
    const CircuitBudget budget_cfg(p.p_max, cfg.p_c);
    if (!(p.p_max > p.users * cfg.p_c))
    {
        skip_all("infeasible point: p_max <= K * p_c");
        return out;
    }
    const int s_hi = std::min(p.antennas, budget_cfg.max_chains);

    const FullDraw full = draw_full(cfg, trial_index);
    const ChannelRealization ch = slice_draw(full, cfg, p.users, p.antennas);

    const bool curve_axes = cfg.axis == SweepAxis::rf_chains || cfg.axis == SweepAxis::p_max ||
                            cfg.axis == SweepAxis::users;
    const std::vector<int> grid = curve_axes ? curve_grid(cfg, p, s_hi) : std::vector<int>{};

    for (Algorithm algo : cfg.algorithms)
    {
        if (algo == Algorithm::analytic)
            continue;  // closed form; added by summarize without trials
        AlgoTrialOutcome rec;
        rec.label = label_of(cfg, algo);
        try
        {
            switch (algo)
            {
            case Algorithm::greedy:
            {
                GreedyOptions opts;
                opts.initial_bfs_cap = cfg.initial_bfs_cap;
                opts.threads = 1;  // parallelism lives at the trial level
                if (cfg.axis == SweepAxis::rf_chains)
                {
                    // One growth to the top of the grid; the trajectory holds
                    // the water-filled rate at every size on the way.
                    opts.fixed_chains = grid.back();
                    const SelectionResult r = greedy_select(ch, budget_cfg, opts);
                    rec.curve = true;
                    std::size_t g = 0;
                    for (const auto &[s, rate] : r.trajectory)
                    {
                        if (g < grid.size() && grid[g] == s)
                        {
                            rec.points.emplace_back(
                                s, rate, std::max(0.0, budget_cfg.transmit_budget(s)));
                            ++g;
                        }
                    }
                }
                else
                {
                    const SelectionResult r = greedy_select(ch, budget_cfg, opts);
                    rec.points.emplace_back(r.chains, r.rate, r.allocation.total());
                }
                break;
            }
            case Algorithm::bfs:
            {
                BfsOptions opts;
                opts.subset_cap = cfg.bfs_subset_cap;
                opts.threads = 1;
                const SelectionResult r = bfs_select(ch, budget_cfg, opts);
                rec.points.emplace_back(r.chains, r.rate, r.allocation.total());
                break;
            }
            case Algorithm::random:
            {
                Rng rng = substream(cfg.master_seed,
                                    {static_cast<std::uint64_t>(trial_index), 2,
                                     static_cast<std::uint64_t>(point_index)});
                if (curve_axes)
                {
                    rec.curve = true;
                    rec.points = random_curve_retrying(ch, budget_cfg, grid, cfg, rng);
                }
                else
                {
                    int s = cfg.random_chains;
                    if (s == 0)
                        s = std::clamp(optimal_rf_count_analytic(p.users, budget_cfg), p.users,
                                       s_hi);
                    if (cfg.random_power == RandomPower::equal_received)
                    {
                        rec.points = random_curve_retrying(ch, budget_cfg, {s}, cfg, rng);
                    }
                    else
                    {
                        const SelectionResult r = random_select(ch, budget_cfg, s, rng);
                        rec.points.emplace_back(r.chains, r.rate, r.allocation.total());
                    }
                }
                break;
            }
            default:
                break;
            }
        }
        catch (const std::exception &e)
        {
            rec.skipped = true;
            rec.skip_reason = e.what();
            rec.points.clear();
        }
        out.algos.push_back(std::move(rec));
    }
    return out;
}

AggregateStats run_point_range_serial(const ExperimentConfig &cfg, int point_index,
                                      int trial_begin, int trial_end)
{
    AggregateStats agg;
    agg.schema = schema_of(cfg);
    for (int t = trial_begin; t < trial_end; ++t)
        agg.fold(point_index, run_trial(cfg, point_index, t));
    return agg;
}

AggregateStats run_point_range(const ExperimentConfig &cfg, int point_index, int trial_begin,
                               int trial_end)
{
    const int threads = resolve_threads(cfg.threads);
    const int n = trial_end - trial_begin;
    if (threads == 1 || n < 2)
        return run_point_range_serial(cfg, point_index, trial_begin, trial_end);

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < n; ++i)
        outcomes[static_cast<std::size_t>(i)] = run_trial(cfg, point_index, trial_begin + i);

    // Sequential fold in trial order keeps the result bit-identical to the
    // serial reference for any thread count.
    AggregateStats agg;
    agg.schema = schema_of(cfg);
    for (const TrialOutcome &o : outcomes)
        agg.fold(point_index, o);
    return agg;
}

namespace
{

SweepRow cell_row(double axis_value, const std::string &label, const CellStats &cell,
                  std::uint64_t skipped)
{
    SweepRow row;
    row.axis_value = axis_value;
    row.algorithm = label;
    row.mean_rate = cell.rate.mean;
    row.stderr_rate = cell.rate.std_error();
    row.mean_chains = cell.chains.mean;
    row.mean_pout = cell.pout.mean;
    row.trials = cell.rate.count;
    row.skipped = skipped;
    return row;
}

SweepRow analytic_row(double axis_value, int users, const CircuitBudget &budget_cfg,
                      std::optional<int> fixed_s)
{
    SweepRow row;
    row.axis_value = axis_value;
    row.algorithm = "analytic";
    try
    {
        const int s = fixed_s ? *fixed_s : optimal_rf_count_analytic(users, budget_cfg);
        row.mean_rate = average_sum_rate_closed_form(s, users, budget_cfg);
        row.mean_chains = static_cast<double>(s);
        row.mean_pout = budget_cfg.transmit_budget(s);
    }
    catch (const std::exception &)
    {
        row.skipped = 1;
    }
    return row;
}

} // namespace

std::vector<SweepRow> summarize(const ExperimentConfig &cfg, const AggregateStats &stats)
{
    std::vector<SweepRow> rows;
    const int npoints = cfg.points();

    for (int pt = 0; pt < npoints; ++pt)
    {
        const PointParams p = point_params(cfg, pt);
        for (Algorithm algo : cfg.algorithms)
        {
            const std::string label = label_of(cfg, algo);
            const auto skip_it = stats.skips.find({pt, label});
            const std::uint64_t skipped = skip_it == stats.skips.end() ? 0 : skip_it->second;

            if (algo == Algorithm::analytic)
            {
                const CircuitBudget budget_cfg(p.p_max, cfg.p_c);
                if (cfg.axis == SweepAxis::rf_chains)
                {
                    for (double v : cfg.sweep_values)
                        rows.push_back(
                            analytic_row(v, p.users, budget_cfg, static_cast<int>(std::lround(v))));
                }
                else
                {
                    rows.push_back(analytic_row(p.value, p.users, budget_cfg, std::nullopt));
                }
                continue;
            }

            if (cfg.axis == SweepAxis::rf_chains)
            {
                // One row per grid size; the sweep value is S itself.
                for (double v : cfg.sweep_values)
                {
                    const int s = static_cast<int>(std::lround(v));
                    const auto it = stats.cells.find({pt, label, s});
                    if (it != stats.cells.end())
                        rows.push_back(cell_row(v, label, it->second, skipped));
                    else
                        rows.push_back({v, label, 0, 0, 0, 0, 0, skipped});
                }
                continue;
            }

            if (cfg.axis == SweepAxis::p_max || cfg.axis == SweepAxis::users)
            {
                if (algo == Algorithm::random)
                {
                    // Curve cell: report the size with the best mean rate.
                    const CellStats *best = nullptr;
                    int best_s = 0;
                    for (const auto &[key, cell] : stats.cells)
                    {
                        const auto &[kpt, klabel, ks] = key;
                        if (kpt != pt || klabel != label)
                            continue;
                        if (best == nullptr || cell.rate.mean > best->rate.mean)
                        {
                            best = &cell;
                            best_s = ks;
                        }
                    }
                    if (best)
                    {
                        SweepRow row = cell_row(p.value, label, *best, skipped);
                        row.mean_chains = static_cast<double>(best_s);
                        rows.push_back(row);
                    }
                    else
                    {
                        rows.push_back({p.value, label, 0, 0, 0, 0, 0, skipped});
                    }
                    continue;
                }
            }

            const auto it = stats.cells.find({pt, label, -1});
            if (it != stats.cells.end())
                rows.push_back(cell_row(p.value, label, it->second, skipped));
            else
                rows.push_back({p.value, label, 0, 0, 0, 0, 0, skipped});
        }
    }
    return rows;
}

SweepResult run_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    AggregateStats agg;
    agg.schema = schema_of(cfg);
    for (int pt = 0; pt < cfg.points(); ++pt)
        agg = AggregateStats::merged(agg, run_point_range(cfg, pt, 0, cfg.trials));
    return {summarize(cfg, agg), std::move(agg)};
}

} // namespace rfsel
