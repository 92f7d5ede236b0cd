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

// End-to-end verification suite. Each criterion prints one PASS/FAIL line.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <vector>

#include "cli_helpers.hpp"
#include "rfsel/channel.hpp"
#include "rfsel/experiments.hpp"
#include "rfsel/precoder.hpp"
#include "rfsel/selection.hpp"

using namespace rfsel;

namespace
{

void report(int id, const char *name, bool ok)
{
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, name);
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", id, " (", name, ")");
}

ChannelRealization make_realization(int users, int antennas, std::uint64_t seed)
{
    Rng geo_rng = substream(seed, {0});
    const UserGeometry geo = draw_user_positions(users, 500.0, 35.0, geo_rng);
    Rng ch_rng = substream(seed, {1});
    ChannelRealization ch = draw_small_scale(users, antennas, ch_rng, seed);
    ch.large_scale = path_loss(geo, 3.7);
    return ch;
}

double eta_sq_dense(const arma::cx_mat &H, const std::vector<int> &subset)
{
    arma::cx_mat sub(H.n_rows, subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i)
        sub.col(i) = H.col(subset[i]);
    return arma::trace(arma::inv(sub * sub.t())).real();
}

} // namespace

TEST_CASE("criterion 1: closed-form optimal RF-chain count")
{
    bool ok = true;

    const auto fig1 = cli_helpers::run_cli("analytic --users 3 --p-max 1 --p-c 0.05");
    ok = ok && fig1.exit_code == 0;
    ok = ok && cli_helpers::grep_line(fig1.output, "phi = ") == "phi = 11.5";
    ok = ok && cli_helpers::grep_line(fig1.output, "S_star = ") == "S_star = 12";

    const auto tab2 = cli_helpers::run_cli("analytic --users 10 --p-max 4 --p-c 0.05");
    ok = ok && tab2.exit_code == 0;
    ok = ok && cli_helpers::grep_line(tab2.output, "S_star = ") == "S_star = 45";

    // Exhaustive integer scan over a parameter grid.
    int checked = 0;
    for (int users = 1; users <= 10; ++users)
        for (double p_max : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
            for (double p_c : {0.01, 0.02, 0.05, 0.1})
            {
                const CircuitBudget b(p_max, p_c);
                if (!(p_max > users * p_c))
                    continue;
                ++checked;
                ok = ok && rf_count_threshold(users, b) < p_max / p_c;

                const int s_star = optimal_rf_count_analytic(users, b);
                double best = -1.0;
                for (int s = users; s <= b.max_chains; ++s)
                    best = std::max(best, average_sum_rate_closed_form(s, users, b));
                const double at_star = average_sum_rate_closed_form(s_star, users, b);
                ok = ok && at_star >= best - 1e-12 * std::max(1.0, best);
            }
    ok = ok && checked >= 200;

    report(1, "closed-form S* (phi=11.5 -> 12, S*=45, 200-point argmax scan)", ok);
}

TEST_CASE("criterion 2: Wishart asymptote for eta^2")
{
    bool ok = true;

    // mean eta^2 ~ K/(S-K) at K=4, S=16 over 2000 realizations
    {
        const int K = 4, S = 16, trials = 2000;
        double sum = 0.0;
        for (int t = 0; t < trials; ++t)
        {
            Rng rng = substream(20001, {static_cast<std::uint64_t>(t)});
            const ChannelRealization ch = draw_small_scale(K, S, rng);
            std::vector<int> subset(S);
            std::iota(subset.begin(), subset.end(), 0);
            sum += GramState::build(ch.H, subset).eta_sq();
        }
        const double mean = sum / trials;
        ok = ok && std::abs(mean - 1.0 / 3.0) <= 0.05 / 3.0;
    }

    // mean 1/eta^2 ~ S/K - 1 for three shapes
    for (const auto &[K, S] : std::vector<std::pair<int, int>>{{4, 16}, {8, 32}, {10, 40}})
    {
        const int trials = 2000;
        double sum = 0.0;
        for (int t = 0; t < trials; ++t)
        {
            Rng rng = substream(20002 + K, {static_cast<std::uint64_t>(t)});
            const ChannelRealization ch = draw_small_scale(K, S, rng);
            std::vector<int> subset(S);
            std::iota(subset.begin(), subset.end(), 0);
            sum += 1.0 / GramState::build(ch.H, subset).eta_sq();
        }
        const double target = static_cast<double>(S) / K - 1.0;
        ok = ok && std::abs(sum / trials - target) <= 0.1 * target;
    }

    report(2, "Wishart asymptote: E[eta^2]=K/(S-K) within 5%, E[1/eta^2]=S/K-1 within 10%", ok);
}

TEST_CASE("criterion 3: analytic chain count matches random+equal-power simulation")
{
    bool ok = true;
    std::map<double, bool> point_ok{{2.0, false}, {3.0, false}, {4.0, false}};

    for (EqualPowerVariant variant : {EqualPowerVariant::paper, EqualPowerVariant::feasible})
    {
        ExperimentConfig cfg;
        cfg.users = 10;
        cfg.antennas = 64;
        cfg.p_c = 0.05;
        cfg.axis = SweepAxis::p_max;
        cfg.sweep_values = {2.0, 3.0, 4.0};
        cfg.trials = 500;
        cfg.master_seed = 30003;
        cfg.algorithms = {Algorithm::random};
        cfg.random_power = RandomPower::equal_received;
        cfg.erp_variant = variant;

        const SweepResult res = run_sweep(cfg);
        for (const SweepRow &row : res.rows)
        {
            const int s_star =
                optimal_rf_count_analytic(cfg.users, CircuitBudget(row.axis_value, cfg.p_c));
            if (std::abs(row.mean_chains - s_star) <= 1.0 + 1e-9)
                point_ok[row.axis_value] = true;
        }
    }
    for (const auto &[p_max, good] : point_ok)
        ok = ok && good;

    report(3, "empirical argmax S within +-1 of analytic S* (N=64, K=10, p_max in {2,3,4})", ok);
}

TEST_CASE("criterion 4: interior optimum and greedy dominance over the S sweep")
{
    bool ok = true;
    for (double p_max : {2.0, 3.0, 4.0})
    {
        const CircuitBudget b(p_max, 0.05);
        const int users = 10, antennas = 64;
        const int s_hi = std::min(antennas, b.max_chains);

        ExperimentConfig cfg;
        cfg.users = users;
        cfg.antennas = antennas;
        cfg.p_max = p_max;
        cfg.p_c = 0.05;
        cfg.axis = SweepAxis::rf_chains;
        for (int s = users; s <= s_hi; ++s)
            cfg.sweep_values.push_back(s);
        cfg.trials = 500;
        cfg.master_seed = 40004;
        cfg.algorithms = {Algorithm::greedy, Algorithm::random};

        const SweepResult res = run_sweep(cfg);
        std::map<int, double> greedy_mean, random_mean;
        for (const SweepRow &row : res.rows)
        {
            const int s = static_cast<int>(std::lround(row.axis_value));
            if (row.algorithm == "greedy")
                greedy_mean[s] = row.mean_rate;
            else if (row.algorithm == "random")
                random_mean[s] = row.mean_rate;
        }

        const auto argmax = [](const std::map<int, double> &curve) {
            int best_s = curve.begin()->first;
            double best = curve.begin()->second;
            for (const auto &[s, r] : curve)
                if (r > best)
                {
                    best = r;
                    best_s = s;
                }
            return best_s;
        };
        const int peak_g = argmax(greedy_mean);
        const int peak_r = argmax(random_mean);
        ok = ok && peak_g > users && peak_g < b.max_chains;
        ok = ok && peak_r > users && peak_r < b.max_chains;
        for (int s = users; s <= s_hi; ++s)
            ok = ok && greedy_mean.at(s) >= random_mean.at(s) - 1e-9;
    }
    report(4, "mean-rate curves peak strictly inside (K, max_chains); greedy >= random at every S",
           ok);
}

TEST_CASE("criterion 5: greedy stays within 5% of exhaustive search")
{
    bool ok = true;
    for (int antennas : {6, 8, 10})
    {
        const CircuitBudget budget_cfg(1.0, 0.05);
        double ratio_sum = 0.0;
        for (int t = 0; t < 100; ++t)
        {
            const ChannelRealization ch =
                make_realization(3, antennas, 50005 + 1000 * antennas + t);
            const SelectionResult greedy = greedy_select(ch, budget_cfg);
            const SelectionResult best = bfs_select(ch, budget_cfg);
            ok = ok && greedy.rate <= best.rate + 1e-9;
            ratio_sum += greedy.rate / best.rate;
        }
        ok = ok && ratio_sum / 100.0 >= 0.95;
    }
    report(5, "rate(greedy) <= rate(BFS) per trial; mean ratio >= 0.95 (N in {6,8,10}, K=3)", ok);
}

TEST_CASE("criterion 6: water-filling correctness at scale")
{
    bool ok = true;
    Rng rng(60006);
    for (int rep = 0; rep < 10000; ++rep)
    {
        const arma::uword users = 1 + rng.bounded(16);
        arma::vec gains(users);
        for (arma::uword k = 0; k < users; ++k)
            gains[k] = std::pow(10.0, -3.0 + 4.0 * rng.uniform());
        const double budget = 10.0 * rng.uniform();

        const PowerAllocation exact = waterfill(gains, budget, WaterfillMethod::sorted_exact);
        const PowerAllocation bisect = waterfill(gains, budget, WaterfillMethod::bisection);

        ok = ok && std::abs(exact.total() - budget) <= 1e-9 * std::max(1.0, budget);
        for (arma::uword k = 0; k < users; ++k)
        {
            ok = ok && exact.powers[k] >= 0.0;
            if (exact.powers[k] > 0.0)
                ok = ok && std::abs(exact.powers[k] + 1.0 / gains[k] - exact.water_level) <
                               1e-9 * std::max(1.0, exact.water_level);
            ok = ok && std::abs(exact.powers[k] - bisect.powers[k]) <= 1e-8;
        }

        if (rep % 100 == 0)  // 100 sampled instances get the optimality probe
        {
            double rate = 0.0;
            for (arma::uword k = 0; k < users; ++k)
                rate += std::log2(1.0 + gains[k] * exact.powers[k]);
            for (int probe = 0; probe < 1000; ++probe)
            {
                arma::vec w(users);
                for (arma::uword k = 0; k < users; ++k)
                    w[k] = -std::log(rng.uniform_open());
                w *= budget / arma::accu(w);
                double other = 0.0;
                for (arma::uword k = 0; k < users; ++k)
                    other += std::log2(1.0 + gains[k] * w[k]);
                ok = ok && rate >= other - 1e-9;
            }
        }
        if (!ok)
            break;
    }
    report(6, "10^4 instances: budget 1e-9, KKT 1e-9, bisection agreement 1e-8, optimality", ok);
}

TEST_CASE("criterion 7: rank-1 eta^2 tracks dense recomputation")
{
    bool ok = true;
    Rng shape_rng(70007);
    for (int seq = 0; seq < 1000 && ok; ++seq)
    {
        const int K = 1 + static_cast<int>(shape_rng.bounded(8));
        const int adds = 16 + static_cast<int>(shape_rng.bounded(49));  // up to 64
        const int N = K + adds;
        Rng rng = substream(70008, {static_cast<std::uint64_t>(seq)});
        const ChannelRealization ch = draw_small_scale(K, N, rng);

        std::vector<int> subset(K);
        std::iota(subset.begin(), subset.end(), 0);
        GramState st = GramState::build(ch.H, subset);
        double prev = st.eta_sq();
        for (int n = K; n < N; ++n)
        {
            st.add_antenna(n, ch.H.col(n));
            subset.push_back(n);
            const double dense = eta_sq_dense(ch.H, subset);
            ok = ok && std::abs(st.eta_sq() - dense) <= 1e-9 * dense;
            ok = ok && st.eta_sq() <= prev * (1.0 + 1e-12);
            prev = st.eta_sq();
        }
    }
    report(7, "10^3 add sequences: incremental eta^2 within 1e-9 of dense, monotone", ok);
}

TEST_CASE("criterion 8: complexity estimators and instrumented counters")
{
    bool ok = true;

    const auto in_magnitude = [](const BigInt &v, double ref) {
        const double ratio = v.convert_to<double>() / ref;
        return ratio > 0.1 && ratio < 10.0;
    };
    ok = ok && in_magnitude(complexity_estimate(64, 10, 32, SelectionAlgo::bfs), 8e16);
    ok = ok && in_magnitude(complexity_estimate(64, 10, 32, SelectionAlgo::greedy), 6e5);
    ok = ok && in_magnitude(complexity_estimate(128, 10, 128, SelectionAlgo::bfs), 3e30);
    ok = ok && in_magnitude(complexity_estimate(128, 10, 128, SelectionAlgo::greedy), 4e7);

    // Instrumented greedy: candidate evaluations match the series exactly.
    const int users = 4, antennas = 32;
    const CircuitBudget budget_cfg(1.5, 0.05);
    const ChannelRealization ch = make_realization(users, antennas, 80008);

    const SelectionResult stopped = greedy_select(ch, budget_cfg);
    std::uint64_t expect = 0;
    for (const auto &[s, rate] : stopped.trajectory)
        if (s > users)
            expect += static_cast<std::uint64_t>(antennas - s + 1);
    ok = ok && stopped.counters.candidate_evaluations == expect;

    GreedyOptions full;
    full.fixed_chains = std::min(antennas, budget_cfg.max_chains);
    const SelectionResult grown = greedy_select(ch, budget_cfg, full);
    std::uint64_t series = 0;
    for (int s = users + 1; s <= *full.fixed_chains; ++s)
        series += static_cast<std::uint64_t>(antennas - s + 1);
    ok = ok && grown.counters.candidate_evaluations == series;

    report(8, "Eq.-form estimates hit reference magnitudes; counters match sum(N-S+1) exactly",
           ok);
}

TEST_CASE("criterion 9: sweeps re-run byte-identically from their manifest")
{
    bool ok = cli_helpers::binary_path_or_null() != nullptr;

    if (ok)
    {
        const auto dir_a = cli_helpers::fresh_dir("accept9_a");
        const auto dir_b = cli_helpers::fresh_dir("accept9_b");
        const auto first = cli_helpers::run_cli(
            "sweep --users 3 --antennas 12 --p-max 1 --p-c 0.05 --trials 20 --seed 99 "
            "--axis rf_chains --values 3,5,7,9 --algo greedy,random,analytic --out " +
            dir_a.string());
        ok = ok && first.exit_code == 0;
        const auto rerun = cli_helpers::run_cli("sweep --from-manifest " +
                                                (dir_a / "manifest.json").string() + " --out " +
                                                dir_b.string());
        ok = ok && rerun.exit_code == 0;
        const std::string csv_a = cli_helpers::slurp(dir_a / "sweep.csv");
        ok = ok && !csv_a.empty() && csv_a == cli_helpers::slurp(dir_b / "sweep.csv");
    }

    report(9, "manifest re-run reproduces sweep.csv byte for byte", ok);
}
