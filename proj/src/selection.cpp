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

#include "rfsel/selection.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rfsel/errors.hpp"

namespace rfsel
{

const char *to_string(InitialStrategy s)
{
    switch (s)
    {
    case InitialStrategy::exact_bfs:
        return "exact-bfs";
    case InitialStrategy::greedy_volume:
        return "greedy-volume";
    default:
        return "automatic";
    }
}

BigInt binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    BigInt res = 1;
    for (int i = 1; i <= k; ++i)
    {
        res *= (n - k + i);
        res /= i;
    }
    return res;
}

BigInt complexity_estimate(int antennas, int users, int max_chains, SelectionAlgo algo)
{
    if (antennas < 1 || users < 1 || max_chains < 1)
        throw std::invalid_argument("complexity_estimate: arguments must be positive");

    BigInt total = 0;
    const BigInt K2 = BigInt(users) * users;
    const BigInt K3 = K2 * users;
    for (int S = 1; S <= max_chains; ++S)
    {
        const BigInt cost = BigInt(S) * K2 + K3;
        if (algo == SelectionAlgo::bfs)
        {
            total += binomial(antennas - S + 1, S) * cost;
        }
        else
        {
            const int sets = antennas - S + 1;
            if (sets > 0)
                total += BigInt(sets) * cost;
        }
    }
    return total;
}

BigInt bfs_subset_count(int antennas, int users, int max_chains)
{
    BigInt total = 0;
    const int hi = std::min(antennas, max_chains);
    for (int S = users; S <= hi; ++S)
        total += binomial(antennas, S);
    return total;
}

namespace
{

int resolve_threads(int requested)
{
    if (requested >= 1)
        return requested;
    return omp_get_max_threads();
}

// Binomial in uint64; callers guarantee the result fits (post enumeration-cap check).
std::uint64_t binom_u64(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t res = 1;
    for (int i = 1; i <= k; ++i)
    {
        res = res * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return res;
}

// Lexicographic successor of a k-combination of {0..n-1}. Returns false past the last.
bool next_combination(std::vector<int> &c, int n)
{
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i)
    {
        if (c[i] < n - k + i)
        {
            ++c[i];
            for (int j = i + 1; j < k; ++j)
                c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Combination of the given lex rank (combinatorial number system).
std::vector<int> unrank_combination(std::uint64_t rank, int n, int k)
{
    std::vector<int> c(k);
    int v = 0;
    for (int i = 0; i < k; ++i)
    {
        while (true)
        {
            const std::uint64_t count = binom_u64(n - 1 - v, k - i - 1);
            if (rank < count)
            {
                c[i] = v++;
                break;
            }
            rank -= count;
            ++v;
        }
    }
    return c;
}

struct SubsetScore
{
    bool valid = false;
    double rate = -1.0;
    std::vector<int> subset;
    PowerAllocation alloc;
    double eta_sq = 0.0;
};

bool better_subset(const SubsetScore &a, const SubsetScore &b)
{
    if (!b.valid)
        return a.valid;
    if (!a.valid)
        return false;
    if (a.rate != b.rate)
        return a.rate > b.rate;
    return a.subset < b.subset;
}

// eta^2 of the subset's Gram, or nothing when numerically singular.
std::optional<double> subset_eta_sq(const arma::cx_mat &H, const std::vector<int> &subset,
                                    std::uint64_t &inversions)
{
    const int K = static_cast<int>(H.n_rows);
    arma::cx_mat gram(K, K, arma::fill::zeros);
    for (int n : subset)
    {
        const arma::cx_vec g = H.col(n);
        gram += g * g.t();
    }
    if (!(arma::rcond(gram) > kRcondLimit))
        return std::nullopt;
    ++inversions;
    return arma::trace(arma::inv(gram)).real();
}

arma::vec effective_gains(const LargeScale &ls, double eta_sq)
{
    return ls.gains / (ls.sigma_sq * eta_sq);
}

} // namespace

std::vector<int> initial_k_subset(const ChannelRealization &ch, int users, InitialStrategy strategy,
                                  std::uint64_t bfs_cap, OpCounters *counters)
{
    const int N = static_cast<int>(ch.antennas());
    if (users < 1 || users > N)
        throw std::invalid_argument("initial_k_subset: require 1 <= K <= N");

    if (strategy == InitialStrategy::automatic)
    {
        const BigInt combos = binomial(N, users);
        strategy = (combos <= bfs_cap) ? InitialStrategy::exact_bfs : InitialStrategy::greedy_volume;
    }

    if (strategy == InitialStrategy::exact_bfs)
    {
        const BigInt combos = binomial(N, users);
        if (combos > bfs_cap)
            throw capacity_error("initial_k_subset: C(N, K) exceeds the enumeration cap");

        std::vector<int> comb(users);
        std::iota(comb.begin(), comb.end(), 0);
        std::vector<int> best;
        double best_eta = 0.0;
        std::uint64_t inversions = 0, visited = 0;
        do
        {
            ++visited;
            const auto eta = subset_eta_sq(ch.H, comb, inversions);
            if (eta && (best.empty() || *eta < best_eta))
            {
                best = comb;
                best_eta = *eta;
            }
        } while (next_combination(comb, N));
        if (counters)
        {
            counters->subsets_enumerated += visited;
            counters->gram_builds += visited;
            counters->inversions += inversions;
        }
        if (best.empty())
            throw singular_gram_error("initial_k_subset: every K-subset is singular");
        return best;
    }

    // Greedy volume maximization: modified Gram-Schmidt with residual-norm
    // pivoting on the columns; ties go to the lowest index.
    const int K = users;
    arma::cx_mat work = ch.H;
    std::vector<char> used(N, 0);
    arma::vec rnorm(N);
    for (int n = 0; n < N; ++n)
        rnorm[n] = std::real(arma::cdot(work.col(n), work.col(n)));

    std::vector<int> chosen;
    chosen.reserve(K);
    const double scale = rnorm.max();
    for (int i = 0; i < K; ++i)
    {
        int pivot = -1;
        double best = -1.0;
        for (int n = 0; n < N; ++n)
        {
            if (!used[n] && rnorm[n] > best)
            {
                best = rnorm[n];
                pivot = n;
            }
        }
        if (pivot < 0 || !(best > scale * 1e-24))
            throw singular_gram_error("initial_k_subset: channel columns are rank deficient");
        used[pivot] = 1;
        chosen.push_back(pivot);

        const arma::cx_vec q = work.col(pivot) / std::sqrt(rnorm[pivot]);
        for (int n = 0; n < N; ++n)
        {
            if (used[n])
                continue;
            work.col(n) -= q * arma::cdot(q, work.col(n));
            rnorm[n] = std::real(arma::cdot(work.col(n), work.col(n)));
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

SelectionResult greedy_select(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                              const GreedyOptions &opts)
{
    const int N = static_cast<int>(ch.antennas());
    const int K = static_cast<int>(ch.users());
    if (K > N)
        throw std::invalid_argument("greedy_select: more users than antennas");
    if (!(budget_cfg.p_max > K * budget_cfg.p_c))
        throw infeasible_budget_error("greedy_select: p_max <= K * p_c");

    const int s_hi = std::min(N, budget_cfg.max_chains);
    int target = opts.fixed_chains.value_or(s_hi);
    if (opts.fixed_chains && (target < K || target > s_hi))
        throw std::invalid_argument("greedy_select: fixed chain count out of range");

    SelectionResult res;
    const std::vector<int> init =
        initial_k_subset(ch, K, opts.initial, opts.initial_bfs_cap, &res.counters);
    res.initial_strategy =
        (opts.initial == InitialStrategy::automatic)
            ? (binomial(N, K) <= opts.initial_bfs_cap ? InitialStrategy::exact_bfs
                                                      : InitialStrategy::greedy_volume)
            : opts.initial;

    GramState state = GramState::build(ch.H, init);
    ++res.counters.gram_builds;

    const LargeScale &ls = ch.large_scale;
    const auto evaluate = [&](int chains) {
        PowerAllocation alloc =
            waterfill(effective_gains(ls, state.eta_sq()),
                      std::max(0.0, budget_cfg.transmit_budget(chains)));
        const double rate = sum_rate(ls, state.eta_sq(), alloc);
        return std::make_pair(std::move(alloc), rate);
    };

    auto [alloc, rate] = evaluate(K);
    res.trajectory.emplace_back(K, rate);

    struct Snapshot
    {
        std::vector<int> subset;
        PowerAllocation alloc;
        double rate;
        int chains;
    };
    auto snapshot_current = [&](const PowerAllocation &a, double r, int s) {
        Snapshot snap{state.selected(), a, r, s};
        std::sort(snap.subset.begin(), snap.subset.end());
        return snap;
    };

    Snapshot accepted = snapshot_current(alloc, rate, K);
    Snapshot best = accepted;

    std::vector<char> in_set(N, 0);
    for (int n : init)
        in_set[n] = 1;

    const int threads = resolve_threads(opts.threads);
    std::vector<int> remaining;
    remaining.reserve(N - K);
    for (int n = 0; n < N; ++n)
        if (!in_set[n])
            remaining.push_back(n);

    std::vector<double> scores;
    double prev_rate = rate;
    for (int chains = K + 1; chains <= target && !remaining.empty(); ++chains)
    {
        const int m = static_cast<int>(remaining.size());
        scores.assign(m, 0.0);
        res.counters.candidate_evaluations += static_cast<std::uint64_t>(m);
        if (threads == 1)
        {
            for (int i = 0; i < m; ++i)
                scores[i] = state.delta_eta_add(ch.H.col(remaining[i]));
        }
        else
        {
#pragma omp parallel for schedule(static) num_threads(threads)
            for (int i = 0; i < m; ++i)
                scores[i] = state.delta_eta_add(ch.H.col(remaining[i]));
        }

        int pick = 0;
        for (int i = 1; i < m; ++i)
            if (scores[i] > scores[pick])
                pick = i;
        const int antenna = remaining[pick];

        state.add_antenna(antenna, ch.H.col(antenna));
        ++res.counters.rank1_updates;
        in_set[antenna] = 1;
        remaining.erase(remaining.begin() + pick);

        auto [alloc_s, rate_s] = evaluate(chains);
        res.trajectory.emplace_back(chains, rate_s);

        const bool stop_rule_active = !opts.fixed_chains && !opts.scan_all_and_return_best;
        if (stop_rule_active && rate_s < prev_rate)
            break;  // accepted still holds the state at chains-1

        Snapshot cur = snapshot_current(alloc_s, rate_s, chains);
        if (rate_s > best.rate)
            best = cur;
        accepted = std::move(cur);
        prev_rate = rate_s;
    }

    const Snapshot &out = opts.scan_all_and_return_best ? best : accepted;
    res.subset = out.subset;
    res.chains = out.chains;
    res.allocation = out.alloc;
    res.rate = out.rate;
    // state counts its own dense refreshes; fold them in (build() counted one).
    res.counters.inversions += static_cast<std::uint64_t>(state.inversions());
    return res;
}

namespace
{

SubsetScore evaluate_subset(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                            const std::vector<int> &subset, std::uint64_t &inversions)
{
    SubsetScore sc;
    const auto eta = subset_eta_sq(ch.H, subset, inversions);
    if (!eta)
        return sc;
    const double budget = std::max(0.0, budget_cfg.transmit_budget(static_cast<int>(subset.size())));
    sc.alloc = waterfill(effective_gains(ch.large_scale, *eta), budget);
    sc.rate = sum_rate(ch.large_scale, *eta, sc.alloc);
    sc.subset = subset;
    sc.eta_sq = *eta;
    sc.valid = true;
    return sc;
}

} // namespace

SelectionResult bfs_select(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                           const BfsOptions &opts)
{
    const int N = static_cast<int>(ch.antennas());
    const int K = static_cast<int>(ch.users());
    if (K > N)
        throw std::invalid_argument("bfs_select: more users than antennas");
    const int s_hi = std::min(N, budget_cfg.max_chains);
    if (s_hi < K)
        throw infeasible_budget_error("bfs_select: budget cannot power K chains");
    if (budget_cfg.transmit_budget(K) < 0.0)
        throw infeasible_budget_error("bfs_select: negative transmit budget at S = K");

    if (bfs_subset_count(N, K, budget_cfg.max_chains) > opts.subset_cap)
        throw capacity_error("bfs_select: subset count exceeds the enumeration cap");

    SelectionResult res;
    SubsetScore best;
    const int threads = resolve_threads(opts.threads);

    for (int S = K; S <= s_hi; ++S)
    {
        const std::uint64_t total = binom_u64(N, S);
        SubsetScore best_s;
        std::uint64_t inversions = 0;

        if (threads == 1)
        {
            std::vector<int> comb(S);
            std::iota(comb.begin(), comb.end(), 0);
            do
            {
                SubsetScore sc = evaluate_subset(ch, budget_cfg, comb, inversions);
                if (better_subset(sc, best_s))
                    best_s = std::move(sc);
            } while (next_combination(comb, N));
        }
        else
        {
            const int nchunks = threads * 8;
            std::vector<SubsetScore> chunk_best(nchunks);
            std::vector<std::uint64_t> chunk_inv(nchunks, 0);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
            for (int c = 0; c < nchunks; ++c)
            {
                const std::uint64_t lo = total * c / nchunks;
                const std::uint64_t hi = total * (c + 1) / nchunks;
                if (lo >= hi)
                    continue;
                std::vector<int> comb = unrank_combination(lo, N, S);
                for (std::uint64_t r = lo; r < hi; ++r)
                {
                    SubsetScore sc = evaluate_subset(ch, budget_cfg, comb, chunk_inv[c]);
                    if (better_subset(sc, chunk_best[c]))
                        chunk_best[c] = std::move(sc);
                    if (r + 1 < hi)
                        next_combination(comb, N);
                }
            }
            for (int c = 0; c < nchunks; ++c)
            {
                inversions += chunk_inv[c];
                if (better_subset(chunk_best[c], best_s))
                    best_s = chunk_best[c];
            }
        }

        res.counters.subsets_enumerated += total;
        res.counters.gram_builds += total;
        res.counters.inversions += inversions;
        if (best_s.valid)
            res.trajectory.emplace_back(S, best_s.rate);
        if (better_subset(best_s, best))
            best = std::move(best_s);
    }

    if (!best.valid)
        throw singular_gram_error("bfs_select: every candidate subset is singular");

    res.subset = best.subset;
    res.chains = static_cast<int>(best.subset.size());
    res.allocation = best.alloc;
    res.rate = best.rate;
    return res;
}

SelectionResult random_select(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                              int chains, Rng &rng)
{
    const int N = static_cast<int>(ch.antennas());
    const int K = static_cast<int>(ch.users());
    if (chains < K || chains > std::min(N, budget_cfg.max_chains))
        throw std::invalid_argument("random_select: chain count out of range");

    SelectionResult res;
    std::vector<int> deck(N);
    for (int attempt = 0; attempt < 100; ++attempt)
    {
        std::iota(deck.begin(), deck.end(), 0);
        for (int i = 0; i < chains; ++i)
        {
            const int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(N - i)));
            std::swap(deck[i], deck[j]);
        }
        std::vector<int> subset(deck.begin(), deck.begin() + chains);
        std::sort(subset.begin(), subset.end());

        ++res.counters.gram_builds;
        SubsetScore sc = evaluate_subset(ch, budget_cfg, subset, res.counters.inversions);
        if (!sc.valid)
            continue;
        res.subset = std::move(sc.subset);
        res.chains = chains;
        res.allocation = std::move(sc.alloc);
        res.rate = sc.rate;
        res.trajectory.emplace_back(chains, res.rate);
        return res;
    }
    throw singular_gram_error("random_select: 100 singular draws in a row");
}

} // namespace rfsel
