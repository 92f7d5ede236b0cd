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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfsel/allocation.hpp"
#include "rfsel/channel.hpp"
#include "rfsel/precoder.hpp"
#include "rfsel/rng.hpp"

namespace rfsel
{

using BigInt = boost::multiprecision::cpp_int;

/// Live instrumentation of the selection algorithms.
struct OpCounters
{
    std::uint64_t gram_builds = 0;          // dense Gram constructions
    std::uint64_t rank1_updates = 0;        // Sherman-Morrison antenna adds
    std::uint64_t inversions = 0;           // dense K x K inversions
    std::uint64_t subsets_enumerated = 0;   // subsets visited by exhaustive paths
    std::uint64_t candidate_evaluations = 0;// greedy trace-decrement scores
};

enum class InitialStrategy
{
    automatic,     // exact_bfs when C(N, K) fits the cap, greedy_volume otherwise
    exact_bfs,     // K-subset minimizing eta^2 by full enumeration
    greedy_volume  // pivoted orthogonalization maximizing the Gram determinant
};

const char *to_string(InitialStrategy s);

struct SelectionResult
{
    std::vector<int> subset;           // sorted antenna indices
    int chains = 0;                    // S = |subset|
    PowerAllocation allocation;
    double rate = 0.0;                 // bits/s/Hz at the returned state
    std::vector<std::pair<int, double>> trajectory;  // (S, water-filled rate) visited
    OpCounters counters;
    InitialStrategy initial_strategy = InitialStrategy::automatic;  // resolved choice
};

struct GreedyOptions
{
    InitialStrategy initial = InitialStrategy::automatic;
    std::uint64_t initial_bfs_cap = 1'000'000;  // max C(N, K) for the exact start
    /// Grow to exactly this S, ignoring the stop rule (used for fixed-S curves).
    std::optional<int> fixed_chains;
    /// Scan the whole S range and return the best state seen instead of
    /// stopping at the first rate decrease.
    bool scan_all_and_return_best = false;
    /// Worker threads for the candidate scan; 1 runs the serial reference.
    int threads = 0;
};

/// The K columns that start the greedy growth. exact_bfs enumerates every
/// K-subset (capacity error beyond the cap); greedy_volume picks columns by
/// modified Gram-Schmidt pivoting on the residual norms. Ties resolve to the
/// lowest antenna index. Returns a sorted index set.
std::vector<int> initial_k_subset(const ChannelRealization &ch, int users, InitialStrategy strategy,
                                  std::uint64_t bfs_cap = 1'000'000, OpCounters *counters = nullptr);

/// Greedy RF-chain count and antenna selection: starting from the initial
/// K-subset, repeatedly adds the remaining antenna with the largest eta^2
/// decrement (ties to the lowest index), water-fills p_max - S p_c at every
/// S, and stops just before the first rate decrease (or at S = min(N,
/// max_chains)). The trajectory records every visited (S, rate) including a
/// rejected one.
SelectionResult greedy_select(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                              const GreedyOptions &opts = {});

struct BfsOptions
{
    std::uint64_t subset_cap = 10'000'000;  // enumeration budget across all sizes
    int threads = 0;                        // 1 runs the serial reference
};

/// Exhaustive optimum: max water-filled sum-rate over all subsets of every
/// size S in [K, min(N, max_chains)]; ties break to the lexicographically
/// smallest subset. Singular subsets are skipped. The trajectory holds the
/// best rate found at each size.
SelectionResult bfs_select(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                           const BfsOptions &opts = {});

/// Uniformly random S-subset with water-filled powers; singular draws are
/// retried up to 100 times.
SelectionResult random_select(const ChannelRealization &ch, const CircuitBudget &budget_cfg,
                              int chains, Rng &rng);

enum class SelectionAlgo
{
    bfs,
    greedy
};

/// Exact-integer operation-count estimate:
///   bfs:    sum_{S=1..max_chains} C(N-S+1, S) * (S K^2 + K^3)
///   greedy: sum_{S=1..max_chains} (N-S+1)     * (S K^2 + K^3)
/// Terms with N-S+1 < S (bfs) or N-S+1 < 1 (greedy) contribute zero.
BigInt complexity_estimate(int antennas, int users, int max_chains, SelectionAlgo algo);

/// Number of subsets the actual exhaustive search visits:
/// sum_{S=K..min(N, max_chains)} C(N, S).
BigInt bfs_subset_count(int antennas, int users, int max_chains);

/// Exact binomial coefficient C(n, k); zero when k > n or k < 0.
BigInt binomial(int n, int k);

} // namespace rfsel
