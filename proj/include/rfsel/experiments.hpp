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

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "rfsel/allocation.hpp"
#include "rfsel/selection.hpp"

namespace rfsel
{

enum class SweepAxis
{
    none,
    antennas,
    rf_chains,
    p_max,
    users
};

enum class Algorithm
{
    greedy,
    bfs,
    random,
    analytic
};

/// Power allocation evaluated for the random-selection baseline.
enum class RandomPower
{
    waterfill,
    equal_received
};

SweepAxis parse_axis(const std::string &name);
Algorithm parse_algorithm(const std::string &name);
const char *to_string(SweepAxis axis);
const char *to_string(Algorithm algo);

/// Sweep definition plus system parameters; defaults follow the reference
/// simulation setup (K=10, N=256, p_c=0.05, alpha=3.7, cell radius 500 m).
struct ExperimentConfig
{
    int users = 10;
    int antennas = 256;
    double p_max = 4.0;
    double p_c = 0.05;
    double alpha = 3.7;
    double cell_radius = 500.0;
    double min_distance = 35.0;
    int trials = 500;
    std::uint64_t master_seed = 1;
    SweepAxis axis = SweepAxis::none;
    std::vector<double> sweep_values;
    std::vector<Algorithm> algorithms = {Algorithm::greedy, Algorithm::random};
    RandomPower random_power = RandomPower::waterfill;
    EqualPowerVariant erp_variant = EqualPowerVariant::paper;
    int random_chains = 0;  // S for scalar random runs; 0 picks the analytic S*
    int threads = 0;        // 0 = all hardware threads, 1 = serial reference
    std::uint64_t bfs_subset_cap = 10'000'000;
    std::uint64_t initial_bfs_cap = 1'000'000;

    void validate() const;  // throws std::invalid_argument

    /// Independent sweep points. rf_chains is a single point whose values
    /// form the S grid of one trial kernel.
    int points() const
    {
        return (axis == SweepAxis::none || axis == SweepAxis::rf_chains)
                   ? 1
                   : static_cast<int>(sweep_values.size());
    }
};

/// Streaming mean/variance accumulator with the count-weighted pairwise
/// merge, so partial aggregates combine associatively.
struct Moments
{
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const Moments &other);
    double variance() const;    // sample variance
    double std_error() const;   // sample std / sqrt(count)
};

struct CellStats
{
    Moments rate;
    Moments chains;
    Moments pout;
};

/// Per-trial output of one algorithm: either a single (S, rate, p_out)
/// record or a curve of them over an S grid.
struct AlgoTrialOutcome
{
    std::string label;
    bool skipped = false;
    std::string skip_reason;
    bool curve = false;
    std::vector<std::tuple<int, double, double>> points;  // (S, rate, p_out)
};

struct TrialOutcome
{
    std::vector<AlgoTrialOutcome> algos;
};

/// Merged Monte-Carlo statistics, keyed by (point index, algorithm label,
/// S) with S = -1 for scalar records. The schema string pins the sweep
/// definition; merging aggregates from different schemas is an error.
struct AggregateStats
{
    std::string schema;
    std::map<std::tuple<int, std::string, int>, CellStats> cells;
    std::map<std::pair<int, std::string>, std::uint64_t> skips;

    void fold(int point_index, const TrialOutcome &outcome);
    static AggregateStats merged(const AggregateStats &a, const AggregateStats &b);
};

std::string schema_of(const ExperimentConfig &cfg);

/// One CSV row of the sweep output.
struct SweepRow
{
    double axis_value = 0.0;
    std::string algorithm;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    double mean_chains = 0.0;
    double mean_pout = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t skipped = 0;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    AggregateStats stats;
};

/// One paired Monte-Carlo trial: a single geometry + channel drop evaluated
/// by every requested algorithm. The drop substream is keyed by trial index
/// alone, so all sweep points of a trial share the realization (common
/// random numbers; points slice leading rows/columns where the axis varies
/// K or N).
TrialOutcome run_trial(const ExperimentConfig &cfg, int point_index, int trial_index);

/// Trials [trial_begin, trial_end) of one sweep point, folded in trial
/// order. The parallel path stores per-trial outcomes and folds them
/// sequentially, so results are bit-identical to the serial reference for
/// any thread count.
AggregateStats run_point_range(const ExperimentConfig &cfg, int point_index, int trial_begin,
                               int trial_end);
AggregateStats run_point_range_serial(const ExperimentConfig &cfg, int point_index,
                                      int trial_begin, int trial_end);

/// Collapses aggregates into the output table: scalar cells report their
/// moments directly; curve cells report the S maximizing the mean rate.
/// Analytic rows come from the closed form and carry zero trials.
std::vector<SweepRow> summarize(const ExperimentConfig &cfg, const AggregateStats &stats);

/// Full sweep: every point, every trial, summarized.
SweepResult run_sweep(const ExperimentConfig &cfg);

} // namespace rfsel
