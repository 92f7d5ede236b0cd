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

#include <armadillo>

#include "rfsel/channel.hpp"

namespace rfsel
{

/// Per-user transmit powers (noise-normalized). water_level is the common
/// level L = 1/(ln2 * mu) of the water-filling solution: every active user
/// satisfies p_k + 1/g_k = L. For equal-received-power allocations the
/// level is not defined and is set to 0.
struct PowerAllocation
{
    arma::vec powers;
    double water_level = 0.0;
    double budget = 0.0;  // p_out bound: p_max - S * p_c

    double total() const { return arma::accu(powers); }
};

/// Circuit power budget: p_max caps transmit power plus S * p_c of RF-chain
/// consumption; max_chains = floor(p_max / p_c) is the largest S supportable
/// with zero transmit power.
struct CircuitBudget
{
    double p_max = 0.0;
    double p_c = 0.0;
    int max_chains = 0;

    CircuitBudget() = default;
    CircuitBudget(double p_max_in, double p_c_in);

    /// Transmit power left after powering S chains.
    double transmit_budget(int chains) const { return p_max - chains * p_c; }
};

enum class WaterfillMethod
{
    sorted_exact,  // O(K log K) active-set solution; the reference
    bisection      // the level search named by the selection algorithm
};

/// Water-filling over effective gains g_k (rate = sum log2(1 + g_k p_k)):
/// p_k = (L - 1/g_k)^+ with sum p_k = budget. budget = 0 yields the all-zero
/// allocation. Both methods agree within 1e-8 on the powers; bisection runs
/// with absolute residual tolerance 1e-12 and an iteration cap of 200.
PowerAllocation waterfill(const arma::vec &gains_eff, double budget,
                          WaterfillMethod method = WaterfillMethod::sorted_exact);

enum class EqualPowerVariant
{
    paper,    // p_k = (budget/K) * sigma^2 / g_k; can overshoot the budget
    feasible  // same profile rescaled so the powers sum to the budget
};

/// Equal-received-power allocation for S active chains. The paper variant
/// makes every user's SINR equal to budget / (K eta^2) exactly but its sum
/// exceeds the budget whenever user gains differ (AM-HM); the feasible
/// variant rescales the profile onto the budget.
PowerAllocation equal_received_power(int chains, const CircuitBudget &budget_cfg, int users,
                                     const LargeScale &large_scale,
                                     EqualPowerVariant variant = EqualPowerVariant::paper);

/// Closed-form average sum-rate under equal received power and the
/// large-system eta^2 approximation:
/// Rbar(S) = K log2(1 + (p_max - S p_c)(S - K) / K^2).
double average_sum_rate_closed_form(int chains, int users, const CircuitBudget &budget_cfg);

/// Threshold phi = (p_max + K p_c) / (2 p_c) locating the analytic optimum.
double rf_count_threshold(int users, const CircuitBudget &budget_cfg);

/// The integer S* maximizing Rbar: floor(phi) when Rbar(floor) > Rbar(ceil)
/// or floor(phi) = max_chains, otherwise ceil(phi); clamped to
/// [K, max_chains]. Throws infeasible_budget_error when p_max <= K p_c.
int optimal_rf_count_analytic(int users, const CircuitBudget &budget_cfg);

} // namespace rfsel
