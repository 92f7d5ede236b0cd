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

#include "rfsel/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfsel/errors.hpp"

namespace rfsel
{

CircuitBudget::CircuitBudget(double p_max_in, double p_c_in) : p_max(p_max_in), p_c(p_c_in)
{
    if (!(p_max > 0.0) || !(p_c > 0.0))
        throw std::invalid_argument("CircuitBudget: p_max and p_c must be positive");
    // 1e-9 slack absorbs representation error in the ratio (e.g. 4/0.05).
    max_chains = static_cast<int>(std::floor(p_max / p_c + 1e-9));
}

namespace
{

arma::vec inverse_gains(const arma::vec &gains_eff)
{
    arma::vec inv(gains_eff.n_elem);
    for (arma::uword k = 0; k < gains_eff.n_elem; ++k)
    {
        if (!(gains_eff[k] > 0.0))
            throw std::domain_error("waterfill: effective gains must be positive");
        inv[k] = 1.0 / gains_eff[k];
    }
    return inv;
}

arma::vec powers_at_level(const arma::vec &inv, double level)
{
    arma::vec p(inv.n_elem);
    for (arma::uword k = 0; k < inv.n_elem; ++k)
        p[k] = std::max(0.0, level - inv[k]);
    return p;
}

double waterfill_level_sorted(const arma::vec &inv, double budget)
{
    arma::vec sorted = arma::sort(inv);
    const arma::uword K = sorted.n_elem;
    // Grow the active set in order of increasing 1/g; the level for m active
    // users is (budget + sum of their 1/g) / m and is valid while it stays
    // above the m-th inverse gain.
    double prefix = 0.0;
    double level = sorted[0];
    for (arma::uword m = 1; m <= K; ++m)
    {
        prefix += sorted[m - 1];
        const double cand = (budget + prefix) / static_cast<double>(m);
        if (cand < sorted[m - 1])
            break;
        level = cand;
        if (m < K && cand <= sorted[m])
            break;
    }
    return level;
}

double waterfill_level_bisection(const arma::vec &inv, double budget)
{
    double lo = inv.min();
    double hi = inv.max() + budget;
    double mid = lo;
    for (int it = 0; it < 200; ++it)
    {
        mid = 0.5 * (lo + hi);
        const double poured = arma::accu(powers_at_level(inv, mid));
        const double residual = poured - budget;
        if (std::abs(residual) <= 1e-12)
            break;
        if (residual > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return mid;
}

} // namespace

PowerAllocation waterfill(const arma::vec &gains_eff, double budget, WaterfillMethod method)
{
    if (gains_eff.n_elem == 0)
        throw std::invalid_argument("waterfill: no users");
    if (budget < 0.0)
        throw std::invalid_argument("waterfill: negative budget");

    const arma::vec inv = inverse_gains(gains_eff);

    PowerAllocation alloc;
    alloc.budget = budget;
    if (budget == 0.0)
    {
        alloc.powers = arma::zeros(gains_eff.n_elem);
        alloc.water_level = inv.min();
        return alloc;
    }

    const double level = (method == WaterfillMethod::sorted_exact)
                             ? waterfill_level_sorted(inv, budget)
                             : waterfill_level_bisection(inv, budget);
    alloc.water_level = level;
    alloc.powers = powers_at_level(inv, level);

    if (method == WaterfillMethod::sorted_exact)
    {
        // Snap the sorted-exact solution onto the budget; the level is exact
        // up to one division, this removes the last-bit residue.
        const double total = arma::accu(alloc.powers);
        if (total > 0.0)
            alloc.powers *= budget / total;
    }
    return alloc;
}

PowerAllocation equal_received_power(int chains, const CircuitBudget &budget_cfg, int users,
                                     const LargeScale &large_scale, EqualPowerVariant variant)
{
    if (users < 1 || static_cast<arma::uword>(users) != large_scale.users())
        throw std::invalid_argument("equal_received_power: user count mismatch");
    if (chains < users)
        throw infeasible_subset_error("equal_received_power: S < K");
    if (chains > budget_cfg.max_chains)
        throw infeasible_budget_error("equal_received_power: S exceeds max supportable chains");

    const double budget = budget_cfg.transmit_budget(chains);
    PowerAllocation alloc;
    alloc.budget = budget;
    alloc.powers.set_size(users);
    const double share = budget / static_cast<double>(users);
    for (int k = 0; k < users; ++k)
        alloc.powers[k] = share * large_scale.sigma_sq / large_scale.gains[k];

    if (variant == EqualPowerVariant::feasible)
    {
        const double total = arma::accu(alloc.powers);
        if (total > 0.0)
            alloc.powers *= budget / total;
    }
    return alloc;
}

double average_sum_rate_closed_form(int chains, int users, const CircuitBudget &budget_cfg)
{
    if (chains < users)
        throw infeasible_subset_error("average_sum_rate_closed_form: S < K");
    if (chains > budget_cfg.max_chains)
        throw infeasible_budget_error("average_sum_rate_closed_form: S exceeds max chains");
    const double K = static_cast<double>(users);
    const double S = static_cast<double>(chains);
    return K * std::log2(1.0 + budget_cfg.transmit_budget(chains) * (S - K) / (K * K));
}

double rf_count_threshold(int users, const CircuitBudget &budget_cfg)
{
    return (budget_cfg.p_max + users * budget_cfg.p_c) / (2.0 * budget_cfg.p_c);
}

int optimal_rf_count_analytic(int users, const CircuitBudget &budget_cfg)
{
    if (users < 1)
        throw std::invalid_argument("optimal_rf_count_analytic: need at least one user");
    if (!(budget_cfg.p_max > users * budget_cfg.p_c))
        throw infeasible_budget_error(
            "optimal_rf_count_analytic: p_max <= K * p_c leaves no transmit power");

    const double phi = rf_count_threshold(users, budget_cfg);
    const int lo = static_cast<int>(std::floor(phi));
    const int hi = static_cast<int>(std::ceil(phi));
    const auto clamp = [&](int s) { return std::clamp(s, users, budget_cfg.max_chains); };

    if (lo == budget_cfg.max_chains)
        return clamp(lo);
    if (lo == hi)
        return clamp(lo);
    const double r_lo = average_sum_rate_closed_form(clamp(lo), users, budget_cfg);
    const double r_hi = average_sum_rate_closed_form(clamp(hi), users, budget_cfg);
    return r_lo > r_hi ? clamp(lo) : clamp(hi);
}

} // namespace rfsel
