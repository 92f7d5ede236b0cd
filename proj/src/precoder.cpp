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

#include "rfsel/precoder.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace rfsel
{

namespace
{

arma::cx_mat inverse_checked(const arma::cx_mat &gram)
{
    const double rc = arma::rcond(gram);
    if (!(rc > kRcondLimit))
        throw singular_gram_error("gram matrix is numerically singular (rcond <= 1e-12)");
    return arma::inv(gram);
}

} // namespace

GramState GramState::build(const arma::cx_mat &H, std::span<const int> subset)
{
    const int users = static_cast<int>(H.n_rows);
    if (static_cast<int>(subset.size()) < users)
        throw infeasible_subset_error("build_gram: subset smaller than the user count");

    std::set<int> seen;
    GramState st;
    st.selected_.reserve(subset.size());
    st.gram_.zeros(users, users);
    for (int n : subset)
    {
        if (n < 0 || n >= static_cast<int>(H.n_cols))
            throw std::invalid_argument("build_gram: antenna index out of range");
        if (!seen.insert(n).second)
            throw std::invalid_argument("build_gram: duplicate antenna index");
        st.selected_.push_back(n);
        const arma::cx_vec g = H.col(n);
        st.gram_ += g * g.t();
    }
    st.gram_inv_ = inverse_checked(st.gram_);
    st.eta_sq_ = arma::trace(st.gram_inv_).real();
    st.inversions_ = 1;
    return st;
}

double GramState::delta_eta_add(const arma::cx_vec &g) const
{
    const arma::cx_vec u = gram_inv_ * g;
    const double denom = 1.0 + arma::cdot(g, u).real();
    const double num = std::real(arma::cdot(u, u));
    return num / denom;
}

void GramState::add_antenna(int n, const arma::cx_vec &g)
{
    for (int m : selected_)
        if (m == n)
            throw std::invalid_argument("add_antenna: antenna already selected");

    const arma::cx_vec u = gram_inv_ * g;
    const double denom = 1.0 + arma::cdot(g, u).real();
    gram_ += g * g.t();
    gram_inv_ -= (u * u.t()) / denom;
    eta_sq_ -= std::real(arma::cdot(u, u)) / denom;
    selected_.push_back(n);

    if (++updates_since_refresh_ >= kRefreshInterval)
        refresh_inverse();
}

void GramState::refresh_inverse()
{
    gram_inv_ = inverse_checked(gram_);
    eta_sq_ = arma::trace(gram_inv_).real();
    updates_since_refresh_ = 0;
    ++inversions_;
}

arma::cx_mat zf_weights(const arma::cx_mat &H_S)
{
    if (H_S.n_cols < H_S.n_rows)
        throw infeasible_subset_error("zf_weights: need at least K columns");
    const arma::cx_mat gram = H_S * H_S.t();
    const arma::cx_mat gram_inv = inverse_checked(gram);
    const double eta = std::sqrt(arma::trace(gram_inv).real());
    return (H_S.t() * gram_inv) / eta;
}

double sum_rate(const LargeScale &large_scale, double eta_sq, const PowerAllocation &alloc)
{
    if (large_scale.users() != alloc.powers.n_elem)
        throw std::invalid_argument("sum_rate: user count mismatch");
    if (!(eta_sq > 0.0))
        throw std::domain_error("sum_rate: eta^2 must be positive");

    const double denom = large_scale.sigma_sq * eta_sq;
    double rate = 0.0;
    for (arma::uword k = 0; k < alloc.powers.n_elem; ++k)
        rate += std::log2(1.0 + large_scale.gains[k] * alloc.powers[k] / denom);
    return rate;
}

} // namespace rfsel
