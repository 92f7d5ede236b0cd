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
#include <span>
#include <vector>

#include "rfsel/allocation.hpp"
#include "rfsel/channel.hpp"
#include "rfsel/errors.hpp"

namespace rfsel
{

/// A Gram with reciprocal condition estimate below this is rejected as
/// singular (condition number above 1e12). Zero forcing has no regularizer
/// to fall back on.
inline constexpr double kRcondLimit = 1e-12;

/// Rank-1 updates between dense refreshes of the inverse; bounds drift
/// under long add sequences.
inline constexpr int kRefreshInterval = 64;

/// Zero-forcing Gram state for an active antenna subset: A = H_S H_S^H,
/// its inverse, and eta^2 = Tr{A^-1} (the ZF transmit-power penalty).
///
/// Columns are added one at a time via the Sherman-Morrison rank-1 update,
/// O(K^2) per antenna instead of an O(K^3) re-inversion; build() is the
/// dense from-scratch construction used for the initial state and as the
/// recomputation reference.
class GramState
{
  public:
    /// Dense construction from the columns of H listed in subset.
    /// Throws infeasible_subset_error when |subset| < K, and
    /// singular_gram_error when the Gram fails the condition check.
    static GramState build(const arma::cx_mat &H, std::span<const int> subset);

    /// eta^2_old - eta^2_new for hypothetically adding column g:
    /// ||A^-1 g||^2 / (1 + g^H A^-1 g). Non-negative, does not mutate.
    double delta_eta_add(const arma::cx_vec &g) const;

    /// Adds antenna n with column g through the rank-1 update. Every
    /// kRefreshInterval updates the inverse is refreshed from a dense
    /// factorization of the accumulated Gram.
    void add_antenna(int n, const arma::cx_vec &g);

    const std::vector<int> &selected() const { return selected_; }
    int chains() const { return static_cast<int>(selected_.size()); }
    const arma::cx_mat &gram() const { return gram_; }
    const arma::cx_mat &gram_inv() const { return gram_inv_; }
    double eta_sq() const { return eta_sq_; }

    /// Number of dense inversions performed (build + refreshes).
    int inversions() const { return inversions_; }

  private:
    GramState() = default;
    void refresh_inverse();

    std::vector<int> selected_;
    arma::cx_mat gram_;
    arma::cx_mat gram_inv_;
    double eta_sq_ = 0.0;
    int updates_since_refresh_ = 0;
    int inversions_ = 0;
};

/// ZF beamforming matrix W = H^H (H H^H)^-1 / eta for a K x S channel
/// submatrix. H_S * W = I / eta and ||W||_F = 1.
arma::cx_mat zf_weights(const arma::cx_mat &H_S);

/// Instantaneous sum-rate sum_k log2(1 + gains_k p_k / (sigma^2 eta^2))
/// in bits/s/Hz.
double sum_rate(const LargeScale &large_scale, double eta_sq, const PowerAllocation &alloc);

} // namespace rfsel
