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
#include <cstdint>

#include "rfsel/rng.hpp"

namespace rfsel
{

/// User drop inside a circular cell: one distance per user, in meters.
struct UserGeometry
{
    arma::vec distances;  // K entries, min_distance <= d_k <= cell_radius
    double cell_radius = 0.0;
    double min_distance = 0.0;

    arma::uword users() const { return distances.n_elem; }
};

/// Distance-based path loss d^(-alpha) for each user plus the mean gain
/// sigma^2 = Tr{D}/K that normalizes the downlink signal model.
struct LargeScale
{
    arma::vec gains;  // K entries, strictly positive
    double path_loss_exponent = 0.0;
    double sigma_sq = 0.0;

    arma::uword users() const { return gains.n_elem; }
};

/// One small-scale fading realization: K x N matrix of i.i.d. unit-variance
/// circularly-symmetric complex Gaussians. Columns index antennas.
struct ChannelRealization
{
    arma::cx_mat H;  // K rows (users) x N columns (antennas)
    LargeScale large_scale;
    std::uint64_t seed_tag = 0;

    arma::uword users() const { return H.n_rows; }
    arma::uword antennas() const { return H.n_cols; }
};

/// Drops K users uniformly over the annulus [min_distance, cell_radius]
/// (area-uniform: the radius CDF is proportional to r^2, shifted for the
/// inner exclusion). Distances are drawn in user order, one uniform each.
UserGeometry draw_user_positions(int users, double cell_radius, double min_distance, Rng &rng);

/// gains[k] = d_k^(-alpha); sigma_sq = mean of the gains.
LargeScale path_loss(const UserGeometry &geometry, double alpha);

/// K x N i.i.d. CN(0,1) fading matrix, filled in column-major order, two
/// uniforms (one Box-Muller pair) per entry. Identical seed, identical matrix.
ChannelRealization draw_small_scale(int users, int antennas, Rng &rng, std::uint64_t seed_tag = 0);

} // namespace rfsel
