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

#include "rfsel/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace rfsel
{

UserGeometry draw_user_positions(int users, double cell_radius, double min_distance, Rng &rng)
{
    if (users < 1)
        throw std::invalid_argument("draw_user_positions: need at least one user");
    if (!(min_distance > 0.0) || !(cell_radius >= min_distance))
        throw std::invalid_argument("draw_user_positions: require 0 < min_distance <= cell_radius");

    UserGeometry geo;
    geo.cell_radius = cell_radius;
    geo.min_distance = min_distance;
    geo.distances.set_size(users);

    const double r0_sq = min_distance * min_distance;
    const double r1_sq = cell_radius * cell_radius;
    for (int k = 0; k < users; ++k)
    {
        // Area-uniform annulus: r = sqrt(r0^2 + u * (r1^2 - r0^2)).
        const double u = rng.uniform();
        geo.distances[k] = std::sqrt(r0_sq + u * (r1_sq - r0_sq));
    }
    return geo;
}

LargeScale path_loss(const UserGeometry &geometry, double alpha)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("path_loss: alpha must be positive");
    if (geometry.distances.n_elem == 0)
        throw std::invalid_argument("path_loss: empty geometry");

    LargeScale ls;
    ls.path_loss_exponent = alpha;
    ls.gains.set_size(geometry.distances.n_elem);
    for (arma::uword k = 0; k < geometry.distances.n_elem; ++k)
    {
        const double d = geometry.distances[k];
        if (!(d > 0.0))
            throw std::domain_error("path_loss: zero or negative distance");
        ls.gains[k] = std::pow(d, -alpha);
    }
    ls.sigma_sq = arma::mean(ls.gains);
    return ls;
}

ChannelRealization draw_small_scale(int users, int antennas, Rng &rng, std::uint64_t seed_tag)
{
    if (users < 1 || users > antennas)
        throw std::invalid_argument("draw_small_scale: require 1 <= K <= N");

    ChannelRealization ch;
    ch.seed_tag = seed_tag;
    ch.H.set_size(users, antennas);
    // Column-major fill order is part of the reproducibility contract.
    for (int n = 0; n < antennas; ++n)
        for (int k = 0; k < users; ++k)
            ch.H(k, n) = rng.complex_gaussian();
    return ch;
}

} // namespace rfsel
