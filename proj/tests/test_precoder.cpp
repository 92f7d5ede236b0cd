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

#include <doctest.h>

#include <numeric>
#include <vector>

#include "rfsel/channel.hpp"
#include "rfsel/errors.hpp"
#include "rfsel/precoder.hpp"
#include "rfsel/rng.hpp"

using namespace rfsel;

namespace
{

// Dense reference: eta^2 from an explicit submatrix product and inversion,
// independent of GramState's accumulation and update paths.
double eta_sq_dense(const arma::cx_mat &H, const std::vector<int> &subset)
{
    arma::cx_mat sub(H.n_rows, subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i)
        sub.col(i) = H.col(subset[i]);
    return arma::trace(arma::inv(sub * sub.t())).real();
}

arma::cx_mat random_channel(int users, int antennas, std::uint64_t seed)
{
    Rng rng(seed);
    return draw_small_scale(users, antennas, rng).H;
}

} // namespace

TEST_CASE("build_gram: identity channel")
{
    arma::cx_mat H(2, 2, arma::fill::eye);
    const std::vector<int> subset{0, 1};
    const GramState st = GramState::build(H, subset);
    CHECK(arma::norm(st.gram() - arma::cx_mat(2, 2, arma::fill::eye)) < 1e-14);
    CHECK(st.eta_sq() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("build_gram: scalar inverse")
{
    arma::cx_mat H(1, 1);
    H(0, 0) = {2.0, 0.0};  // squared norm 4
    const std::vector<int> subset{0};
    const GramState st = GramState::build(H, subset);
    CHECK(st.eta_sq() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("build_gram: matches the dense inversion reference")
{
    const arma::cx_mat H = random_channel(2, 3, 101);
    const std::vector<int> subset{0, 1, 2};
    const GramState st = GramState::build(H, subset);
    CHECK(st.eta_sq() == doctest::Approx(eta_sq_dense(H, subset)).epsilon(1e-9));
}

TEST_CASE("build_gram: error paths")
{
    const arma::cx_mat H = random_channel(3, 4, 102);
    const std::vector<int> small{0, 1};
    CHECK_THROWS_AS(GramState::build(H, small), infeasible_subset_error);

    const std::vector<int> dup{0, 0, 1};
    CHECK_THROWS_AS(GramState::build(H, dup), std::invalid_argument);

    const std::vector<int> oob{0, 1, 7};
    CHECK_THROWS_AS(GramState::build(H, oob), std::invalid_argument);

    arma::cx_mat Z(2, 3, arma::fill::zeros);
    Z.col(0) = arma::cx_vec{{1.0, 0.0}, {0.0, 0.0}};
    Z.col(1) = arma::cx_vec{{2.0, 0.0}, {0.0, 0.0}};  // colinear: rank 1
    const std::vector<int> sing{0, 1};
    CHECK_THROWS_AS(GramState::build(Z, sing), singular_gram_error);
}

TEST_CASE("delta_eta_add: scalar update and no-op column")
{
    arma::cx_mat H(1, 1);
    H(0, 0) = {1.0, 0.0};
    const std::vector<int> subset{0};
    const GramState st = GramState::build(H, subset);

    CHECK(st.delta_eta_add(arma::cx_vec{{1.0, 0.0}}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(st.delta_eta_add(arma::cx_vec{{0.0, 0.0}}) == doctest::Approx(0.0));
}

TEST_CASE("delta_eta_add: agrees with dense recomputation on the enlarged subset")
{
    const arma::cx_mat H = random_channel(3, 6, 103);
    const std::vector<int> subset{0, 2, 4};
    const GramState st = GramState::build(H, subset);
    for (int add : {1, 3, 5})
    {
        std::vector<int> enlarged = subset;
        enlarged.push_back(add);
        const double expect = st.eta_sq() - eta_sq_dense(H, enlarged);
        CHECK(st.delta_eta_add(H.col(add)) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("add_antenna: matches dense rebuild and rejects duplicates")
{
    const arma::cx_mat H = random_channel(3, 8, 104);
    std::vector<int> subset{0, 1, 2};
    GramState st = GramState::build(H, subset);
    for (int add : {4, 6, 7})
    {
        st.add_antenna(add, H.col(add));
        subset.push_back(add);
        CHECK(st.eta_sq() == doctest::Approx(eta_sq_dense(H, subset)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(st.add_antenna(4, H.col(4)), std::invalid_argument);
}

TEST_CASE("add_antenna: duplicated column halves the scalar eta^2")
{
    arma::cx_mat H(1, 2);
    H(0, 0) = {1.0, 0.0};
    H(0, 1) = {1.0, 0.0};
    const std::vector<int> subset{0};
    GramState st = GramState::build(H, subset);
    st.add_antenna(1, H.col(1));
    CHECK(st.eta_sq() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("add_antenna: inverse stays consistent over a full add sequence")
{
    const int K = 4, N = 100;  // enough adds to cross a dense refresh
    const arma::cx_mat H = random_channel(K, N, 105);
    std::vector<int> subset(K);
    std::iota(subset.begin(), subset.end(), 0);
    GramState st = GramState::build(H, subset);
    for (int n = K; n < N; ++n)
        st.add_antenna(n, H.col(n));
    const arma::cx_mat residual =
        st.gram() * st.gram_inv() - arma::cx_mat(K, K, arma::fill::eye);
    CHECK(arma::abs(residual).max() < 1e-8);

    // Accumulated Gram tracks the direct submatrix product.
    arma::cx_mat sub(K, N);
    for (int n = 0; n < N; ++n)
        sub.col(n) = H.col(n);
    const arma::cx_mat direct = sub * sub.t();
    CHECK(arma::norm(st.gram() - direct, "fro") <= 1e-9 * arma::norm(direct, "fro"));
}

TEST_CASE("eta^2 is monotone non-increasing along random add sequences")
{
    Rng rng(106);
    for (int rep = 0; rep < 20; ++rep)
    {
        const int K = 2 + static_cast<int>(rng.bounded(5));
        const int N = K + 8;
        const arma::cx_mat H = random_channel(K, N, 1000 + rep);
        std::vector<int> subset(K);
        std::iota(subset.begin(), subset.end(), 0);
        GramState st = GramState::build(H, subset);
        double prev = st.eta_sq();
        for (int n = K; n < N; ++n)
        {
            CHECK(st.delta_eta_add(H.col(n)) >= 0.0);
            st.add_antenna(n, H.col(n));
            CHECK(st.eta_sq() <= prev + 1e-12);
            prev = st.eta_sq();
        }
    }
}

TEST_CASE("Wishart mean law: E[eta^2] = K/(S-K) for i.i.d. fading")
{
    const int K = 4, S = 16, trials = 2000;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        Rng rng = substream(777, {static_cast<std::uint64_t>(t)});
        const ChannelRealization ch = draw_small_scale(K, S, rng);
        std::vector<int> subset(S);
        std::iota(subset.begin(), subset.end(), 0);
        sum += GramState::build(ch.H, subset).eta_sq();
    }
    const double expect = static_cast<double>(K) / (S - K);
    CHECK(sum / trials == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("zf_weights: identity channel and the norm identity")
{
    arma::cx_mat I2(2, 2, arma::fill::eye);
    const arma::cx_mat W = zf_weights(I2);
    CHECK(arma::norm(W - I2 / std::sqrt(2.0)) < 1e-12);
    CHECK(arma::norm(W, "fro") == doctest::Approx(1.0).epsilon(1e-12));

    const arma::cx_mat H = random_channel(2, 4, 107);
    const arma::cx_mat W2 = zf_weights(H);
    CHECK(arma::norm(W2, "fro") == doctest::Approx(1.0).epsilon(1e-9));

    // H * W = I / eta: off-diagonals vanish, diagonal is 1/eta.
    const arma::cx_mat P = H * W2;
    const double eta = std::sqrt(arma::trace(arma::inv(H * H.t())).real());
    for (arma::uword r = 0; r < P.n_rows; ++r)
        for (arma::uword c = 0; c < P.n_cols; ++c)
        {
            if (r == c)
                CHECK(std::abs(P(r, c) - std::complex<double>(1.0 / eta, 0.0)) < 1e-8);
            else
                CHECK(std::abs(P(r, c)) < 1e-8);
        }
}

TEST_CASE("sum_rate: hand-checked evaluations")
{
    LargeScale ls;
    PowerAllocation alloc;

    SUBCASE("zero power")
    {
        ls.gains = {1.0, 2.0};
        ls.sigma_sq = 1.5;
        alloc.powers = {0.0, 0.0};
        CHECK(sum_rate(ls, 1.0, alloc) == doctest::Approx(0.0));
    }
    SUBCASE("log2 of two")
    {
        ls.gains = {1.0};
        ls.sigma_sq = 1.0;
        alloc.powers = {1.0};
        CHECK(sum_rate(ls, 1.0, alloc) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("two users")
    {
        ls.gains = {1.0, 1.0};
        ls.sigma_sq = 1.0;
        alloc.powers = {0.5, 0.5};
        CHECK(sum_rate(ls, 0.5, alloc) == doctest::Approx(2.0).epsilon(1e-12));
    }
}
