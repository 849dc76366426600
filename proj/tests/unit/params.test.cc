// Copyright 2026 The selfcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selfcorr/params.h"

#include <gtest/gtest.h>

#include <random>

#include "selfcorr/codes.h"

using namespace selfcorr;

namespace {

// Naive minimum nontrivial weight over the full space q^n.
std::size_t naive_distance(const CodeInstance &inst, Sector s) {
    const auto &h = sector_checks(inst, s);
    TrivialityTester tester(inst, s);
    const std::uint32_t q = inst.field.q();
    std::size_t best = 0;
    Word w(inst.n);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < inst.n; ++i) total *= q;
    for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t r = code;
        for (auto &x : w) {
            x = Fq{static_cast<std::uint32_t>(r % q)};
            r /= q;
        }
        std::size_t wt = weight(w);
        if ((best == 0 || wt < best) && h.syndrome_weight(w) == 0 && !tester.is_trivial(w)) {
            best = wt;
        }
    }
    return best;
}

}  // namespace

TEST(Params, toric_dimension_and_distance) {
    auto toric = make_toric();
    auto l2 = instantiate(toric, 2, Boundary::torus);
    EXPECT_EQ(quantum_dimension(l2), 2u);
    auto l3 = instantiate(toric, 3, Boundary::torus);
    EXPECT_EQ(quantum_dimension(l3), 2u);
    auto d = distance(l3, DistanceMode::exact, 1u << 20);
    EXPECT_TRUE(d.exact);
    EXPECT_EQ(d.d, 3u);
    EXPECT_EQ(d.x->d, 3u);
    EXPECT_EQ(d.z->d, 3u);
    EXPECT_EQ(sector_checks(l3, Sector::x).syndrome_weight(d.x->witness), 0u);
    EXPECT_FALSE(is_trivial_logical(l3, Sector::x, d.x->witness));
    EXPECT_EQ(naive_distance(l2, Sector::x), distance(l2, DistanceMode::exact, 1u << 20).x->d);
    EXPECT_THROW(quantum_dimension(instantiate(make_ising(1), 5, Boundary::torus)), ValidationError);
}

TEST(Params, classical_distances) {
    auto ising1 = instantiate(make_ising(1), 5, Boundary::torus);
    EXPECT_EQ(classical_dimension(ising1), 1u);
    EXPECT_EQ(distance(ising1, DistanceMode::exact, 1000).d, 5u);
    auto ising2 = instantiate(make_ising(2), 3, Boundary::torus);
    EXPECT_EQ(classical_dimension(ising2), 1u);
    auto d = distance(ising2, DistanceMode::exact, 1000);
    EXPECT_EQ(d.d, 9u);
    EXPECT_EQ(d.d, naive_distance(ising2, Sector::classical));
}

TEST(Params, weight_ordered_search_agrees) {
    auto ising1 = instantiate(make_ising(1), 6, Boundary::torus);
    // Budget 1 forbids kernel enumeration (q^k = 2), forcing the weight-ordered path.
    auto d = sector_distance(ising1, Sector::classical, DistanceMode::exact, 100);
    EXPECT_EQ(d.d, 6u);
    EXPECT_THROW(sector_distance(instantiate(make_ising(1), 12, Boundary::torus), Sector::classical,
                                 DistanceMode::exact, 1),
                 BudgetExceeded);
    auto toric = instantiate(make_toric(), 3, Boundary::torus);
    auto w = sector_distance(toric, Sector::x, DistanceMode::exact, 1u << 8);
    EXPECT_EQ(w.method, "weight_ordered");
    EXPECT_EQ(w.d, 3u);
}

TEST(Params, distance_matches_naive_on_random_codes) {
    std::mt19937_64 rng(53);
    for (auto q : {2, 3}) {
        Field f(q, 1);
        for (int trial = 0; trial < 10; ++trial) {
            TannerSpec spec;
            spec.bits = q == 2 ? 12 : 8;
            spec.checks = 5;
            for (std::uint32_t c = 0; c < spec.checks; ++c) {
                for (std::uint32_t b = 0; b < spec.bits; ++b) {
                    if (rng() % 3 == 0) {
                        spec.edges.push_back({c, b, static_cast<std::uint32_t>(1 + rng() % (q - 1))});
                    }
                }
            }
            auto inst = classical_from_tanner(spec, f);
            auto d = distance(inst, DistanceMode::exact, 1u << 20);
            ASSERT_EQ(d.d, naive_distance(inst, Sector::classical));
            auto est = distance(inst, DistanceMode::estimate, 0, 50, 7);
            ASSERT_FALSE(est.exact);
            ASSERT_GE(est.d, d.d);
        }
    }
}

TEST(Params, estimate_is_an_upper_bound) {
    auto toric = instantiate(make_toric(), 4, Boundary::torus);
    auto est = distance(toric, DistanceMode::estimate, 0, 100, 3);
    EXPECT_FALSE(est.exact);
    EXPECT_EQ(est.trials, 100u);
    EXPECT_GE(est.d, 4u);
    EXPECT_FALSE(is_trivial_logical(toric, Sector::x, est.x->witness));
}

TEST(Params, trivial_logicals) {
    auto toric = instantiate(make_toric(), 3, Boundary::torus);
    Word zero(toric.n);
    EXPECT_TRUE(is_trivial_logical(toric, Sector::x, zero));
    // A row of hz (an X-check) is a stabilizer of the X sector.
    Word stab(toric.n);
    for (const auto &e : toric.hz.row(0)) stab[e.index] = e.value;
    EXPECT_TRUE(is_trivial_logical(toric, Sector::x, stab));
    auto d = distance(toric, DistanceMode::exact, 1u << 20);
    EXPECT_FALSE(is_trivial_logical(toric, Sector::x, d.x->witness));
    Word single(toric.n);
    single[0] = Fq{1};
    EXPECT_THROW(is_trivial_logical(toric, Sector::x, single), ValidationError);
}

TEST(Params, coset_min_weight) {
    auto toric = instantiate(make_toric(), 2, Boundary::torus);
    Word zero(toric.n);
    EXPECT_EQ(coset_min_weight(toric.hz, zero, 1000).weight, 0u);
    Word row(toric.n);
    for (const auto &e : toric.hz.row(1)) row[e.index] = e.value;
    auto r = coset_min_weight(toric.hz, row, 1000);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.weight, 0u);
    for (std::uint32_t i = 0; i < toric.n; ++i) {
        Word one(toric.n);
        one[i] = Fq{1};
        auto c = coset_min_weight(toric.hz, one, 1000);
        EXPECT_EQ(c.weight, 1u);
        auto g = coset_min_weight(toric.hz, one, 1);
        EXPECT_FALSE(g.exact);
        EXPECT_GE(g.weight, c.weight);
    }
    // Brute force over all 2^8 words.
    for (std::uint32_t code = 0; code < 256; ++code) {
        Word w(8);
        for (std::uint32_t i = 0; i < 8; ++i) w[i] = Fq{(code >> i) & 1u};
        auto exact = coset_min_weight(toric.hz, w, 1000);
        std::size_t best = weight(w);
        for (std::uint32_t m = 0; m < 16; ++m) {
            Word v = w;
            for (std::uint32_t r2 = 0; r2 < 4; ++r2) {
                if ((m >> r2) & 1u) {
                    for (const auto &e : toric.hz.row(r2)) v[e.index] = Fq{v[e.index].rep ^ 1u};
                }
            }
            best = std::min(best, weight(v));
        }
        ASSERT_EQ(exact.weight, best);
        ASSERT_LE(exact.weight, weight(w));
    }
}
