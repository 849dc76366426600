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

#include "selfcorr/dynamics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "selfcorr/codes.h"

using namespace selfcorr;

namespace {

std::uint64_t encode(const Word &w, std::uint32_t q) {
    std::uint64_t code = 0;
    for (std::size_t i = w.size(); i-- > 0;) code = code * q + w[i].rep;
    return code;
}

// Total variation distance between the chain sampled at unit intervals and the Gibbs measure.
double stationarity_tv(const SparseFqMatrix &h, double beta, std::size_t samples,
                       std::uint64_t seed) {
    const std::uint32_t q = h.field().q();
    std::uint64_t states = 1;
    for (std::size_t i = 0; i < h.cols(); ++i) states *= q;
    std::vector<double> gibbs(states);
    double z = 0;
    Word w(h.cols());
    for (std::uint64_t c = 0; c < states; ++c) {
        std::uint64_t x = c;
        for (auto &v : w) {
            v = Fq{static_cast<std::uint32_t>(x % q)};
            x /= q;
        }
        gibbs[c] = std::exp(-beta * static_cast<double>(h.syndrome_weight(w)));
        z += gibbs[c];
    }
    GlauberChain chain(h, beta, seed);
    chain.run_until(20.0);
    std::vector<double> hist(states, 0);
    for (std::size_t s = 0; s < samples; ++s) {
        chain.run_until(21.0 + static_cast<double>(s));
        hist[encode(chain.word(), q)] += 1;
    }
    double tv = 0;
    for (std::uint64_t c = 0; c < states; ++c) {
        tv += std::abs(hist[c] / static_cast<double>(samples) - gibbs[c] / z);
    }
    return tv / 2;
}

Word unit(std::size_t n, std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> entries) {
    Word w(n);
    for (auto [i, v] : entries) w[i] = Fq{v};
    return w;
}

}  // namespace

TEST(Dynamics, rate_examples) {
    const double b = std::log(2.0);
    EXPECT_NEAR(rate(0, 0, b), 0.5, 1e-15);
    EXPECT_NEAR(rate(3, 3, b), 0.5, 1e-15);
    EXPECT_NEAR(rate(0, 1, b), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(rate(1, 0, b), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(rate(0, 1000, 10.0), 0.0, 1e-300);
    EXPECT_EQ(rate(1000, 0, 10.0), 1.0);
    EXPECT_THROW(rate(0, 1, -1.0), ValidationError);
}

TEST(Dynamics, detailed_balance) {
    for (double beta : {0.0, 0.1, 0.5, 1.0, std::log(2.0), 2.0, 3.7}) {
        for (std::int64_t a = 0; a <= 12; ++a) {
            for (std::int64_t c = 0; c <= 12; ++c) {
                double lhs = std::exp(-beta * static_cast<double>(a)) * rate(a, c, beta);
                double rhs = std::exp(-beta * static_cast<double>(c)) * rate(c, a, beta);
                ASSERT_NEAR(lhs, rhs, 1e-12) << beta << " " << a << " " << c;
            }
        }
    }
}

TEST(Dynamics, rng_streams) {
    EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
    EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
    EXPECT_EQ(stream_seed(7, 3), stream_seed(7, 3));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(a.next(), b.next());
    }
    Rng r(9);
    double sum = 0;
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 100000; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += r.exponential(2.0);
        ++counts[r.below(5)];
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.01);
    for (int c : counts) EXPECT_NEAR(c, 20000, 600);
}

TEST(Dynamics, stationary_distribution_binary_ring) {
    auto inst = classical_from_tanner(ring_tanner(4), Field::binary());
    for (double beta : {0.5, 1.0, 2.0}) {
        EXPECT_LT(stationarity_tv(inst.hx, beta, 100000, 17), 0.02) << "beta=" << beta;
    }
}

TEST(Dynamics, stationary_distribution_ternary_ring) {
    auto inst = classical_from_tanner(ring_tanner(3), Field(3, 1));
    EXPECT_LT(stationarity_tv(inst.hx, 1.0, 100000, 23), 0.02);
}

TEST(Dynamics, incremental_syndrome_stays_consistent) {
    auto inst = instantiate(make_toric(), 3, Boundary::torus);
    GlauberChain chain(inst.hx, 0.7, 3);
    for (int i = 0; i < 20000; ++i) {
        chain.step();
        if (i % 997 == 0) {
            ASSERT_TRUE(chain.verify());
            ASSERT_EQ(chain.energy(), inst.hx.syndrome_weight(chain.word()));
        }
    }
    EXPECT_EQ(chain.events(), 20000u);
    EXPECT_GT(chain.time(), 0.0);
    Field f5(5, 1);
    auto ring = classical_from_tanner(ring_tanner(6), f5);
    GlauberChain c5(ring.hx, 0.3, 4);
    c5.run_until(500.0);
    EXPECT_TRUE(c5.verify());
    EXPECT_EQ(c5.time(), 500.0);
}

TEST(Dynamics, chain_is_reproducible) {
    auto inst = instantiate(make_ising(2), 4, Boundary::torus);
    GlauberChain a(inst.hx, 1.0, 99), b(inst.hx, 1.0, 99), c(inst.hx, 1.0, 100);
    a.run_until(50.0);
    b.run_until(50.0);
    c.run_until(50.0);
    EXPECT_EQ(a.word(), b.word());
    EXPECT_EQ(a.events(), b.events());
    EXPECT_NE(a.events(), c.events());
}

TEST(Decoder, examples_on_ising_ring) {
    for (auto q : {2u, 3u}) {
        Field f(q, 1);
        auto inst = classical_from_tanner(ring_tanner(5), f);
        const auto &h = inst.hx;
        for (auto kind : {DecoderKind::brute_force, DecoderKind::lookup, DecoderKind::greedy}) {
            Decoder dec(h, DecoderSpec{kind});
            EXPECT_EQ(dec.decode(Word(5)), Word(5));
            // Single error at bit 2 violates checks 1 and 2.
            auto e1 = unit(5, {{2, 1}});
            EXPECT_EQ(dec.decode(h.apply(e1)), e1) << to_string(kind);
            // Two separated errors violate checks 4, 0, 1 and 2.
            auto e2 = unit(5, {{0, q - 1}, {2, 1}});
            EXPECT_EQ(dec.decode(h.apply(e2)), e2) << to_string(kind);
            // Two adjacent errors violate checks 0 and 2 only; no single change lowers the
            // residual, so the greedy decoder gives up.
            auto e3 = unit(5, {{1, 1}, {2, q - 1}});
            if (kind == DecoderKind::greedy) {
                EXPECT_FALSE(dec.decode(h.apply(e3)).has_value());
            } else {
                EXPECT_EQ(dec.decode(h.apply(e3)), e3) << to_string(kind);
            }
        }
    }
    Field f2 = Field::binary();
    auto inst = classical_from_tanner(ring_tanner(5), f2);
    // Not in the image of H: odd-weight syndrome on a binary ring.
    EXPECT_FALSE(Decoder(inst.hx, {DecoderKind::brute_force}).decode(unit(5, {{0, 1}})));
    EXPECT_FALSE(Decoder(inst.hx, {DecoderKind::lookup}).decode(unit(5, {{0, 1}})));
    EXPECT_FALSE(Decoder(inst.hx, {DecoderKind::greedy}).decode(unit(5, {{0, 1}})));
}

TEST(Decoder, brute_force_is_minimum_weight) {
    std::mt19937_64 rng(31);
    auto inst = instantiate(make_toric(), 3, Boundary::torus);
    const auto &h = inst.hx;
    Decoder bf(h, DecoderSpec{DecoderKind::brute_force});
    Decoder lu(h, DecoderSpec{DecoderKind::lookup, 2});
    for (int trial = 0; trial < 40; ++trial) {
        Word e(inst.n);
        std::size_t w = 1 + rng() % 3;
        for (std::size_t k = 0; k < w; ++k) e[rng() % inst.n] = Fq{1};
        auto s = h.apply(e);
        auto d = bf.decode(s);
        ASSERT_TRUE(d.has_value());
        ASSERT_EQ(h.apply(*d), s);
        ASSERT_LE(weight(*d), weight(e));
        auto l = lu.decode(s);
        if (weight(*d) <= 2) {
            ASSERT_TRUE(l.has_value());
            ASSERT_EQ(weight(*l), weight(*d));
            ASSERT_EQ(h.apply(*l), s);
        }
    }
}

TEST(Decoder, translation_equivariance) {
    auto inst = instantiate(make_ising(2), 3, Boundary::torus);
    const auto &h = inst.hx;
    for (auto kind : {DecoderKind::brute_force, DecoderKind::lookup, DecoderKind::greedy}) {
        Decoder dec(h, DecoderSpec{kind});
        for (std::uint32_t b = 0; b < inst.n; ++b) {
            Word e(inst.n);
            e[b] = Fq{1};
            auto d = dec.decode(h.apply(e));
            ASSERT_TRUE(d.has_value());
            for (std::int64_t dx = 0; dx < 3; ++dx) {
                for (std::int64_t dy = 0; dy < 3; ++dy) {
                    auto moved = translate_hx_checks(inst, h.apply(e), {dx, dy});
                    auto dm = dec.decode(moved);
                    ASSERT_TRUE(dm.has_value());
                    ASSERT_EQ(*dm, translate_bits(inst, *d, {dx, dy}));
                }
            }
        }
    }
}

TEST(Decoder, budget_and_names) {
    // Toric L = 6: ker hx has dimension 72 - 35 = 37.
    auto inst = instantiate(make_toric(), 6, Boundary::torus);
    EXPECT_THROW(Decoder(inst.hx, DecoderSpec{DecoderKind::brute_force, 3, 1000, 1u << 20}),
                 BudgetExceeded);
    EXPECT_THROW(Decoder(inst.hx, DecoderSpec{DecoderKind::lookup, 4, 1000, 1000}),
                 BudgetExceeded);
    EXPECT_EQ(decoder_kind_from_string("greedy"), DecoderKind::greedy);
    EXPECT_THROW(decoder_kind_from_string("mwpm"), ValidationError);
}

TEST(MemoryTime, wilson_interval) {
    auto ci = wilson_interval(50, 100);
    EXPECT_NEAR(ci.lo, 0.4038, 1e-4);
    EXPECT_NEAR(ci.hi, 0.5962, 1e-4);
    auto all = wilson_interval(100, 100);
    EXPECT_NEAR(all.hi, 1.0, 1e-12);
    EXPECT_NEAR(all.lo, 0.9630, 1e-4);
    auto none = wilson_interval(0, 10);
    EXPECT_NEAR(none.lo, 0.0, 1e-12);
}

TEST(MemoryTime, summarize_estimators) {
    MemoryTimeEstimate est;
    est.times = {1, 2, 4, 8};
    est.successes = {100, 75, 66, 20};
    est.trajectories = 100;
    summarize(est);
    EXPECT_EQ(est.t_mem, 2.0);
    EXPECT_EQ(est.t_mem_conservative, 1.0);
    EXPECT_EQ(est.t_mem_ci.lo, 1.0);
    EXPECT_EQ(est.t_mem_ci.hi, 4.0);
    EXPECT_FALSE(est.censored);
    est.successes = {100, 100, 100, 100};
    summarize(est);
    EXPECT_TRUE(est.censored);
    EXPECT_EQ(est.t_mem, 8.0);
}

TEST(MemoryTime, deterministic_across_worker_counts) {
    auto inst = instantiate(make_toric(), 3, Boundary::torus);
    GlauberParams params;
    params.beta = 0.8;
    params.checkpoints = geometric_checkpoints(0.25, 2.0, 6);
    params.seed = 12345;
    params.trajectories = 24;
    params.workers = 1;
    auto a = estimate_memory_time(inst, params, DecoderSpec{DecoderKind::brute_force}, Sector::x);
    params.workers = 3;
    auto b = estimate_memory_time(inst, params, DecoderSpec{DecoderKind::brute_force}, Sector::x);
    EXPECT_EQ(a.successes, b.successes);
    EXPECT_EQ(a.events, b.events);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        ASSERT_EQ(a.records[i].energy, b.records[i].energy);
        ASSERT_EQ(a.records[i].success, b.records[i].success);
    }
    // Early checkpoints: almost no flips have happened yet.
    EXPECT_GE(a.p_hat[0], 0.9);
    EXPECT_EQ(a.sector, Sector::x);
    EXPECT_EQ(a.decoder, "brute_force");
}

TEST(MemoryTime, classical_memory_decays_at_high_temperature) {
    auto inst = classical_from_tanner(ring_tanner(5), Field::binary());
    GlauberParams params;
    params.beta = 0.1;
    params.checkpoints = geometric_checkpoints(0.01, 4.0, 6);
    params.trajectories = 200;
    params.seed = 2;
    auto est = estimate_memory_time(inst, params, DecoderSpec{DecoderKind::lookup, 2},
                                    Sector::classical);
    EXPECT_GE(est.p_hat.front(), 0.9);
    // Near-uniform state at t ~ 10: success probability drops to about one half.
    EXPECT_LT(est.p_hat.back(), 0.7);
    EXPECT_FALSE(est.censored);
}

TEST(MemoryTime, rejects_invalid_parameters) {
    auto inst = classical_from_tanner(ring_tanner(5), Field::binary());
    GlauberParams params;
    params.trajectories = 0;
    EXPECT_THROW(estimate_memory_time(inst, params, {}, Sector::classical), ValidationError);
    params.trajectories = 4;
    params.checkpoints = {2.0, 1.0};
    EXPECT_THROW(estimate_memory_time(inst, params, {}, Sector::classical), ValidationError);
    params.checkpoints = {1.0};
    params.beta = -1;
    EXPECT_THROW(estimate_memory_time(inst, params, {}, Sector::classical), ValidationError);
}
