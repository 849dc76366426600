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

#include "selfcorr/field.h"

#include <gtest/gtest.h>

#include <random>

using namespace selfcorr;

namespace {

// Schoolbook multiplication in F_p[t]/modulus, independent of the log tables.
std::uint32_t naive_mul(const Field &f, std::uint32_t a, std::uint32_t b) {
    const std::uint32_t p = f.p();
    const std::uint32_t e = f.e();
    std::vector<std::uint32_t> da(e), db(e), prod(2 * e, 0);
    for (std::uint32_t i = 0; i < e; ++i) {
        da[i] = a % p;
        a /= p;
        db[i] = b % p;
        b /= p;
    }
    for (std::uint32_t i = 0; i < e; ++i) {
        for (std::uint32_t j = 0; j < e; ++j) {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    const auto &m = f.modulus();
    for (std::size_t i = prod.size(); i-- > e;) {
        std::uint32_t c = prod[i];
        if (c == 0) {
            continue;
        }
        for (std::uint32_t j = 0; j <= e; ++j) {
            prod[i - e + j] = (prod[i - e + j] + (p - c) * m[j]) % p;
        }
    }
    std::uint32_t rep = 0;
    for (std::uint32_t i = e; i-- > 0;) {
        rep = rep * p + prod[i];
    }
    return rep;
}

const std::vector<std::pair<std::uint32_t, std::uint32_t>> kSupported = {
    {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3},
    {7, 2}, {2, 8}, {31, 1}, {2, 10}, {3, 6}, {251, 1}, {2, 16}, {3, 10}};

}  // namespace

TEST(Field, prime_field_basics) {
    Field f2(2, 1);
    EXPECT_EQ(f2.q(), 2u);
    EXPECT_EQ(f2.mul(Fq{1}, Fq{1}), Fq{1});
    Field f3(3, 1);
    EXPECT_EQ(f3.q(), 3u);
    EXPECT_EQ(f3.inv(Fq{2}), Fq{2});
    EXPECT_EQ(f3.neg(Fq{1}), Fq{2});
}

TEST(Field, modulus_is_smallest_irreducible) {
    Field f4(2, 2);
    EXPECT_EQ(f4.q(), 4u);
    EXPECT_EQ(f4.modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
    // t * t = t + 1 in F_4: t has encoding 2, t + 1 has encoding 3.
    EXPECT_EQ(f4.mul(Fq{2}, Fq{2}), Fq{3});

    Field f8(2, 3);
    EXPECT_EQ(f8.modulus(), (std::vector<std::uint32_t>{1, 1, 0, 1}));
    Field f9(3, 2);
    // t^2 + 1 is the smallest monic irreducible quadratic over F_3 (t^2, t^2+t, t^2+2, ... reducible).
    EXPECT_EQ(f9.modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(Field, irreducibility_test) {
    EXPECT_TRUE(is_irreducible_mod_p({1, 1, 1}, 2));
    EXPECT_FALSE(is_irreducible_mod_p({1, 0, 1}, 2));  // (t+1)^2
    EXPECT_TRUE(is_irreducible_mod_p({1, 1, 0, 0, 1}, 2));
    EXPECT_FALSE(is_irreducible_mod_p({1, 0, 1, 0, 1}, 2));  // (t^2+t+1)^2
}

TEST(Field, rejects_bad_parameters) {
    EXPECT_THROW(Field(4, 1), ValidationError);
    EXPECT_THROW(Field(2, 0), ValidationError);
    EXPECT_THROW(Field(2, 17), ValidationError);
    EXPECT_THROW(Field(257, 2), ValidationError);
    EXPECT_THROW(Field(3, 1).inv(Fq{0}), std::domain_error);
}

TEST(Field, axioms_hold_on_random_samples) {
    std::mt19937_64 rng(7);
    for (auto [p, e] : kSupported) {
        Field f(p, e);
        auto draw = [&] { return Fq{static_cast<std::uint32_t>(rng() % f.q())}; };
        for (int trial = 0; trial < 300; ++trial) {
            Fq a = draw(), b = draw(), c = draw();
            ASSERT_EQ(f.add(a, b), f.add(b, a));
            ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            ASSERT_EQ(f.mul(a, b), f.mul(b, a));
            ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            ASSERT_EQ(f.add(a, f.neg(a)), f.zero());
            ASSERT_EQ(f.mul(a, b).rep, naive_mul(f, a.rep, b.rep)) << f.describe();
            if (!a.is_zero()) {
                ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
            }
            ASSERT_EQ(f.mul(a, f.one()), a);
        }
    }
}

TEST(Field, frobenius_is_additive) {
    std::mt19937_64 rng(11);
    for (auto [p, e] : kSupported) {
        Field f(p, e);
        for (int trial = 0; trial < 50; ++trial) {
            Fq a{static_cast<std::uint32_t>(rng() % f.q())};
            Fq b{static_cast<std::uint32_t>(rng() % f.q())};
            for (std::uint32_t j = 0; j <= 4; ++j) {
                ASSERT_EQ(f.frobenius(f.add(a, b), j), f.add(f.frobenius(a, j), f.frobenius(b, j)));
            }
            ASSERT_EQ(f.frobenius(a, e), a);
        }
    }
}

TEST(Field, pow_matches_repeated_multiplication) {
    Field f(5, 2);
    for (std::uint32_t a = 0; a < f.q(); ++a) {
        Fq acc = f.one();
        for (std::uint64_t k = 0; k < 60; ++k) {
            ASSERT_EQ(f.pow(Fq{a}, k), acc);
            acc = f.mul(acc, Fq{a});
        }
    }
}
