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

#include "selfcorr/laurent.h"

#include <gtest/gtest.h>

#include <random>

#include "selfcorr/codes.h"

using namespace selfcorr;

namespace {

LaurentPoly P(const std::string &s, const Field &f, std::size_t dim = 2) {
    return LaurentPoly::parse(s, f, dim);
}

LaurentPoly random_sparse(const Field &f, std::size_t dim, std::mt19937_64 &rng, int terms,
                          int span) {
    std::vector<LaurentPoly::Term> t;
    for (int i = 0; i < terms; ++i) {
        std::vector<std::int64_t> e(dim);
        for (auto &x : e) {
            x = static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
        }
        t.emplace_back(Monomial(e), Fq{static_cast<std::uint32_t>(rng() % f.q())});
    }
    return LaurentPoly::from_terms(f, dim, t);
}

LaurentPoly naive_pow(const LaurentPoly &f, std::uint64_t k) {
    LaurentPoly r = LaurentPoly::constant(f.field(), f.dim(), f.field().one());
    for (std::uint64_t i = 0; i < k; ++i) {
        r = r * f;
    }
    return r;
}

}  // namespace

TEST(LaurentPoly, parse_and_print_canonical) {
    Field f2 = Field::binary();
    EXPECT_EQ(P("1+x", f2).to_string(), "1+x");
    EXPECT_EQ(P("x + 1", f2).to_string(), "1+x");
    EXPECT_EQ(P("1+x^-1", f2).to_string(), "x^-1+1");
    EXPECT_EQ(P("x*y + y*z + x*z + 1", f2, 3).to_string(), "1+y*z+x*z+x*y");
    EXPECT_EQ(P("x+x", f2).to_string(), "0");
    Field f4(2, 2);
    EXPECT_EQ(P("3*x^2*y + 2", f4).to_string(), "2+3*x^2*y");
    Field f5(5, 1);
    EXPECT_EQ(P("1 - x", f5).to_string(), "1+4*x");
    EXPECT_THROW(P("1+q", f2), ValidationError);
    EXPECT_THROW(P("2*x", f2), ValidationError);
    EXPECT_THROW(P("1+", f2), ValidationError);
    EXPECT_THROW(P("z", f2, 2), ValidationError);
}

TEST(LaurentPoly, serialization_round_trip) {
    std::mt19937_64 rng(3);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {7, 1}, {3, 2}}) {
        Field f(p, e);
        for (std::size_t dim = 1; dim <= 4; ++dim) {
            for (int trial = 0; trial < 20; ++trial) {
                auto poly = random_sparse(f, dim, rng, 6, 3);
                EXPECT_EQ(LaurentPoly::parse(poly.to_string(), f, dim), poly);
            }
        }
    }
}

TEST(LaurentPoly, products) {
    Field f2 = Field::binary();
    EXPECT_EQ(P("1+x", f2) * P("1+x", f2), P("1+x^2", f2));
    auto lhs = P("1+x+y", f2) * P("1+x^2+y^2", f2);
    EXPECT_EQ(lhs.weight(), 9u);
    EXPECT_EQ(lhs, naive_pow(P("1+x+y", f2), 3));
    auto g = P("x^-2+3*y", Field(5, 1));
    EXPECT_EQ(g * LaurentPoly::constant(g.field(), 2, g.field().one()), g);
    EXPECT_THROW(P("x", f2, 1) * P("x", f2, 2), ValidationError);
    EXPECT_THROW(P("x", f2) * P("x", Field(3, 1)), ValidationError);
}

TEST(LaurentPoly, conjugation) {
    Field f2 = Field::binary();
    EXPECT_EQ(P("1+x", f2).conj(), P("1+x^-1", f2));
    EXPECT_EQ(P("1+x^-1", f2).conj(), P("1+x", f2));
    std::mt19937_64 rng(5);
    for (auto q : {2, 3, 5, 7}) {
        Field f(q, 1);
        for (int trial = 0; trial < 50; ++trial) {
            auto a = random_sparse(f, 3, rng, 5, 2);
            auto b = random_sparse(f, 3, rng, 5, 2);
            ASSERT_EQ(a.conj().conj(), a);
            ASSERT_EQ((a * b).conj(), a.conj() * b.conj());
            ASSERT_EQ((a + b).conj(), a.conj() + b.conj());
        }
    }
}

TEST(LaurentPoly, frobenius_powers) {
    Field f2 = Field::binary();
    EXPECT_EQ(P("x+y", f2).pow(2), P("x^2+y^2", f2));
    EXPECT_EQ(P("1+x+y", f2).pow(4), P("1+x^4+y^4", f2));
    EXPECT_EQ(P("1+x+y", f2).pow(0), P("1", f2));

    std::mt19937_64 rng(9);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}}) {
        Field f(p, e);
        for (int trial = 0; trial < 10; ++trial) {
            auto poly = random_sparse(f, 2, rng, 4, 2);
            std::uint64_t pj = 1;
            for (std::uint32_t j = 0; j <= 4 && pj <= 81; ++j, pj *= p) {
                // Term-wise map alpha x^v -> alpha^(p^j) x^(p^j v).
                std::vector<LaurentPoly::Term> mapped;
                for (const auto &[m, c] : poly.terms()) {
                    mapped.emplace_back(m.scaled(static_cast<std::int64_t>(pj)), f.pow(c, pj));
                }
                auto expected = LaurentPoly::from_terms(f, 2, mapped);
                auto fast = poly.pow(pj);
                ASSERT_EQ(fast, expected);
                ASSERT_LE(fast.weight(), poly.weight());
                if (pj <= 27) {
                    ASSERT_EQ(fast, naive_pow(poly, pj));
                }
            }
            for (std::uint64_t k = 0; k < 12; ++k) {
                ASSERT_EQ(poly.pow(k), naive_pow(poly, k));
            }
        }
    }
}

TEST(PolyMatrix, products_and_conjugate_transpose) {
    Field f2 = Field::binary();
    auto toric = make_toric();
    auto ct = toric.h_x->conj_transpose();
    ASSERT_EQ(ct.rows(), 1u);
    ASSERT_EQ(ct.cols(), 2u);
    EXPECT_EQ(ct.at(0, 0), P("1+x", f2));
    EXPECT_EQ(ct.at(0, 1), P("1+y", f2));

    auto id = PolyMatrix::identity(f2, 2, 2);
    EXPECT_EQ(id * *toric.h_x, *toric.h_x);
    EXPECT_THROW(*toric.h_x * *toric.h_x, ValidationError);

    Field f7(7, 1);
    auto f = P("1+3*x+y^2", f7, 3);
    auto g = P("2+x*y*z", f7, 3);
    PolyMatrix row(f7, 3, 1, 2);
    row.set(0, 0, f);
    row.set(0, 1, g);
    PolyMatrix col(f7, 3, 2, 1);
    col.set(0, 0, g);
    col.set(1, 0, -f);
    EXPECT_TRUE((row * col).is_zero());

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        PolyMatrix a(f7, 2, 2, 3), b(f7, 2, 3, 2);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                a.set(i, j, random_sparse(f7, 2, rng, 3, 2));
                b.set(j, i, random_sparse(f7, 2, rng, 3, 2));
            }
        }
        ASSERT_EQ((a * b).conj_transpose(), b.conj_transpose() * a.conj_transpose());
    }
}
