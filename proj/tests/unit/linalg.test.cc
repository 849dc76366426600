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

#include "selfcorr/linalg.h"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

using namespace selfcorr;

namespace {

// Plain dense Gaussian elimination; reference rank.
std::size_t dense_rank(const Field &f, std::vector<Word> a) {
    std::size_t rows = a.size();
    if (rows == 0) {
        return 0;
    }
    std::size_t cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c].is_zero()) {
            ++piv;
        }
        if (piv == rows) {
            continue;
        }
        std::swap(a[piv], a[r]);
        Fq inv = f.inv(a[r][c]);
        for (auto &x : a[r]) {
            x = f.mul(x, inv);
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i != r && !a[i][c].is_zero()) {
                Fq factor = a[i][c];
                for (std::size_t j = 0; j < cols; ++j) {
                    a[i][j] = f.sub(a[i][j], f.mul(factor, a[r][j]));
                }
            }
        }
        ++r;
    }
    return r;
}

SparseFqMatrix random_matrix(const Field &f, std::size_t rows, std::size_t cols, double density,
                             std::mt19937_64 &rng) {
    std::vector<Triplet> t;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (u(rng) < density) {
                t.push_back({r, c, Fq{static_cast<std::uint32_t>(1 + rng() % (f.q() - 1))}});
            }
        }
    }
    return SparseFqMatrix::from_triplets(f, rows, cols, t);
}

}  // namespace

TEST(SparseFqMatrix, basic_operations) {
    Field f3(3, 1);
    std::vector<Triplet> t = {{0, 0, Fq{1}}, {0, 2, Fq{2}}, {1, 1, Fq{1}}, {1, 1, Fq{2}}};
    auto m = SparseFqMatrix::from_triplets(f3, 2, 3, t);
    EXPECT_EQ(m.nnz(), 2u);  // 1 + 2 = 0 mod 3 at (1, 1)
    EXPECT_EQ(m.at(0, 2), Fq{2});
    EXPECT_THROW(SparseFqMatrix::from_triplets(f3, 2, 3, t, DuplicatePolicy::reject_conflict),
                 ValidationError);
    Word x = {Fq{1}, Fq{1}, Fq{1}};
    EXPECT_EQ(m.apply(x), (Word{Fq{0}, Fq{0}}));
    EXPECT_EQ(m.syndrome_weight(x), 0u);
    EXPECT_EQ(m.transpose().transpose(), m);
    auto text = m.to_text();
    EXPECT_EQ(SparseFqMatrix::parse_text(text), m);
    EXPECT_THROW(SparseFqMatrix::parse_text("2 2 2 1\n0 5 1\n"), ValidationError);
}

TEST(SparseFqMatrix, kron_and_stack) {
    Field f2 = Field::binary();
    std::mt19937_64 rng(1);
    auto a = random_matrix(f2, 2, 3, 0.6, rng);
    auto b = random_matrix(f2, 3, 2, 0.6, rng);
    auto k = kron(a, b);
    ASSERT_EQ(k.rows(), 6u);
    ASSERT_EQ(k.cols(), 6u);
    for (std::size_t ra = 0; ra < 2; ++ra)
        for (std::size_t ca = 0; ca < 3; ++ca)
            for (std::size_t rb = 0; rb < 3; ++rb)
                for (std::size_t cb = 0; cb < 2; ++cb)
                    ASSERT_EQ(k.at(ra * 3 + rb, ca * 2 + cb), f2.mul(a.at(ra, ca), b.at(rb, cb)));
    auto v = vstack(a, a);
    EXPECT_EQ(v.rows(), 4u);
    EXPECT_EQ(rank(v), rank(a));
    auto h = hstack(a, a);
    EXPECT_EQ(h.cols(), 6u);
    EXPECT_EQ(rank(h), rank(a));
}

TEST(Linalg, rank_matches_dense_oracle) {
    std::mt19937_64 rng(17);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}}) {
        Field f(p, e);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t rows = 1 + rng() % 25, cols = 1 + rng() % 25;
            double density = 0.05 + 0.4 * (rng() % 100) / 100.0;
            auto m = random_matrix(f, rows, cols, density, rng);
            std::size_t expected = dense_rank(f, m.to_dense());
            ASSERT_EQ(rank(m), expected);
            ASSERT_EQ(rank(m.transpose()), expected);
            std::vector<std::uint32_t> order(cols);
            for (std::uint32_t c = 0; c < cols; ++c) order[c] = c;
            std::shuffle(order.begin(), order.end(), rng);
            RowEchelon ordered(m, PivotRule::column_order, order);
            ASSERT_EQ(ordered.rank(), expected);
        }
    }
}

TEST(Linalg, kernel_basis_is_a_basis) {
    std::mt19937_64 rng(19);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {7, 1}}) {
        Field f(p, e);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t rows = 1 + rng() % 20, cols = 1 + rng() % 20;
            auto m = random_matrix(f, rows, cols, 0.25, rng);
            auto basis = kernel_basis(m);
            ASSERT_EQ(basis.size(), cols - rank(m));
            std::vector<Word> dense;
            for (const auto &b : basis) {
                auto d = b.to_dense();
                ASSERT_EQ(m.syndrome_weight(d), 0u);
                dense.push_back(d);
            }
            ASSERT_EQ(dense_rank(f, dense), basis.size());
        }
    }
}

TEST(Linalg, reduce_and_solve) {
    std::mt19937_64 rng(23);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        Field f(p, e);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t rows = 1 + rng() % 15, cols = 1 + rng() % 15;
            auto m = random_matrix(f, rows, cols, 0.3, rng);
            RowEchelon ech(m);
            // Random combination of rows lies in the row space.
            Word combo(cols, f.zero());
            for (std::size_t r = 0; r < rows; ++r) {
                Fq c{static_cast<std::uint32_t>(rng() % f.q())};
                for (const auto &en : m.row(r)) {
                    combo[en.index] = f.add(combo[en.index], f.mul(c, en.value));
                }
            }
            ASSERT_TRUE(ech.in_row_space(combo));
            // Solve M x = M y for random y.
            Word y(cols);
            for (auto &v : y) v = Fq{static_cast<std::uint32_t>(rng() % f.q())};
            auto s = m.apply(y);
            auto x = solve(m, s);
            ASSERT_TRUE(x.has_value());
            ASSERT_EQ(m.apply(*x), s);
            // Membership agrees with rank test.
            Word v(cols);
            for (auto &c : v) c = Fq{static_cast<std::uint32_t>(rng() % f.q())};
            auto stacked = m.to_dense();
            stacked.push_back(v);
            bool expect_in = dense_rank(f, stacked) == ech.rank();
            ASSERT_EQ(ech.in_row_space(v), expect_in);
            // Unsolvable system detected.
            auto mt = m.transpose();
            Word t(rows);
            for (auto &c : t) c = Fq{static_cast<std::uint32_t>(rng() % f.q())};
            auto sol = solve(m, t);
            std::vector<Word> aug = mt.to_dense();
            aug.push_back(t);
            bool solvable = dense_rank(f, aug) == rank(m);
            ASSERT_EQ(sol.has_value(), solvable);
            if (sol) {
                ASSERT_EQ(m.apply(*sol), t);
            }
        }
    }
}

TEST(Linalg, linear_solver_matches_one_shot_solve) {
    std::mt19937_64 rng(41);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        Field f(p, e);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t rows = 1 + rng() % 12;
            std::size_t cols = 1 + rng() % 12;
            auto m = random_matrix(f, rows, cols, 0.3, rng);
            LinearSolver solver(m);
            ASSERT_EQ(solver.rank(), rank(m));
            for (int k = 0; k < 10; ++k) {
                Word y(cols);
                for (auto &v : y) v = Fq{static_cast<std::uint32_t>(rng() % f.q())};
                auto s = m.apply(y);
                auto x = solver.solve(s);
                ASSERT_TRUE(x.has_value());
                ASSERT_EQ(m.apply(*x), s);

                Word t(rows);
                for (auto &c : t) c = Fq{static_cast<std::uint32_t>(rng() % f.q())};
                auto sol = solver.solve(t);
                ASSERT_EQ(sol.has_value(), solve(m, t).has_value());
                if (sol) {
                    ASSERT_EQ(m.apply(*sol), t);
                }
            }
        }
    }
    EXPECT_THROW(LinearSolver(SparseFqMatrix(Field::binary(), 2, 2)).solve(Word(3)),
                 ValidationError);
}

TEST(Linalg, ising_and_toric_ranks) {
    Field f2 = Field::binary();
    auto ring = [&](std::size_t n) {
        std::vector<Triplet> t;
        for (std::uint32_t i = 0; i < n; ++i) {
            t.push_back({i, i, f2.one()});
            t.push_back({i, static_cast<std::uint32_t>((i + 1) % n), f2.one()});
        }
        return SparseFqMatrix::from_triplets(f2, n, n, t);
    };
    EXPECT_EQ(rank(ring(5)), 4u);
    EXPECT_EQ(kernel_basis(ring(5)).size(), 1u);
}

TEST(SpanEnumerator, visits_each_element_once) {
    std::mt19937_64 rng(29);
    for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
        Field f(p, e);
        std::size_t n = 8;
        auto m = random_matrix(f, 4, n, 0.4, rng);
        auto basis = kernel_basis(m);
        SpanEnumerator it(f, n, basis);
        std::set<std::vector<std::uint16_t>> seen;
        std::uint64_t count = 0;
        do {
            const auto &w = it.current();
            ASSERT_EQ(it.current_weight(), weight(w));
            ASSERT_EQ(m.syndrome_weight(w), 0u);
            std::vector<std::uint16_t> key;
            for (auto x : w) key.push_back(x.rep);
            ASSERT_TRUE(seen.insert(key).second);
            ++count;
        } while (it.next());
        ASSERT_EQ(count, *it.size());
        std::uint64_t expected = 1;
        for (std::size_t i = 0; i < basis.size(); ++i) expected *= f.q();
        ASSERT_EQ(count, expected);
    }
}
