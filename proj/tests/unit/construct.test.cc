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

#include "selfcorr/construct.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "selfcorr/codes.h"
#include "selfcorr/params.h"

using namespace selfcorr;

namespace {

SparseFqMatrix random_matrix(const Field &f, std::size_t rows, std::size_t cols,
                             std::mt19937_64 &rng) {
    std::vector<Triplet> t;
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (rng() % 3 == 0) {
                t.push_back({r, c, Fq{static_cast<std::uint32_t>(1 + rng() % (f.q() - 1))}});
            }
        }
    }
    return SparseFqMatrix::from_triplets(f, rows, cols, t);
}

SparseFqMatrix cycle(std::size_t L, const Field &f = Field::binary()) {
    return classical_from_tanner(ring_tanner(L), f).hx;
}

}  // namespace

TEST(Carpet, counts_and_dimension) {
    for (std::uint32_t A = 3; A <= 8; ++A) {
        for (std::uint32_t i = 0; i <= 4; ++i) {
            auto r = carpet(A, i);
            ASSERT_EQ(r.count(), carpet_count(A, i)) << A << " " << i;
            ASSERT_EQ(std::set<Point>(r.squares.begin(), r.squares.end()).size(), r.count());
        }
    }
    EXPECT_EQ(carpet(3, 1).count(), 8u);
    EXPECT_EQ(carpet(3, 2).count(), 64u);
    EXPECT_EQ(carpet(4, 1).count(), 12u);
    EXPECT_NEAR(carpet(3, 1).dimension(), 1.893, 5e-4);
    EXPECT_NEAR(carpet(4, 1).dimension(), 1.792, 5e-4);
    EXPECT_THROW(carpet(2, 1), ValidationError);
}

TEST(Carpet, nesting_and_membership) {
    for (std::uint32_t A : {3u, 4u, 5u}) {
        for (std::uint32_t i = 1; i <= 3; ++i) {
            auto fine = carpet(A, i);
            auto coarse = carpet(A, i - 1);
            for (const auto &s : fine.squares) {
                ASSERT_TRUE(coarse.contains(s[0] / A, s[1] / A));
            }
            std::size_t inside = 0;
            for (std::int64_t x = 0; x < fine.side; ++x) {
                for (std::int64_t y = 0; y < fine.side; ++y) inside += fine.contains(x, y);
            }
            ASSERT_EQ(inside, fine.count());
        }
    }
    auto r = carpet(3, 1);
    EXPECT_FALSE(r.contains(1, 1));
    EXPECT_TRUE(r.contains(0, 1));
}

TEST(Carpet, text_round_trip) {
    auto r = carpet(4, 2);
    std::stringstream ss;
    r.write_text(ss);
    auto back = PrefractalRegion::read_text(ss);
    EXPECT_EQ(back.squares, r.squares);
    std::stringstream bad("carpet 3 1 1\n1 1\n");
    EXPECT_THROW(PrefractalRegion::read_text(bad), ValidationError);
}

TEST(RandomLocalCode, example_and_invariants) {
    auto region = carpet(3, 2);
    RandomCodeOptions opts;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        opts.seed = seed;
        auto code = random_local_code(region, Field::binary(), opts);
        ASSERT_EQ(code.code.n, 64u);
        ASSERT_EQ(code.code.hx.rows(), 64u);
        auto rep = locality_check(code);
        ASSERT_TRUE(rep.pass);
        ASSERT_LE(rep.max_distance, opts.radius);
        ASSERT_EQ(code.code.hx.max_row_weight(), opts.check_weight);
        ASSERT_LE(code.code.hx.max_col_weight(), opts.max_bit_degree);
        std::set<std::vector<std::uint32_t>> supports;
        for (std::size_t r = 0; r < code.code.hx.rows(); ++r) {
            std::vector<std::uint32_t> support;
            for (const auto &e : code.code.hx.row(r)) support.push_back(e.index);
            ASSERT_TRUE(supports.insert(support).second) << "repeated check " << r;
        }
        for (std::size_t b = 0; b < code.code.n; ++b) {
            ASSERT_FALSE(code.code.hx.col(b).empty());
        }
    }
}

TEST(RandomLocalCode, other_fields_and_densities) {
    RandomCodeOptions opts;
    opts.bits_per_square = 2;
    opts.checks_per_square = 1;
    opts.check_weight = 4;
    opts.max_bit_degree = 4;
    opts.seed = 7;
    auto code = random_local_code(carpet(4, 2), Field(3, 1), opts);
    EXPECT_EQ(code.code.n, 288u);
    EXPECT_TRUE(locality_check(code).pass);
}

TEST(RandomLocalCode, deterministic_and_rejects_degenerate_specs) {
    auto region = carpet(3, 2);
    RandomCodeOptions opts;
    opts.seed = 42;
    auto a = random_local_code(region, Field::binary(), opts);
    auto b = random_local_code(region, Field::binary(), opts);
    EXPECT_EQ(a.code.hx, b.code.hx);
    opts.seed = 43;
    EXPECT_FALSE(random_local_code(region, Field::binary(), opts).code.hx == a.code.hx);

    RandomCodeOptions zero = opts;
    zero.checks_per_square = 0;
    EXPECT_THROW(random_local_code(region, Field::binary(), zero), ValidationError);
    RandomCodeOptions tight = opts;
    tight.radius = 0.5;
    EXPECT_THROW(random_local_code(region, Field::binary(), tight), ValidationError);
    RandomCodeOptions capped = opts;
    capped.max_bit_degree = 1;
    capped.check_weight = 2;
    EXPECT_THROW(random_local_code(region, Field::binary(), capped), ValidationError);
}

TEST(Locality, long_edge_is_reported) {
    auto ring = classical_from_tanner(ring_tanner(5), Field::binary());
    auto line = embed_on_line(ring, 1.0);
    auto rep = locality_check(line);
    EXPECT_FALSE(rep.pass);
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].check, 4u);
    EXPECT_EQ(rep.violations[0].bit, 0u);
    EXPECT_DOUBLE_EQ(rep.max_distance, 4.0);
    auto path = embed_on_line(classical_from_tanner(path_tanner(5), Field::binary()), 1.0);
    EXPECT_TRUE(locality_check(path).pass);
}

TEST(HypergraphProduct, cycle_codes_give_the_toric_code) {
    for (std::size_t L : {2u, 3u, 4u}) {
        auto cx = hypergraph_product(cycle(L), cycle(L));
        ASSERT_TRUE(cx.is_complex());
        auto hgp = cx.to_instance("hgp");
        auto toric = instantiate(make_toric(), L, Boundary::torus);
        EXPECT_EQ(hgp.n, 2 * L * L);
        EXPECT_EQ(quantum_dimension(hgp), 2u);
        auto eq = css_equivalence(hgp, toric);
        ASSERT_TRUE(eq.has_value()) << L;
        EXPECT_TRUE(verify_equivalence(hgp, toric, *eq));
    }
}

TEST(HypergraphProduct, equivalence_rejects_different_codes) {
    auto toric = instantiate(make_toric(), 3, Boundary::torus);
    // Same sizes and degrees, but every X-check coincides with a Z-check.
    CodeInstance doubled(toric.field, toric.n, toric.hx, toric.hx);
    EXPECT_FALSE(css_equivalence(toric, doubled).has_value());
    EXPECT_FALSE(css_equivalence(toric, instantiate(make_toric(), 4, Boundary::torus)));
    auto self = css_equivalence(toric, toric, false);
    ASSERT_TRUE(self.has_value());
    EXPECT_TRUE(verify_equivalence(toric, toric, *self));
}

TEST(HypergraphProduct, random_products_are_complexes) {
    std::mt19937_64 rng(19);
    std::vector<Field> fields = {Field(2, 1), Field(3, 1), Field(5, 1), Field(2, 2), Field(7, 1)};
    for (int trial = 0; trial < 50; ++trial) {
        const Field &f = fields[trial % fields.size()];
        auto h1 = random_matrix(f, 1 + rng() % 5, 1 + rng() % 5, rng);
        auto h2 = random_matrix(f, 1 + rng() % 5, 1 + rng() % 5, rng);
        auto cx = hypergraph_product(h1, h2);
        ASSERT_TRUE(cx.is_complex()) << f.describe();
        ASSERT_EQ(cx.dim0(), h1.cols() * h2.cols());
        ASSERT_EQ(cx.dim1(), h1.cols() * h2.rows() + h1.rows() * h2.cols());
        ASSERT_EQ(cx.dim2(), h1.rows() * h2.rows());
        ASSERT_TRUE(cx.boundary1().transpose() == cx.delta0);
        auto inst = cx.to_instance("random");
        ASSERT_TRUE(inst.hx.multiply_transpose(inst.hz).is_zero());
    }
    auto zero = SparseFqMatrix(Field::binary(), 1, 1);
    auto cx = hypergraph_product(zero, cycle(3));
    EXPECT_TRUE(cx.is_complex());
    EXPECT_THROW(hypergraph_product(cycle(3), cycle(3, Field(3, 1))), ValidationError);
}

TEST(HypergraphProduct, product_embedding_is_local) {
    RandomCodeOptions opts;
    opts.seed = 3;
    auto c1 = random_local_code(carpet(3, 1), Field::binary(), opts);
    opts.seed = 4;
    auto c2 = random_local_code(carpet(3, 1), Field::binary(), opts);
    auto prod = hypergraph_product_embedded(c1, c2);
    EXPECT_EQ(prod.bit_pos.size(), prod.code.n);
    EXPECT_EQ(prod.bit_pos[0].size(), 4u);
    auto rep = locality_check(prod);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.max_distance, opts.radius);
}

TEST(HypergraphProduct, holes_fixture) {
    auto cx = holes_fixture();
    EXPECT_TRUE(cx.is_complex());
    auto inst = cx.to_instance("holes");
    // One hole in the first factor and an open path in the second: a single logical qubit.
    EXPECT_EQ(quantum_dimension(inst), 1u);
    EXPECT_THROW(holes_fixture(3), ValidationError);
}
