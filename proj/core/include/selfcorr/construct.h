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

#ifndef SELFCORR_CONSTRUCT_H
#define SELFCORR_CONSTRUCT_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "selfcorr/instance.h"

namespace selfcorr {

/// Integer point; squares of a prefractal use 2 coordinates, product embeddings use 4.
using Point = std::vector<std::int64_t>;

/// Level-i Sierpinski carpet prefractal, rescaled so every retained square has unit size.
struct PrefractalRegion {
    std::uint32_t A = 3;
    std::uint32_t level = 0;
    /// Side of the bounding box, A^level.
    std::int64_t side = 1;
    /// Lower-left corners of the retained squares, sorted lexicographically (x, then y).
    std::vector<Point> squares;

    std::size_t count() const { return squares.size(); }
    /// log(4A - 4) / log A.
    double dimension() const;
    bool contains(std::int64_t x, std::int64_t y) const;

    void write_text(std::ostream &out) const;
    static PrefractalRegion read_text(std::istream &in);
};

/// Throws ValidationError for A < 3 or a region with more than 2^26 squares.
PrefractalRegion carpet(std::uint32_t A, std::uint32_t level);
/// (4A - 4)^level.
std::uint64_t carpet_count(std::uint32_t A, std::uint32_t level);

/// Code with each bit and check placed at a point.
struct EmbeddedCode {
    CodeInstance code;
    std::vector<Point> bit_pos;
    /// One point per row of code.hx (classical checks, or quantum Z-check rows).
    std::vector<Point> hx_pos;
    /// One point per row of code.hz (empty for classical codes).
    std::vector<Point> hz_pos;
    double radius = 0;
    std::size_t population_cap = 0;
};

struct RandomCodeOptions {
    std::size_t bits_per_square = 1;
    std::size_t checks_per_square = 1;
    double radius = 2.0;
    /// Bits per check.
    std::size_t check_weight = 3;
    /// Checks per bit; every bit lies in at least one check.
    std::size_t max_bit_degree = 6;
    std::size_t max_retries = 10000;
    std::uint64_t seed = 1;
};

/// Random classical LDPC code on a prefractal with checks touching only bits within `radius`.
/// Local defects (bits in no check, repeated checks, degree overflow) are removed by
/// resampling nearby checks; throws ValidationError when the retry cap is exhausted or the
/// parameters cannot be satisfied.
EmbeddedCode random_local_code(const PrefractalRegion &region, const Field &field,
                               const RandomCodeOptions &opts);

struct LocalityViolation {
    /// 'x' for an hx row, 'z' for an hz row.
    char sector;
    std::uint32_t check;
    std::uint32_t bit;
    double distance;
};

struct LocalityReport {
    double max_distance = 0;
    /// Largest number of bits and checks in a closed ball of radius 1 around any bit or check.
    std::size_t max_population = 0;
    bool pass = false;
    std::vector<LocalityViolation> violations;
};

/// Checks every (check, bit) interaction against code.radius and the ball population against
/// code.population_cap (0 means unbounded).
LocalityReport locality_check(const EmbeddedCode &code);

/// Three-term complex X0 -> X1 -> X2 over F_q with delta1 * delta0 = 0.
struct ChainComplex3 {
    SparseFqMatrix delta0;
    SparseFqMatrix delta1;

    std::size_t dim0() const { return delta0.cols(); }
    std::size_t dim1() const { return delta0.rows(); }
    std::size_t dim2() const { return delta1.rows(); }
    bool is_complex() const;
    /// Boundary maps, the transposes.
    SparseFqMatrix boundary1() const { return delta0.transpose(); }
    SparseFqMatrix boundary2() const { return delta1.transpose(); }
    /// Quantum code on X1: hx = delta1, hz = delta0^T.
    CodeInstance to_instance(std::string provenance) const;
};

/// Tensor product of the complexes F^{n1} -H1-> F^{m1} and F^{n2} -H2-> F^{m2}:
/// delta0 = (I (x) H2 ; H1 (x) I), delta1 = (H1 (x) I | -I (x) H2).
/// X1 is ordered as the n1*m2 block followed by the m1*n2 block.
ChainComplex3 hypergraph_product(const SparseFqMatrix &h1, const SparseFqMatrix &h2);

/// Product embedding: X1 element (a, b) sits at the concatenation of the positions of a and b
/// (a bit or check of the first code, likewise for the second). Distances use the Euclidean
/// metric on the concatenated coordinates.
EmbeddedCode hypergraph_product_embedded(const EmbeddedCode &c1, const EmbeddedCode &c2);

/// Trivial embedding of a classical code on a line: bit i at (i), check j at (j).
EmbeddedCode embed_on_line(CodeInstance code, double radius);

/// Bit, hx-row and hz-row permutations mapping code a onto code b, found by
/// individualization-refinement on the coloured Tanner graph.
struct CssEquivalence {
    std::vector<std::uint32_t> bits;
    std::vector<std::uint32_t> hx_rows;
    std::vector<std::uint32_t> hz_rows;
    /// True when a's hx rows map to b's hz rows (and vice versa).
    bool swapped = false;
};

/// Nullopt when no permutation equivalence exists. With allow_swap the roles of hx and hz in
/// b may be exchanged.
std::optional<CssEquivalence> css_equivalence(const CodeInstance &a, const CodeInstance &b,
                                              bool allow_swap = true);
/// Applies the permutations of `eq` to a and compares with b exactly.
bool verify_equivalence(const CodeInstance &a, const CodeInstance &b, const CssEquivalence &eq);

/// Reconstruction of the two classical codes of the holes experiment: a path of `length` bits
/// with a parallel segment of `detour` bits joining bits 1 and length-2 (one hole), and a plain
/// path of `path_length` bits. Their hypergraph product is a surface code with a hole.
ChainComplex3 holes_fixture(std::size_t length = 6, std::size_t detour = 2,
                            std::size_t path_length = 4, const Field &field = Field::binary());

}  // namespace selfcorr

#endif
