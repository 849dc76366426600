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

#ifndef SELFCORR_CODES_H
#define SELFCORR_CODES_H

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfcorr/laurent.h"

namespace selfcorr {

enum class CodeKind { classical, quantum };

/// Symbolic translation-invariant code.
///
/// Quantum: h_x is (qubits per site) x (X-checks per site) and h_z is (qubits per site) x
/// (Z-checks per site). Column j of h_x lists, per qubit type, the lattice offsets that the
/// X-check of type j at the origin acts on, so CSS commutation reads conj(h_x)^T h_z = 0.
///
/// Classical: h is (bits per site) x (checks per site) and acts by multiplication, i.e. the
/// syndrome polynomial of check j is sum_i h_{ij} c_i. A check of type j at site s therefore
/// touches bit i at s - v for every monomial x^v of h_{ij}.
struct TransInvCode {
    CodeKind kind = CodeKind::classical;
    std::string family;
    std::size_t dim = 0;
    Field field = Field::binary();
    std::optional<PolyMatrix> h;
    std::optional<PolyMatrix> h_x;
    std::optional<PolyMatrix> h_z;

    std::size_t bits_per_site() const;
    /// Quantum: X-checks per site. Classical: checks per site.
    std::size_t x_checks_per_site() const;
    std::size_t z_checks_per_site() const;
};

/// Matrix-valued product conj(h_x)^T h_z; all-zero means the code is a valid CSS code.
struct CssReport {
    PolyMatrix product;
    bool valid() const { return product.is_zero(); }
    /// (row, col, polynomial) of every nonzero entry.
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> violations() const;
};

/// Throws ValidationError for classical codes.
CssReport validate_css(const TransInvCode &code);

/// Builds a quantum code from explicit matrices; throws ValidationError if the CSS product is
/// nonzero or shapes disagree.
TransInvCode make_quantum_code(std::string family, PolyMatrix h_x, PolyMatrix h_z);
TransInvCode make_classical_code(std::string family, PolyMatrix h);

/// 2D toric code over F_2: h_x = (1+x^-1; 1+y^-1), h_z = (1+y; 1+x).
TransInvCode make_toric();

/// conj(h_x)^T = (f g), h_z = (g; -f).
TransInvCode make_haah_family(const LaurentPoly &f, const LaurentPoly &g);

/// Edge functions of a complete bipartite graph, keyed by (i, j), zero-based.
using EdgeFunctions = std::map<std::pair<std::size_t, std::size_t>, LaurentPoly>;

/// Product of the complete bipartite graphs K_{m1,m1} and K_{m2,m2}. Per site: X-checks
/// I1 x I2, qubits (J1 x I2) then (I1 x J2), Z-checks J1 x J2, each block ordered
/// lexicographically. Entries:
///   X-check (i1,i2) to qubit (j1,i2): conj(f_{i1,j1});  X-check (i1,i2) to qubit (i1,j2): conj(g_{i2,j2})
///   Z-check (j1,j2) to qubit (j1,i2): g_{i2,j2};        Z-check (j1,j2) to qubit (i1,j2): -f_{i1,j1}
TransInvCode make_bipartite_product(std::size_t m1, std::size_t m2, const EdgeFunctions &f,
                                    const EdgeFunctions &g);

/// m x m classical code with h_{ij} = f_{ij}, D = 2.
TransInvCode make_classical_grid(std::size_t m, const EdgeFunctions &f);
/// The code induced by h^T.
TransInvCode transpose_classical(const TransInvCode &code);

/// Ising model as a classical code: h = (1+x) for D = 1, h = (1+x, 1+y) for D = 2.
TransInvCode make_ising(std::size_t dim);

/// Random polynomial whose support is a subset of `support` with uniform coefficients.
LaurentPoly random_poly(const Field &field, std::size_t dim, const std::vector<Monomial> &support,
                        const std::function<std::uint64_t()> &rng);

/// {1, x, y, z, xy, yz, zx, xyz}.
std::vector<Monomial> cube_corners_3d();
/// {1, x, y, xy}.
std::vector<Monomial> square_corners_2d();

}  // namespace selfcorr

#endif
