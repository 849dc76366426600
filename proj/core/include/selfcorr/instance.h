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

#ifndef SELFCORR_INSTANCE_H
#define SELFCORR_INSTANCE_H

#include <cstdint>
#include <string>
#include <vector>

#include "selfcorr/codes.h"
#include "selfcorr/sparse_matrix.h"

namespace selfcorr {

enum class Boundary {
    /// Periodic: exponents reduced mod L per axis.
    torus,
    /// Open box [0, L)^D: every bit kept, a check kept only if all sites it touches lie inside.
    open_interior,
    /// Not lattice-derived (explicit Tanner graph or product construction).
    none,
};

const char *to_string(Boundary b);
Boundary boundary_from_string(const std::string &s);

/// Lattice site plus per-site type index of a bit or check.
struct SiteRef {
    std::vector<std::int64_t> site;
    std::uint32_t type = 0;
    bool operator==(const SiteRef &) const = default;
};

/// Explicit code on a finite lattice.
///
/// Convention: for quantum codes `hx` has one row per Z-check and detects X errors, so the
/// energy of an X-type word c is |hx c| (the number of violated Z-checks); `hz` has one row per
/// X-check. For classical codes `hx` is the parity-check matrix H and `hz` has no rows.
struct CodeInstance {
    CodeKind kind = CodeKind::classical;
    Field field = Field::binary();
    std::size_t n = 0;
    SparseFqMatrix hx;
    SparseFqMatrix hz;
    Boundary boundary = Boundary::none;
    std::vector<std::size_t> shape;
    std::size_t bits_per_site = 0;
    std::vector<SiteRef> bits;
    std::vector<SiteRef> hx_checks;
    std::vector<SiteRef> hz_checks;
    std::string provenance;

    CodeInstance(Field f, std::size_t n_bits, SparseFqMatrix hx_, SparseFqMatrix hz_)
        : field(std::move(f)), n(n_bits), hx(std::move(hx_)), hz(std::move(hz_)) {}

    /// Classical parity-check matrix; throws for quantum instances.
    const SparseFqMatrix &parity_check() const;
    bool is_lattice() const { return !shape.empty(); }
    std::size_t num_sites() const;
    /// Flat bit index of (site, type); site coordinates are taken mod the shape on a torus.
    std::uint32_t bit_index(const std::vector<std::int64_t> &site, std::uint32_t type) const;
    std::uint32_t site_index(const std::vector<std::int64_t> &site) const;
    std::vector<std::int64_t> site_of(std::size_t site_index) const;
};

/// Explicit bipartite interaction list for hand-built classical codes.
struct TannerSpec {
    struct Edge {
        std::uint32_t check;
        std::uint32_t bit;
        std::uint32_t coeff;
    };
    std::size_t bits = 0;
    std::size_t checks = 0;
    std::vector<Edge> edges;
};

/// Uniform side length on every axis.
CodeInstance instantiate(const TransInvCode &code, std::size_t L, Boundary bc);
CodeInstance instantiate(const TransInvCode &code, const std::vector<std::size_t> &shape,
                         Boundary bc);

/// Throws ValidationError on out-of-range indices, zero coefficients, or duplicate edges with
/// conflicting coefficients.
CodeInstance classical_from_tanner(const TannerSpec &spec, const Field &field);

/// Quantum instance from explicit check matrices (hx: Z-check rows, hz: X-check rows).
CodeInstance quantum_from_matrices(SparseFqMatrix hx, SparseFqMatrix hz, std::string provenance);

/// Torus translation of a bit-indexed word by `offset` lattice units.
Word translate_bits(const CodeInstance &inst, std::span<const Fq> word,
                    const std::vector<std::int64_t> &offset);
/// Torus translation of a check-indexed vector (rows of hx).
Word translate_hx_checks(const CodeInstance &inst, std::span<const Fq> syndrome,
                         const std::vector<std::int64_t> &offset);

/// Ring of n bits with adjacent-equality checks (check i touches bits i and i+1 mod n).
TannerSpec ring_tanner(std::size_t n);
/// Open path of n bits with n-1 adjacent-equality checks.
TannerSpec path_tanner(std::size_t n);
/// Path of `length` bits plus a parallel segment of `detour` extra bits joining bits `from` and
/// `to`; the resulting graph has one cycle (a hole). Reconstruction of a figure-only input code.
TannerSpec path_with_parallel_segment(std::size_t length, std::size_t from, std::size_t to,
                                      std::size_t detour);
/// Repetition-style code on an arbitrary graph: bits on vertices, one check per edge.
TannerSpec graph_tanner(std::size_t vertices,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>> &edges);

}  // namespace selfcorr

#endif
