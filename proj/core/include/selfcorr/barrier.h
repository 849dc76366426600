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

#ifndef SELFCORR_BARRIER_H
#define SELFCORR_BARRIER_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "selfcorr/instance.h"
#include "selfcorr/laurent.h"
#include "selfcorr/params.h"

namespace selfcorr {

/// Set coordinate `index` to `value`.
struct Flip {
    std::uint32_t index;
    Fq value;
    bool operator==(const Flip &) const = default;
};

/// Single-coordinate walk starting from the zero word of length n.
struct Walk {
    std::size_t n = 0;
    std::vector<Flip> flips;

    Word endpoint() const;
    /// "walk n steps" header then one "index value" line per flip.
    void write_text(std::ostream &out) const;
    static Walk read_text(std::istream &in);
    bool operator==(const Walk &) const = default;
};

struct WalkEnergy {
    std::vector<std::size_t> profile;  // length flips + 1
    std::size_t max = 0;
};

/// Energy |H c_i| along the walk, maintained incrementally.
WalkEnergy walk_energy(const SparseFqMatrix &h, const Walk &walk);

struct BarrierResult {
    std::size_t value = 0;
    Walk witness;
    bool exact = false;
    std::uint64_t visited = 0;
    std::string method;
    bool found = false;  // false when no nontrivial target exists
};

/// Bottleneck (minimax) Dijkstra over all q^n words. BudgetExceeded if q^n > budget.
BarrierResult barrier_exact(const CodeInstance &inst, Sector s, std::uint64_t budget);

struct HeuristicOptions {
    /// Chebyshev lattice distance from already-flipped sites allowed for the next flip; <= 0
    /// means the whole target support.
    int window = 0;
    std::size_t beam = 16;
    std::vector<Walk> seeds;
    std::vector<Word> targets;
    /// When no target is given, use a low-weight logical from an information-set search.
    std::uint64_t distance_trials = 50;
    std::uint64_t seed = 1;
};

/// Upper bound on the barrier: seed walks, lattice sweeps and a beam search over flip orders
/// towards each target. Always flagged inexact.
BarrierResult barrier_heuristic(const CodeInstance &inst, Sector s, const HeuristicOptions &opts);

/// Fractal word c_l = f^(p^l - 1) of a 2D code with h = (f), f supported on {1, x, y, xy}.
struct FractalWord {
    LaurentPoly f;
    std::size_t level = 0;
    std::uint32_t p = 2;
    LaurentPoly word;      // c_l
    LaurentPoly syndrome;  // f * c_l = f^(p^l)
    LaurentPoly block;     // b = f^(p-1)
    std::size_t a0 = 0;    // |b|
};

/// Checks the weight identity, syndrome bound and support box; ValidationError on a degenerate f
/// (fewer than two terms, wrong dimension, support outside {1, x, y, xy}).
FractalWord fractal_word(const LaurentPoly &f, std::size_t level);

/// Classical m = 1 instance h = (f) on the torus of side L.
CodeInstance fractal_instance(const LaurentPoly &f, std::size_t L);
/// Torus of side p^l + 1: the word and its syndrome never wrap.
CodeInstance fractal_instance_for_level(const LaurentPoly &f, std::size_t level);

/// Depth-first construction of c_l inside `inst` (site coordinates taken mod the torus).
Walk fractal_walk(const FractalWord &fw, const CodeInstance &inst);
/// Energy bound of the depth-first walk: 4 l A_0 for l >= 1, |f| for l = 0.
std::size_t fractal_walk_bound(const FractalWord &fw);
/// c_l as a dense word of `inst`.
Word fractal_word_vector(const FractalWord &fw, const CodeInstance &inst);

struct IrreducibleReport {
    /// counts[w] = irreducible words with energy exactly w, for w <= cap.
    std::vector<std::uint64_t> counts;
    /// Connected words whose support exceeded the exhaustive split limit.
    std::uint64_t undetermined = 0;
    std::uint64_t visited = 0;
    std::vector<Word> words;  // filled when requested
};

/// Words supported in the box [0, box)^D (all bit types), split test over support partitions.
IrreducibleReport enumerate_irreducible(const CodeInstance &inst, std::size_t energy_cap,
                                        std::size_t box, std::uint64_t budget,
                                        bool keep_words = false);
/// True iff no partition of supp(c) into two nonempty parts has disjoint syndromes.
/// nullopt when supp(c) is connected but larger than 20 coordinates.
std::optional<bool> is_irreducible(const SparseFqMatrix &h, std::span<const Fq> c);

struct ExpansionResult {
    double lambda_min = 0.0;
    Word witness;
    std::size_t witness_weight = 0;
    std::size_t witness_energy = 0;
    bool exhaustive = false;
    bool found = false;
    std::uint64_t visited = 0;
};

/// |H c| / |c|^nu.
double expansion_ratio(const SparseFqMatrix &h, std::span<const Fq> c, double nu);

struct ExpansionOptions {
    /// Root coordinates for the connected-set enumeration; empty means all coordinates. For a
    /// torus-invariant instance the bits of one site suffice.
    std::vector<std::uint32_t> roots;
    std::uint64_t budget = 100'000'000;
};

/// Exhaustive minimum of |Hc|/|c|^nu over nonzero c with |c| <= w_max. Only words whose support
/// is connected through shared checks are visited; for nu <= 1 this loses nothing, since a
/// disjoint union has ratio at least the minimum over its parts.
ExpansionResult expansion_check(const SparseFqMatrix &h, double nu, std::size_t w_max,
                                const ExpansionOptions &opts = {});

/// Roots covering every translation class of a torus instance.
std::vector<std::uint32_t> translation_roots(const CodeInstance &inst);

/// Simulated-annealing upper bound on lambda_min for words of weight >= w_min.
ExpansionResult expansion_anneal(const SparseFqMatrix &h, double nu, std::size_t w_min,
                                 std::uint64_t steps, std::uint64_t seed);

struct QuantumExpansionSide {
    double lambda_min = 0.0;
    Word witness;
    std::size_t reduced_weight = 0;
    std::size_t syndrome_weight = 0;
    bool found = false;
    bool exact_cosets = true;
};

struct QuantumExpansionReport {
    QuantumExpansionSide delta;     // |delta1 c| vs min |c + im delta0|
    QuantumExpansionSide boundary;  // |delta0^T c| vs min |c + im delta1^T|
    bool exhaustive = false;
    std::uint64_t visited = 0;
};

/// Ratios for one word: {delta side, boundary side}; reduced weight 0 gives found = false.
std::pair<QuantumExpansionSide, QuantumExpansionSide> quantum_expansion_ratio(
    const SparseFqMatrix &delta0, const SparseFqMatrix &delta1, std::span<const Fq> c, double nu,
    std::uint64_t coset_budget);

/// All words of weight 1..w_max in the middle space.
QuantumExpansionReport quantum_expansion_check(const SparseFqMatrix &delta0,
                                               const SparseFqMatrix &delta1, double nu,
                                               std::size_t w_max, std::uint64_t budget,
                                               std::uint64_t coset_budget = 1u << 20);

}  // namespace selfcorr

#endif
