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

#ifndef SELFCORR_PARAMS_H
#define SELFCORR_PARAMS_H

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "selfcorr/instance.h"
#include "selfcorr/linalg.h"

namespace selfcorr {

/// Which error type is being studied. Classical instances only have `classical`.
enum class Sector { classical, x, z };

const char *to_string(Sector s);
Sector sector_from_string(const std::string &s);

/// Checks whose violations define the energy of a sector-s word (|H c|).
const SparseFqMatrix &sector_checks(const CodeInstance &inst, Sector s);
/// Generators of trivial (stabilizer) words for the sector; nullptr for classical.
const SparseFqMatrix *sector_stabilizers(const CodeInstance &inst, Sector s);
/// Throws ValidationError if the sector does not fit the instance kind.
void require_sector(const CodeInstance &inst, Sector s);

/// k = n - rank(H_X) - rank(H_Z). Throws for classical instances.
std::size_t quantum_dimension(const CodeInstance &inst);
/// k = n - rank(H).
std::size_t classical_dimension(const CodeInstance &inst);
/// Quantum or classical dimension depending on kind.
std::size_t code_dimension(const CodeInstance &inst);

/// Decides whether a zero-syndrome word is trivial: zero (classical) or a stabilizer (quantum).
/// The elimination is done once at construction.
class TrivialityTester {
   public:
    TrivialityTester(const CodeInstance &inst, Sector s);
    /// Assumes the sector syndrome of c is zero.
    bool is_trivial(std::span<const Fq> c) const;

   private:
    std::optional<RowEchelon> stabilizers_;
};

/// Throws ValidationError if c has a nonzero syndrome in the sector.
bool is_trivial_logical(const CodeInstance &inst, Sector s, std::span<const Fq> c);

struct CosetResult {
    std::size_t weight = 0;
    Word witness;
    bool exact = false;
    std::uint64_t visited = 0;
};

/// Minimum weight in c + rowspace(gen), with the elimination of gen shared across queries.
class CosetSearcher {
   public:
    CosetSearcher(const SparseFqMatrix &gen, std::uint64_t budget);
    /// Exact when q^rank(gen) <= budget; otherwise greedy descent over the rows of gen.
    CosetResult search(std::span<const Fq> c) const;
    bool exact() const { return exact_; }

   private:
    const SparseFqMatrix &gen_;
    std::vector<SparseWord> basis_;
    bool exact_;
};

/// min over b in rowspace(gen) of |c + b|. Exact when q^rank(gen) <= budget; otherwise greedy
/// descent over the rows of gen (upper bound, exact = false).
CosetResult coset_min_weight(const SparseFqMatrix &gen, std::span<const Fq> c,
                             std::uint64_t budget);

enum class DistanceMode { exact, estimate };

struct SectorDistance {
    std::size_t d = 0;  // 0 when no nontrivial logical exists (k = 0)
    Word witness;
};

struct DistanceResult {
    std::size_t d = 0;
    Word witness;
    bool exact = false;
    std::string method;
    std::uint64_t visited = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::optional<SectorDistance> x;
    std::optional<SectorDistance> z;
};

/// Minimum weight of a nontrivial zero-syndrome word in one sector.
/// Exact: enumerate ker(H) when q^dim <= budget, else a weight-ordered search bounded by budget
/// (BudgetExceeded if neither completes). Estimate: randomized information sets, `trials` rounds.
DistanceResult sector_distance(const CodeInstance &inst, Sector s, DistanceMode mode,
                               std::uint64_t budget, std::uint64_t trials = 200,
                               std::uint64_t seed = 1);

/// Classical: sector_distance(classical). Quantum: both sectors, d = min(d_x, d_z).
DistanceResult distance(const CodeInstance &inst, DistanceMode mode, std::uint64_t budget,
                        std::uint64_t trials = 200, std::uint64_t seed = 1);

}  // namespace selfcorr

#endif
