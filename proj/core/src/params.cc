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

#include "selfcorr/params.h"

#include "selfcorr/syndrome.h"

#include <algorithm>
#include <numeric>
#include <random>

namespace selfcorr {

namespace {

// q^k, or nullopt if above 2^62.
std::optional<std::uint64_t> checked_power(std::uint64_t q, std::size_t k) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (total > (std::uint64_t{1} << 62) / q) {
            return std::nullopt;
        }
        total *= q;
    }
    return total;
}

struct Candidate {
    std::size_t weight = 0;
    Word word;
};

// Weight-ordered search over nonzero words; first nonzero coordinate normalised to 1.
std::optional<Candidate> weight_ordered_search(const SparseFqMatrix &h,
                                               const TrivialityTester &tester, std::size_t n,
                                               std::uint64_t budget, std::uint64_t &visited) {
    std::optional<Candidate> found;
    for (std::size_t w = 1; w <= n && !found; ++w) {
        for_each_normalized_word(h.field(), n, w, [&](const Word &c) {
            if (++visited > budget) {
                throw BudgetExceeded("distance: weight-ordered search exceeded budget of " +
                                     std::to_string(budget) + " words at weight " +
                                     std::to_string(w));
            }
            if (h.syndrome_weight(c) == 0 && !tester.is_trivial(c)) {
                found = Candidate{w, c};
                return false;
            }
            return true;
        });
    }
    return found;
}

}  // namespace

const char *to_string(Sector s) {
    switch (s) {
        case Sector::classical:
            return "classical";
        case Sector::x:
            return "X";
        case Sector::z:
            return "Z";
    }
    return "?";
}

Sector sector_from_string(const std::string &s) {
    if (s == "classical") return Sector::classical;
    if (s == "X" || s == "x") return Sector::x;
    if (s == "Z" || s == "z") return Sector::z;
    throw ValidationError("unknown sector '" + s + "' (expected classical, X or Z)");
}

void require_sector(const CodeInstance &inst, Sector s) {
    bool quantum = inst.kind == CodeKind::quantum;
    if (quantum == (s == Sector::classical)) {
        throw ValidationError(std::string("sector ") + to_string(s) + " does not apply to a " +
                              (quantum ? "quantum" : "classical") + " instance");
    }
}

const SparseFqMatrix &sector_checks(const CodeInstance &inst, Sector s) {
    require_sector(inst, s);
    return s == Sector::z ? inst.hz : inst.hx;
}

const SparseFqMatrix *sector_stabilizers(const CodeInstance &inst, Sector s) {
    require_sector(inst, s);
    switch (s) {
        case Sector::classical:
            return nullptr;
        case Sector::x:
            return &inst.hz;
        case Sector::z:
            return &inst.hx;
    }
    return nullptr;
}

std::size_t quantum_dimension(const CodeInstance &inst) {
    if (inst.kind != CodeKind::quantum) {
        throw ValidationError("quantum_dimension requires a quantum instance");
    }
    return inst.n - rank(inst.hx) - rank(inst.hz);
}

std::size_t classical_dimension(const CodeInstance &inst) {
    return inst.n - rank(inst.parity_check());
}

std::size_t code_dimension(const CodeInstance &inst) {
    return inst.kind == CodeKind::quantum ? quantum_dimension(inst) : classical_dimension(inst);
}

TrivialityTester::TrivialityTester(const CodeInstance &inst, Sector s) {
    if (const SparseFqMatrix *stab = sector_stabilizers(inst, s)) {
        stabilizers_.emplace(*stab);
    }
}

bool TrivialityTester::is_trivial(std::span<const Fq> c) const {
    if (!stabilizers_) {
        return weight(c) == 0;
    }
    return stabilizers_->in_row_space(c);
}

bool is_trivial_logical(const CodeInstance &inst, Sector s, std::span<const Fq> c) {
    const SparseFqMatrix &h = sector_checks(inst, s);
    if (c.size() != inst.n) {
        throw ValidationError("word length does not match the instance");
    }
    if (h.syndrome_weight(c) != 0) {
        throw ValidationError("is_trivial_logical: word has a nonzero syndrome");
    }
    return TrivialityTester(inst, s).is_trivial(c);
}

CosetSearcher::CosetSearcher(const SparseFqMatrix &gen, std::uint64_t budget) : gen_(gen) {
    RowEchelon ech(gen);
    auto size = checked_power(gen.field().q(), ech.rank());
    exact_ = size && *size <= budget;
    if (exact_) {
        basis_ = ech.row_basis();
    }
}

CosetResult CosetSearcher::search(std::span<const Fq> c) const {
    if (c.size() != gen_.cols()) {
        throw ValidationError("coset_min_weight: word length does not match generator columns");
    }
    const Field &f = gen_.field();
    CosetResult out;
    Word start(c.begin(), c.end());
    if (exact_) {
        SpanEnumerator it(f, start, basis_);
        out.weight = it.current_weight();
        out.witness = it.current();
        do {
            ++out.visited;
            if (it.current_weight() < out.weight) {
                out.weight = it.current_weight();
                out.witness = it.current();
            }
        } while (out.weight > 0 && it.next());
        out.exact = true;
        return out;
    }
    // Greedy descent: apply the best single generator multiple while it lowers the weight.
    Word v = start;
    std::size_t w = weight(v);
    while (true) {
        std::ptrdiff_t best_gain = 0;
        std::size_t best_row = 0;
        Fq best_alpha{};
        for (std::size_t r = 0; r < gen_.rows(); ++r) {
            for (std::uint32_t a = 1; a < f.q(); ++a) {
                Fq alpha{a};
                std::ptrdiff_t gain = 0;
                for (const auto &e : gen_.row(r)) {
                    Fq before = v[e.index];
                    Fq after = f.add(before, f.mul(alpha, e.value));
                    gain += (before.is_zero() ? 0 : 1) - (after.is_zero() ? 0 : 1);
                }
                ++out.visited;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_row = r;
                    best_alpha = alpha;
                }
            }
        }
        if (best_gain <= 0) {
            break;
        }
        for (const auto &e : gen_.row(best_row)) {
            v[e.index] = f.add(v[e.index], f.mul(best_alpha, e.value));
        }
        w -= static_cast<std::size_t>(best_gain);
    }
    out.weight = w;
    out.witness = std::move(v);
    out.exact = false;
    return out;
}

CosetResult coset_min_weight(const SparseFqMatrix &gen, std::span<const Fq> c,
                             std::uint64_t budget) {
    return CosetSearcher(gen, budget).search(c);
}

DistanceResult sector_distance(const CodeInstance &inst, Sector s, DistanceMode mode,
                               std::uint64_t budget, std::uint64_t trials, std::uint64_t seed) {
    const SparseFqMatrix &h = sector_checks(inst, s);
    TrivialityTester tester(inst, s);
    const Field &f = inst.field;
    DistanceResult out;
    out.seed = seed;

    if (mode == DistanceMode::estimate) {
        out.method = "information_set";
        out.exact = false;
        out.trials = trials;
        std::mt19937_64 rng(seed);
        std::vector<std::uint32_t> order(inst.n);
        for (std::uint64_t t = 0; t < trials; ++t) {
            std::iota(order.begin(), order.end(), 0u);
            std::shuffle(order.begin(), order.end(), rng);
            RowEchelon ech(h, PivotRule::column_order, order);
            for (const auto &b : ech.kernel_basis()) {
                ++out.visited;
                if (out.d != 0 && b.weight() >= out.d) {
                    continue;
                }
                Word dense = b.to_dense();
                if (!tester.is_trivial(dense)) {
                    out.d = b.weight();
                    out.witness = std::move(dense);
                }
            }
        }
        return out;
    }

    out.exact = true;
    RowEchelon ech(h);
    auto basis = ech.kernel_basis();
    auto size = checked_power(f.q(), basis.size());
    if (size && *size <= budget) {
        out.method = "kernel_enumeration";
        SpanEnumerator it(f, inst.n, std::move(basis));
        while (it.next()) {
            ++out.visited;
            std::size_t w = it.current_weight();
            if (w == 0 || (out.d != 0 && w >= out.d)) {
                continue;
            }
            if (!tester.is_trivial(it.current())) {
                out.d = w;
                out.witness = it.current();
            }
        }
        return out;
    }
    out.method = "weight_ordered";
    auto found = weight_ordered_search(h, tester, inst.n, budget, out.visited);
    if (found) {
        out.d = found->weight;
        out.witness = std::move(found->word);
    }
    return out;
}

DistanceResult distance(const CodeInstance &inst, DistanceMode mode, std::uint64_t budget,
                        std::uint64_t trials, std::uint64_t seed) {
    if (inst.kind == CodeKind::classical) {
        return sector_distance(inst, Sector::classical, mode, budget, trials, seed);
    }
    DistanceResult dx = sector_distance(inst, Sector::x, mode, budget, trials, seed);
    DistanceResult dz = sector_distance(inst, Sector::z, mode, budget, trials, seed);
    DistanceResult out = dx;
    out.x = SectorDistance{dx.d, dx.witness};
    out.z = SectorDistance{dz.d, dz.witness};
    out.visited = dx.visited + dz.visited;
    out.exact = dx.exact && dz.exact;
    if (dx.method != dz.method) {
        out.method = dx.method + "/" + dz.method;
    }
    if (dx.d == 0 || (dz.d != 0 && dz.d < dx.d)) {
        out.d = dz.d;
        out.witness = dz.witness;
    }
    return out;
}

bool for_each_normalized_word(const Field &f, std::size_t n, std::size_t w,
                              const std::function<bool(const Word &)> &fn) {
    if (w == 0 || w > n) {
        return true;
    }
    const std::uint32_t q = f.q();
    Word c(n);
    std::vector<std::uint32_t> pos(w);
    std::iota(pos.begin(), pos.end(), 0u);
    while (true) {
        std::vector<std::uint32_t> val(w, 1);
        while (true) {
            std::fill(c.begin(), c.end(), Fq{});
            for (std::size_t i = 0; i < w; ++i) {
                c[pos[i]] = Fq{val[i]};
            }
            if (!fn(c)) {
                return false;
            }
            // Odometer over values 1..q-1, leaving val[0] = 1.
            std::size_t i = 1;
            while (i < w && val[i] == q - 1) {
                val[i] = 1;
                ++i;
            }
            if (i >= w) {
                break;
            }
            ++val[i];
        }
        std::size_t i = w;
        while (i > 0 && pos[i - 1] == n - w + i - 1) {
            --i;
        }
        if (i == 0) {
            return true;
        }
        ++pos[i - 1];
        for (std::size_t j = i; j < w; ++j) {
            pos[j] = pos[j - 1] + 1;
        }
    }
}

}  // namespace selfcorr
