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

#include "selfcorr/barrier.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <functional>

#include "selfcorr/codes.h"
#include "selfcorr/syndrome.h"

namespace selfcorr {

namespace {

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

bool is_nontrivial_codeword(const SparseFqMatrix &h, const TrivialityTester &tester,
                            const Word &w) {
    return weight(w) > 0 && h.syndrome_weight(w) == 0 && !tester.is_trivial(w);
}

std::int64_t torus_gap(std::int64_t a, std::int64_t b, std::int64_t L, bool torus) {
    std::int64_t d = a > b ? a - b : b - a;
    return torus ? std::min(d, L - d) : d;
}

std::int64_t chebyshev(const CodeInstance &inst, const std::vector<std::int64_t> &a,
                       const std::vector<std::int64_t> &b) {
    bool torus = inst.boundary == Boundary::torus;
    std::int64_t d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d = std::max(d, torus_gap(a[k], b[k], static_cast<std::int64_t>(inst.shape[k]), torus));
    }
    return d;
}

std::vector<std::int64_t> site_of_bit(const CodeInstance &inst, std::uint32_t bit) {
    return inst.site_of(bit / inst.bits_per_site);
}

// Beam search over flip orders towards a fixed target.
Walk beam_walk(const CodeInstance &inst, const SparseFqMatrix &h, const Word &target,
               const HeuristicOptions &opts) {
    std::vector<std::uint32_t> support;
    for (std::uint32_t i = 0; i < target.size(); ++i) {
        if (!target[i].is_zero()) {
            support.push_back(i);
        }
    }
    const std::size_t m = support.size();
    std::vector<std::vector<std::int64_t>> sites;
    bool use_window = opts.window > 0 && inst.is_lattice();
    if (use_window) {
        for (auto b : support) {
            sites.push_back(site_of_bit(inst, b));
        }
    }
    std::mt19937_64 rng(opts.seed);
    std::vector<std::uint64_t> zobrist(m);
    for (auto &z : zobrist) {
        z = rng();
    }

    struct State {
        SyndromeTracker tracker;
        std::vector<char> done;
        std::vector<std::uint32_t> order;  // positions into support
        std::size_t max = 0;
        std::uint64_t hash = 0;
    };
    std::vector<State> beam;
    beam.push_back(State{SyndromeTracker(h), std::vector<char>(m, 0), {}, 0, 0});

    for (std::size_t step = 0; step < m; ++step) {
        struct Child {
            std::size_t max;
            std::size_t energy;
            std::size_t parent;
            std::uint32_t pos;
            std::uint64_t hash;
        };
        std::vector<Child> children;
        for (std::size_t si = 0; si < beam.size(); ++si) {
            const State &st = beam[si];
            auto allowed = [&](std::uint32_t k) {
                if (!use_window || st.order.empty()) {
                    return true;
                }
                for (auto o : st.order) {
                    if (chebyshev(inst, sites[k], sites[o]) <= opts.window) {
                        return true;
                    }
                }
                return false;
            };
            std::size_t before = children.size();
            for (int pass = 0; pass < 2 && children.size() == before; ++pass) {
                for (std::uint32_t k = 0; k < m; ++k) {
                    if (st.done[k] || (pass == 0 && !allowed(k))) {
                        continue;
                    }
                    std::size_t e = st.tracker.energy_if(support[k], target[support[k]]);
                    children.push_back({std::max(st.max, e), e, si, k, st.hash ^ zobrist[k]});
                }
            }
        }
        std::stable_sort(children.begin(), children.end(), [](const Child &a, const Child &b) {
            if (a.max != b.max) return a.max < b.max;
            if (a.energy != b.energy) return a.energy < b.energy;
            return a.pos < b.pos;
        });
        std::vector<State> next;
        std::unordered_set<std::uint64_t> seen;
        for (const auto &c : children) {
            if (next.size() >= std::max<std::size_t>(1, opts.beam)) {
                break;
            }
            if (!seen.insert(c.hash).second) {
                continue;
            }
            State st = beam[c.parent];
            st.tracker.set(support[c.pos], target[support[c.pos]]);
            st.done[c.pos] = 1;
            st.order.push_back(c.pos);
            st.max = c.max;
            st.hash = c.hash;
            next.push_back(std::move(st));
        }
        beam = std::move(next);
    }
    Walk w;
    w.n = target.size();
    for (auto k : beam.front().order) {
        w.flips.push_back({support[k], target[support[k]]});
    }
    return w;
}

// Flip the target support in lattice raster order, with `perm[0]` the fastest axis.
Walk sweep_walk(const CodeInstance &inst, const Word &target, const std::vector<std::size_t> &perm) {
    std::vector<std::pair<std::vector<std::int64_t>, std::uint32_t>> keyed;
    for (std::uint32_t i = 0; i < target.size(); ++i) {
        if (target[i].is_zero()) {
            continue;
        }
        auto site = site_of_bit(inst, i);
        std::vector<std::int64_t> key;
        for (std::size_t k = perm.size(); k-- > 0;) {
            key.push_back(site[perm[k]]);
        }
        key.push_back(static_cast<std::int64_t>(i % inst.bits_per_site));
        keyed.emplace_back(std::move(key), i);
    }
    std::sort(keyed.begin(), keyed.end());
    Walk w;
    w.n = target.size();
    for (const auto &[key, i] : keyed) {
        w.flips.push_back({i, target[i]});
    }
    return w;
}

}  // namespace

Word Walk::endpoint() const {
    Word w(n);
    for (const auto &f : flips) {
        if (f.index >= n) {
            throw ValidationError("walk coordinate out of range");
        }
        w[f.index] = f.value;
    }
    return w;
}

void Walk::write_text(std::ostream &out) const {
    out << "walk " << n << " " << flips.size() << "\n";
    for (const auto &f : flips) {
        out << f.index << " " << f.value.rep << "\n";
    }
}

Walk Walk::read_text(std::istream &in) {
    std::string tag;
    std::size_t steps = 0;
    Walk w;
    if (!(in >> tag >> w.n >> steps) || tag != "walk") {
        throw ValidationError("walk text: expected header 'walk n steps'");
    }
    for (std::size_t k = 0; k < steps; ++k) {
        std::uint64_t i = 0, v = 0;
        if (!(in >> i >> v)) {
            throw ValidationError("walk text: truncated at step " + std::to_string(k));
        }
        if (i >= w.n) {
            throw ValidationError("walk text: coordinate out of range");
        }
        w.flips.push_back({static_cast<std::uint32_t>(i), Fq{static_cast<std::uint32_t>(v)}});
    }
    return w;
}

WalkEnergy walk_energy(const SparseFqMatrix &h, const Walk &walk) {
    if (walk.n != h.cols()) {
        throw ValidationError("walk length does not match the check matrix");
    }
    SyndromeTracker t(h);
    WalkEnergy out;
    out.profile.reserve(walk.flips.size() + 1);
    out.profile.push_back(0);
    for (const auto &f : walk.flips) {
        if (f.index >= walk.n) {
            throw ValidationError("walk coordinate " + std::to_string(f.index) + " out of range");
        }
        if (f.value.rep >= h.field().q()) {
            throw ValidationError("walk value outside the field");
        }
        t.set(f.index, f.value);
        out.profile.push_back(t.energy());
        out.max = std::max(out.max, t.energy());
    }
    return out;
}

BarrierResult barrier_exact(const CodeInstance &inst, Sector s, std::uint64_t budget) {
    const SparseFqMatrix &h = sector_checks(inst, s);
    TrivialityTester tester(inst, s);
    const std::size_t n = inst.n;
    const std::uint32_t q = inst.field.q();
    auto total = checked_power(q, n);
    if (!total || *total > budget || *total > (std::uint64_t{1} << 32)) {
        throw BudgetExceeded("barrier_exact: state space q^n = " + std::to_string(q) + "^" +
                             std::to_string(n) + " exceeds budget " + std::to_string(budget) +
                             "; use the heuristic mode");
    }
    const std::uint64_t states = *total;
    constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> cost(states, kUnseen);
    std::vector<std::uint32_t> parent(states, 0);
    std::vector<char> closed(states, 0);
    std::vector<std::uint64_t> qpow(n);
    for (std::size_t i = 0; i < n; ++i) {
        qpow[i] = i == 0 ? 1 : qpow[i - 1] * q;
    }
    using Item = std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>;  // cost, weight, code
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    cost[0] = 0;
    frontier.emplace(0, 0, 0);

    BarrierResult out;
    out.exact = true;
    out.method = "minimax_dijkstra";
    Word word(n);
    std::optional<std::uint64_t> target;
    while (!frontier.empty()) {
        auto [c, wt, code] = frontier.top();
        frontier.pop();
        if (closed[code]) {
            continue;
        }
        closed[code] = 1;
        ++out.visited;
        std::uint64_t rest = code;
        for (std::size_t i = 0; i < n; ++i) {
            word[i] = Fq{static_cast<std::uint32_t>(rest % q)};
            rest /= q;
        }
        SyndromeTracker tracker(h);
        for (std::uint32_t i = 0; i < n; ++i) {
            tracker.set(i, word[i]);
        }
        if (code != 0 && tracker.energy() == 0 && !tester.is_trivial(word)) {
            target = code;
            out.value = c;
            break;
        }
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::uint32_t cur = word[i].rep;
            for (std::uint32_t b = 0; b < q; ++b) {
                if (b == cur) {
                    continue;
                }
                auto e = static_cast<std::uint32_t>(tracker.energy_if(i, Fq{b}));
                std::uint32_t c2 = std::max(c, e);
                std::uint64_t code2 = code - cur * qpow[i] + b * qpow[i];
                if (c2 < cost[code2]) {
                    cost[code2] = c2;
                    parent[code2] = static_cast<std::uint32_t>(code);
                    std::uint32_t w2 = wt + (b != 0 ? 1 : 0) - (cur != 0 ? 1 : 0);
                    frontier.emplace(c2, w2, code2);
                }
            }
        }
    }
    out.witness.n = n;
    if (!target) {
        out.found = false;
        return out;
    }
    out.found = true;
    std::vector<Flip> rev;
    for (std::uint64_t code = *target; code != 0;) {
        std::uint64_t prev = parent[code];
        std::uint64_t a = code, b = prev;
        for (std::uint32_t i = 0; i < n; ++i, a /= q, b /= q) {
            if (a % q != b % q) {
                rev.push_back({i, Fq{static_cast<std::uint32_t>(a % q)}});
                break;
            }
        }
        code = prev;
    }
    out.witness.flips.assign(rev.rbegin(), rev.rend());
    return out;
}

BarrierResult barrier_heuristic(const CodeInstance &inst, Sector s, const HeuristicOptions &opts) {
    const SparseFqMatrix &h = sector_checks(inst, s);
    TrivialityTester tester(inst, s);
    BarrierResult best;
    best.exact = false;
    best.witness.n = inst.n;
    auto consider = [&](const Walk &w, const std::string &method) {
        if (!is_nontrivial_codeword(h, tester, w.endpoint())) {
            return;
        }
        auto e = walk_energy(h, w);
        ++best.visited;
        if (!best.found || e.max < best.value) {
            best.found = true;
            best.value = e.max;
            best.witness = w;
            best.method = method;
        }
    };
    std::vector<Word> targets = opts.targets;
    for (const auto &seed : opts.seeds) {
        if (seed.n != inst.n) {
            throw ValidationError("seed walk length does not match the instance");
        }
        consider(seed, "seed_walk");
        targets.push_back(seed.endpoint());
    }
    if (targets.empty()) {
        auto d = sector_distance(inst, s, DistanceMode::estimate, 0, opts.distance_trials,
                                 opts.seed);
        if (d.d > 0) {
            targets.push_back(d.witness);
        }
    }
    for (const auto &t : targets) {
        if (t.size() != inst.n) {
            throw ValidationError("target length does not match the instance");
        }
        if (!is_nontrivial_codeword(h, tester, t)) {
            continue;
        }
        if (inst.is_lattice()) {
            std::vector<std::size_t> perm(inst.shape.size());
            std::iota(perm.begin(), perm.end(), 0);
            do {
                consider(sweep_walk(inst, t, perm), "lattice_sweep");
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        consider(beam_walk(inst, h, t, opts), "beam_search");
    }
    return best;
}

FractalWord fractal_word(const LaurentPoly &f, std::size_t level) {
    if (f.dim() != 2) {
        throw ValidationError("fractal words need a two-dimensional generator");
    }
    if (f.weight() < 2) {
        throw ValidationError("degenerate generator: at least two nonzero coefficients required");
    }
    for (const auto &[m, c] : f.terms()) {
        for (auto e : m.exps) {
            if (e < 0 || e > 1) {
                throw ValidationError("generator must be supported on {1, x, y, xy}");
            }
        }
    }
    const Field &field = f.field();
    const std::uint32_t p = field.p();
    std::uint64_t pl = 1;
    for (std::size_t i = 0; i < level; ++i) {
        if (pl > (std::uint64_t{1} << 40) / p) {
            throw ValidationError("fractal level too large");
        }
        pl *= p;
    }
    FractalWord fw{f, level, p, f.pow(pl - 1), LaurentPoly(field, 2), f.pow(p - 1), 0};
    fw.syndrome = f * fw.word;
    fw.a0 = fw.block.weight();
    std::uint64_t expected = 1;
    for (std::size_t i = 0; i < level; ++i) {
        expected *= fw.a0;
    }
    if (fw.word.weight() != expected) {
        throw std::logic_error("fractal word weight differs from A_0^l");
    }
    if (fw.syndrome.weight() > 4) {
        throw std::logic_error("fractal word syndrome exceeds four terms");
    }
    for (const auto &[m, c] : fw.word.terms()) {
        for (auto e : m.exps) {
            if (e < 0 || static_cast<std::uint64_t>(e) >= pl) {
                throw std::logic_error("fractal word leaves its p^l box");
            }
        }
    }
    return fw;
}

CodeInstance fractal_instance(const LaurentPoly &f, std::size_t L) {
    EdgeFunctions fs;
    fs.emplace(std::make_pair(std::size_t{0}, std::size_t{0}), f);
    return instantiate(make_classical_grid(1, fs), L, Boundary::torus);
}

CodeInstance fractal_instance_for_level(const LaurentPoly &f, std::size_t level) {
    std::size_t L = 1;
    for (std::size_t i = 0; i < level; ++i) {
        L *= f.field().p();
    }
    return fractal_instance(f, L + 1);
}

Walk fractal_walk(const FractalWord &fw, const CodeInstance &inst) {
    if (!inst.is_lattice() || inst.shape.size() != 2 || inst.bits_per_site != 1) {
        throw ValidationError("fractal walks need a 2D lattice instance with one bit per site");
    }
    std::uint64_t pl = 1;
    for (std::size_t i = 0; i < fw.level; ++i) {
        pl *= fw.p;
    }
    for (auto L : inst.shape) {
        if (L < pl) {
            throw ValidationError("lattice side " + std::to_string(L) +
                                  " smaller than the fractal word box " + std::to_string(pl));
        }
    }
    const Field &field = fw.f.field();
    Walk walk;
    walk.n = inst.n;
    std::vector<std::uint64_t> scale(fw.level + 1, 1);
    for (std::size_t i = 1; i <= fw.level; ++i) {
        scale[i] = scale[i - 1] * fw.p;
    }
    // c_l = sum over terms (v, beta) of b: beta^(p^(l-1)) x^(v p^(l-1)) c_(l-1).
    std::function<void(std::size_t, std::int64_t, std::int64_t, Fq)> build =
        [&](std::size_t level, std::int64_t x, std::int64_t y, Fq mult) {
            if (level == 0) {
                walk.flips.push_back({inst.bit_index({x, y}, 0), mult});
                return;
            }
            auto s = static_cast<std::int64_t>(scale[level - 1]);
            for (const auto &[m, beta] : fw.block.terms()) {
                build(level - 1, x + m.exps[0] * s, y + m.exps[1] * s,
                      field.mul(mult, field.frobenius(beta, static_cast<std::uint32_t>(level - 1))));
            }
        };
    build(fw.level, 0, 0, field.one());
    return walk;
}

std::size_t fractal_walk_bound(const FractalWord &fw) {
    return fw.level == 0 ? fw.f.weight() : 4 * fw.level * fw.a0;
}

Word fractal_word_vector(const FractalWord &fw, const CodeInstance &inst) {
    Word w(inst.n);
    for (const auto &[m, c] : fw.word.terms()) {
        auto idx = inst.bit_index(m.exps, 0);
        if (!w[idx].is_zero()) {
            throw ValidationError("fractal word wraps onto itself on this torus");
        }
        w[idx] = c;
    }
    return w;
}

std::optional<bool> is_irreducible(const SparseFqMatrix &h, std::span<const Fq> c) {
    const Field &f = h.field();
    std::vector<std::uint32_t> support;
    for (std::uint32_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_zero()) {
            support.push_back(i);
        }
    }
    const std::size_t s = support.size();
    if (s <= 1) {
        return s == 1;
    }
    // Pre-filter: components of the shared-check graph split the word with disjoint syndromes.
    std::vector<std::size_t> uf(s);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
        while (uf[a] != a) {
            uf[a] = uf[uf[a]];
            a = uf[a];
        }
        return a;
    };
    std::unordered_map<std::uint32_t, std::size_t> row_owner;
    std::vector<std::uint32_t> rows;
    for (std::size_t k = 0; k < s; ++k) {
        for (const auto &e : h.col(support[k])) {
            auto [it, fresh] = row_owner.emplace(e.index, k);
            if (fresh) {
                rows.push_back(e.index);
            } else {
                uf[find(k)] = find(it->second);
            }
        }
    }
    std::size_t roots = 0;
    for (std::size_t k = 0; k < s; ++k) {
        roots += find(k) == k ? 1 : 0;
    }
    if (roots > 1) {
        return false;
    }
    if (s > 20) {
        return std::nullopt;
    }
    std::unordered_map<std::uint32_t, std::size_t> local;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        local[rows[r]] = r;
    }
    std::vector<std::vector<std::pair<std::size_t, Fq>>> contrib(s);
    Word full(rows.size());
    for (std::size_t k = 0; k < s; ++k) {
        for (const auto &e : h.col(support[k])) {
            Fq v = f.mul(e.value, c[support[k]]);
            contrib[k].push_back({local[e.index], v});
            full[local[e.index]] = f.add(full[local[e.index]], v);
        }
    }
    // Part one always holds support[0]; Gray code over the other s - 1 elements.
    Word part(rows.size());
    std::vector<char> in(s, 0);
    auto toggle = [&](std::size_t k) {
        in[k] ^= 1;
        for (const auto &[r, v] : contrib[k]) {
            part[r] = in[k] ? f.add(part[r], v) : f.sub(part[r], v);
        }
    };
    toggle(0);
    const std::uint64_t splits = std::uint64_t{1} << (s - 1);
    for (std::uint64_t g = 0; g < splits; ++g) {
        if (g > 0) {
            std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(g));
            toggle(bit + 1);
        }
        std::size_t count = 0;
        for (std::size_t k = 0; k < s; ++k) count += in[k];
        if (count == s) {
            continue;
        }
        bool disjoint = true;
        for (std::size_t r = 0; r < rows.size() && disjoint; ++r) {
            Fq other = f.sub(full[r], part[r]);
            disjoint = part[r].is_zero() || other.is_zero();
        }
        if (disjoint) {
            return false;
        }
    }
    return true;
}

IrreducibleReport enumerate_irreducible(const CodeInstance &inst, std::size_t energy_cap,
                                        std::size_t box, std::uint64_t budget, bool keep_words) {
    if (inst.kind != CodeKind::classical) {
        throw ValidationError("enumerate_irreducible requires a classical instance");
    }
    if (!inst.is_lattice()) {
        throw ValidationError("enumerate_irreducible requires a lattice instance");
    }
    for (auto L : inst.shape) {
        if (box == 0 || box > L) {
            throw ValidationError("box side must lie in [1, L]");
        }
    }
    const SparseFqMatrix &h = inst.parity_check();
    std::vector<std::uint32_t> coords;
    for (std::size_t site = 0; site < inst.num_sites(); ++site) {
        auto x = inst.site_of(site);
        if (std::all_of(x.begin(), x.end(),
                        [&](std::int64_t v) { return static_cast<std::size_t>(v) < box; })) {
            for (std::uint32_t t = 0; t < inst.bits_per_site; ++t) {
                coords.push_back(inst.bit_index(x, t));
            }
        }
    }
    auto total = checked_power(inst.field.q(), coords.size());
    if (!total || *total > budget) {
        throw BudgetExceeded("enumerate_irreducible: " + std::to_string(inst.field.q()) + "^" +
                             std::to_string(coords.size()) + " words exceed budget " +
                             std::to_string(budget));
    }
    IrreducibleReport out;
    out.counts.assign(energy_cap + 1, 0);
    std::vector<SparseWord> basis;
    for (auto c : coords) {
        basis.push_back(SparseWord::from_entries(inst.n, {{c, inst.field.one()}}));
    }
    SpanEnumerator it(inst.field, inst.n, basis);
    while (it.next()) {
        ++out.visited;
        const Word &w = it.current();
        std::size_t e = h.syndrome_weight(w);
        if (e > energy_cap) {
            continue;
        }
        auto irr = is_irreducible(h, w);
        if (!irr) {
            ++out.undetermined;
        } else if (*irr) {
            ++out.counts[e];
            if (keep_words) {
                out.words.push_back(w);
            }
        }
    }
    return out;
}

double expansion_ratio(const SparseFqMatrix &h, std::span<const Fq> c, double nu) {
    std::size_t w = weight(c);
    if (w == 0) {
        throw ValidationError("expansion ratio undefined for the zero word");
    }
    return static_cast<double>(h.syndrome_weight(c)) / std::pow(static_cast<double>(w), nu);
}

std::vector<std::uint32_t> translation_roots(const CodeInstance &inst) {
    std::vector<std::uint32_t> roots;
    if (inst.is_lattice() && inst.boundary == Boundary::torus) {
        for (std::uint32_t t = 0; t < inst.bits_per_site; ++t) {
            roots.push_back(t);
        }
    } else {
        roots.resize(inst.n);
        std::iota(roots.begin(), roots.end(), 0u);
    }
    return roots;
}

ExpansionResult expansion_check(const SparseFqMatrix &h, double nu, std::size_t w_max,
                                const ExpansionOptions &opts) {
    const Field &f = h.field();
    const std::size_t n = h.cols();
    ExpansionResult out;
    out.exhaustive = true;
    if (w_max == 0 || n == 0) {
        return out;
    }
    // Share-a-check graph.
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t u = 0; u < n; ++u) {
        for (const auto &e : h.col(u)) {
            for (const auto &o : h.row(e.index)) {
                if (o.index != u) {
                    adj[u].push_back(o.index);
                }
            }
        }
        std::sort(adj[u].begin(), adj[u].end());
        adj[u].erase(std::unique(adj[u].begin(), adj[u].end()), adj[u].end());
    }
    std::vector<std::uint32_t> roots = opts.roots;
    if (roots.empty()) {
        roots.resize(n);
        std::iota(roots.begin(), roots.end(), 0u);
    }
    std::vector<char> excluded(n, 0);  // earlier roots
    std::vector<std::uint32_t> near(n, 0);
    std::vector<std::uint32_t> sub;
    Word syn(h.rows());
    Word word(n);
    std::vector<std::uint32_t> touched;

    auto evaluate = [&]() {
        const std::size_t k = sub.size();
        std::vector<std::uint32_t> val(k, 1);
        const double denom = std::pow(static_cast<double>(k), nu);
        while (true) {
            if (++out.visited > opts.budget) {
                throw BudgetExceeded("expansion_check exceeded budget of " +
                                     std::to_string(opts.budget) + " words");
            }
            touched.clear();
            for (std::size_t i = 0; i < k; ++i) {
                for (const auto &e : h.col(sub[i])) {
                    if (syn[e.index].is_zero()) {
                        touched.push_back(e.index);
                    }
                    syn[e.index] = f.add(syn[e.index], f.mul(e.value, Fq{val[i]}));
                }
            }
            std::size_t energy = 0;
            for (auto r : touched) {
                energy += syn[r].is_zero() ? 0 : 1;
            }
            for (std::size_t i = 0; i < k; ++i) {
                for (const auto &e : h.col(sub[i])) {
                    syn[e.index] = Fq{};
                }
            }
            double ratio = static_cast<double>(energy) / denom;
            if (!out.found || ratio < out.lambda_min) {
                out.found = true;
                out.lambda_min = ratio;
                out.witness.assign(n, Fq{});
                for (std::size_t i = 0; i < k; ++i) {
                    out.witness[sub[i]] = Fq{val[i]};
                }
                out.witness_weight = k;
                out.witness_energy = energy;
            }
            std::size_t i = 1;
            while (i < k && val[i] == f.q() - 1) {
                val[i] = 1;
                ++i;
            }
            if (i >= k) {
                break;
            }
            ++val[i];
        }
    };

    auto add = [&](std::uint32_t w) {
        sub.push_back(w);
        ++near[w];
        for (auto u : adj[w]) ++near[u];
    };
    auto remove = [&](std::uint32_t w) {
        sub.pop_back();
        --near[w];
        for (auto u : adj[w]) --near[u];
    };
    std::function<void(std::vector<std::uint32_t>)> extend = [&](std::vector<std::uint32_t> ext) {
        evaluate();
        if (sub.size() == w_max) {
            return;
        }
        while (!ext.empty()) {
            std::uint32_t w = ext.back();
            ext.pop_back();
            std::vector<std::uint32_t> ext2 = ext;
            for (auto u : adj[w]) {
                if (near[u] == 0 && !excluded[u]) {
                    ext2.push_back(u);
                }
            }
            add(w);
            extend(std::move(ext2));
            remove(w);
        }
    };
    for (auto r : roots) {
        if (r >= n) {
            throw ValidationError("expansion root out of range");
        }
        add(r);
        std::vector<std::uint32_t> ext;
        for (auto u : adj[r]) {
            if (!excluded[u]) {
                ext.push_back(u);
            }
        }
        extend(std::move(ext));
        remove(r);
        excluded[r] = 1;
    }
    return out;
}

ExpansionResult expansion_anneal(const SparseFqMatrix &h, double nu, std::size_t w_min,
                                 std::uint64_t steps, std::uint64_t seed) {
    const Field &f = h.field();
    const std::size_t n = h.cols();
    ExpansionResult out;
    out.exhaustive = false;
    if (n == 0) {
        return out;
    }
    w_min = std::max<std::size_t>(1, std::min(w_min, n));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SyndromeTracker t(h);
    for (std::size_t i = 0; i < w_min; ++i) {
        std::uint32_t k;
        do {
            k = static_cast<std::uint32_t>(rng() % n);
        } while (!t.word()[k].is_zero());
        t.set(k, Fq{static_cast<std::uint32_t>(1 + rng() % (f.q() - 1))});
    }
    auto ratio_of = [&](std::size_t e, std::size_t w) {
        return static_cast<double>(e) / std::pow(static_cast<double>(w), nu);
    };
    auto record = [&]() {
        double r = ratio_of(t.energy(), t.word_weight());
        if (!out.found || r < out.lambda_min) {
            out.found = true;
            out.lambda_min = r;
            out.witness = t.word();
            out.witness_weight = t.word_weight();
            out.witness_energy = t.energy();
        }
    };
    record();
    const double t0 = 1.0, t1 = 1e-3;
    for (std::uint64_t s = 0; s < steps; ++s) {
        ++out.visited;
        double temp = t0 * std::pow(t1 / t0, static_cast<double>(s) / std::max<std::uint64_t>(1, steps));
        auto k = static_cast<std::uint32_t>(rng() % n);
        Fq v{static_cast<std::uint32_t>(rng() % f.q())};
        if (v == t.word()[k]) {
            continue;
        }
        std::size_t w2 = t.word_weight() + (v.is_zero() ? 0 : 1) - (t.word()[k].is_zero() ? 0 : 1);
        if (w2 < w_min) {
            continue;
        }
        double cur = ratio_of(t.energy(), t.word_weight());
        double next = ratio_of(t.energy_if(k, v), w2);
        if (next <= cur || unif(rng) < std::exp((cur - next) / temp)) {
            t.set(k, v);
            record();
        }
    }
    return out;
}

std::pair<QuantumExpansionSide, QuantumExpansionSide> quantum_expansion_ratio(
    const SparseFqMatrix &delta0, const SparseFqMatrix &delta1, std::span<const Fq> c, double nu,
    std::uint64_t coset_budget) {
    SparseFqMatrix d0t = delta0.transpose();
    CosetSearcher image0(d0t, coset_budget);
    CosetSearcher image1(delta1, coset_budget);
    auto side = [&](const SparseFqMatrix &map, const CosetSearcher &coset) {
        QuantumExpansionSide s;
        auto r = coset.search(c);
        s.exact_cosets = r.exact;
        s.reduced_weight = r.weight;
        s.syndrome_weight = map.syndrome_weight(c);
        s.witness.assign(c.begin(), c.end());
        if (r.weight > 0) {
            s.found = true;
            s.lambda_min = static_cast<double>(s.syndrome_weight) /
                           std::pow(static_cast<double>(r.weight), nu);
        }
        return s;
    };
    return {side(delta1, image0), side(d0t, image1)};
}

QuantumExpansionReport quantum_expansion_check(const SparseFqMatrix &delta0,
                                               const SparseFqMatrix &delta1, double nu,
                                               std::size_t w_max, std::uint64_t budget,
                                               std::uint64_t coset_budget) {
    if (delta0.rows() != delta1.cols()) {
        throw ValidationError("delta0 and delta1 do not compose");
    }
    const std::size_t n = delta1.cols();
    SparseFqMatrix d0t = delta0.transpose();
    CosetSearcher image0(d0t, coset_budget);
    CosetSearcher image1(delta1, coset_budget);
    QuantumExpansionReport out;
    out.exhaustive = true;
    out.delta.exact_cosets = image0.exact();
    out.boundary.exact_cosets = image1.exact();
    auto update = [&](QuantumExpansionSide &side, const SparseFqMatrix &map,
                      const CosetSearcher &coset, const Word &c) {
        auto r = coset.search(c);
        if (r.weight == 0) {
            return;
        }
        std::size_t syn = map.syndrome_weight(c);
        double ratio = static_cast<double>(syn) / std::pow(static_cast<double>(r.weight), nu);
        if (!side.found || ratio < side.lambda_min) {
            side.found = true;
            side.lambda_min = ratio;
            side.witness = c;
            side.reduced_weight = r.weight;
            side.syndrome_weight = syn;
        }
    };
    for (std::size_t w = 1; w <= std::min(w_max, n); ++w) {
        for_each_normalized_word(delta1.field(), n, w, [&](const Word &c) {
            if (++out.visited > budget) {
                throw BudgetExceeded("quantum_expansion_check exceeded budget of " +
                                     std::to_string(budget) + " words");
            }
            update(out.delta, delta1, image0, c);
            update(out.boundary, d0t, image1, c);
            return true;
        });
    }
    return out;
}

}  // namespace selfcorr
