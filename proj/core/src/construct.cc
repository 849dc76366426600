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

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "selfcorr/dynamics.h"

namespace selfcorr {

namespace {

bool kept_digit(std::int64_t a, std::int64_t b, std::int64_t A) {
    return a == 0 || a == A - 1 || b == 0 || b == A - 1;
}

double distance(const Point &a, const Point &b) {
    if (a.size() != b.size()) {
        throw std::logic_error("points of different dimension");
    }
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a[i] - b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

Point concat(const Point &a, const Point &b) {
    Point out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

double PrefractalRegion::dimension() const {
    return std::log(static_cast<double>(4 * A - 4)) / std::log(static_cast<double>(A));
}

bool PrefractalRegion::contains(std::int64_t x, std::int64_t y) const {
    if (x < 0 || y < 0 || x >= side || y >= side) {
        return false;
    }
    for (std::uint32_t k = 0; k < level; ++k) {
        if (!kept_digit(x % A, y % A, A)) {
            return false;
        }
        x /= A;
        y /= A;
    }
    return true;
}

void PrefractalRegion::write_text(std::ostream &out) const {
    out << "carpet " << A << " " << level << " " << squares.size() << "\n";
    for (const auto &s : squares) {
        out << s[0] << " " << s[1] << "\n";
    }
}

PrefractalRegion PrefractalRegion::read_text(std::istream &in) {
    std::string tag;
    std::uint32_t A = 0, level = 0;
    std::size_t count = 0;
    if (!(in >> tag >> A >> level >> count) || tag != "carpet") {
        throw ValidationError("region file: expected 'carpet A level count' header");
    }
    PrefractalRegion r = carpet(A, level);
    std::vector<Point> read;
    for (std::size_t i = 0; i < count; ++i) {
        std::int64_t x, y;
        if (!(in >> x >> y)) {
            throw ValidationError("region file: truncated square list");
        }
        read.push_back({x, y});
    }
    std::sort(read.begin(), read.end());
    if (read != r.squares) {
        throw ValidationError("region file: squares do not match the carpet construction");
    }
    return r;
}

std::uint64_t carpet_count(std::uint32_t A, std::uint32_t level) {
    std::uint64_t c = 1;
    for (std::uint32_t i = 0; i < level; ++i) {
        c *= 4ull * A - 4;
    }
    return c;
}

PrefractalRegion carpet(std::uint32_t A, std::uint32_t level) {
    if (A < 3) {
        throw ValidationError("carpet: A must be at least 3");
    }
    double log_count = static_cast<double>(level) * std::log2(4.0 * A - 4.0);
    if (log_count > 26) {
        throw ValidationError("carpet: region too large (more than 2^26 squares)");
    }
    PrefractalRegion r;
    r.A = A;
    r.level = level;
    r.squares = {{0, 0}};
    std::vector<std::pair<std::int64_t, std::int64_t>> kept;
    for (std::int64_t a = 0; a < A; ++a) {
        for (std::int64_t b = 0; b < A; ++b) {
            if (kept_digit(a, b, A)) {
                kept.emplace_back(a, b);
            }
        }
    }
    for (std::uint32_t i = 0; i < level; ++i) {
        std::vector<Point> next;
        next.reserve(r.squares.size() * kept.size());
        for (const auto &s : r.squares) {
            for (auto [a, b] : kept) {
                next.push_back({s[0] * A + a, s[1] * A + b});
            }
        }
        r.squares = std::move(next);
        r.side *= A;
    }
    std::sort(r.squares.begin(), r.squares.end());
    return r;
}

EmbeddedCode random_local_code(const PrefractalRegion &region, const Field &field,
                               const RandomCodeOptions &opts) {
    if (opts.bits_per_square == 0 || opts.checks_per_square == 0) {
        throw ValidationError("random_local_code: bits_per_square and checks_per_square must be positive");
    }
    if (opts.check_weight < 2) {
        throw ValidationError("random_local_code: check_weight must be at least 2");
    }
    if (opts.max_bit_degree == 0 || opts.radius < 0) {
        throw ValidationError("random_local_code: max_bit_degree must be positive and radius non-negative");
    }
    const std::size_t squares = region.count();
    const std::size_t n = squares * opts.bits_per_square;
    const std::size_t m = squares * opts.checks_per_square;
    if (m * opts.check_weight < n) {
        throw ValidationError("random_local_code: too few check slots to cover every bit");
    }
    if (m * opts.check_weight > n * opts.max_bit_degree) {
        throw ValidationError("random_local_code: check slots exceed the bit degree bound");
    }

    std::map<Point, std::uint32_t> square_index;
    for (std::uint32_t s = 0; s < squares; ++s) {
        square_index.emplace(region.squares[s], s);
    }
    // Squares within the radius of each square (the relation is symmetric).
    const auto reach = static_cast<std::int64_t>(std::floor(opts.radius));
    std::vector<std::vector<std::uint32_t>> near(squares);
    for (std::uint32_t s = 0; s < squares; ++s) {
        const auto &p = region.squares[s];
        for (std::int64_t dx = -reach; dx <= reach; ++dx) {
            for (std::int64_t dy = -reach; dy <= reach; ++dy) {
                if (static_cast<double>(dx * dx + dy * dy) > opts.radius * opts.radius + 1e-9) {
                    continue;
                }
                auto it = square_index.find(Point{p[0] + dx, p[1] + dy});
                if (it != square_index.end()) {
                    near[s].push_back(it->second);
                }
            }
        }
        std::sort(near[s].begin(), near[s].end());
        if (near[s].size() * opts.bits_per_square < opts.check_weight) {
            throw ValidationError("random_local_code: radius too small for the check weight");
        }
    }

    Rng rng(opts.seed);
    auto check_square = [&](std::size_t c) { return c / opts.checks_per_square; };
    auto candidates = [&](std::size_t c) {
        std::vector<std::uint32_t> out;
        for (auto s : near[check_square(c)]) {
            for (std::size_t k = 0; k < opts.bits_per_square; ++k) {
                out.push_back(static_cast<std::uint32_t>(s * opts.bits_per_square + k));
            }
        }
        return out;
    };
    std::vector<std::vector<Entry>> rows(m);
    auto sample = [&](std::size_t c, std::optional<std::uint32_t> forced) {
        auto pool = candidates(c);
        std::vector<std::uint32_t> chosen;
        if (forced) {
            chosen.push_back(*forced);
            pool.erase(std::find(pool.begin(), pool.end(), *forced));
        }
        while (chosen.size() < opts.check_weight) {
            std::size_t j = rng.below(pool.size());
            chosen.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
        }
        std::sort(chosen.begin(), chosen.end());
        rows[c].clear();
        for (auto b : chosen) {
            rows[c].push_back({b, Fq{static_cast<std::uint32_t>(1 + rng.below(field.q() - 1))}});
        }
    };
    for (std::size_t c = 0; c < m; ++c) {
        sample(c, std::nullopt);
    }

    std::size_t retries = 0;
    auto spend = [&] {
        if (++retries > opts.max_retries) {
            throw ValidationError("random_local_code: retry cap exceeded; parameters infeasible");
        }
    };
    while (true) {
        bool changed = false;
        std::vector<std::vector<std::uint32_t>> checks_of(n);
        for (std::uint32_t c = 0; c < m; ++c) {
            for (const auto &e : rows[c]) checks_of[e.index].push_back(c);
        }
        for (std::uint32_t b = 0; b < n; ++b) {
            if (checks_of[b].empty()) {
                // Resample a nearby check so that it includes b.
                std::vector<std::uint32_t> nearby;
                for (auto s : near[b / opts.bits_per_square]) {
                    for (std::size_t k = 0; k < opts.checks_per_square; ++k) {
                        nearby.push_back(static_cast<std::uint32_t>(s * opts.checks_per_square + k));
                    }
                }
                spend();
                sample(nearby[rng.below(nearby.size())], b);
                changed = true;
            } else if (checks_of[b].size() > opts.max_bit_degree) {
                spend();
                sample(checks_of[b][rng.below(checks_of[b].size())], std::nullopt);
                changed = true;
            }
            if (changed) break;
        }
        if (!changed) {
            std::map<std::vector<std::pair<std::uint32_t, std::uint32_t>>, std::uint32_t> seen;
            for (std::uint32_t c = 0; c < m && !changed; ++c) {
                // Compare supports with the values normalized so the leading one is 1.
                std::vector<std::pair<std::uint32_t, std::uint32_t>> key;
                Fq inv = field.inv(rows[c][0].value);
                for (const auto &e : rows[c]) key.emplace_back(e.index, field.mul(e.value, inv).rep);
                if (!seen.emplace(key, c).second) {
                    spend();
                    sample(c, std::nullopt);
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    TannerSpec spec;
    spec.bits = n;
    spec.checks = m;
    for (std::uint32_t c = 0; c < m; ++c) {
        for (const auto &e : rows[c]) spec.edges.push_back({c, e.index, e.value.rep});
    }
    EmbeddedCode out{classical_from_tanner(spec, field), {}, {}, {}, opts.radius,
                     5 * (opts.bits_per_square + opts.checks_per_square)};
    out.code.provenance = "random_local_code(A=" + std::to_string(region.A) +
                          ",level=" + std::to_string(region.level) +
                          ",seed=" + std::to_string(opts.seed) + ")";
    for (std::size_t b = 0; b < n; ++b) out.bit_pos.push_back(region.squares[b / opts.bits_per_square]);
    for (std::size_t c = 0; c < m; ++c) out.hx_pos.push_back(region.squares[check_square(c)]);
    return out;
}

LocalityReport locality_check(const EmbeddedCode &code) {
    const auto &inst = code.code;
    if (code.bit_pos.size() != inst.n || code.hx_pos.size() != inst.hx.rows() ||
        code.hz_pos.size() != inst.hz.rows()) {
        throw ValidationError("locality_check: embedding does not cover every bit and check");
    }
    LocalityReport rep;
    auto scan = [&](const SparseFqMatrix &h, const std::vector<Point> &pos, char sector) {
        for (std::uint32_t r = 0; r < h.rows(); ++r) {
            for (const auto &e : h.row(r)) {
                double d = distance(pos[r], code.bit_pos[e.index]);
                rep.max_distance = std::max(rep.max_distance, d);
                if (d > code.radius + 1e-9) {
                    rep.violations.push_back({sector, r, e.index, d});
                }
            }
        }
    };
    scan(inst.hx, code.hx_pos, 'x');
    scan(inst.hz, code.hz_pos, 'z');
    // Points are integral, so the closed unit ball around p holds p and its 2D unit neighbours.
    std::map<Point, std::size_t> at;
    for (const auto *v : {&code.bit_pos, &code.hx_pos, &code.hz_pos}) {
        for (const auto &p : *v) ++at[p];
    }
    for (const auto &[p, count] : at) {
        std::size_t pop = count;
        Point q = p;
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (int s : {-1, 1}) {
                q[a] = p[a] + s;
                auto it = at.find(q);
                if (it != at.end()) pop += it->second;
            }
            q[a] = p[a];
        }
        rep.max_population = std::max(rep.max_population, pop);
    }
    rep.pass = rep.violations.empty() &&
               (code.population_cap == 0 || rep.max_population <= code.population_cap);
    return rep;
}

bool ChainComplex3::is_complex() const { return delta1.multiply(delta0).is_zero(); }

CodeInstance ChainComplex3::to_instance(std::string provenance) const {
    return quantum_from_matrices(delta1, delta0.transpose(), std::move(provenance));
}

ChainComplex3 hypergraph_product(const SparseFqMatrix &h1, const SparseFqMatrix &h2) {
    if (!(h1.field() == h2.field())) {
        throw ValidationError("hypergraph_product: field mismatch");
    }
    const Field &f = h1.field();
    auto i_n1 = SparseFqMatrix::identity(f, h1.cols());
    auto i_n2 = SparseFqMatrix::identity(f, h2.cols());
    auto i_m1 = SparseFqMatrix::identity(f, h1.rows());
    auto i_m2 = SparseFqMatrix::identity(f, h2.rows());
    ChainComplex3 cx{vstack(kron(i_n1, h2), kron(h1, i_n2)),
                     hstack(kron(h1, i_m2), negated(kron(i_m1, h2)))};
    if (!cx.is_complex()) {
        throw std::logic_error("hypergraph_product: delta1 delta0 != 0");
    }
    return cx;
}

EmbeddedCode hypergraph_product_embedded(const EmbeddedCode &c1, const EmbeddedCode &c2) {
    if (c1.code.kind != CodeKind::classical || c2.code.kind != CodeKind::classical) {
        throw ValidationError("product embedding needs two classical codes");
    }
    const auto &h1 = c1.code.hx;
    const auto &h2 = c2.code.hx;
    auto cx = hypergraph_product(h1, h2);
    EmbeddedCode out{cx.to_instance("hypergraph_product(" + c1.code.provenance + ", " +
                                    c2.code.provenance + ")"),
                     {}, {}, {}, std::max(c1.radius, c2.radius),
                     c1.population_cap * c2.population_cap};
    const std::size_t n1 = h1.cols(), m1 = h1.rows(), n2 = h2.cols(), m2 = h2.rows();
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < m2; ++b) out.bit_pos.push_back(concat(c1.bit_pos[a], c2.hx_pos[b]));
    }
    for (std::size_t a = 0; a < m1; ++a) {
        for (std::size_t b = 0; b < n2; ++b) out.bit_pos.push_back(concat(c1.hx_pos[a], c2.bit_pos[b]));
    }
    for (std::size_t a = 0; a < m1; ++a) {
        for (std::size_t b = 0; b < m2; ++b) out.hx_pos.push_back(concat(c1.hx_pos[a], c2.hx_pos[b]));
    }
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n2; ++b) out.hz_pos.push_back(concat(c1.bit_pos[a], c2.bit_pos[b]));
    }
    return out;
}

EmbeddedCode embed_on_line(CodeInstance code, double radius) {
    EmbeddedCode out{std::move(code), {}, {}, {}, radius, 0};
    for (std::size_t i = 0; i < out.code.n; ++i) out.bit_pos.push_back({static_cast<std::int64_t>(i)});
    for (std::size_t j = 0; j < out.code.hx.rows(); ++j) out.hx_pos.push_back({static_cast<std::int64_t>(j)});
    for (std::size_t j = 0; j < out.code.hz.rows(); ++j) out.hz_pos.push_back({static_cast<std::int64_t>(j)});
    return out;
}

namespace {

// Tanner graph with vertex types 0 (bit), 1 (hx row), 2 (hz row) and field-valued edge labels.
struct ColouredGraph {
    std::size_t n = 0, rx = 0, rz = 0;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj;  // (neighbour, label)
    std::vector<std::uint32_t> type;
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;

    ColouredGraph(const CodeInstance &c, bool swap) : n(c.n) {
        const SparseFqMatrix &first = swap ? c.hz : c.hx;
        const SparseFqMatrix &second = swap ? c.hx : c.hz;
        rx = first.rows();
        rz = second.rows();
        adj.resize(n + rx + rz);
        type.assign(n, 0);
        type.resize(n + rx, 1);
        type.resize(n + rx + rz, 2);
        auto add = [&](const SparseFqMatrix &h, std::size_t base) {
            for (std::uint32_t r = 0; r < h.rows(); ++r) {
                auto v = static_cast<std::uint32_t>(base + r);
                for (const auto &e : h.row(r)) {
                    adj[v].emplace_back(e.index, e.value.rep);
                    adj[e.index].emplace_back(v, e.value.rep);
                    edges.emplace(v, e.index, e.value.rep);
                }
            }
        };
        add(first, n);
        add(second, n + rx);
    }
    std::size_t size() const { return adj.size(); }
};

using Colouring = std::vector<std::uint32_t>;

// Joint colour refinement; colours are canonical across the two graphs.
bool refine(const ColouredGraph &ga, const ColouredGraph &gb, Colouring &ca, Colouring &cb) {
    using Sig = std::pair<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>>;
    std::size_t classes = std::set<std::uint32_t>(ca.begin(), ca.end()).size();
    while (true) {
        auto sig = [](const ColouredGraph &g, const Colouring &c, std::uint32_t v) {
            Sig s{c[v], {}};
            for (auto [u, label] : g.adj[v]) s.second.emplace_back(label, c[u]);
            std::sort(s.second.begin(), s.second.end());
            return s;
        };
        std::vector<Sig> sa(ga.size()), sb(gb.size());
        std::map<Sig, std::uint32_t> ids;
        for (std::uint32_t v = 0; v < ga.size(); ++v) ids.emplace(sa[v] = sig(ga, ca, v), 0);
        for (std::uint32_t v = 0; v < gb.size(); ++v) ids.emplace(sb[v] = sig(gb, cb, v), 0);
        std::uint32_t next = 0;
        for (auto &[s, id] : ids) id = next++;
        for (std::uint32_t v = 0; v < ga.size(); ++v) ca[v] = ids[sa[v]];
        for (std::uint32_t v = 0; v < gb.size(); ++v) cb[v] = ids[sb[v]];
        std::vector<std::size_t> ha(next, 0), hb(next, 0);
        for (auto c : ca) ++ha[c];
        for (auto c : cb) ++hb[c];
        if (ha != hb) {
            return false;
        }
        if (next == classes) {
            return true;
        }
        classes = next;
    }
}

bool search(const ColouredGraph &ga, const ColouredGraph &gb, Colouring ca, Colouring cb,
            std::vector<std::uint32_t> &mapping) {
    if (!refine(ga, gb, ca, cb)) {
        return false;
    }
    std::map<std::uint32_t, std::vector<std::uint32_t>> class_a, class_b;
    for (std::uint32_t v = 0; v < ga.size(); ++v) class_a[ca[v]].push_back(v);
    for (std::uint32_t v = 0; v < gb.size(); ++v) class_b[cb[v]].push_back(v);
    const std::vector<std::uint32_t> *target = nullptr;
    std::uint32_t target_colour = 0;
    for (const auto &[c, vs] : class_a) {
        if (vs.size() > 1 && (target == nullptr || vs.size() < target->size())) {
            target = &vs;
            target_colour = c;
        }
    }
    if (target == nullptr) {
        mapping.assign(ga.size(), 0);
        for (const auto &[c, vs] : class_a) mapping[vs[0]] = class_b[c][0];
        for (const auto &[v, u, label] : ga.edges) {
            if (!gb.edges.count({mapping[v], mapping[u], label})) {
                return false;
            }
        }
        return true;
    }
    const std::uint32_t fresh = static_cast<std::uint32_t>(ga.size() + gb.size());
    const std::uint32_t v = target->front();
    for (auto w : class_b[target_colour]) {
        Colouring na = ca, nb = cb;
        na[v] = fresh;
        nb[w] = fresh;
        if (search(ga, gb, std::move(na), std::move(nb), mapping)) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<CssEquivalence> css_equivalence(const CodeInstance &a, const CodeInstance &b,
                                              bool allow_swap) {
    if (!(a.field == b.field) || a.n != b.n) {
        return std::nullopt;
    }
    ColouredGraph ga(a, false);
    for (bool swap : {false, true}) {
        if (swap && !allow_swap) {
            break;
        }
        ColouredGraph gb(b, swap);
        if (ga.rx != gb.rx || ga.rz != gb.rz || ga.edges.size() != gb.edges.size()) {
            continue;
        }
        std::vector<std::uint32_t> mapping;
        if (search(ga, gb, ga.type, gb.type, mapping)) {
            CssEquivalence eq;
            eq.swapped = swap;
            for (std::size_t i = 0; i < a.n; ++i) eq.bits.push_back(mapping[i]);
            for (std::size_t r = 0; r < ga.rx; ++r) {
                eq.hx_rows.push_back(static_cast<std::uint32_t>(mapping[a.n + r] - a.n));
            }
            for (std::size_t r = 0; r < ga.rz; ++r) {
                eq.hz_rows.push_back(static_cast<std::uint32_t>(mapping[a.n + ga.rx + r] - a.n - gb.rx));
            }
            return eq;
        }
    }
    return std::nullopt;
}

bool verify_equivalence(const CodeInstance &a, const CodeInstance &b, const CssEquivalence &eq) {
    auto permute = [&](const SparseFqMatrix &h, const std::vector<std::uint32_t> &rows) {
        std::vector<Triplet> t;
        for (const auto &x : h.triplets()) t.push_back({rows.at(x.row), eq.bits.at(x.col), x.value});
        return SparseFqMatrix::from_triplets(h.field(), h.rows(), h.cols(), t);
    };
    if (eq.bits.size() != a.n || eq.hx_rows.size() != a.hx.rows() || eq.hz_rows.size() != a.hz.rows()) {
        return false;
    }
    const SparseFqMatrix &bx = eq.swapped ? b.hz : b.hx;
    const SparseFqMatrix &bz = eq.swapped ? b.hx : b.hz;
    return permute(a.hx, eq.hx_rows) == bx && permute(a.hz, eq.hz_rows) == bz;
}

ChainComplex3 holes_fixture(std::size_t length, std::size_t detour, std::size_t path_length,
                            const Field &field) {
    if (length < 4) {
        throw ValidationError("holes_fixture: length must be at least 4");
    }
    auto c1 = classical_from_tanner(path_with_parallel_segment(length, 1, length - 2, detour), field);
    auto c2 = classical_from_tanner(path_tanner(path_length), field);
    return hypergraph_product(c1.hx, c2.hx);
}

}  // namespace selfcorr
