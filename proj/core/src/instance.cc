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

#include "selfcorr/instance.h"

#include <algorithm>
#include <cstdlib>

namespace selfcorr {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Calls fn(site) for every site in the product of [lo_i, hi_i), first axis fastest.
template <typename Fn>
void for_each_site(const std::vector<std::int64_t> &lo, const std::vector<std::int64_t> &hi,
                   Fn &&fn) {
    std::size_t dim = lo.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (lo[i] >= hi[i]) {
            return;
        }
    }
    std::vector<std::int64_t> s = lo;
    while (true) {
        fn(s);
        std::size_t axis = 0;
        while (axis < dim) {
            if (++s[axis] < hi[axis]) {
                break;
            }
            s[axis] = lo[axis];
            ++axis;
        }
        if (axis == dim) {
            return;
        }
    }
}

struct CheckBuild {
    std::vector<Triplet> triplets;
    std::vector<SiteRef> checks;
};

// Column j of `m` describes check type j; `sign` is +1 when the check at s touches s + v and
// -1 when it touches s - v.
CheckBuild build_checks(const CodeInstance &inst, const PolyMatrix &m, int sign) {
    CheckBuild out;
    const std::size_t dim = inst.shape.size();
    if (inst.boundary == Boundary::torus) {
        std::vector<std::int64_t> lo(dim, 0);
        std::vector<std::int64_t> hi(inst.shape.begin(), inst.shape.end());
        for_each_site(lo, hi, [&](const std::vector<std::int64_t> &s) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                auto check = static_cast<std::uint32_t>(out.checks.size());
                out.checks.push_back({s, static_cast<std::uint32_t>(j)});
                for (std::size_t i = 0; i < m.rows(); ++i) {
                    for (const auto &[mono, c] : m.at(i, j).terms()) {
                        std::vector<std::int64_t> t = s;
                        for (std::size_t a = 0; a < dim; ++a) {
                            t[a] += sign * mono.exps[a];
                        }
                        out.triplets.push_back(
                            {check, inst.bit_index(t, static_cast<std::uint32_t>(i)), c});
                    }
                }
            }
        });
        return out;
    }
    // Open interior: scan every site whose check could land inside the box.
    std::int64_t reach = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            for (const auto &[mono, c] : m.at(i, j).terms()) {
                for (auto e : mono.exps) {
                    reach = std::max(reach, std::abs(e));
                }
            }
        }
    }
    std::vector<std::int64_t> lo(dim, -reach);
    std::vector<std::int64_t> hi(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        hi[a] = static_cast<std::int64_t>(inst.shape[a]) + reach;
    }
    for_each_site(lo, hi, [&](const std::vector<std::int64_t> &s) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            bool inside = true;
            bool any = false;
            for (std::size_t i = 0; i < m.rows() && inside; ++i) {
                for (const auto &[mono, c] : m.at(i, j).terms()) {
                    any = true;
                    for (std::size_t a = 0; a < dim; ++a) {
                        std::int64_t t = s[a] + sign * mono.exps[a];
                        if (t < 0 || t >= static_cast<std::int64_t>(inst.shape[a])) {
                            inside = false;
                            break;
                        }
                    }
                    if (!inside) {
                        break;
                    }
                }
            }
            if (!inside || !any) {
                continue;
            }
            auto check = static_cast<std::uint32_t>(out.checks.size());
            out.checks.push_back({s, static_cast<std::uint32_t>(j)});
            for (std::size_t i = 0; i < m.rows(); ++i) {
                for (const auto &[mono, c] : m.at(i, j).terms()) {
                    std::vector<std::int64_t> t = s;
                    for (std::size_t a = 0; a < dim; ++a) {
                        t[a] += sign * mono.exps[a];
                    }
                    out.triplets.push_back(
                        {check, inst.bit_index(t, static_cast<std::uint32_t>(i)), c});
                }
            }
        }
    });
    return out;
}

std::int64_t max_span(const PolyMatrix &m) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        // Span of one check: union of exponent boxes over its column.
        std::vector<std::pair<std::int64_t, std::int64_t>> box;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            auto b = m.at(i, j).exponent_box();
            if (b.empty()) {
                continue;
            }
            if (box.empty()) {
                box = b;
            }
            for (std::size_t a = 0; a < b.size(); ++a) {
                box[a].first = std::min(box[a].first, b[a].first);
                box[a].second = std::max(box[a].second, b[a].second);
            }
        }
        for (auto [lo, hi] : box) {
            s = std::max(s, hi - lo);
        }
    }
    return s;
}

}  // namespace

const char *to_string(Boundary b) {
    switch (b) {
        case Boundary::torus:
            return "torus";
        case Boundary::open_interior:
            return "open-interior";
        case Boundary::none:
            return "none";
    }
    return "?";
}

Boundary boundary_from_string(const std::string &s) {
    if (s == "torus") {
        return Boundary::torus;
    }
    if (s == "open-interior" || s == "open_interior" || s == "open") {
        return Boundary::open_interior;
    }
    throw ValidationError("unknown boundary condition '" + s + "'");
}

const SparseFqMatrix &CodeInstance::parity_check() const {
    if (kind != CodeKind::classical) {
        throw ValidationError("parity_check() requires a classical instance");
    }
    return hx;
}

std::size_t CodeInstance::num_sites() const {
    std::size_t s = 1;
    for (auto l : shape) {
        s *= l;
    }
    return s;
}

std::uint32_t CodeInstance::site_index(const std::vector<std::int64_t> &site) const {
    std::size_t idx = 0;
    for (std::size_t a = shape.size(); a-- > 0;) {
        auto l = static_cast<std::int64_t>(shape[a]);
        std::int64_t c = site[a];
        if (boundary == Boundary::torus) {
            c = mod(c, l);
        } else if (c < 0 || c >= l) {
            throw ValidationError("site outside the open box");
        }
        idx = idx * shape[a] + static_cast<std::size_t>(c);
    }
    return static_cast<std::uint32_t>(idx);
}

std::uint32_t CodeInstance::bit_index(const std::vector<std::int64_t> &site,
                                      std::uint32_t type) const {
    return static_cast<std::uint32_t>(site_index(site) * bits_per_site + type);
}

std::vector<std::int64_t> CodeInstance::site_of(std::size_t idx) const {
    std::vector<std::int64_t> s(shape.size());
    for (std::size_t a = 0; a < shape.size(); ++a) {
        s[a] = static_cast<std::int64_t>(idx % shape[a]);
        idx /= shape[a];
    }
    return s;
}

CodeInstance instantiate(const TransInvCode &code, std::size_t L, Boundary bc) {
    return instantiate(code, std::vector<std::size_t>(code.dim, L), bc);
}

CodeInstance instantiate(const TransInvCode &code, const std::vector<std::size_t> &shape,
                         Boundary bc) {
    if (shape.size() != code.dim) {
        throw ValidationError("shape has " + std::to_string(shape.size()) + " axes, code has D=" +
                              std::to_string(code.dim));
    }
    for (auto l : shape) {
        if (l < 2) {
            throw ValidationError("lattice side must be >= 2");
        }
    }
    if (bc == Boundary::none) {
        throw ValidationError("instantiate requires torus or open-interior boundary");
    }
    if (bc == Boundary::open_interior) {
        std::int64_t span = 0;
        if (code.kind == CodeKind::quantum) {
            span = std::max(max_span(*code.h_x), max_span(*code.h_z));
        } else {
            span = max_span(*code.h);
        }
        for (auto l : shape) {
            if (static_cast<std::int64_t>(l) <= span) {
                throw ValidationError("open-interior side " + std::to_string(l) +
                                      " must exceed the check span " + std::to_string(span));
            }
        }
    }

    const std::size_t per_site = code.bits_per_site();
    std::size_t sites = 1;
    for (auto l : shape) {
        sites *= l;
    }
    CodeInstance inst(code.field, sites * per_site, SparseFqMatrix(code.field, 0, 0),
                      SparseFqMatrix(code.field, 0, 0));
    inst.kind = code.kind;
    inst.boundary = bc;
    inst.shape = shape;
    inst.bits_per_site = per_site;
    inst.bits.reserve(inst.n);
    for (std::size_t s = 0; s < sites; ++s) {
        auto site = inst.site_of(s);
        for (std::size_t t = 0; t < per_site; ++t) {
            inst.bits.push_back({site, static_cast<std::uint32_t>(t)});
        }
    }
    std::string shape_text;
    for (std::size_t a = 0; a < shape.size(); ++a) {
        shape_text += (a ? "x" : "") + std::to_string(shape[a]);
    }
    inst.provenance = code.family + " L=" + shape_text + " " + to_string(bc);

    if (code.kind == CodeKind::quantum) {
        CheckBuild z = build_checks(inst, *code.h_z, +1);
        CheckBuild x = build_checks(inst, *code.h_x, +1);
        inst.hx = SparseFqMatrix::from_triplets(code.field, z.checks.size(), inst.n, z.triplets);
        inst.hz = SparseFqMatrix::from_triplets(code.field, x.checks.size(), inst.n, x.triplets);
        inst.hx_checks = std::move(z.checks);
        inst.hz_checks = std::move(x.checks);
    } else {
        CheckBuild c = build_checks(inst, *code.h, -1);
        inst.hx = SparseFqMatrix::from_triplets(code.field, c.checks.size(), inst.n, c.triplets);
        inst.hz = SparseFqMatrix(code.field, 0, inst.n);
        inst.hx_checks = std::move(c.checks);
    }
    return inst;
}

CodeInstance classical_from_tanner(const TannerSpec &spec, const Field &field) {
    std::vector<Triplet> t;
    t.reserve(spec.edges.size());
    for (const auto &e : spec.edges) {
        if (e.coeff == 0 || e.coeff >= field.q()) {
            throw ValidationError("Tanner edge coefficient " + std::to_string(e.coeff) +
                                  " must be a nonzero element of " + field.describe());
        }
        t.push_back({e.check, e.bit, Fq{e.coeff}});
    }
    auto h = SparseFqMatrix::from_triplets(field, spec.checks, spec.bits, t,
                                           DuplicatePolicy::reject_conflict);
    CodeInstance inst(field, spec.bits, std::move(h), SparseFqMatrix(field, 0, spec.bits));
    inst.kind = CodeKind::classical;
    inst.provenance = "tanner n=" + std::to_string(spec.bits) + " m=" + std::to_string(spec.checks);
    return inst;
}

CodeInstance quantum_from_matrices(SparseFqMatrix hx, SparseFqMatrix hz, std::string provenance) {
    if (hx.cols() != hz.cols()) {
        throw ValidationError("hx and hz must have the same number of columns");
    }
    if (!hx.multiply_transpose(hz).is_zero()) {
        throw ValidationError("hx hz^T != 0");
    }
    Field f = hx.field();
    std::size_t n = hx.cols();
    CodeInstance inst(f, n, std::move(hx), std::move(hz));
    inst.kind = CodeKind::quantum;
    inst.provenance = std::move(provenance);
    return inst;
}

Word translate_bits(const CodeInstance &inst, std::span<const Fq> word,
                    const std::vector<std::int64_t> &offset) {
    if (inst.boundary != Boundary::torus) {
        throw ValidationError("translations require a torus instance");
    }
    Word out(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) {
        auto site = inst.bits[i].site;
        for (std::size_t a = 0; a < site.size(); ++a) {
            site[a] += offset[a];
        }
        out[inst.bit_index(site, inst.bits[i].type)] = word[i];
    }
    return out;
}

Word translate_hx_checks(const CodeInstance &inst, std::span<const Fq> syndrome,
                         const std::vector<std::int64_t> &offset) {
    if (inst.boundary != Boundary::torus) {
        throw ValidationError("translations require a torus instance");
    }
    const std::size_t per_site = inst.hx_checks.size() / inst.num_sites();
    Word out(syndrome.size());
    for (std::size_t i = 0; i < syndrome.size(); ++i) {
        auto site = inst.hx_checks[i].site;
        for (std::size_t a = 0; a < site.size(); ++a) {
            site[a] += offset[a];
        }
        out[inst.site_index(site) * per_site + inst.hx_checks[i].type] = syndrome[i];
    }
    return out;
}

TannerSpec ring_tanner(std::size_t n) {
    TannerSpec s;
    s.bits = n;
    s.checks = n;
    for (std::uint32_t i = 0; i < n; ++i) {
        s.edges.push_back({i, i, 1});
        s.edges.push_back({i, static_cast<std::uint32_t>((i + 1) % n), 1});
    }
    return s;
}

TannerSpec path_tanner(std::size_t n) {
    TannerSpec s;
    s.bits = n;
    s.checks = n > 0 ? n - 1 : 0;
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        s.edges.push_back({i, i, 1});
        s.edges.push_back({i, i + 1, 1});
    }
    return s;
}

TannerSpec graph_tanner(std::size_t vertices,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>> &edges) {
    TannerSpec s;
    s.bits = vertices;
    s.checks = edges.size();
    for (std::uint32_t c = 0; c < edges.size(); ++c) {
        s.edges.push_back({c, edges[c].first, 1});
        s.edges.push_back({c, edges[c].second, 1});
    }
    return s;
}

TannerSpec path_with_parallel_segment(std::size_t length, std::size_t from, std::size_t to,
                                      std::size_t detour) {
    if (from >= to || to >= length || detour == 0) {
        throw ValidationError("parallel segment needs 0 <= from < to < length and detour > 0");
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i + 1 < length; ++i) {
        edges.emplace_back(i, i + 1);
    }
    auto prev = static_cast<std::uint32_t>(from);
    for (std::size_t k = 0; k < detour; ++k) {
        auto v = static_cast<std::uint32_t>(length + k);
        edges.emplace_back(prev, v);
        prev = v;
    }
    edges.emplace_back(prev, static_cast<std::uint32_t>(to));
    return graph_tanner(length + detour, edges);
}

}  // namespace selfcorr
