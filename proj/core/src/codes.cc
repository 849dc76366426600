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

#include "selfcorr/codes.h"

namespace selfcorr {

namespace {

LaurentPoly one(const Field &f, std::size_t dim) { return LaurentPoly::constant(f, dim, f.one()); }

LaurentPoly var(const Field &f, std::size_t dim, std::size_t axis, std::int64_t power) {
    Monomial m = Monomial::unit(dim);
    m.exps[axis] = power;
    return LaurentPoly::monomial(f, m, f.one());
}

const LaurentPoly &edge(const EdgeFunctions &fs, std::size_t i, std::size_t j, const char *name) {
    auto it = fs.find({i, j});
    if (it == fs.end()) {
        throw ValidationError(std::string("missing edge function ") + name + "_{" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + "}");
    }
    return it->second;
}

}  // namespace

std::size_t TransInvCode::bits_per_site() const {
    return kind == CodeKind::quantum ? h_x->rows() : h->rows();
}

std::size_t TransInvCode::x_checks_per_site() const {
    return kind == CodeKind::quantum ? h_x->cols() : h->cols();
}

std::size_t TransInvCode::z_checks_per_site() const {
    return kind == CodeKind::quantum ? h_z->cols() : 0;
}

std::vector<std::tuple<std::size_t, std::size_t, std::string>> CssReport::violations() const {
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
    for (std::size_t i = 0; i < product.rows(); ++i) {
        for (std::size_t j = 0; j < product.cols(); ++j) {
            if (!product.at(i, j).is_zero()) {
                out.emplace_back(i, j, product.at(i, j).to_string());
            }
        }
    }
    return out;
}

CssReport validate_css(const TransInvCode &code) {
    if (code.kind != CodeKind::quantum) {
        throw ValidationError("CSS validation requires a quantum code");
    }
    return CssReport{code.h_x->conj_transpose() * *code.h_z};
}

TransInvCode make_quantum_code(std::string family, PolyMatrix h_x, PolyMatrix h_z) {
    if (h_x.rows() != h_z.rows()) {
        throw ValidationError("h_x and h_z must have one row per qubit type (" +
                              std::to_string(h_x.rows()) + " vs " + std::to_string(h_z.rows()) +
                              ")");
    }
    if (h_x.dim() != h_z.dim() || !(h_x.field() == h_z.field())) {
        throw ValidationError("h_x and h_z must share dimension and field");
    }
    TransInvCode code;
    code.kind = CodeKind::quantum;
    code.family = std::move(family);
    code.dim = h_x.dim();
    code.field = h_x.field();
    code.h_x = std::move(h_x);
    code.h_z = std::move(h_z);
    CssReport report = validate_css(code);
    if (!report.valid()) {
        auto v = report.violations().front();
        throw ValidationError("CSS condition fails: entry (" + std::to_string(std::get<0>(v)) +
                              ", " + std::to_string(std::get<1>(v)) + ") = " + std::get<2>(v));
    }
    return code;
}

TransInvCode make_classical_code(std::string family, PolyMatrix h) {
    TransInvCode code;
    code.kind = CodeKind::classical;
    code.family = std::move(family);
    code.dim = h.dim();
    code.field = h.field();
    code.h = std::move(h);
    return code;
}

TransInvCode make_toric() {
    Field f = Field::binary();
    PolyMatrix hx(f, 2, 2, 1);
    hx.set(0, 0, one(f, 2) + var(f, 2, 0, -1));
    hx.set(1, 0, one(f, 2) + var(f, 2, 1, -1));
    PolyMatrix hz(f, 2, 2, 1);
    hz.set(0, 0, one(f, 2) + var(f, 2, 1, 1));
    hz.set(1, 0, one(f, 2) + var(f, 2, 0, 1));
    return make_quantum_code("toric", std::move(hx), std::move(hz));
}

TransInvCode make_haah_family(const LaurentPoly &f, const LaurentPoly &g) {
    if (f.dim() != g.dim() || !(f.field() == g.field())) {
        throw ValidationError("f and g must share dimension and field");
    }
    const Field &field = f.field();
    std::size_t dim = f.dim();
    // conj(h_x)^T = (f g)  =>  h_x = (conj f; conj g).
    PolyMatrix hx(field, dim, 2, 1);
    hx.set(0, 0, f.conj());
    hx.set(1, 0, g.conj());
    PolyMatrix hz(field, dim, 2, 1);
    hz.set(0, 0, g);
    hz.set(1, 0, -f);
    return make_quantum_code("haah", std::move(hx), std::move(hz));
}

TransInvCode make_bipartite_product(std::size_t m1, std::size_t m2, const EdgeFunctions &f,
                                    const EdgeFunctions &g) {
    if (m1 == 0 || m2 == 0) {
        throw ValidationError("m1 and m2 must be positive");
    }
    const LaurentPoly &ref = edge(f, 0, 0, "f");
    const Field &field = ref.field();
    std::size_t dim = ref.dim();
    for (std::size_t i = 0; i < m1; ++i) {
        for (std::size_t j = 0; j < m1; ++j) {
            const auto &p = edge(f, i, j, "f");
            if (p.dim() != dim || !(p.field() == field)) {
                throw ValidationError("edge functions must share dimension and field");
            }
        }
    }
    for (std::size_t i = 0; i < m2; ++i) {
        for (std::size_t j = 0; j < m2; ++j) {
            const auto &p = edge(g, i, j, "g");
            if (p.dim() != dim || !(p.field() == field)) {
                throw ValidationError("edge functions must share dimension and field");
            }
        }
    }
    const std::size_t checks = m1 * m2;
    const std::size_t qubits = 2 * m1 * m2;
    auto pair_index = [](std::size_t a, std::size_t b, std::size_t mb) { return a * mb + b; };
    PolyMatrix hx(field, dim, qubits, checks);
    PolyMatrix hz(field, dim, qubits, checks);
    // Qubit block 0: (j1, i2) at index pair_index(j1, i2, m2). Block 1: (i1, j2) offset by m1*m2.
    for (std::size_t i1 = 0; i1 < m1; ++i1) {
        for (std::size_t i2 = 0; i2 < m2; ++i2) {
            std::size_t xc = pair_index(i1, i2, m2);
            for (std::size_t j1 = 0; j1 < m1; ++j1) {
                hx.set(pair_index(j1, i2, m2), xc, edge(f, i1, j1, "f").conj());
            }
            for (std::size_t j2 = 0; j2 < m2; ++j2) {
                hx.set(checks + pair_index(i1, j2, m2), xc, edge(g, i2, j2, "g").conj());
            }
        }
    }
    for (std::size_t j1 = 0; j1 < m1; ++j1) {
        for (std::size_t j2 = 0; j2 < m2; ++j2) {
            std::size_t zc = pair_index(j1, j2, m2);
            for (std::size_t i2 = 0; i2 < m2; ++i2) {
                hz.set(pair_index(j1, i2, m2), zc, edge(g, i2, j2, "g"));
            }
            for (std::size_t i1 = 0; i1 < m1; ++i1) {
                hz.set(checks + pair_index(i1, j2, m2), zc, -edge(f, i1, j1, "f"));
            }
        }
    }
    return make_quantum_code(m1 == 1 && m2 == 1 ? "haah" : "bipartite_product", std::move(hx),
                             std::move(hz));
}

TransInvCode make_classical_grid(std::size_t m, const EdgeFunctions &f) {
    if (m == 0) {
        throw ValidationError("m must be positive");
    }
    const LaurentPoly &ref = edge(f, 0, 0, "f");
    if (ref.dim() != 2) {
        throw ValidationError("classical grid codes are two-dimensional");
    }
    PolyMatrix h(ref.field(), 2, m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            h.set(i, j, edge(f, i, j, "f"));
        }
    }
    return make_classical_code("classical_grid", std::move(h));
}

TransInvCode transpose_classical(const TransInvCode &code) {
    if (code.kind != CodeKind::classical) {
        throw ValidationError("transpose_classical requires a classical code");
    }
    return make_classical_code(code.family + "_transpose", code.h->transpose());
}

TransInvCode make_ising(std::size_t dim) {
    Field f = Field::binary();
    if (dim == 1) {
        PolyMatrix h(f, 1, 1, 1);
        h.set(0, 0, one(f, 1) + var(f, 1, 0, 1));
        return make_classical_code("ising", std::move(h));
    }
    if (dim == 2) {
        PolyMatrix h(f, 2, 1, 2);
        h.set(0, 0, one(f, 2) + var(f, 2, 0, 1));
        h.set(0, 1, one(f, 2) + var(f, 2, 1, 1));
        return make_classical_code("ising", std::move(h));
    }
    throw ValidationError("Ising model supported for D in {1, 2}, got " + std::to_string(dim));
}

LaurentPoly random_poly(const Field &field, std::size_t dim, const std::vector<Monomial> &support,
                        const std::function<std::uint64_t()> &rng) {
    std::vector<LaurentPoly::Term> terms;
    for (const auto &m : support) {
        terms.emplace_back(m, Fq{static_cast<std::uint32_t>(rng() % field.q())});
    }
    return LaurentPoly::from_terms(field, dim, std::move(terms));
}

std::vector<Monomial> cube_corners_3d() {
    return {Monomial({0, 0, 0}), Monomial({1, 0, 0}), Monomial({0, 1, 0}), Monomial({0, 0, 1}),
            Monomial({1, 1, 0}), Monomial({0, 1, 1}), Monomial({1, 0, 1}), Monomial({1, 1, 1})};
}

std::vector<Monomial> square_corners_2d() {
    return {Monomial({0, 0}), Monomial({1, 0}), Monomial({0, 1}), Monomial({1, 1})};
}

}  // namespace selfcorr
