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

#include "lab/spec_io.h"

#include <sstream>

#include "selfcorr/dynamics.h"

namespace selfcorr::lab {

const json &require(const json &obj, const std::string &key, const std::string &where) {
    if (!obj.is_object()) {
        throw ValidationError(where + ": expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(where + "." + key + ": missing required key");
    }
    return *it;
}

CodeKind LoadedCode::kind() const { return symbolic ? symbolic->kind : embedded->code.kind; }

const Field &LoadedCode::field() const { return symbolic ? symbolic->field : embedded->code.field; }

json field_to_json(const Field &f) { return json{{"p", f.p()}, {"e", f.e()}}; }

Field field_from_json(const json &j) {
    if (j.is_number_integer()) {
        // Shorthand: a prime.
        return Field(j.get<std::uint32_t>(), 1);
    }
    auto p = get_required<std::uint32_t>(j, "p", "field");
    auto e = get_or<std::uint32_t>(j, "e", 1, "field");
    return Field(p, e);
}

namespace {

Field field_or_binary(const json &spec) {
    return spec.contains("field") ? field_from_json(spec.at("field")) : Field::binary();
}

std::vector<std::vector<std::string>> string_matrix(const json &j, const std::string &where) {
    if (!j.is_array()) {
        throw ValidationError(where + ": expected an array of rows");
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto &row : j) {
        if (!row.is_array()) {
            throw ValidationError(where + ": every row must be an array of polynomial strings");
        }
        std::vector<std::string> r;
        for (const auto &e : row) {
            if (!e.is_string()) {
                throw ValidationError(where + ": entries must be polynomial strings");
            }
            r.push_back(e.get<std::string>());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

PolyMatrix parse_matrix(const json &j, const Field &f, std::size_t dim, const std::string &where) {
    try {
        return PolyMatrix::parse(string_matrix(j, where), f, dim);
    } catch (const ValidationError &e) {
        throw ValidationError(where + ": " + e.what());
    }
}

LaurentPoly parse_poly(const json &spec, const std::string &key, const Field &f, std::size_t dim,
                       const std::string &where) {
    auto s = get_required<std::string>(spec, key, where);
    try {
        return LaurentPoly::parse(s, f, dim);
    } catch (const ValidationError &e) {
        throw ValidationError(where + "." + key + ": " + e.what());
    }
}

std::vector<Monomial> support_by_name(const std::string &name, std::size_t dim) {
    if (name == "square" && dim == 2) return square_corners_2d();
    if (name == "cube" && dim == 3) return cube_corners_3d();
    throw ValidationError("random.support: '" + name + "' is not available in D=" +
                          std::to_string(dim) + " (use square for D=2, cube for D=3)");
}

// Edge-function map: either explicit {"i,j": poly} or {"random": {"seed", "support"}}.
EdgeFunctions edge_functions(const json &spec, const std::string &key, std::size_t rows,
                             std::size_t cols, const Field &f, std::size_t dim, Rng *rng,
                             const std::string &where) {
    EdgeFunctions out;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            out.emplace(std::make_pair(i, j), LaurentPoly::from_terms(f, dim, {}));
        }
    }
    if (rng != nullptr) {
        auto support = support_by_name(get_or<std::string>(spec.at("random"), "support",
                                                           dim == 2 ? "square" : "cube", where),
                                       dim);
        std::function<std::uint64_t()> draw = [rng] { return rng->next(); };
        for (auto &[ij, poly] : out) poly = random_poly(f, dim, support, draw);
        return out;
    }
    const json &m = require(spec, key, where);
    if (m.is_string() && rows == 1 && cols == 1) {
        out.insert_or_assign(std::pair<std::size_t, std::size_t>{0, 0}, LaurentPoly::parse(m.get<std::string>(), f, dim));
        return out;
    }
    if (!m.is_object()) {
        throw ValidationError(where + "." + key + ": expected an object keyed by \"i,j\"");
    }
    for (const auto &[k, v] : m.items()) {
        std::size_t i = 0, j = 0;
        char comma = 0;
        std::istringstream in(k);
        if (!(in >> i >> comma >> j) || comma != ',' || i >= rows || j >= cols) {
            throw ValidationError(where + "." + key + ": bad index '" + k + "'");
        }
        if (!v.is_string()) {
            throw ValidationError(where + "." + key + "." + k + ": expected a polynomial string");
        }
        out.insert_or_assign(std::pair<std::size_t, std::size_t>{i, j}, LaurentPoly::parse(v.get<std::string>(), f, dim));
    }
    return out;
}

EmbeddedCode classical_factor(const json &spec, const std::string &where) {
    LoadedCode c = load_code(spec);
    if (c.kind() != CodeKind::classical) {
        throw ValidationError(where + ": hypergraph product factors must be classical codes");
    }
    if (c.embedded) {
        return *c.embedded;
    }
    auto lat = require(spec, "L", where);
    LatticeChoice choice;
    choice.boundary = boundary_from_string(get_or<std::string>(spec, "boundary", "torus", where));
    if (lat.is_array()) {
        choice.shape = lat.get<std::vector<std::size_t>>();
    } else {
        choice.shape.assign(c.symbolic->dim, lat.get<std::size_t>());
    }
    auto inst = make_instance(c, choice);
    const auto n = static_cast<double>(inst.n);
    return embed_on_line(std::move(inst), n);
}

}  // namespace

json code_to_json(const TransInvCode &code) {
    json j;
    j["family"] = code.family;
    j["kind"] = code.kind == CodeKind::quantum ? "quantum" : "classical";
    j["field"] = field_to_json(code.field);
    j["D"] = code.dim;
    if (code.kind == CodeKind::quantum) {
        j["h_x"] = code.h_x->to_strings();
        j["h_z"] = code.h_z->to_strings();
    } else {
        j["h"] = code.h->to_strings();
    }
    return j;
}

TransInvCode code_from_json(const json &spec) {
    const std::string where = "code";
    auto family = get_or<std::string>(spec, "family", "custom", where);
    Field f = field_or_binary(spec);
    auto dim = get_required<std::size_t>(spec, "D", where);
    if (spec.contains("h_x") || spec.contains("h_z")) {
        return make_quantum_code(family, parse_matrix(require(spec, "h_x", where), f, dim, "code.h_x"),
                                 parse_matrix(require(spec, "h_z", where), f, dim, "code.h_z"));
    }
    return make_classical_code(family, parse_matrix(require(spec, "h", where), f, dim, "code.h"));
}

TransInvCode code_from_json_unchecked(const json &spec) {
    const std::string where = "code";
    TransInvCode code;
    code.family = get_or<std::string>(spec, "family", "custom", where);
    code.field = field_or_binary(spec);
    code.dim = get_required<std::size_t>(spec, "D", where);
    if (spec.contains("h_x") || spec.contains("h_z")) {
        code.kind = CodeKind::quantum;
        code.h_x = parse_matrix(require(spec, "h_x", where), code.field, code.dim, "code.h_x");
        code.h_z = parse_matrix(require(spec, "h_z", where), code.field, code.dim, "code.h_z");
        if (code.h_x->rows() != code.h_z->rows()) {
            throw ValidationError("code: h_x and h_z must have one row per qubit type");
        }
    } else {
        code.kind = CodeKind::classical;
        code.h = parse_matrix(require(spec, "h", where), code.field, code.dim, "code.h");
    }
    return code;
}

json tanner_to_json(const TannerSpec &spec, const Field &field) {
    json edges = json::array();
    for (const auto &e : spec.edges) edges.push_back({e.check, e.bit, e.coeff});
    return json{{"family", "tanner"},
                {"field", field_to_json(field)},
                {"bits", spec.bits},
                {"checks", spec.checks},
                {"edges", edges}};
}

TannerSpec tanner_from_json(const json &spec) {
    const std::string where = "code";
    TannerSpec t;
    t.bits = get_required<std::size_t>(spec, "bits", where);
    t.checks = get_required<std::size_t>(spec, "checks", where);
    const json &edges = require(spec, "edges", where);
    if (!edges.is_array()) {
        throw ValidationError("code.edges: expected an array of [check, bit, coeff] triples");
    }
    for (const auto &e : edges) {
        if (!e.is_array() || e.size() != 3) {
            throw ValidationError("code.edges: every edge must be a [check, bit, coeff] triple");
        }
        t.edges.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(),
                           e[2].get<std::uint32_t>()});
    }
    return t;
}

LoadedCode load_code(const json &spec) {
    const std::string where = "code";
    if (!spec.is_object()) {
        throw ValidationError("code: expected an object with a 'family' key");
    }
    const bool explicit_matrices = spec.contains("h_x") || spec.contains("h_z") || spec.contains("h");
    auto family = explicit_matrices ? get_or<std::string>(spec, "family", "custom", where)
                                    : get_required<std::string>(spec, "family", where);
    LoadedCode out;
    auto symbolic = [&](TransInvCode code) {
        out.symbolic = std::move(code);
        out.canonical = code_to_json(*out.symbolic);
    };
    auto embedded = [&](EmbeddedCode code, json canonical) {
        out.embedded = std::move(code);
        out.canonical = std::move(canonical);
    };

    if (explicit_matrices) {
        symbolic(code_from_json(spec));
    } else if (family == "toric") {
        symbolic(make_toric());
    } else if (family == "ising") {
        symbolic(make_ising(get_or<std::size_t>(spec, "D", 1, where)));
    } else if (family == "haah") {
        Field f = field_or_binary(spec);
        auto dim = get_or<std::size_t>(spec, "D", 3, where);
        if (dim == 3 && !spec.contains("f") && !spec.contains("g")) {
            // Haah's cubic code.
            symbolic(make_haah_family(LaurentPoly::parse("1+x+y+z", f, 3), LaurentPoly::parse("1+x*y+y*z+x*z", f, 3)));
        } else {
            symbolic(make_haah_family(parse_poly(spec, "f", f, dim, where), parse_poly(spec, "g", f, dim, where)));
        }
    } else if (family == "bipartite_product") {
        Field f = field_or_binary(spec);
        auto dim = get_or<std::size_t>(spec, "D", 3, where);
        auto m1 = get_required<std::size_t>(spec, "m1", where);
        auto m2 = get_required<std::size_t>(spec, "m2", where);
        std::optional<Rng> rng;
        if (spec.contains("random")) rng.emplace(get_required<std::uint64_t>(spec.at("random"), "seed", "code.random"));
        auto ef = edge_functions(spec, "f", m1, m1, f, dim, rng ? &*rng : nullptr, where);
        auto eg = edge_functions(spec, "g", m2, m2, f, dim, rng ? &*rng : nullptr, where);
        symbolic(make_bipartite_product(m1, m2, ef, eg));
    } else if (family == "classical_grid") {
        Field f = field_or_binary(spec);
        auto m = get_required<std::size_t>(spec, "m", where);
        std::optional<Rng> rng;
        if (spec.contains("random")) rng.emplace(get_required<std::uint64_t>(spec.at("random"), "seed", "code.random"));
        auto ef = edge_functions(spec, "f", m, m, f, 2, rng ? &*rng : nullptr, where);
        symbolic(make_classical_grid(m, ef));
    } else if (family == "tanner") {
        Field f = field_or_binary(spec);
        TannerSpec t = tanner_from_json(spec);
        auto inst = classical_from_tanner(t, f);
        inst.provenance = "tanner";
        embedded(embed_on_line(std::move(inst), static_cast<double>(t.bits)), tanner_to_json(t, f));
    } else if (family == "ring" || family == "path") {
        Field f = field_or_binary(spec);
        auto n = get_required<std::size_t>(spec, "n", where);
        if (n < 2) throw ValidationError("code.n: must be at least 2");
        TannerSpec t = family == "ring" ? ring_tanner(n) : path_tanner(n);
        auto inst = classical_from_tanner(t, f);
        inst.provenance = family + "(" + std::to_string(n) + ")";
        embedded(embed_on_line(std::move(inst), family == "ring" ? static_cast<double>(n) : 1.0),
                 json{{"family", family}, {"n", n}, {"field", field_to_json(f)}});
    } else if (family == "hgp") {
        const json &s1 = require(spec, "h1", where);
        const json &s2 = require(spec, "h2", where);
        auto c1 = classical_factor(s1, "code.h1");
        auto c2 = classical_factor(s2, "code.h2");
        if (!(c1.code.field == c2.code.field)) {
            throw ValidationError("code: hypergraph product factors use different fields");
        }
        json canon = {{"family", "hgp"}, {"h1", load_code(s1).canonical}, {"h2", load_code(s2).canonical}};
        for (auto [key, sub] : {std::pair<const char *, const json *>{"h1", &s1}, {"h2", &s2}}) {
            if (sub->contains("L")) canon[key]["L"] = sub->at("L");
            if (sub->contains("boundary")) canon[key]["boundary"] = sub->at("boundary");
        }
        embedded(hypergraph_product_embedded(c1, c2), canon);
    } else if (family == "random_local") {
        Field f = field_or_binary(spec);
        RandomCodeOptions o;
        o.bits_per_square = get_or<std::size_t>(spec, "bits_per_square", o.bits_per_square, where);
        o.checks_per_square = get_or<std::size_t>(spec, "checks_per_square", o.checks_per_square, where);
        o.radius = get_or<double>(spec, "radius", o.radius, where);
        o.check_weight = get_or<std::size_t>(spec, "check_weight", o.check_weight, where);
        o.max_bit_degree = get_or<std::size_t>(spec, "max_bit_degree", o.max_bit_degree, where);
        o.max_retries = get_or<std::size_t>(spec, "max_retries", o.max_retries, where);
        o.seed = get_required<std::uint64_t>(spec, "seed", where);
        auto A = get_or<std::uint32_t>(spec, "A", 3, where);
        auto level = get_required<std::uint32_t>(spec, "level", where);
        json canon = {{"family", "random_local"}, {"field", field_to_json(f)}, {"A", A},
                      {"level", level}, {"bits_per_square", o.bits_per_square},
                      {"checks_per_square", o.checks_per_square}, {"radius", o.radius},
                      {"check_weight", o.check_weight}, {"max_bit_degree", o.max_bit_degree},
                      {"max_retries", o.max_retries}, {"seed", o.seed}};
        embedded(random_local_code(carpet(A, level), f, o), canon);
    } else if (family == "holes") {
        Field f = field_or_binary(spec);
        auto length = get_or<std::size_t>(spec, "length", 6, where);
        auto detour = get_or<std::size_t>(spec, "detour", 2, where);
        auto path_length = get_or<std::size_t>(spec, "path_length", 4, where);
        auto cx = holes_fixture(length, detour, path_length, f);
        auto inst = cx.to_instance("holes_fixture(reconstruction)");
        json canon = {{"family", "holes"}, {"field", field_to_json(f)}, {"length", length},
                      {"detour", detour}, {"path_length", path_length}};
        embedded(embed_on_line(std::move(inst), 0), canon);
    } else {
        throw ValidationError("code.family: unknown family '" + family + "'");
    }
    return out;
}

CodeInstance make_instance(const LoadedCode &code, const std::optional<LatticeChoice> &lattice) {
    if (!code.symbolic) {
        return code.embedded->code;
    }
    if (!lattice || lattice->shape.empty()) {
        throw ValidationError("lattice: symbolic codes need a system size L");
    }
    if (lattice->shape.size() == 1) {
        return instantiate(*code.symbolic, lattice->shape[0], lattice->boundary);
    }
    return instantiate(*code.symbolic, lattice->shape, lattice->boundary);
}

}  // namespace selfcorr::lab
