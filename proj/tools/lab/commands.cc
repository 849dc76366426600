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

#include "lab/commands.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "lab/fit.h"
#include "lab/output.h"
#include "lab/spec_io.h"
#include "selfcorr/barrier.h"
#include "selfcorr/dynamics.h"
#include "selfcorr/params.h"

namespace selfcorr::lab {

namespace {

constexpr const char *kVersion = "0.1.0";

struct RunContext {
    const GlobalOptions &opts;
    json config;
    OutputDir &out;
    std::ostream &log;
    std::string stage = "setup";
    json consumed = json::object();
    json seeds = json::object();

    std::uint64_t seed() const {
        if (opts.seed) return *opts.seed;
        if (config.contains("seed")) {
            return get_as<std::uint64_t>(config.at("seed"), "seed");
        }
        throw ValidationError("seed: this command is stochastic; pass --seed or set 'seed' in the config");
    }
    bool has_seed() const { return opts.seed.has_value() || config.contains("seed"); }

    std::uint64_t budget(std::uint64_t fallback) const {
        if (opts.budget) return *opts.budget;
        return get_or<std::uint64_t>(config, "budget", fallback, "config");
    }

    void add_consumed(const std::string &key, std::uint64_t amount) {
        consumed[key] = consumed.value(key, std::uint64_t{0}) + amount;
    }
};

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if (!obj.is_object()) {
        throw ValidationError(where + ": expected an object");
    }
    for (const auto &[k, v] : obj.items()) {
        if (!allowed.count(k)) {
            std::string list;
            for (const auto &a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw ValidationError(where + ": unknown key '" + k + "' (allowed: " + list + ")");
        }
    }
}

// Lattices requested by the config; a single unspecified lattice for explicit codes.
std::vector<std::optional<LatticeChoice>> lattices(const json &cfg, const LoadedCode &code) {
    if (!code.is_symbolic()) {
        if (cfg.contains("L")) {
            throw ValidationError("L: explicit codes have a fixed size; remove 'L'");
        }
        return {std::nullopt};
    }
    const json &L = require(cfg, "L", "config");
    Boundary bc = boundary_from_string(get_or<std::string>(cfg, "boundary", "torus", "config"));
    std::vector<std::optional<LatticeChoice>> out;
    auto one = [&](const json &v) {
        LatticeChoice c;
        c.boundary = bc;
        auto size = [](const json &x) {
            if (!x.is_number_integer() || x.get<std::int64_t>() <= 0) {
                throw ValidationError("L: sizes must be positive integers");
            }
            return x.get<std::size_t>();
        };
        if (v.is_number()) {
            c.shape = {size(v)};
        } else if (v.is_array() && v.size() == code.symbolic->dim) {
            for (const auto &x : v) c.shape.push_back(size(x));
        } else {
            throw ValidationError("L: expected a positive integer, a list of them, or per-axis lists of length D");
        }
        out.emplace_back(c);
    };
    if (L.is_array() && !L.empty() && L[0].is_array()) {
        for (const auto &v : L) one(v);
    } else if (L.is_array()) {
        for (const auto &v : L) one(v);
    } else {
        one(L);
    }
    return out;
}

json lattice_json(const std::optional<LatticeChoice> &lat) {
    if (!lat) return nullptr;
    if (lat->shape.size() == 1) return lat->shape[0];
    return lat->shape;
}

std::string lattice_label(const std::optional<LatticeChoice> &lat) {
    if (!lat) return "explicit";
    std::string s = "L";
    for (std::size_t i = 0; i < lat->shape.size(); ++i) {
        s += (i ? "x" : "") + std::to_string(lat->shape[i]);
    }
    return s;
}

std::string lattice_csv(const std::optional<LatticeChoice> &lat) {
    if (!lat) return "";
    std::string s;
    for (std::size_t i = 0; i < lat->shape.size(); ++i) s += (i ? "x" : "") + std::to_string(lat->shape[i]);
    return s;
}

std::vector<Sector> sectors_for(const json &cfg, const CodeInstance &inst) {
    if (cfg.contains("sectors")) {
        std::vector<Sector> out;
        for (const auto &s : cfg.at("sectors")) {
            Sector sec = sector_from_string(s.get<std::string>());
            require_sector(inst, sec);
            out.push_back(sec);
        }
        if (out.empty()) throw ValidationError("sectors: list must not be empty");
        return out;
    }
    if (inst.kind == CodeKind::classical) return {Sector::classical};
    return {Sector::x, Sector::z};
}

json sparse_json(std::span<const Fq> w) {
    json out = json::array();
    for (std::uint32_t i = 0; i < w.size(); ++i) {
        if (!w[i].is_zero()) out.push_back({i, w[i].rep});
    }
    return out;
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > UINT64_MAX / base) return UINT64_MAX;
        r *= base;
    }
    return r;
}

// ---------------------------------------------------------------- build

void cmd_build(RunContext &ctx) {
    check_keys(ctx.config, {"code", "L", "boundary", "seed", "budget"}, "config");
    ctx.stage = "load code";
    auto code = load_code(require(ctx.config, "code", "config"));
    ctx.out.write_json("code.json", code.canonical);
    std::vector<json> records;
    for (const auto &lat : lattices(ctx.config, code)) {
        ctx.stage = "instantiate " + lattice_label(lat);
        auto inst = make_instance(code, lat);
        const std::string label = lattice_label(lat);
        ctx.out.write("hx_" + label + ".txt", inst.hx.to_text());
        if (inst.kind == CodeKind::quantum) {
            ctx.out.write("hz_" + label + ".txt", inst.hz.to_text());
        }
        json r = {{"L", lattice_json(lat)},
                  {"boundary", lat ? to_string(lat->boundary) : "none"},
                  {"kind", inst.kind == CodeKind::quantum ? "quantum" : "classical"},
                  {"field", field_to_json(inst.field)},
                  {"n", inst.n},
                  {"hx_rows", inst.hx.rows()},
                  {"hz_rows", inst.hz.rows()},
                  {"max_row_weight", std::max(inst.hx.max_row_weight(), inst.hz.max_row_weight())},
                  {"max_col_weight", std::max(inst.hx.max_col_weight(), inst.hz.max_col_weight())},
                  {"provenance", inst.provenance}};
        ctx.log << label << ": n=" << inst.n << " hx=" << inst.hx.rows() << "x" << inst.hx.cols()
                << " hz=" << inst.hz.rows() << "x" << inst.hz.cols() << "\n";
        records.push_back(std::move(r));
    }
    ctx.out.write_jsonl("instances.jsonl", records);
}

// ---------------------------------------------------------------- validate

void cmd_validate(RunContext &ctx) {
    check_keys(ctx.config, {"code", "L", "boundary", "seed", "budget"}, "config");
    ctx.stage = "load code";
    const json &spec = require(ctx.config, "code", "config");
    json report = {{"kind", nullptr}, {"valid", true}, {"violations", json::array()}, {"instances", json::array()}};
    bool valid = true;
    std::optional<LoadedCode> code;
    if (spec.contains("h_x") || spec.contains("h_z")) {
        ctx.stage = "symbolic CSS check";
        auto raw = code_from_json_unchecked(spec);
        auto css = validate_css(raw);
        for (const auto &[r, c, poly] : css.violations()) {
            report["violations"].push_back({{"row", r}, {"col", c}, {"poly", poly}});
        }
        valid = css.valid();
        report["kind"] = "quantum";
        if (valid) code = load_code(spec);
    } else {
        code = load_code(spec);
        report["kind"] = code->kind() == CodeKind::quantum ? "quantum" : "classical";
        if (code->is_symbolic() && code->kind() == CodeKind::quantum) {
            ctx.stage = "symbolic CSS check";
            valid = validate_css(*code->symbolic).valid();
        }
    }
    if (code && ctx.config.contains("L") == code->is_symbolic()) {
        for (const auto &lat : lattices(ctx.config, *code)) {
            ctx.stage = "instance CSS check " + lattice_label(lat);
            auto inst = make_instance(*code, lat);
            bool ok = inst.kind == CodeKind::classical || inst.hx.multiply_transpose(inst.hz).is_zero();
            valid = valid && ok;
            report["instances"].push_back({{"L", lattice_json(lat)}, {"n", inst.n}, {"commutes", ok}});
        }
    }
    report["valid"] = valid;
    ctx.out.write_json("validate.json", report);
    if (report["kind"] == "classical") {
        ctx.log << "CSS: not applicable (classical code)\n";
        return;
    }
    ctx.log << (valid ? "CSS: valid\n" : "CSS: invalid\n");
    for (const auto &v : report["violations"]) {
        ctx.log << "  nonzero entry (" << v["row"] << "," << v["col"] << "): " << v["poly"].get<std::string>() << "\n";
    }
    if (!valid) {
        throw ValidationError("CSS condition violated");
    }
}

// ---------------------------------------------------------------- params

void cmd_params(RunContext &ctx) {
    check_keys(ctx.config, {"code", "L", "boundary", "distance", "barrier", "sectors", "seed", "budget"}, "config");
    ctx.stage = "load code";
    auto code = load_code(require(ctx.config, "code", "config"));
    const std::uint64_t budget = ctx.budget(std::uint64_t{1} << 24);
    json dcfg = ctx.config.value("distance", json::object());
    json bcfg = ctx.config.value("barrier", json::object());
    check_keys(dcfg, {"mode", "trials"}, "distance");
    check_keys(bcfg, {"mode", "beam", "window", "distance_trials"}, "barrier");
    const auto dmode = get_or<std::string>(dcfg, "mode", "auto", "distance");
    const auto bmode = get_or<std::string>(bcfg, "mode", "auto", "barrier");
    if (!std::set<std::string>{"exact", "estimate", "auto"}.count(dmode)) {
        throw ValidationError("distance.mode: expected exact, estimate or auto");
    }
    if (!std::set<std::string>{"exact", "heuristic", "auto", "none"}.count(bmode)) {
        throw ValidationError("barrier.mode: expected exact, heuristic, auto or none");
    }
    const auto trials = get_or<std::uint64_t>(dcfg, "trials", 200, "distance");

    CsvTable csv({"L", "boundary", "n", "k", "d", "d_exact", "d_method", "barrier", "barrier_exact",
                  "barrier_method", "budget", "seed"});
    std::vector<json> records;
    for (const auto &lat : lattices(ctx.config, code)) {
        const std::string label = lattice_label(lat);
        ctx.stage = "instantiate " + label;
        auto inst = make_instance(code, lat);
        ctx.stage = "dimension " + label;
        const std::size_t k = code_dimension(inst);

        ctx.stage = "distance " + label;
        DistanceResult dist;
        std::optional<std::uint64_t> dseed;
        if (dmode == "estimate") {
            dseed = ctx.seed();
            dist = distance(inst, DistanceMode::estimate, budget, trials, *dseed);
        } else {
            try {
                dist = distance(inst, DistanceMode::exact, budget);
            } catch (const BudgetExceeded &) {
                if (dmode == "exact") throw;
                dseed = ctx.seed();
                dist = distance(inst, DistanceMode::estimate, budget, trials, *dseed);
            }
        }
        ctx.add_consumed("distance_words", dist.visited);

        json sectors = json::array();
        std::optional<std::size_t> barrier;
        bool barrier_exact_all = true;
        std::string barrier_method = "none";
        std::optional<std::uint64_t> bseed;
        if (bmode != "none") {
            for (Sector s : sectors_for(ctx.config, inst)) {
                ctx.stage = std::string("barrier ") + to_string(s) + " " + label;
                BarrierResult br;
                const std::uint64_t states = checked_pow(inst.field.q(), inst.n);
                bool exact = bmode == "exact" || (bmode == "auto" && states <= budget && states <= (1ull << 32));
                if (exact) {
                    br = barrier_exact(inst, s, budget);
                } else {
                    HeuristicOptions ho;
                    ho.beam = get_or<std::size_t>(bcfg, "beam", ho.beam, "barrier");
                    ho.window = get_or<int>(bcfg, "window", ho.window, "barrier");
                    ho.distance_trials = get_or<std::uint64_t>(bcfg, "distance_trials", ho.distance_trials, "barrier");
                    bseed = ho.seed = ctx.seed();
                    br = barrier_heuristic(inst, s, ho);
                }
                ctx.add_consumed("barrier_states", br.visited);
                sectors.push_back({{"sector", to_string(s)}, {"barrier", br.found ? json(br.value) : json(nullptr)},
                                   {"exact", br.exact}, {"method", br.method}, {"visited", br.visited},
                                   {"witness_steps", br.witness.flips.size()}});
                if (br.found) {
                    barrier = barrier ? std::min(*barrier, br.value) : br.value;
                    barrier_exact_all = barrier_exact_all && br.exact;
                    barrier_method = br.method;
                    std::ostringstream walk;
                    br.witness.write_text(walk);
                    ctx.out.write(std::string("barrier_walk_") + label + "_" + to_string(s) + ".txt", walk.str());
                }
            }
        }
        std::optional<std::uint64_t> seed_used = dseed ? dseed : bseed;
        json r = {{"L", lattice_json(lat)},
                  {"boundary", lat ? to_string(lat->boundary) : "none"},
                  {"n", inst.n},
                  {"k", k},
                  {"d", k == 0 ? json(nullptr) : json(dist.d)},
                  {"d_exact", dist.exact},
                  {"d_method", dist.method},
                  {"d_visited", dist.visited},
                  {"d_trials", dist.exact ? 0 : dist.trials},
                  {"barrier", barrier ? json(*barrier) : json(nullptr)},
                  {"barrier_exact", barrier ? json(barrier_exact_all) : json(nullptr)},
                  {"barrier_sectors", sectors},
                  {"budget", budget},
                  {"seed", seed_used ? json(*seed_used) : json(nullptr)}};
        if (dist.x) r["d_x"] = dist.x->d;
        if (dist.z) r["d_z"] = dist.z->d;
        csv.row({lattice_csv(lat), lat ? to_string(lat->boundary) : "none", std::to_string(inst.n),
                 std::to_string(k), k == 0 ? "" : std::to_string(dist.d), dist.exact ? "1" : "0", dist.method,
                 barrier ? std::to_string(*barrier) : "", barrier ? (barrier_exact_all ? "1" : "0") : "",
                 barrier_method, std::to_string(budget), seed_used ? std::to_string(*seed_used) : ""});
        ctx.log << label << ": n=" << inst.n << " k=" << k << " d=" << (k == 0 ? std::string("-") : std::to_string(dist.d))
                << (dist.exact ? "" : " (upper bound)") << " E="
                << (barrier ? std::to_string(*barrier) : std::string("-"))
                << (barrier && !barrier_exact_all ? " (upper bound)" : "") << "\n";
        records.push_back(std::move(r));
    }
    ctx.out.write_jsonl("params.jsonl", records);
    ctx.out.write("params.csv", csv.str());
}

// ---------------------------------------------------------------- fractal

void cmd_fractal(RunContext &ctx) {
    check_keys(ctx.config, {"f", "field", "levels", "max_level", "nu", "walk", "max_bits", "seed", "budget"}, "config");
    ctx.stage = "parse generator";
    Field field = ctx.config.contains("field") ? field_from_json(ctx.config.at("field")) : Field::binary();
    auto f = LaurentPoly::parse(get_required<std::string>(ctx.config, "f", "config"), field, 2);
    std::vector<std::size_t> levels;
    if (ctx.config.contains("levels")) {
        levels = get_required<std::vector<std::size_t>>(ctx.config, "levels", "config");
    } else {
        auto max_level = get_or<std::size_t>(ctx.config, "max_level", 5, "config");
        for (std::size_t l = 0; l <= max_level; ++l) levels.push_back(l);
    }
    const double nu = get_or<double>(ctx.config, "nu", 0.5, "config");
    const bool do_walk = get_or<bool>(ctx.config, "walk", true, "config");
    const auto max_bits = get_or<std::uint64_t>(ctx.config, "max_bits", ctx.budget(std::uint64_t{1} << 22), "config");

    CsvTable csv({"level", "p", "a0", "weight", "expected_weight", "syndrome_weight", "L", "walk_steps",
                  "walk_max_energy", "bound", "ratio"});
    std::vector<json> records;
    for (auto level : levels) {
        ctx.stage = "fractal word level " + std::to_string(level);
        auto fw = fractal_word(f, level);
        const std::size_t weight = fw.word.weight();
        const std::size_t syn = fw.syndrome.weight();
        const double ratio = static_cast<double>(syn) / std::pow(static_cast<double>(weight), nu);
        json r = {{"level", level}, {"p", fw.p}, {"a0", fw.a0}, {"weight", weight},
                  {"expected_weight", checked_pow(fw.a0, level)}, {"syndrome_weight", syn},
                  {"bound", fractal_walk_bound(fw)}, {"nu", nu}, {"ratio", ratio}, {"exact", true}};
        std::string L_str, steps_str, energy_str;
        if (do_walk) {
            std::uint64_t L = checked_pow(fw.p, level) + 1;
            if (L * L > max_bits) {
                throw BudgetExceeded("fractal walk at level " + std::to_string(level) + " needs " +
                                     std::to_string(L * L) + " bits, above the budget of " + std::to_string(max_bits));
            }
            ctx.stage = "fractal walk level " + std::to_string(level);
            auto inst = fractal_instance_for_level(f, level);
            auto walk = fractal_walk(fw, inst);
            auto energy = walk_energy(inst.hx, walk);
            if (walk.endpoint() != fractal_word_vector(fw, inst)) {
                throw std::logic_error("fractal walk does not end at c_l");
            }
            if (energy.max > fractal_walk_bound(fw)) {
                throw std::logic_error("fractal walk exceeds the 4 l A_0 bound");
            }
            ctx.add_consumed("walk_steps", walk.flips.size());
            std::ostringstream w;
            walk.write_text(w);
            ctx.out.write("walk_l" + std::to_string(level) + ".txt", w.str());
            r["L"] = L;
            r["walk_steps"] = walk.flips.size();
            r["walk_max_energy"] = energy.max;
            L_str = std::to_string(L);
            steps_str = std::to_string(walk.flips.size());
            energy_str = std::to_string(energy.max);
        }
        csv.row({std::to_string(level), std::to_string(fw.p), std::to_string(fw.a0), std::to_string(weight),
                 std::to_string(checked_pow(fw.a0, level)), std::to_string(syn), L_str, steps_str, energy_str,
                 std::to_string(fractal_walk_bound(fw)), fmt_double(ratio)});
        ctx.log << "level " << level << ": |c|=" << weight << " |fc|=" << syn
                << (do_walk ? " walk max energy=" + energy_str : std::string()) << " bound="
                << fractal_walk_bound(fw) << " ratio=" << fmt_double(ratio) << "\n";
        records.push_back(std::move(r));
    }
    ctx.out.write_jsonl("fractal.jsonl", records);
    ctx.out.write("fractal.csv", csv.str());
}

// ---------------------------------------------------------------- expansion

void cmd_expansion(RunContext &ctx) {
    check_keys(ctx.config, {"code", "L", "boundary", "sector", "nu", "w_max", "roots", "anneal", "quantum",
                            "coset_budget", "seed", "budget"}, "config");
    ctx.stage = "load code";
    auto code = load_code(require(ctx.config, "code", "config"));
    const double nu = get_or<double>(ctx.config, "nu", 0.5, "config");
    const auto w_max = get_or<std::size_t>(ctx.config, "w_max", 12, "config");
    const std::uint64_t budget = ctx.budget(100'000'000);
    const auto roots_mode = get_or<std::string>(ctx.config, "roots", "auto", "config");
    const bool quantum = get_or<bool>(ctx.config, "quantum", false, "config");
    const auto coset_budget = get_or<std::uint64_t>(ctx.config, "coset_budget", 1u << 20, "config");
    std::vector<json> records;
    for (const auto &lat : lattices(ctx.config, code)) {
        const std::string label = lattice_label(lat);
        ctx.stage = "instantiate " + label;
        auto inst = make_instance(code, lat);
        json r = {{"L", lattice_json(lat)}, {"n", inst.n}, {"nu", nu}, {"w_max", w_max}, {"budget", budget}};
        if (quantum) {
            if (inst.kind != CodeKind::quantum) throw ValidationError("quantum: the code is classical");
            ctx.stage = "quantum expansion " + label;
            auto rep = quantum_expansion_check(inst.hz.transpose(), inst.hx, nu, w_max, budget, coset_budget);
            ctx.add_consumed("expansion_words", rep.visited);
            auto side = [](const QuantumExpansionSide &s) {
                return json{{"lambda_min", s.found ? json(s.lambda_min) : json(nullptr)}, {"witness", sparse_json(s.witness)},
                            {"reduced_weight", s.reduced_weight}, {"syndrome_weight", s.syndrome_weight},
                            {"exact_cosets", s.exact_cosets}};
            };
            r["delta"] = side(rep.delta);
            r["boundary"] = side(rep.boundary);
            r["exhaustive"] = rep.exhaustive;
            r["visited"] = rep.visited;
            ctx.log << label << ": delta side lambda_min="
                    << (rep.delta.found ? fmt_double(rep.delta.lambda_min) : "-") << " boundary side lambda_min="
                    << (rep.boundary.found ? fmt_double(rep.boundary.lambda_min) : "-") << "\n";
        } else {
            Sector s = ctx.config.contains("sector") ? sector_from_string(ctx.config.at("sector").get<std::string>())
                                                     : (inst.kind == CodeKind::classical ? Sector::classical : Sector::x);
            require_sector(inst, s);
            const auto &h = sector_checks(inst, s);
            ExpansionOptions eo;
            eo.budget = budget;
            if (roots_mode == "translation" || (roots_mode == "auto" && inst.boundary == Boundary::torus)) {
                eo.roots = translation_roots(inst);
            } else if (roots_mode != "all" && roots_mode != "auto") {
                throw ValidationError("roots: expected auto, translation or all");
            }
            ctx.stage = "expansion " + label;
            auto ex = expansion_check(h, nu, w_max, eo);
            ctx.add_consumed("expansion_words", ex.visited);
            r["sector"] = to_string(s);
            r["lambda_min"] = ex.found ? json(ex.lambda_min) : json(nullptr);
            r["witness"] = sparse_json(ex.witness);
            r["witness_weight"] = ex.witness_weight;
            r["witness_energy"] = ex.witness_energy;
            r["exhaustive"] = ex.exhaustive;
            r["visited"] = ex.visited;
            r["roots"] = eo.roots.empty() ? "all" : "translation";
            ctx.log << label << " " << to_string(s) << ": lambda_min=" << (ex.found ? fmt_double(ex.lambda_min) : "-")
                    << " at |c|=" << ex.witness_weight << " |Hc|=" << ex.witness_energy
                    << (ex.exhaustive ? " (exhaustive)" : "") << "\n";
            if (ctx.config.contains("anneal")) {
                const json &a = ctx.config.at("anneal");
                check_keys(a, {"steps", "w_min"}, "anneal");
                const auto steps = get_or<std::uint64_t>(a, "steps", 100000, "anneal");
                const auto w_min = get_or<std::size_t>(a, "w_min", w_max + 1, "anneal");
                ctx.stage = "anneal " + label;
                auto an = expansion_anneal(h, nu, w_min, steps, ctx.seed());
                ctx.add_consumed("anneal_steps", steps);
                r["anneal"] = {{"upper_bound", an.found ? json(an.lambda_min) : json(nullptr)},
                               {"witness_weight", an.witness_weight}, {"witness_energy", an.witness_energy},
                               {"steps", steps}, {"w_min", w_min}, {"seed", ctx.seed()}, {"exact", false}};
            }
        }
        records.push_back(std::move(r));
    }
    ctx.out.write_jsonl("expansion.jsonl", records);
}

// ---------------------------------------------------------------- dynamics helpers

std::vector<double> checkpoints_from(const json &cfg) {
    json c = cfg.value("checkpoints", json::object());
    if (c.is_array()) {
        return c.get<std::vector<double>>();
    }
    check_keys(c, {"kind", "t0", "ratio", "step", "count"}, "checkpoints");
    const auto kind = get_or<std::string>(c, "kind", "geometric", "checkpoints");
    const double t0 = get_or<double>(c, "t0", 1.0, "checkpoints");
    const auto count = get_or<std::size_t>(c, "count", 12, "checkpoints");
    if (kind == "geometric") return geometric_checkpoints(t0, get_or<double>(c, "ratio", 2.0, "checkpoints"), count);
    if (kind == "linear") return linear_checkpoints(t0, get_or<double>(c, "step", t0, "checkpoints"), count);
    throw ValidationError("checkpoints.kind: expected geometric or linear");
}

DecoderSpec decoder_from(const json &cfg) {
    json d = cfg.value("decoder", json::object());
    if (d.is_string()) d = json{{"kind", d}};
    check_keys(d, {"kind", "max_weight", "max_rounds", "coset_budget"}, "decoder");
    DecoderSpec spec;
    spec.kind = decoder_kind_from_string(get_or<std::string>(d, "kind", "brute_force", "decoder"));
    spec.max_weight = get_or<std::size_t>(d, "max_weight", spec.max_weight, "decoder");
    spec.max_rounds = get_or<std::size_t>(d, "max_rounds", spec.max_rounds, "decoder");
    spec.coset_budget = get_or<std::uint64_t>(d, "coset_budget", spec.coset_budget, "decoder");
    return spec;
}

std::vector<double> betas_from(const json &cfg) {
    const json &b = require(cfg, "beta", "config");
    std::vector<double> out = b.is_array() ? b.get<std::vector<double>>() : std::vector<double>{b.get<double>()};
    if (out.empty()) throw ValidationError("beta: list must not be empty");
    return out;
}

std::size_t trajectories_from(const json &cfg) {
    auto n = get_required<std::int64_t>(cfg, "trajectories", "config");
    if (n <= 0) throw ValidationError("trajectories: must be positive (got " + std::to_string(n) + ")");
    return static_cast<std::size_t>(n);
}

// Expected number of Glauber events, used for the up-front budget check.
double expected_events(const CodeInstance &inst, std::size_t trajectories, double horizon) {
    return static_cast<double>(inst.n) * static_cast<double>(inst.field.q() - 1) * horizon *
           static_cast<double>(trajectories);
}

json estimate_json(const MemoryTimeEstimate &e) {
    json lo = json::array(), hi = json::array();
    for (const auto &c : e.ci) {
        lo.push_back(c.lo);
        hi.push_back(c.hi);
    }
    return {{"sector", to_string(e.sector)},
            {"beta", e.beta},
            {"decoder", e.decoder},
            {"trajectories", e.trajectories},
            {"seed", e.seed},
            {"times", e.times},
            {"successes", e.successes},
            {"p_hat", e.p_hat},
            {"ci_lo", lo},
            {"ci_hi", hi},
            {"threshold", e.threshold},
            {"t_mem", e.t_mem},
            {"t_mem_conservative", e.t_mem_conservative},
            {"t_mem_ci", {e.t_mem_ci.lo, e.t_mem_ci.hi}},
            {"censored", e.censored},
            {"events", e.events},
            {"method", "monte_carlo"},
            {"provenance", e.provenance}};
}

void append_records(std::vector<json> &out, const json &key, const MemoryTimeEstimate &e) {
    for (const auto &r : e.records) {
        json j = key;
        j["trajectory"] = r.trajectory;
        j["checkpoint"] = r.checkpoint;
        j["t"] = r.time;
        j["energy"] = r.energy;
        j["decoded"] = r.decoded;
        j["success"] = r.success;
        out.push_back(std::move(j));
    }
}

void append_curve(CsvTable &csv, const std::vector<std::string> &prefix, const MemoryTimeEstimate &e) {
    for (std::size_t j = 0; j < e.times.size(); ++j) {
        auto row = prefix;
        row.insert(row.end(), {fmt_double(e.times[j]), std::to_string(e.successes[j]), std::to_string(e.trajectories),
                               fmt_double(e.p_hat[j]), fmt_double(e.ci[j].lo), fmt_double(e.ci[j].hi)});
        csv.row(row);
    }
}

CurveSeries curve_of(const std::string &label, const MemoryTimeEstimate &e) {
    CurveSeries s{label, e.times, e.p_hat, {}, {}};
    for (const auto &c : e.ci) {
        s.lo.push_back(c.lo);
        s.hi.push_back(c.hi);
    }
    return s;
}

// ---------------------------------------------------------------- simulate

void cmd_simulate(RunContext &ctx) {
    check_keys(ctx.config, {"code", "L", "boundary", "beta", "trajectories", "checkpoints", "decoder", "sectors",
                            "svg", "records", "seed", "budget"}, "config");
    ctx.stage = "load config";
    auto code = load_code(require(ctx.config, "code", "config"));
    const auto betas = betas_from(ctx.config);
    const auto trajectories = trajectories_from(ctx.config);
    const auto checkpoints = checkpoints_from(ctx.config);
    const auto dspec = decoder_from(ctx.config);
    const bool svg = get_or<bool>(ctx.config, "svg", false, "config");
    const bool keep_records = get_or<bool>(ctx.config, "records", true, "config");
    const std::uint64_t master = ctx.seed();
    const std::uint64_t budget = ctx.budget(10'000'000'000ull);
    const auto lats = lattices(ctx.config, code);

    ctx.stage = "budget check";
    std::vector<CodeInstance> instances;
    double planned = 0;
    for (const auto &lat : lats) {
        instances.push_back(make_instance(code, lat));
        planned += expected_events(instances.back(), trajectories, checkpoints.back()) *
                   static_cast<double>(betas.size() * sectors_for(ctx.config, instances.back()).size());
    }
    if (planned > static_cast<double>(budget)) {
        throw BudgetExceeded("simulation needs about " + fmt_double(planned) + " events, budget is " +
                             std::to_string(budget));
    }

    std::vector<json> records, summary;
    CsvTable curves({"L", "beta", "sector", "t", "successes", "trajectories", "p_hat", "ci_lo", "ci_hi"});
    CsvTable tmem({"L", "beta", "sector", "n", "k", "t_mem", "t_mem_conservative", "t_mem_ci_lo", "t_mem_ci_hi",
                   "censored", "trajectories", "seed"});
    std::vector<CurveSeries> series;
    std::uint64_t combo = 0;
    for (std::size_t li = 0; li < lats.size(); ++li) {
        const auto &inst = instances[li];
        const std::size_t k = code_dimension(inst);
        for (double beta : betas) {
            for (Sector s : sectors_for(ctx.config, inst)) {
                const std::string label = lattice_label(lats[li]) + " beta=" + fmt_double(beta) + " " + to_string(s);
                ctx.stage = "simulate " + label;
                GlauberParams gp;
                gp.beta = beta;
                gp.checkpoints = checkpoints;
                gp.seed = stream_seed(master, combo++);
                gp.trajectories = trajectories;
                gp.workers = ctx.opts.workers;
                auto est = estimate_memory_time(inst, gp, dspec, s);
                ctx.add_consumed("glauber_events", est.events);
                json key = {{"L", lattice_json(lats[li])}, {"beta", beta}, {"sector", to_string(s)}};
                if (keep_records) append_records(records, key, est);
                json sj = estimate_json(est);
                sj["L"] = lattice_json(lats[li]);
                sj["n"] = inst.n;
                sj["k"] = k;
                summary.push_back(sj);
                append_curve(curves, {lattice_csv(lats[li]), fmt_double(beta), to_string(s)}, est);
                tmem.row({lattice_csv(lats[li]), fmt_double(beta), to_string(s), std::to_string(inst.n), std::to_string(k),
                          fmt_double(est.t_mem), fmt_double(est.t_mem_conservative), fmt_double(est.t_mem_ci.lo),
                          fmt_double(est.t_mem_ci.hi), est.censored ? "1" : "0", std::to_string(trajectories),
                          std::to_string(gp.seed)});
                series.push_back(curve_of(label, est));
                ctx.seeds[label] = gp.seed;
                ctx.log << label << ": T_mem=" << fmt_double(est.t_mem) << " conservative="
                        << fmt_double(est.t_mem_conservative) << (est.censored ? " (censored)" : "") << "\n";
            }
        }
    }
    if (keep_records) ctx.out.write_jsonl("records.jsonl", records);
    ctx.out.write_json("summary.json", summary);
    ctx.out.write("success.csv", curves.str());
    ctx.out.write("tmem.csv", tmem.str());
    if (svg) ctx.out.write("success.svg", success_curves_svg("memory-time success curves", series));
}

// ---------------------------------------------------------------- sweep

// Picks the first spec in the sequence seed, seed+1, ... whose instances all carry a logical
// word and fit the decoder's coset budget.
LoadedCode select_code(const json &spec, const json &lattices_cfg, const DecoderSpec &dspec,
                       std::size_t attempts, json &note) {
    const bool random = spec.contains("random");
    for (std::size_t a = 0; a < (random ? attempts : 1); ++a) {
        json s = spec;
        if (random) s["random"]["seed"] = spec["random"].value("seed", std::uint64_t{0}) + a;
        auto code = load_code(s);
        bool ok = true;
        for (const auto &lat : lattices(lattices_cfg, code)) {
            auto inst = make_instance(code, lat);
            std::size_t k = classical_dimension(inst);
            if (k == 0 || (dspec.kind == DecoderKind::brute_force &&
                           checked_pow(inst.field.q(), inst.n - rank(inst.hx)) > dspec.coset_budget)) {
                ok = false;
                break;
            }
        }
        if (ok || !random) {
            if (random) note["selected_random_seed"] = s["random"]["seed"];
            note["all_sizes_have_logicals"] = ok;
            return code;
        }
    }
    throw ValidationError("codes: no random draw in " + std::to_string(attempts) +
                          " attempts has k >= 1 at every L within the decoder budget");
}

void cmd_sweep(RunContext &ctx) {
    check_keys(ctx.config, {"codes", "L", "boundary", "beta", "trajectories", "checkpoints", "decoder",
                            "max_attempts", "svg", "records", "seed", "budget"}, "config");
    ctx.stage = "load config";
    const json &codes_cfg = require(ctx.config, "codes", "config");
    if (!codes_cfg.is_array() || codes_cfg.empty()) throw ValidationError("codes: expected a non-empty list");
    const auto betas = betas_from(ctx.config);
    const auto trajectories = trajectories_from(ctx.config);
    const auto checkpoints = checkpoints_from(ctx.config);
    const auto dspec = decoder_from(ctx.config);
    const auto attempts = get_or<std::size_t>(ctx.config, "max_attempts", 200, "config");
    const bool svg = get_or<bool>(ctx.config, "svg", true, "config");
    const bool keep_records = get_or<bool>(ctx.config, "records", true, "config");
    const std::uint64_t master = ctx.seed();
    const std::uint64_t budget = ctx.budget(20'000'000'000ull);

    struct Entry {
        std::string name;
        LoadedCode code;
        json note;
        json lattice_cfg;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < codes_cfg.size(); ++i) {
        const json &c = codes_cfg[i];
        check_keys(c, {"name", "code", "L", "boundary"}, "codes[" + std::to_string(i) + "]");
        Entry e{get_or<std::string>(c, "name", "code" + std::to_string(i), "codes"), {}, json::object(), json::object()};
        // Per-code sizes override the shared ones.
        for (const char *key : {"L", "boundary"}) {
            if (c.contains(key)) {
                e.lattice_cfg[key] = c.at(key);
            } else if (ctx.config.contains(key)) {
                e.lattice_cfg[key] = ctx.config.at(key);
            }
        }
        ctx.stage = "select code " + e.name;
        e.code = select_code(require(c, "code", "codes"), e.lattice_cfg, dspec, attempts, e.note);
        if (e.code.kind() != CodeKind::classical) throw ValidationError("codes: the sweep runs classical codes");
        e.note["code"] = e.code.canonical;
        entries.push_back(std::move(e));
    }

    ctx.stage = "budget check";
    double planned = 0;
    for (const auto &e : entries) {
        for (const auto &lat : lattices(e.lattice_cfg, e.code)) {
            planned += expected_events(make_instance(e.code, lat), trajectories, checkpoints.back()) *
                       static_cast<double>(betas.size());
        }
    }
    if (planned > static_cast<double>(budget)) {
        throw BudgetExceeded("sweep needs about " + fmt_double(planned) + " events, budget is " + std::to_string(budget));
    }

    std::vector<json> records, summary;
    CsvTable curves({"code", "L", "beta", "t", "successes", "trajectories", "p_hat", "ci_lo", "ci_hi"});
    CsvTable table({"code", "L", "beta", "n", "k", "t_mem", "t_mem_conservative", "t_mem_ci_lo", "t_mem_ci_hi",
                    "censored", "trajectories", "seed", "events"});
    CsvTable fits({"code", "beta", "estimator", "model", "slope", "slope_se", "intercept", "rss", "points", "preferred"});
    json fit_json = json::array();
    std::uint64_t combo = 0;
    for (const auto &e : entries) {
        std::vector<CurveSeries> series;
        const auto lats = lattices(e.lattice_cfg, e.code);
        std::map<double, std::vector<std::tuple<double, double, double>>> per_beta;  // L, t_mem, t_cons
        for (const auto &lat : lats) {
            ctx.stage = "instantiate " + e.name + " " + lattice_label(lat);
            auto inst = make_instance(e.code, lat);
            const std::size_t k = classical_dimension(inst);
            for (double beta : betas) {
                const std::uint64_t seed = stream_seed(master, combo++);
                const std::string label = e.name + " " + lattice_label(lat) + " beta=" + fmt_double(beta);
                ctx.seeds[label] = seed;
                if (k == 0) {
                    summary.push_back({{"code", e.name}, {"L", lattice_json(lat)}, {"beta", beta}, {"n", inst.n}, {"k", 0},
                                       {"skipped", "k=0: no logical information to store"}});
                    continue;
                }
                ctx.stage = "simulate " + label;
                GlauberParams gp;
                gp.beta = beta;
                gp.checkpoints = checkpoints;
                gp.seed = seed;
                gp.trajectories = trajectories;
                gp.workers = ctx.opts.workers;
                auto est = estimate_memory_time(inst, gp, dspec, Sector::classical);
                ctx.add_consumed("glauber_events", est.events);
                if (keep_records) {
                    append_records(records, {{"code", e.name}, {"L", lattice_json(lat)}, {"beta", beta}}, est);
                }
                json sj = estimate_json(est);
                sj["code"] = e.name;
                sj["L"] = lattice_json(lat);
                sj["n"] = inst.n;
                sj["k"] = k;
                summary.push_back(sj);
                append_curve(curves, {e.name, lattice_csv(lat), fmt_double(beta)}, est);
                table.row({e.name, lattice_csv(lat), fmt_double(beta), std::to_string(inst.n), std::to_string(k),
                           fmt_double(est.t_mem), fmt_double(est.t_mem_conservative), fmt_double(est.t_mem_ci.lo),
                           fmt_double(est.t_mem_ci.hi), est.censored ? "1" : "0", std::to_string(trajectories),
                           std::to_string(seed), std::to_string(est.events)});
                series.push_back(curve_of(lattice_label(lat) + " b=" + fmt_double(beta), est));
                // Censored estimates are lower bounds; they enter the fit as reported.
                per_beta[beta].emplace_back(lat ? static_cast<double>(lat->shape[0]) : static_cast<double>(inst.n),
                                            est.t_mem, est.t_mem_conservative);
                ctx.log << label << ": T_mem=" << fmt_double(est.t_mem) << " CI=[" << fmt_double(est.t_mem_ci.lo) << ", "
                        << fmt_double(est.t_mem_ci.hi) << "]" << (est.censored ? " (censored)" : "") << "\n";
            }
        }
        for (const auto &[beta, pts] : per_beta) {
            for (int which = 0; which < 2; ++which) {
                std::vector<double> Ls, ts;
                for (const auto &[L, t, tc] : pts) {
                    Ls.push_back(L);
                    ts.push_back(which == 0 ? t : tc);
                }
                auto sf = fit_scaling(Ls, ts);
                const char *estimator = which == 0 ? "t_mem" : "t_mem_conservative";
                auto fj = [&](const LinearFit &f) {
                    return json{{"slope", f.slope}, {"slope_se", std::isnan(f.slope_se) ? json(nullptr) : json(f.slope_se)},
                                {"intercept", f.intercept}, {"rss", f.rss}, {"points", f.points}};
                };
                fit_json.push_back({{"code", e.name}, {"beta", beta}, {"estimator", estimator},
                                    {"exponential", fj(sf.exponential)}, {"polynomial", fj(sf.polynomial)},
                                    {"preferred", sf.preferred}});
                for (auto [model, f] : {std::pair<const char *, const LinearFit *>{"exponential", &sf.exponential},
                                        {"polynomial", &sf.polynomial}}) {
                    fits.row({e.name, fmt_double(beta), estimator, model, fmt_double(f->slope), fmt_double(f->slope_se),
                              fmt_double(f->intercept), fmt_double(f->rss), std::to_string(f->points), sf.preferred});
                }
                if (which == 0) {
                    ctx.log << e.name << " beta=" << fmt_double(beta) << ": log T vs L slope "
                            << fmt_double(sf.exponential.slope) << " +- " << fmt_double(sf.exponential.slope_se)
                            << ", log T vs log L slope " << fmt_double(sf.polynomial.slope) << " +- "
                            << fmt_double(sf.polynomial.slope_se) << " -> " << sf.preferred << "\n";
                }
            }
        }
        if (svg) ctx.out.write("success_" + e.name + ".svg", success_curves_svg(e.name + " success curves", series));
    }
    json codes_json = json::array();
    for (const auto &e : entries) codes_json.push_back({{"name", e.name}, {"selection", e.note}});
    ctx.out.write_json("codes.json", codes_json);
    if (keep_records) ctx.out.write_jsonl("sweep_records.jsonl", records);
    ctx.out.write_json("sweep_summary.json", summary);
    ctx.out.write("sweep_summary.csv", table.str());
    ctx.out.write("success_curves.csv", curves.str());
    ctx.out.write_json("fits.json", fit_json);
    ctx.out.write("fits.csv", fits.str());
}

const std::map<std::string, std::function<void(RunContext &)>> &registry() {
    static const std::map<std::string, std::function<void(RunContext &)>> r = {
        {"build", cmd_build},       {"validate", cmd_validate}, {"params", cmd_params}, {"fractal", cmd_fractal},
        {"expansion", cmd_expansion}, {"simulate", cmd_simulate}, {"sweep", cmd_sweep},
    };
    return r;
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

}  // namespace

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names = {"build", "validate", "params", "fractal",
                                                   "expansion", "simulate", "sweep"};
    return names;
}

int run_command_json(const std::string &command, const json &config, const GlobalOptions &opts,
                     std::ostream &out, std::ostream &err) {
    auto it = registry().find(command);
    if (it == registry().end()) {
        err << "error: unknown command '" << command << "'\n";
        return kExitValidation;
    }
    std::optional<OutputDir> dir;
    try {
        dir.emplace(opts.out_dir);
    } catch (const std::exception &e) {
        err << "error in stage 'setup': cannot create output directory: " << e.what() << "\n";
        return kExitInternal;
    }
    RunContext ctx{opts, config, *dir, out};
    const auto started = std::chrono::steady_clock::now();
    const std::string started_utc = utc_now();
    int code = kExitOk;
    json error = nullptr;
    auto fail = [&](int c, const char *kind, const std::string &msg) {
        code = c;
        error = {{"kind", kind}, {"stage", ctx.stage}, {"message", msg}};
        err << "error (" << kind << ") in stage '" << ctx.stage << "': " << msg << "\n";
    };
    try {
        it->second(ctx);
    } catch (const ValidationError &e) {
        fail(kExitValidation, "validation", e.what());
    } catch (const json::exception &e) {
        fail(kExitValidation, "validation", std::string("config: ") + e.what());
    } catch (const BudgetExceeded &e) {
        fail(kExitBudget, "budget", e.what());
    } catch (const std::exception &e) {
        fail(kExitInternal, "internal", e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json outputs = json::array();
    for (const auto &f : dir->files()) outputs.push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    json manifest = {{"command", command},
                     {"version", kVersion},
                     {"config", config},
                     {"config_sha256", sha256_hex(config.dump())},
                     {"seed", opts.seed ? json(*opts.seed) : config.value("seed", json(nullptr))},
                     {"derived_seeds", ctx.seeds},
                     {"workers", opts.workers},
                     {"budget", opts.budget ? json(*opts.budget) : config.value("budget", json(nullptr))},
                     {"budgets_consumed", ctx.consumed},
                     {"started_utc", started_utc},
                     {"wall_seconds", wall},
                     {"outputs", outputs},
                     {"exit_code", code},
                     {"error", error}};
    try {
        write_file_atomic(dir->path() / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception &e) {
        err << "error in stage 'manifest': " << e.what() << "\n";
        return code == kExitOk ? kExitInternal : code;
    }
    return code;
}

int run_command(const std::string &command, const GlobalOptions &opts, std::ostream &out, std::ostream &err) {
    if (opts.config_path.empty()) {
        err << "error (validation) in stage 'load config': --config is required\n";
        return kExitValidation;
    }
    std::ifstream in(opts.config_path);
    if (!in) {
        err << "error (validation) in stage 'load config': cannot read " << opts.config_path << "\n";
        return kExitValidation;
    }
    json config;
    try {
        config = json::parse(in, nullptr, true, true);
    } catch (const json::exception &e) {
        err << "error (validation) in stage 'load config': " << e.what() << "\n";
        return kExitValidation;
    }
    return run_command_json(command, config, opts, out, err);
}

}  // namespace selfcorr::lab
