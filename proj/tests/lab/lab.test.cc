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

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lab/commands.h"
#include "lab/fit.h"
#include "lab/output.h"
#include "lab/spec_io.h"
#include "selfcorr/params.h"

using namespace selfcorr;
using namespace selfcorr::lab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
    static std::atomic<int> counter{0};
    auto p = fs::temp_directory_path() /
             ("selfcorr_lab_" + name + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string out, err;
    fs::path dir;
    json manifest() const { return json::parse(slurp(dir / "manifest.json")); }
};

Run run(const std::string &cmd, const json &config, std::optional<std::uint64_t> seed = std::nullopt,
        std::optional<std::uint64_t> budget = std::nullopt, std::size_t workers = 1) {
    GlobalOptions opts;
    opts.seed = seed;
    opts.budget = budget;
    opts.workers = workers;
    opts.out_dir = fresh_dir(cmd).string();
    std::ostringstream out, err;
    int code = run_command_json(cmd, config, opts, out, err);
    return {code, out.str(), err.str(), opts.out_dir};
}

}  // namespace

TEST(SpecIo, field_round_trip) {
    for (auto f : {Field(2, 1), Field(3, 1), Field(2, 2), Field(7, 1), Field(3, 2)}) {
        EXPECT_EQ(field_from_json(field_to_json(f)), f);
    }
    EXPECT_EQ(field_from_json(json(5)), Field(5, 1));
    EXPECT_THROW(field_from_json(json{{"p", 4}}), ValidationError);
}

TEST(SpecIo, canonical_form_round_trips) {
    std::vector<json> specs = {
        {{"family", "toric"}},
        {{"family", "ising"}, {"D", 2}},
        {{"family", "haah"}},
        {{"family", "classical_grid"}, {"m", 1}, {"f", "1+x+y"}},
        {{"family", "bipartite_product"}, {"m1", 2}, {"m2", 2}, {"field", 3},
         {"random", {{"seed", 5}, {"support", "cube"}}}},
    };
    for (const auto &spec : specs) {
        auto a = load_code(spec);
        ASSERT_TRUE(a.is_symbolic()) << spec.dump();
        auto b = load_code(a.canonical);
        EXPECT_EQ(a.canonical, b.canonical) << spec.dump();
        std::size_t L = a.symbolic->dim == 3 ? 2 : 3;
        LatticeChoice lat{std::vector<std::size_t>(a.symbolic->dim, L), Boundary::torus};
        auto ia = make_instance(a, lat);
        auto ib = make_instance(b, lat);
        EXPECT_EQ(ia.hx, ib.hx);
        EXPECT_EQ(ia.hz, ib.hz);
    }
}

TEST(SpecIo, explicit_families) {
    auto ring = load_code({{"family", "ring"}, {"n", 5}});
    EXPECT_FALSE(ring.is_symbolic());
    EXPECT_EQ(make_instance(ring, std::nullopt).n, 5u);

    auto hgp = load_code({{"family", "hgp"}, {"h1", {{"family", "ring"}, {"n", 3}}},
                          {"h2", {{"family", "ring"}, {"n", 3}}}});
    auto inst = make_instance(hgp, std::nullopt);
    EXPECT_EQ(inst.n, 18u);
    EXPECT_EQ(quantum_dimension(inst), 2u);

    auto tanner = load_code({{"family", "tanner"}, {"field", 3}, {"bits", 3}, {"checks", 2},
                             {"edges", {{0, 0, 1}, {0, 1, 2}, {1, 1, 1}, {1, 2, 1}}}});
    auto t = make_instance(tanner, std::nullopt);
    EXPECT_EQ(t.n, 3u);
    EXPECT_EQ(t.hx.rows(), 2u);
    EXPECT_EQ(load_code(tanner.canonical).canonical, tanner.canonical);

    auto rl = load_code({{"family", "random_local"}, {"level", 1}, {"seed", 3}});
    EXPECT_EQ(make_instance(rl, std::nullopt).n, 8u);
    EXPECT_EQ(quantum_dimension(make_instance(load_code({{"family", "holes"}}), std::nullopt)), 1u);
}

TEST(SpecIo, errors_name_the_key) {
    auto message = [](const json &spec) {
        try {
            load_code(spec);
        } catch (const ValidationError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message({{"family", "nope"}}).find("code.family"), std::string::npos);
    EXPECT_NE(message({{"family", "ring"}}).find("code.n"), std::string::npos);
    EXPECT_NE(message({{"family", "ising"}, {"D", "two"}}).find("code.D"), std::string::npos);
    EXPECT_NE(message({{"family", "random_local"}, {"level", 1}}).find("code.seed"), std::string::npos);
    // Explicit matrices that do not commute are rejected by load_code.
    EXPECT_NE(message({{"D", 2}, {"h_x", {{"1+x"}, {"1+y"}}}, {"h_z", {{"1+y"}, {"1"}}}}), "no error");
}

TEST(Output, sha256_and_csv) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CsvTable t({"a", "b"});
    t.row({"1", "2"});
    EXPECT_EQ(t.str(), "a,b\n1,2\n");
    EXPECT_THROW(t.row({"1"}), std::logic_error);
    EXPECT_EQ(fmt_double(0.5), "0.5");
    EXPECT_EQ(fmt_double(std::nan("")), "nan");
}

TEST(Output, atomic_writes_are_listed) {
    auto dir = fresh_dir("output");
    OutputDir out(dir);
    out.write("a.txt", "hello\n");
    out.write("a.txt", "bye\n");
    out.write_jsonl("r.jsonl", {json{{"x", 1}}, json{{"x", 2}}});
    EXPECT_EQ(slurp(dir / "a.txt"), "bye\n");
    EXPECT_EQ(slurp(dir / "r.jsonl"), "{\"x\":1}\n{\"x\":2}\n");
    ASSERT_EQ(out.files().size(), 2u);
    EXPECT_EQ(out.files()[0].bytes, 4u);
    EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
    auto svg = success_curves_svg("t", {CurveSeries{"s", {1, 2, 4}, {1, 0.9, 0.5}, {0.9, 0.8, 0.4}, {1, 1, 0.6}}});
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Fit, lines_and_scaling_models) {
    auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_TRUE(f.ok);
    EXPECT_NEAR(f.slope, 2, 1e-12);
    EXPECT_NEAR(f.intercept, 1, 1e-12);
    EXPECT_NEAR(f.rss, 0, 1e-12);
    EXPECT_FALSE(fit_line({1}, {1}).ok);
    EXPECT_TRUE(std::isnan(fit_line({1, 2}, {1, 3}).slope_se));

    std::vector<double> L = {3, 4, 5, 6, 8, 10, 12}, te, tp;
    for (double l : L) {
        te.push_back(std::exp(0.9 * l));
        tp.push_back(std::pow(l, 3.0));
    }
    EXPECT_EQ(fit_scaling(L, te).preferred, "exponential");
    EXPECT_NEAR(fit_scaling(L, te).exponential.slope, 0.9, 1e-9);
    EXPECT_EQ(fit_scaling(L, tp).preferred, "polynomial");
    EXPECT_NEAR(fit_scaling(L, tp).polynomial.slope, 3.0, 1e-9);
    EXPECT_EQ(fit_scaling({3, 4}, {2, 4}).preferred, "undetermined");
}

TEST(Commands, validate_reports_css) {
    auto ok = run("validate", {{"code", {{"family", "toric"}}}, {"L", 3}});
    EXPECT_EQ(ok.code, kExitOk) << ok.err;
    EXPECT_NE(ok.out.find("CSS: valid"), std::string::npos);
    EXPECT_EQ(ok.manifest()["exit_code"], 0);

    auto bad = run("validate", {{"code", {{"D", 2}, {"h_x", {{"1+x"}, {"1+y"}}}, {"h_z", {{"1+y"}, {"1"}}}}}});
    EXPECT_EQ(bad.code, kExitValidation);
    EXPECT_NE(bad.out.find("CSS: invalid"), std::string::npos);
    EXPECT_NE(bad.err.find("symbolic CSS check"), std::string::npos);
    EXPECT_EQ(bad.manifest()["exit_code"], 1);
}

TEST(Commands, params_on_ising_chain) {
    auto r = run("params", {{"code", {{"family", "ising"}, {"D", 1}}}, {"L", 5}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("n=5 k=1 d=5 E=2"), std::string::npos) << r.out;
    auto line = slurp(r.dir / "params.jsonl");
    auto rec = json::parse(line.substr(0, line.find('\n')));
    EXPECT_EQ(rec["k"], 1);
    EXPECT_EQ(rec["d_exact"], true);
    EXPECT_EQ(rec["barrier_exact"], true);
    EXPECT_TRUE(fs::exists(r.dir / "params.csv"));
}

TEST(Commands, build_fractal_and_expansion_write_outputs) {
    auto b = run("build", {{"code", {{"family", "haah"}}}, {"L", 2}});
    ASSERT_EQ(b.code, kExitOk) << b.err;
    EXPECT_TRUE(fs::exists(b.dir / "hx_L2.txt"));
    EXPECT_TRUE(fs::exists(b.dir / "hz_L2.txt"));

    auto f = run("fractal", {{"f", "1+x+y"}, {"levels", {0, 1, 2, 3}}});
    ASSERT_EQ(f.code, kExitOk) << f.err;
    EXPECT_TRUE(fs::exists(f.dir / "walk_l3.txt"));
    auto fb = run("fractal", {{"f", "1+x+y"}, {"levels", {6}}}, std::nullopt, 100);
    EXPECT_EQ(fb.code, kExitBudget) << fb.err;

    auto e = run("expansion", {{"code", {{"family", "ising"}, {"D", 2}}}, {"L", 6}, {"w_max", 6}});
    ASSERT_EQ(e.code, kExitOk) << e.err;
    auto rec = json::parse(slurp(e.dir / "expansion.jsonl"));
    EXPECT_EQ(rec["exhaustive"], true);
}

TEST(Commands, config_and_budget_errors_map_to_exit_codes) {
    json sim = {{"code", {{"family", "ising"}, {"D", 1}}}, {"L", 4}, {"beta", 1.0}, {"trajectories", 20}};
    auto no_seed = run("simulate", sim);
    EXPECT_EQ(no_seed.code, kExitValidation);
    EXPECT_NE(no_seed.err.find("seed"), std::string::npos);

    auto over = run("simulate", sim, 1, 1000);
    EXPECT_EQ(over.code, kExitBudget);
    EXPECT_EQ(over.manifest()["error"]["kind"], "budget");

    json typo = sim;
    typo["trajectorys"] = 3;
    EXPECT_EQ(run("simulate", typo, 1).code, kExitValidation);
    json zero = sim;
    zero["trajectories"] = 0;
    EXPECT_EQ(run("simulate", zero, 1).code, kExitValidation);
    json wrong_type = sim;
    wrong_type["beta"] = "hot";
    EXPECT_EQ(run("simulate", wrong_type, 1).code, kExitValidation);
    EXPECT_EQ(run("nosuch", sim, 1).code, kExitValidation);

    GlobalOptions opts;
    opts.config_path = (fresh_dir("missing") / "none.json").string();
    opts.out_dir = fresh_dir("missing_out").string();
    std::ostringstream out, err;
    EXPECT_EQ(run_command("build", opts, out, err), kExitValidation);
}

TEST(Commands, simulate_is_reproducible_across_worker_counts) {
    json sim = {{"code", {{"family", "toric"}}}, {"L", 3}, {"beta", {0.5, 1.0}}, {"trajectories", 24},
                {"checkpoints", {{"count", 6}}}, {"svg", true}};
    auto a = run("simulate", sim, 99, std::nullopt, 1);
    auto b = run("simulate", sim, 99, std::nullopt, 3);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    for (const char *name : {"records.jsonl", "summary.json", "success.csv", "tmem.csv", "success.svg"}) {
        EXPECT_EQ(slurp(a.dir / name), slurp(b.dir / name)) << name;
    }
    auto m = a.manifest();
    EXPECT_EQ(m["seed"], 99);
    EXPECT_EQ(m["derived_seeds"].size(), 4u);
    EXPECT_EQ(m["outputs"].size(), 5u);
    EXPECT_EQ(m["outputs"], b.manifest()["outputs"]);
    auto summary = json::parse(slurp(a.dir / "summary.json"));
    EXPECT_EQ(summary[0]["method"], "monte_carlo");
    EXPECT_TRUE(summary[0].contains("seed"));
}
