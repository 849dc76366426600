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

#include <benchmark/benchmark.h>

#include <random>

#include "selfcorr/codes.h"
#include "selfcorr/dynamics.h"
#include "selfcorr/instance.h"
#include "selfcorr/laurent.h"
#include "selfcorr/linalg.h"

using namespace selfcorr;

static void BM_rank_toric(benchmark::State &state) {
    auto inst = instantiate(make_toric(), static_cast<std::size_t>(state.range(0)), Boundary::torus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank(inst.hx));
    }
    state.SetLabel("n=" + std::to_string(inst.n));
}
BENCHMARK(BM_rank_toric)->Arg(8)->Arg(16)->Arg(32);

static void BM_rank_haah_f4(benchmark::State &state) {
    std::mt19937_64 rng(1);
    auto draw = [&] { return rng(); };
    Field f(2, 2);
    auto code = make_haah_family(random_poly(f, 3, cube_corners_3d(), draw), random_poly(f, 3, cube_corners_3d(), draw));
    auto inst = instantiate(code, static_cast<std::size_t>(state.range(0)), Boundary::torus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank(inst.hx));
    }
}
BENCHMARK(BM_rank_haah_f4)->Arg(4)->Arg(6);

static void BM_glauber_step(benchmark::State &state) {
    auto inst = instantiate(make_ising(2), static_cast<std::size_t>(state.range(0)), Boundary::torus);
    GlauberChain chain(inst.hx, 0.8, 7);
    for (auto _ : state) {
        chain.step();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_glauber_step)->Arg(16)->Arg(64);

static void BM_glauber_step_toric(benchmark::State &state) {
    auto inst = instantiate(make_toric(), 16, Boundary::torus);
    GlauberChain chain(inst.hx, 1.0, 7);
    for (auto _ : state) {
        chain.step();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_glauber_step_toric);

static void BM_poly_pow(benchmark::State &state) {
    auto f = LaurentPoly::parse("1+x+y", Field(3, 1), 2);
    const auto e = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.pow(e));
    }
}
BENCHMARK(BM_poly_pow)->Arg(26)->Arg(80)->Arg(242);

BENCHMARK_MAIN();
