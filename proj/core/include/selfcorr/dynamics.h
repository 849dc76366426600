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

#ifndef SELFCORR_DYNAMICS_H
#define SELFCORR_DYNAMICS_H

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "selfcorr/instance.h"
#include "selfcorr/params.h"
#include "selfcorr/syndrome.h"

namespace selfcorr {

/// Heat-bath rate 1 / (1 + e^{beta (E_to - E_from)}).
double rate(std::int64_t e_from, std::int64_t e_to, double beta);

/// SplitMix64 finaliser; derives independent stream seeds from (master seed, index).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// mt19937_64 with explicit conversions (no implementation-defined distributions), so draws are
/// identical across standard libraries.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n), rejection-sampled.
    std::uint64_t below(std::uint64_t n);
    /// Exponential with the given rate.
    double exponential(double rate);

   private:
    std::mt19937_64 engine_;
};

/// Continuous-time Glauber chain by uniformization: events at total rate n (q - 1); each event
/// proposes one of the n (q - 1) single-coordinate changes uniformly and accepts it with
/// probability rate(E, E', beta).
class GlauberChain {
   public:
    GlauberChain(const SparseFqMatrix &h, double beta, std::uint64_t seed);

    const Word &word() const { return tracker_.word(); }
    const Word &syndrome() const { return tracker_.syndrome(); }
    std::size_t energy() const { return tracker_.energy(); }
    double time() const { return time_; }
    std::uint64_t events() const { return events_; }

    /// One uniformization event (possibly a rejected proposal). Advances the clock.
    void step();
    /// Apply every event with time <= t; the clock ends at t.
    void run_until(double t);
    /// Recomputes H c and compares with the maintained syndrome.
    bool verify() const;

    static constexpr std::uint64_t kVerifyInterval = 1'000'000;

   private:
    void apply_event();

    const SparseFqMatrix *h_;
    double beta_;
    Rng rng_;
    SyndromeTracker tracker_;
    std::uint32_t q_;
    double total_rate_;
    double time_ = 0.0;
    double next_event_ = 0.0;
    std::uint64_t events_ = 0;
    std::int64_t max_delta_ = 0;
    std::vector<double> accept_;  // indexed by delta + max_delta_
};

enum class DecoderKind { brute_force, lookup, greedy };

const char *to_string(DecoderKind k);
DecoderKind decoder_kind_from_string(const std::string &s);

struct DecoderSpec {
    DecoderKind kind = DecoderKind::brute_force;
    std::size_t max_weight = 3;      // lookup table radius
    std::size_t max_rounds = 1000;   // greedy rounds
    std::uint64_t coset_budget = 1u << 20;
};

/// Syndrome-only decoder: returns e with H e = s, or nullopt on failure.
class Decoder {
   public:
    Decoder(const SparseFqMatrix &h, DecoderSpec spec);
    std::optional<Word> decode(std::span<const Fq> syndrome) const;
    const DecoderSpec &spec() const { return spec_; }

   private:
    std::optional<Word> brute_force(std::span<const Fq> s) const;
    std::optional<Word> lookup(std::span<const Fq> s) const;
    std::optional<Word> greedy(std::span<const Fq> s) const;

    const SparseFqMatrix *h_;
    DecoderSpec spec_;
    std::optional<LinearSolver> solver_;
    std::vector<SparseWord> kernel_;
    std::unordered_map<std::string, SparseWord> table_;
};

/// Checkpoint grids.
std::vector<double> geometric_checkpoints(double t0, double ratio, std::size_t count);
std::vector<double> linear_checkpoints(double t0, double step, std::size_t count);

struct GlauberParams {
    double beta = 1.0;
    std::vector<double> checkpoints = geometric_checkpoints(1.0, 2.0, 12);
    std::uint64_t seed = 0;
    std::size_t trajectories = 100;
    std::size_t workers = 1;
};

struct CheckpointRecord {
    std::uint32_t trajectory;
    std::uint32_t checkpoint;
    double time;
    std::size_t energy;
    bool decoded;  // decoder returned a correction
    bool success;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for k successes out of n at normal quantile z.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct MemoryTimeEstimate {
    std::vector<double> times;
    std::vector<std::size_t> successes;
    std::vector<double> p_hat;
    std::vector<Interval> ci;
    double threshold = 2.0 / 3.0;
    /// Largest checkpoint with p_hat >= threshold (0 if none).
    double t_mem = 0.0;
    /// Largest checkpoint with the lower CI bound >= threshold (0 if none).
    double t_mem_conservative = 0.0;
    /// [t_mem_conservative, largest checkpoint with the upper CI bound >= threshold].
    Interval t_mem_ci;
    /// Threshold still met at the last checkpoint: t_mem is a lower bound.
    bool censored = false;
    std::size_t trajectories = 0;
    std::uint64_t seed = 0;
    double beta = 0.0;
    Sector sector = Sector::classical;
    std::string decoder;
    std::string provenance;
    std::uint64_t events = 0;
    std::vector<CheckpointRecord> records;
};

/// N trajectories from the zero word; at each checkpoint the snapshot is decoded and counts as a
/// success iff the corrected word is zero (classical) or a stabilizer (quantum sector).
MemoryTimeEstimate estimate_memory_time(const CodeInstance &inst, const GlauberParams &params,
                                        const DecoderSpec &decoder, Sector sector);

/// Recomputes p_hat, intervals and T_mem fields from `successes`.
void summarize(MemoryTimeEstimate &est);

}  // namespace selfcorr

#endif
