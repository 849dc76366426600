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

#include "selfcorr/dynamics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace selfcorr {

double rate(std::int64_t e_from, std::int64_t e_to, double beta) {
    if (e_from < 0 || e_to < 0) {
        throw ValidationError("energies must be non-negative");
    }
    if (beta < 0) {
        throw ValidationError("beta must be non-negative");
    }
    double x = beta * static_cast<double>(e_to - e_from);
    // Written to avoid overflow of exp for large positive x.
    if (x > 0) {
        double t = std::exp(-x);
        return t / (1.0 + t);
    }
    return 1.0 / (1.0 + std::exp(x));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw std::logic_error("Rng::below(0)");
    }
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::exponential(double rate) {
    // 1 - uniform() lies in (0, 1], so the log is finite.
    return -std::log(1.0 - uniform()) / rate;
}

GlauberChain::GlauberChain(const SparseFqMatrix &h, double beta, std::uint64_t seed)
    : h_(&h), beta_(beta), rng_(seed), tracker_(h), q_(h.field().q()) {
    if (beta < 0 || !std::isfinite(beta)) {
        throw ValidationError("beta must be finite and non-negative");
    }
    total_rate_ = static_cast<double>(h.cols()) * static_cast<double>(q_ - 1);
    max_delta_ = static_cast<std::int64_t>(h.max_col_weight());
    accept_.resize(static_cast<std::size_t>(2 * max_delta_ + 1));
    for (std::int64_t d = -max_delta_; d <= max_delta_; ++d) {
        accept_[static_cast<std::size_t>(d + max_delta_)] =
            rate(std::max<std::int64_t>(0, -d), std::max<std::int64_t>(0, d), beta);
    }
    next_event_ = total_rate_ > 0 ? rng_.exponential(total_rate_)
                                  : std::numeric_limits<double>::infinity();
}

void GlauberChain::apply_event() {
    const auto n = static_cast<std::uint64_t>(h_->cols());
    auto i = static_cast<std::uint32_t>(rng_.below(n));
    std::uint32_t cur = tracker_.word()[i].rep;
    std::uint32_t v;
    if (q_ == 2) {
        v = cur ^ 1u;
    } else {
        v = static_cast<std::uint32_t>(rng_.below(q_ - 1));
        if (v >= cur) {
            ++v;
        }
    }
    auto e_new = static_cast<std::int64_t>(tracker_.energy_if(i, Fq{v}));
    std::int64_t d = e_new - static_cast<std::int64_t>(tracker_.energy());
    if (rng_.uniform() < accept_[static_cast<std::size_t>(d + max_delta_)]) {
        tracker_.set(i, Fq{v});
    }
    if (++events_ % kVerifyInterval == 0 && !verify()) {
        throw std::logic_error("incremental syndrome diverged from H c");
    }
}

void GlauberChain::step() {
    if (total_rate_ == 0) {
        return;
    }
    time_ = next_event_;
    apply_event();
    next_event_ += rng_.exponential(total_rate_);
}

void GlauberChain::run_until(double t) {
    while (next_event_ <= t) {
        time_ = next_event_;
        apply_event();
        next_event_ += rng_.exponential(total_rate_);
    }
    time_ = std::max(time_, t);
}

bool GlauberChain::verify() const { return h_->apply(tracker_.word()) == tracker_.syndrome(); }

const char *to_string(DecoderKind k) {
    switch (k) {
        case DecoderKind::brute_force:
            return "brute_force";
        case DecoderKind::lookup:
            return "lookup";
        case DecoderKind::greedy:
            return "greedy";
    }
    return "?";
}

DecoderKind decoder_kind_from_string(const std::string &s) {
    if (s == "brute_force") return DecoderKind::brute_force;
    if (s == "lookup") return DecoderKind::lookup;
    if (s == "greedy") return DecoderKind::greedy;
    throw ValidationError("unknown decoder '" + s + "' (expected brute_force, lookup or greedy)");
}

namespace {

std::string syndrome_key(std::span<const Fq> s) {
    std::string key;
    for (std::uint32_t i = 0; i < s.size(); ++i) {
        if (!s[i].is_zero()) {
            const char bytes[6] = {static_cast<char>(i), static_cast<char>(i >> 8),
                                   static_cast<char>(i >> 16), static_cast<char>(i >> 24),
                                   static_cast<char>(s[i].rep), static_cast<char>(s[i].rep >> 8)};
            key.append(bytes, 6);
        }
    }
    return key;
}

bool lex_less(const Word &a, const Word &b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rep != b[i].rep) {
            return a[i].rep < b[i].rep;
        }
    }
    return false;
}

}  // namespace

Decoder::Decoder(const SparseFqMatrix &h, DecoderSpec spec) : h_(&h), spec_(spec) {
    const Field &f = h.field();
    switch (spec_.kind) {
        case DecoderKind::brute_force: {
            solver_.emplace(h);
            kernel_ = kernel_basis(h);
            std::uint64_t size = 1;
            for (std::size_t i = 0; i < kernel_.size(); ++i) {
                if (size > spec_.coset_budget / f.q()) {
                    throw BudgetExceeded("brute-force decoder: coset size " +
                                          std::to_string(f.q()) + "^" +
                                          std::to_string(kernel_.size()) +
                                          " exceeds the coset budget");
                }
                size *= f.q();
            }
            break;
        }
        case DecoderKind::lookup: {
            std::uint64_t entries = 0;
            for (std::size_t w = 1; w <= std::min(spec_.max_weight, h.cols()); ++w) {
                for_each_normalized_word(f, h.cols(), w, [&](const Word &e) {
                    if (++entries > spec_.coset_budget) {
                        throw BudgetExceeded("lookup decoder: table exceeds the budget of " +
                                              std::to_string(spec_.coset_budget) + " words");
                    }
                    Word s = h.apply(e);
                    for (std::uint32_t a = 1; a < f.q(); ++a) {
                        Word scaled_s(s.size()), scaled_e(e.size());
                        for (std::size_t i = 0; i < s.size(); ++i) scaled_s[i] = f.mul(Fq{a}, s[i]);
                        for (std::size_t i = 0; i < e.size(); ++i) scaled_e[i] = f.mul(Fq{a}, e[i]);
                        table_.try_emplace(syndrome_key(scaled_s), SparseWord::from_dense(scaled_e));
                    }
                    return true;
                });
            }
            break;
        }
        case DecoderKind::greedy:
            break;
    }
}

std::optional<Word> Decoder::decode(std::span<const Fq> syndrome) const {
    if (syndrome.size() != h_->rows()) {
        throw ValidationError("syndrome length does not match the check matrix");
    }
    if (weight(syndrome) == 0) {
        return Word(h_->cols());
    }
    switch (spec_.kind) {
        case DecoderKind::brute_force:
            return brute_force(syndrome);
        case DecoderKind::lookup:
            return lookup(syndrome);
        case DecoderKind::greedy:
            return greedy(syndrome);
    }
    return std::nullopt;
}

std::optional<Word> Decoder::brute_force(std::span<const Fq> s) const {
    auto x0 = solver_->solve(s);
    if (!x0) {
        return std::nullopt;
    }
    SpanEnumerator it(h_->field(), std::move(*x0), kernel_);
    Word best = it.current();
    std::size_t best_w = it.current_weight();
    while (it.next()) {
        std::size_t w = it.current_weight();
        if (w < best_w || (w == best_w && lex_less(it.current(), best))) {
            best = it.current();
            best_w = w;
        }
    }
    return best;
}

std::optional<Word> Decoder::lookup(std::span<const Fq> s) const {
    auto it = table_.find(syndrome_key(s));
    if (it == table_.end()) {
        return std::nullopt;
    }
    return it->second.to_dense();
}

std::optional<Word> Decoder::greedy(std::span<const Fq> s) const {
    const Field &f = h_->field();
    Word residual(s.begin(), s.end());
    Word e(h_->cols());
    std::size_t remaining = weight(residual);
    for (std::size_t round = 0; round < spec_.max_rounds && remaining > 0; ++round) {
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t r = 0; r < residual.size(); ++r) {
            if (!residual[r].is_zero()) {
                for (const auto &en : h_->row(r)) candidates.push_back(en.index);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::ptrdiff_t best_gain = 0;
        std::uint32_t best_i = 0;
        Fq best_d{};
        for (auto i : candidates) {
            for (std::uint32_t a = 1; a < f.q(); ++a) {
                std::ptrdiff_t gain = 0;
                for (const auto &en : h_->col(i)) {
                    Fq before = residual[en.index];
                    Fq after = f.sub(before, f.mul(en.value, Fq{a}));
                    gain += (before.is_zero() ? 0 : 1) - (after.is_zero() ? 0 : 1);
                }
                if (gain > best_gain) {
                    best_gain = gain;
                    best_i = i;
                    best_d = Fq{a};
                }
            }
        }
        if (best_gain <= 0) {
            return std::nullopt;
        }
        for (const auto &en : h_->col(best_i)) {
            residual[en.index] = f.sub(residual[en.index], f.mul(en.value, best_d));
        }
        e[best_i] = f.add(e[best_i], best_d);
        remaining -= static_cast<std::size_t>(best_gain);
    }
    if (remaining > 0) {
        return std::nullopt;
    }
    return e;
}

std::vector<double> geometric_checkpoints(double t0, double ratio, std::size_t count) {
    if (t0 <= 0 || ratio <= 1) {
        throw ValidationError("geometric checkpoints need t0 > 0 and ratio > 1");
    }
    std::vector<double> out;
    double t = t0;
    for (std::size_t i = 0; i < count; ++i, t *= ratio) {
        out.push_back(t);
    }
    return out;
}

std::vector<double> linear_checkpoints(double t0, double step, std::size_t count) {
    if (t0 <= 0 || step <= 0) {
        throw ValidationError("linear checkpoints need t0 > 0 and step > 0");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(t0 + step * static_cast<double>(i));
    }
    return out;
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2 * nn)) / denom;
    double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void summarize(MemoryTimeEstimate &est) {
    const std::size_t m = est.times.size();
    est.p_hat.assign(m, 0.0);
    est.ci.assign(m, Interval{});
    est.t_mem = 0.0;
    est.t_mem_conservative = 0.0;
    est.t_mem_ci = Interval{};
    for (std::size_t j = 0; j < m; ++j) {
        est.p_hat[j] = est.trajectories == 0
                           ? 0.0
                           : static_cast<double>(est.successes[j]) /
                                 static_cast<double>(est.trajectories);
        est.ci[j] = wilson_interval(est.successes[j], est.trajectories);
        if (est.p_hat[j] >= est.threshold) est.t_mem = est.times[j];
        if (est.ci[j].lo >= est.threshold) est.t_mem_conservative = est.times[j];
        if (est.ci[j].hi >= est.threshold) est.t_mem_ci.hi = est.times[j];
    }
    est.t_mem_ci.lo = est.t_mem_conservative;
    est.censored = m > 0 && est.p_hat.back() >= est.threshold;
}

MemoryTimeEstimate estimate_memory_time(const CodeInstance &inst, const GlauberParams &params,
                                        const DecoderSpec &decoder_spec, Sector sector) {
    if (params.trajectories == 0) {
        throw ValidationError("trajectories must be positive");
    }
    if (params.checkpoints.empty()) {
        throw ValidationError("at least one checkpoint is required");
    }
    for (std::size_t j = 0; j < params.checkpoints.size(); ++j) {
        if (params.checkpoints[j] <= 0 || (j > 0 && params.checkpoints[j] <= params.checkpoints[j - 1])) {
            throw ValidationError("checkpoints must be positive and strictly increasing");
        }
    }
    if (params.beta < 0 || !std::isfinite(params.beta)) {
        throw ValidationError("beta must be finite and non-negative");
    }
    const SparseFqMatrix &h = sector_checks(inst, sector);
    TrivialityTester tester(inst, sector);
    Decoder decoder(h, decoder_spec);

    const std::size_t n_traj = params.trajectories;
    const std::size_t n_chk = params.checkpoints.size();
    std::vector<CheckpointRecord> records(n_traj * n_chk);
    std::vector<std::uint64_t> events(n_traj, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            while (true) {
                std::size_t traj = next.fetch_add(1);
                if (traj >= n_traj) {
                    return;
                }
                GlauberChain chain(h, params.beta, stream_seed(params.seed, traj));
                for (std::size_t j = 0; j < n_chk; ++j) {
                    chain.run_until(params.checkpoints[j]);
                    Word snapshot = chain.word();
                    auto e = decoder.decode(chain.syndrome());
                    bool success = false;
                    if (e) {
                        for (std::size_t i = 0; i < snapshot.size(); ++i) {
                            snapshot[i] = inst.field.sub(snapshot[i], (*e)[i]);
                        }
                        success = tester.is_trivial(snapshot);
                    }
                    records[traj * n_chk + j] = CheckpointRecord{
                        static_cast<std::uint32_t>(traj), static_cast<std::uint32_t>(j),
                        params.checkpoints[j], chain.energy(), e.has_value(), success};
                }
                events[traj] = chain.events();
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(n_traj);
        }
    };
    std::size_t workers = std::max<std::size_t>(1, std::min(params.workers, n_traj));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    MemoryTimeEstimate est;
    est.times = params.checkpoints;
    est.successes.assign(n_chk, 0);
    for (const auto &r : records) {
        est.successes[r.checkpoint] += r.success ? 1 : 0;
    }
    est.trajectories = n_traj;
    est.seed = params.seed;
    est.beta = params.beta;
    est.sector = sector;
    est.decoder = to_string(decoder_spec.kind);
    est.provenance = inst.provenance;
    for (auto e : events) {
        est.events += e;
    }
    est.records = std::move(records);
    summarize(est);
    return est;
}

}  // namespace selfcorr
