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

#ifndef SELFCORR_SYNDROME_H
#define SELFCORR_SYNDROME_H

#include <functional>

#include "selfcorr/sparse_matrix.h"

namespace selfcorr {

/// Word plus its syndrome H c, updated one coordinate at a time.
class SyndromeTracker {
   public:
    explicit SyndromeTracker(const SparseFqMatrix &h)
        : h_(&h), word_(h.cols()), syndrome_(h.rows()) {}

    const Word &word() const { return word_; }
    const Word &syndrome() const { return syndrome_; }
    std::size_t energy() const { return energy_; }
    std::size_t word_weight() const { return word_weight_; }

    /// Energy after setting coordinate i to v, without applying it.
    std::size_t energy_if(std::uint32_t i, Fq v) const {
        const Field &f = h_->field();
        Fq d = f.sub(v, word_[i]);
        std::size_t e = energy_;
        for (const auto &en : h_->col(i)) {
            Fq before = syndrome_[en.index];
            Fq after = f.add(before, f.mul(en.value, d));
            e += (after.is_zero() ? 0 : 1);
            e -= (before.is_zero() ? 0 : 1);
        }
        return e;
    }

    void set(std::uint32_t i, Fq v) {
        const Field &f = h_->field();
        Fq d = f.sub(v, word_[i]);
        if (d.is_zero()) {
            return;
        }
        for (const auto &en : h_->col(i)) {
            Fq before = syndrome_[en.index];
            Fq after = f.add(before, f.mul(en.value, d));
            energy_ += (after.is_zero() ? 0 : 1);
            energy_ -= (before.is_zero() ? 0 : 1);
            syndrome_[en.index] = after;
        }
        word_weight_ += (v.is_zero() ? 0 : 1);
        word_weight_ -= (word_[i].is_zero() ? 0 : 1);
        word_[i] = v;
    }

    void reset() {
        std::fill(word_.begin(), word_.end(), Fq{});
        std::fill(syndrome_.begin(), syndrome_.end(), Fq{});
        energy_ = 0;
        word_weight_ = 0;
    }

   private:
    const SparseFqMatrix *h_;
    Word word_;
    Word syndrome_;
    std::size_t energy_ = 0;
    std::size_t word_weight_ = 0;
};

/// Calls fn on every word of length n and weight exactly w whose first nonzero coordinate is 1
/// (one representative per scalar multiple). Stops early when fn returns false; returns false
/// in that case.
bool for_each_normalized_word(const Field &f, std::size_t n, std::size_t w,
                              const std::function<bool(const Word &)> &fn);

}  // namespace selfcorr

#endif
