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

#ifndef SELFCORR_LINALG_H
#define SELFCORR_LINALG_H

#include <optional>
#include <span>
#include <vector>

#include "selfcorr/sparse_matrix.h"

namespace selfcorr {

enum class PivotRule {
    /// Among active rows, pivot on the column with the fewest nonzeros, then the shortest row.
    markowitz,
    /// Pivot on columns in a caller-given order (information-set style).
    column_order,
};

/// Row echelon form of a sparse matrix over F_q.
///
/// Invariant: pivot row k contains its pivot column, non-pivot columns, and pivot columns of
/// later pivots only. This is what makes reduction in pivot order and back-substitution in
/// reverse pivot order valid without a full Gauss-Jordan pass.
class RowEchelon {
   public:
    explicit RowEchelon(const SparseFqMatrix &m, PivotRule rule = PivotRule::markowitz,
                        std::span<const std::uint32_t> column_order = {});

    const Field &field() const { return field_; }
    std::size_t rank() const { return pivot_rows_.size(); }
    std::size_t cols() const { return cols_; }
    const std::vector<std::uint32_t> &pivot_columns() const { return pivot_cols_; }
    std::vector<std::uint32_t> free_columns() const;

    /// Reduces v against the row space in place; v becomes zero iff it was in the row space.
    void reduce(Word &v) const;
    bool in_row_space(std::span<const Fq> v) const;

    /// Basis of {x : M x = 0}, one vector per free column (that coordinate set to 1).
    std::vector<SparseWord> kernel_basis() const;
    /// Echelon rows; a basis of the row space.
    std::vector<SparseWord> row_basis() const;

   private:
    Field field_;
    std::size_t cols_;
    std::vector<std::vector<Entry>> pivot_rows_;
    std::vector<std::uint32_t> pivot_cols_;
    std::vector<std::int32_t> pivot_of_col_;
};

std::size_t rank(const SparseFqMatrix &m);
std::vector<SparseWord> kernel_basis(const SparseFqMatrix &m);

/// Some x with M x = s (free coordinates set to zero), or nullopt when s is not in the image.
std::optional<Word> solve(const SparseFqMatrix &m, std::span<const Fq> s);

/// Solves M x = s for many right-hand sides; eliminates [M | I] once.
class LinearSolver {
   public:
    explicit LinearSolver(const SparseFqMatrix &m);
    std::size_t rank() const { return pivot_rows_.size(); }
    /// Some x with M x = s (free coordinates zero), or nullopt when s is not in the image.
    std::optional<Word> solve(std::span<const Fq> s) const;

   private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::vector<Entry>> pivot_rows_;
    std::vector<std::uint32_t> pivot_cols_;
    std::vector<std::vector<Entry>> null_rows_;
};

/// Enumerates the F_q-span of a basis, visiting every element exactly once (q^k elements,
/// starting from 0). Successive elements differ by adding a multiple of one basis vector
/// (a q-ary reflected Gray code), so callers can update derived quantities incrementally.
class SpanEnumerator {
   public:
    SpanEnumerator(Field field, std::size_t n, std::vector<SparseWord> basis);
    /// Enumerates the coset offset + span instead.
    SpanEnumerator(Field field, Word offset, std::vector<SparseWord> basis);

    /// Total number of elements, or nullopt if it exceeds 2^62.
    std::optional<std::uint64_t> size() const;
    const Word &current() const { return current_; }
    std::size_t current_weight() const { return weight_; }
    /// Advances to the next element; returns false after the last one.
    bool next();

   private:
    Field field_;
    std::vector<SparseWord> basis_;
    Word current_;
    std::size_t weight_ = 0;
    std::vector<std::uint32_t> digits_;
    std::vector<int> direction_;
};

}  // namespace selfcorr

#endif
