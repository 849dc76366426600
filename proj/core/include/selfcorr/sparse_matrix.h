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

#ifndef SELFCORR_SPARSE_MATRIX_H
#define SELFCORR_SPARSE_MATRIX_H

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "selfcorr/field.h"

namespace selfcorr {

/// Dense vector over F_q; used for words, syndromes and simulation state.
using Word = std::vector<Fq>;

struct Entry {
    std::uint32_t index;
    Fq value;
    bool operator==(const Entry &) const = default;
};

/// Hamming weight of a dense word.
std::size_t weight(std::span<const Fq> w);

/// Sparse vector: sorted support with nonzero values.
class SparseWord {
   public:
    SparseWord() = default;
    explicit SparseWord(std::size_t n) : n_(n) {}
    static SparseWord from_dense(std::span<const Fq> dense);
    /// Entries may be unsorted; zeros are dropped; duplicate indices are rejected.
    static SparseWord from_entries(std::size_t n, std::vector<Entry> entries);

    std::size_t size() const { return n_; }
    std::size_t weight() const { return entries_.size(); }
    const std::vector<Entry> &entries() const { return entries_; }
    Word to_dense() const;
    Fq at(std::uint32_t i) const;

    bool operator==(const SparseWord &) const = default;

   private:
    std::size_t n_ = 0;
    std::vector<Entry> entries_;
};

/// One (row, col, value) triple.
struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Fq value;
};

enum class DuplicatePolicy {
    /// Coefficients at the same position are added (torus wrap-around of a polynomial).
    sum,
    /// Repeated positions must carry identical coefficients; otherwise ValidationError.
    reject_conflict,
};

/// Sparse matrix over F_q with row and column adjacency; no stored zeros.
class SparseFqMatrix {
   public:
    SparseFqMatrix(Field field, std::size_t rows, std::size_t cols);
    static SparseFqMatrix from_triplets(Field field, std::size_t rows, std::size_t cols,
                                        std::span<const Triplet> triplets,
                                        DuplicatePolicy policy = DuplicatePolicy::sum);
    static SparseFqMatrix identity(Field field, std::size_t n);

    const Field &field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;

    const std::vector<Entry> &row(std::size_t r) const { return row_entries_[r]; }
    const std::vector<Entry> &col(std::size_t c) const { return col_entries_[c]; }
    Fq at(std::size_t r, std::size_t c) const;

    std::size_t max_row_weight() const;
    std::size_t max_col_weight() const;

    /// M * x for a dense x of length cols().
    Word apply(std::span<const Fq> x) const;
    /// Weight of M * x without materializing the product.
    std::size_t syndrome_weight(std::span<const Fq> x) const;
    SparseFqMatrix transpose() const;
    /// this * other.
    SparseFqMatrix multiply(const SparseFqMatrix &other) const;
    /// this * other^T; the CSS commutation product.
    SparseFqMatrix multiply_transpose(const SparseFqMatrix &other) const;
    bool is_zero() const { return nnz() == 0; }
    std::vector<Triplet> triplets() const;
    std::vector<Word> to_dense() const;

    /// Text interchange: "rows cols p e" header, then one "row col value" line per entry.
    void write_text(std::ostream &out) const;
    std::string to_text() const;
    static SparseFqMatrix read_text(std::istream &in);
    static SparseFqMatrix parse_text(const std::string &text);

    bool operator==(const SparseFqMatrix &other) const;

   private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::vector<Entry>> row_entries_;
    std::vector<std::vector<Entry>> col_entries_;
};

/// Vertical stack [top; bottom].
SparseFqMatrix vstack(const SparseFqMatrix &top, const SparseFqMatrix &bottom);
/// Horizontal stack [left | right].
SparseFqMatrix hstack(const SparseFqMatrix &left, const SparseFqMatrix &right);
/// Kronecker product a ⊗ b; row index ra * b.rows() + rb, col index ca * b.cols() + cb.
SparseFqMatrix kron(const SparseFqMatrix &a, const SparseFqMatrix &b);
/// Entrywise negation.
SparseFqMatrix negated(const SparseFqMatrix &m);

}  // namespace selfcorr

#endif
