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

#include "selfcorr/linalg.h"

#include <algorithm>
#include <limits>

namespace selfcorr {

namespace {

using Row = std::vector<Entry>;

Fq row_coeff(const Row &row, std::uint32_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const Entry &e, std::uint32_t key) { return e.index < key; });
    return (it != row.end() && it->index == col) ? it->value : Fq{};
}

// target - factor * source, merged over sorted supports.
Row axpy(const Field &f, const Row &target, Fq factor, const Row &source) {
    Row out;
    out.reserve(target.size() + source.size());
    auto a = target.begin();
    auto b = source.begin();
    while (a != target.end() || b != source.end()) {
        if (b == source.end() || (a != target.end() && a->index < b->index)) {
            out.push_back(*a++);
        } else if (a == target.end() || b->index < a->index) {
            out.push_back({b->index, f.neg(f.mul(factor, b->value))});
            ++b;
        } else {
            Fq v = f.sub(a->value, f.mul(factor, b->value));
            if (!v.is_zero()) {
                out.push_back({a->index, v});
            }
            ++a;
            ++b;
        }
    }
    return out;
}

// Sparse elimination over the rows; pivots restricted to columns < pivot_limit.
struct Eliminator {
    const Field &field;
    std::size_t cols;
    std::size_t pivot_limit;
    std::vector<Row> rows;
    std::vector<bool> active;
    std::vector<std::vector<std::uint32_t>> col_rows;
    std::vector<std::size_t> col_count;

    std::vector<Row> pivot_rows;
    std::vector<std::uint32_t> pivot_cols;

    Eliminator(const Field &f, std::size_t c, std::size_t limit, std::vector<Row> input)
        : field(f), cols(c), pivot_limit(limit), rows(std::move(input)) {
        active.assign(rows.size(), true);
        col_rows.resize(cols);
        col_count.assign(cols, 0);
        for (std::uint32_t r = 0; r < rows.size(); ++r) {
            for (const auto &e : rows[r]) {
                col_rows[e.index].push_back(r);
                ++col_count[e.index];
            }
        }
    }

    std::vector<std::uint32_t> live_rows(std::uint32_t c) {
        auto &list = col_rows[c];
        std::vector<std::uint32_t> out;
        std::vector<std::uint32_t> keep;
        for (auto r : list) {
            if (active[r] && !row_coeff(rows[r], c).is_zero()) {
                keep.push_back(r);
            }
        }
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        list = keep;
        return keep;
    }

    void pivot_on(std::uint32_t c, std::uint32_t p) {
        active[p] = false;
        for (const auto &e : rows[p]) {
            --col_count[e.index];
        }
        Fq inv = field.inv(row_coeff(rows[p], c));
        for (auto r : live_rows(c)) {
            Fq factor = field.mul(row_coeff(rows[r], c), inv);
            for (const auto &e : rows[r]) {
                --col_count[e.index];
            }
            Row updated = axpy(field, rows[r], factor, rows[p]);
            // Register newly filled positions.
            auto old_it = rows[r].begin();
            for (const auto &e : updated) {
                while (old_it != rows[r].end() && old_it->index < e.index) {
                    ++old_it;
                }
                if (old_it == rows[r].end() || old_it->index != e.index) {
                    col_rows[e.index].push_back(r);
                }
                ++col_count[e.index];
            }
            rows[r] = std::move(updated);
        }
        pivot_rows.push_back(std::move(rows[p]));
        pivot_cols.push_back(c);
        rows[p].clear();
    }

    std::uint32_t shortest(const std::vector<std::uint32_t> &candidates) const {
        std::uint32_t best = candidates.front();
        for (auto r : candidates) {
            if (rows[r].size() < rows[best].size()) {
                best = r;
            }
        }
        return best;
    }

    void run_markowitz() {
        while (true) {
            std::size_t best_count = std::numeric_limits<std::size_t>::max();
            std::uint32_t best_col = 0;
            for (std::uint32_t c = 0; c < pivot_limit; ++c) {
                if (col_count[c] > 0 && col_count[c] < best_count) {
                    best_count = col_count[c];
                    best_col = c;
                    if (best_count == 1) {
                        break;
                    }
                }
            }
            if (best_count == std::numeric_limits<std::size_t>::max()) {
                return;
            }
            auto candidates = live_rows(best_col);
            pivot_on(best_col, shortest(candidates));
        }
    }

    void run_ordered(std::span<const std::uint32_t> order) {
        std::vector<bool> seen(cols, false);
        auto visit = [&](std::uint32_t c) {
            if (c >= pivot_limit || seen[c]) {
                return;
            }
            seen[c] = true;
            if (col_count[c] == 0) {
                return;
            }
            auto candidates = live_rows(c);
            if (!candidates.empty()) {
                pivot_on(c, shortest(candidates));
            }
        };
        for (auto c : order) {
            visit(c);
        }
        for (std::uint32_t c = 0; c < pivot_limit; ++c) {
            visit(c);
        }
    }
};

std::vector<Row> rows_of(const SparseFqMatrix &m) {
    std::vector<Row> rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows[r] = m.row(r);
    }
    return rows;
}

}  // namespace

RowEchelon::RowEchelon(const SparseFqMatrix &m, PivotRule rule,
                       std::span<const std::uint32_t> column_order)
    : field_(m.field()), cols_(m.cols()) {
    Eliminator elim(field_, cols_, cols_, rows_of(m));
    if (rule == PivotRule::markowitz) {
        elim.run_markowitz();
    } else {
        elim.run_ordered(column_order);
    }
    pivot_rows_ = std::move(elim.pivot_rows);
    pivot_cols_ = std::move(elim.pivot_cols);
    pivot_of_col_.assign(cols_, -1);
    for (std::size_t k = 0; k < pivot_cols_.size(); ++k) {
        pivot_of_col_[pivot_cols_[k]] = static_cast<std::int32_t>(k);
    }
}

std::vector<std::uint32_t> RowEchelon::free_columns() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < cols_; ++c) {
        if (pivot_of_col_[c] < 0) {
            out.push_back(c);
        }
    }
    return out;
}

void RowEchelon::reduce(Word &v) const {
    if (v.size() != cols_) {
        throw ValidationError("reduce: vector length mismatch");
    }
    for (std::size_t k = 0; k < pivot_rows_.size(); ++k) {
        Fq x = v[pivot_cols_[k]];
        if (x.is_zero()) {
            continue;
        }
        const Row &row = pivot_rows_[k];
        Fq factor = field_.div(x, row_coeff(row, pivot_cols_[k]));
        for (const auto &e : row) {
            v[e.index] = field_.sub(v[e.index], field_.mul(factor, e.value));
        }
    }
}

bool RowEchelon::in_row_space(std::span<const Fq> v) const {
    Word w(v.begin(), v.end());
    reduce(w);
    return weight(w) == 0;
}

std::vector<SparseWord> RowEchelon::kernel_basis() const {
    std::vector<SparseWord> basis;
    Word x(cols_);
    for (auto f : free_columns()) {
        std::fill(x.begin(), x.end(), Fq{});
        x[f] = field_.one();
        for (std::size_t k = pivot_rows_.size(); k-- > 0;) {
            const Row &row = pivot_rows_[k];
            std::uint32_t pc = pivot_cols_[k];
            Fq acc{};
            Fq lead{};
            for (const auto &e : row) {
                if (e.index == pc) {
                    lead = e.value;
                } else if (!x[e.index].is_zero()) {
                    acc = field_.add(acc, field_.mul(e.value, x[e.index]));
                }
            }
            x[pc] = acc.is_zero() ? Fq{} : field_.neg(field_.div(acc, lead));
        }
        basis.push_back(SparseWord::from_dense(x));
    }
    return basis;
}

std::vector<SparseWord> RowEchelon::row_basis() const {
    std::vector<SparseWord> out;
    out.reserve(pivot_rows_.size());
    for (const auto &row : pivot_rows_) {
        out.push_back(SparseWord::from_entries(cols_, row));
    }
    return out;
}

std::size_t rank(const SparseFqMatrix &m) { return RowEchelon(m).rank(); }

std::vector<SparseWord> kernel_basis(const SparseFqMatrix &m) { return RowEchelon(m).kernel_basis(); }

std::optional<Word> solve(const SparseFqMatrix &m, std::span<const Fq> s) {
    if (s.size() != m.rows()) {
        throw ValidationError("solve: right-hand side length mismatch");
    }
    const Field &f = m.field();
    const auto aug_col = static_cast<std::uint32_t>(m.cols());
    std::vector<Row> rows = rows_of(m);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!s[r].is_zero()) {
            rows[r].push_back({aug_col, s[r]});
        }
    }
    Eliminator elim(f, m.cols() + 1, m.cols(), std::move(rows));
    elim.run_markowitz();
    // Remaining active rows have no coefficient below the augmented column.
    for (std::size_t r = 0; r < elim.rows.size(); ++r) {
        if (elim.active[r] && !elim.rows[r].empty()) {
            return std::nullopt;
        }
    }
    Word x(m.cols() + 1);
    x[aug_col] = f.neg(f.one());
    for (std::size_t k = elim.pivot_rows.size(); k-- > 0;) {
        const Row &row = elim.pivot_rows[k];
        std::uint32_t pc = elim.pivot_cols[k];
        Fq acc{};
        Fq lead{};
        for (const auto &e : row) {
            if (e.index == pc) {
                lead = e.value;
            } else if (!x[e.index].is_zero()) {
                acc = f.add(acc, f.mul(e.value, x[e.index]));
            }
        }
        x[pc] = acc.is_zero() ? Fq{} : f.neg(f.div(acc, lead));
    }
    x.pop_back();
    return x;
}

LinearSolver::LinearSolver(const SparseFqMatrix &m)
    : field_(m.field()), rows_(m.rows()), cols_(m.cols()) {
    std::vector<Row> rows = rows_of(m);
    for (std::uint32_t r = 0; r < rows.size(); ++r) {
        rows[r].push_back({static_cast<std::uint32_t>(cols_ + r), field_.one()});
    }
    Eliminator elim(field_, cols_ + rows_, cols_, std::move(rows));
    elim.run_markowitz();
    pivot_rows_ = std::move(elim.pivot_rows);
    pivot_cols_ = std::move(elim.pivot_cols);
    for (std::size_t r = 0; r < elim.rows.size(); ++r) {
        if (elim.active[r] && !elim.rows[r].empty()) {
            null_rows_.push_back(std::move(elim.rows[r]));
        }
    }
}

std::optional<Word> LinearSolver::solve(std::span<const Fq> s) const {
    if (s.size() != rows_) {
        throw ValidationError("solve: right-hand side length mismatch");
    }
    auto transformed = [&](const Row &row) {
        Fq acc{};
        for (const auto &e : row) {
            if (e.index >= cols_) {
                acc = field_.add(acc, field_.mul(e.value, s[e.index - cols_]));
            }
        }
        return acc;
    };
    for (const auto &row : null_rows_) {
        if (!transformed(row).is_zero()) {
            return std::nullopt;
        }
    }
    Word x(cols_);
    for (std::size_t k = pivot_rows_.size(); k-- > 0;) {
        const Row &row = pivot_rows_[k];
        std::uint32_t pc = pivot_cols_[k];
        Fq acc = transformed(row);
        Fq lead{};
        for (const auto &e : row) {
            if (e.index >= cols_) {
                break;
            }
            if (e.index == pc) {
                lead = e.value;
            } else if (!x[e.index].is_zero()) {
                acc = field_.sub(acc, field_.mul(e.value, x[e.index]));
            }
        }
        x[pc] = field_.div(acc, lead);
    }
    return x;
}

SpanEnumerator::SpanEnumerator(Field field, std::size_t n, std::vector<SparseWord> basis)
    : field_(std::move(field)), basis_(std::move(basis)), current_(n) {
    digits_.assign(basis_.size(), 0);
    direction_.assign(basis_.size(), 1);
}

SpanEnumerator::SpanEnumerator(Field field, Word offset, std::vector<SparseWord> basis)
    : field_(std::move(field)), basis_(std::move(basis)), current_(std::move(offset)) {
    weight_ = weight(current_);
    digits_.assign(basis_.size(), 0);
    direction_.assign(basis_.size(), 1);
}

std::optional<std::uint64_t> SpanEnumerator::size() const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (total > (std::uint64_t{1} << 62) / field_.q()) {
            return std::nullopt;
        }
        total *= field_.q();
    }
    return total;
}

bool SpanEnumerator::next() {
    const auto q = static_cast<std::int64_t>(field_.q());
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        std::int64_t nd = static_cast<std::int64_t>(digits_[i]) + direction_[i];
        if (nd < 0 || nd >= q) {
            direction_[i] = -direction_[i];
            continue;
        }
        Fq delta = field_.sub(Fq{static_cast<std::uint32_t>(nd)}, Fq{digits_[i]});
        digits_[i] = static_cast<std::uint32_t>(nd);
        for (const auto &e : basis_[i].entries()) {
            Fq before = current_[e.index];
            Fq after = field_.add(before, field_.mul(delta, e.value));
            weight_ += (after.is_zero() ? 0 : 1);
            weight_ -= (before.is_zero() ? 0 : 1);
            current_[e.index] = after;
        }
        return true;
    }
    return false;
}

}  // namespace selfcorr
