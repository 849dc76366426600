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

#include "selfcorr/sparse_matrix.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace selfcorr {

std::size_t weight(std::span<const Fq> w) {
    std::size_t n = 0;
    for (Fq v : w) {
        n += v.is_zero() ? 0 : 1;
    }
    return n;
}

SparseWord SparseWord::from_dense(std::span<const Fq> dense) {
    SparseWord w(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (!dense[i].is_zero()) {
            w.entries_.push_back({static_cast<std::uint32_t>(i), dense[i]});
        }
    }
    return w;
}

SparseWord SparseWord::from_entries(std::size_t n, std::vector<Entry> entries) {
    SparseWord w(n);
    std::sort(entries.begin(), entries.end(),
              [](const Entry &a, const Entry &b) { return a.index < b.index; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].index >= n) {
            throw ValidationError("word index " + std::to_string(entries[i].index) +
                                  " out of range " + std::to_string(n));
        }
        if (i > 0 && entries[i].index == entries[i - 1].index) {
            throw ValidationError("duplicate word index " + std::to_string(entries[i].index));
        }
        if (!entries[i].value.is_zero()) {
            w.entries_.push_back(entries[i]);
        }
    }
    return w;
}

Word SparseWord::to_dense() const {
    Word d(n_);
    for (const auto &e : entries_) {
        d[e.index] = e.value;
    }
    return d;
}

Fq SparseWord::at(std::uint32_t i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry &e, std::uint32_t key) { return e.index < key; });
    return (it != entries_.end() && it->index == i) ? it->value : Fq{};
}

SparseFqMatrix::SparseFqMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), row_entries_(rows), col_entries_(cols) {}

SparseFqMatrix SparseFqMatrix::from_triplets(Field field, std::size_t rows, std::size_t cols,
                                             std::span<const Triplet> triplets,
                                             DuplicatePolicy policy) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, Fq> acc;
    for (const auto &t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw ValidationError("matrix entry (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ") outside " + std::to_string(rows) +
                                  "x" + std::to_string(cols));
        }
        if (t.value.rep >= field.q()) {
            throw ValidationError("matrix coefficient outside " + field.describe());
        }
        auto key = std::make_pair(t.row, t.col);
        auto it = acc.find(key);
        if (it == acc.end()) {
            acc.emplace(key, t.value);
        } else if (policy == DuplicatePolicy::sum) {
            it->second = field.add(it->second, t.value);
        } else if (it->second != t.value) {
            throw ValidationError("conflicting coefficients at (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ")");
        }
    }
    SparseFqMatrix m(field, rows, cols);
    for (const auto &[key, v] : acc) {
        if (v.is_zero()) {
            continue;
        }
        m.row_entries_[key.first].push_back({key.second, v});
        m.col_entries_[key.second].push_back({key.first, v});
    }
    return m;
}

SparseFqMatrix SparseFqMatrix::identity(Field field, std::size_t n) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), field.one()});
    }
    return from_triplets(field, n, n, t);
}

std::size_t SparseFqMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto &r : row_entries_) {
        n += r.size();
    }
    return n;
}

Fq SparseFqMatrix::at(std::size_t r, std::size_t c) const {
    const auto &row = row_entries_.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry &e, std::size_t key) { return e.index < key; });
    return (it != row.end() && it->index == c) ? it->value : Fq{};
}

std::size_t SparseFqMatrix::max_row_weight() const {
    std::size_t best = 0;
    for (const auto &r : row_entries_) {
        best = std::max(best, r.size());
    }
    return best;
}

std::size_t SparseFqMatrix::max_col_weight() const {
    std::size_t best = 0;
    for (const auto &c : col_entries_) {
        best = std::max(best, c.size());
    }
    return best;
}

Word SparseFqMatrix::apply(std::span<const Fq> x) const {
    if (x.size() != cols_) {
        throw ValidationError("vector length " + std::to_string(x.size()) + " != matrix cols " +
                              std::to_string(cols_));
    }
    Word out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Fq acc{};
        for (const auto &e : row_entries_[r]) {
            if (!x[e.index].is_zero()) {
                acc = field_.add(acc, field_.mul(e.value, x[e.index]));
            }
        }
        out[r] = acc;
    }
    return out;
}

std::size_t SparseFqMatrix::syndrome_weight(std::span<const Fq> x) const { return weight(apply(x)); }

SparseFqMatrix SparseFqMatrix::transpose() const {
    SparseFqMatrix t(field_, cols_, rows_);
    t.row_entries_ = col_entries_;
    t.col_entries_ = row_entries_;
    return t;
}

SparseFqMatrix SparseFqMatrix::multiply(const SparseFqMatrix &other) const {
    return multiply_transpose(other.transpose());
}

SparseFqMatrix SparseFqMatrix::multiply_transpose(const SparseFqMatrix &other) const {
    if (cols_ != other.cols_) {
        throw ValidationError("shape mismatch in product with transpose");
    }
    if (!(field_ == other.field_)) {
        throw ValidationError("field mismatch in matrix product");
    }
    std::vector<Triplet> out;
    std::vector<Fq> acc(other.rows_);
    std::vector<std::uint32_t> touched;
    for (std::size_t r = 0; r < rows_; ++r) {
        touched.clear();
        for (const auto &e : row_entries_[r]) {
            for (const auto &f : other.col_entries_[e.index]) {
                if (acc[f.index].is_zero()) {
                    touched.push_back(f.index);
                }
                acc[f.index] = field_.add(acc[f.index], field_.mul(e.value, f.value));
            }
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (auto j : touched) {
            if (!acc[j].is_zero()) {
                out.push_back({static_cast<std::uint32_t>(r), j, acc[j]});
            }
            acc[j] = Fq{};
        }
    }
    return from_triplets(field_, rows_, other.rows_, out);
}

std::vector<Triplet> SparseFqMatrix::triplets() const {
    std::vector<Triplet> out;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (const auto &e : row_entries_[r]) {
            out.push_back({static_cast<std::uint32_t>(r), e.index, e.value});
        }
    }
    return out;
}

std::vector<Word> SparseFqMatrix::to_dense() const {
    std::vector<Word> d(rows_, Word(cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (const auto &e : row_entries_[r]) {
            d[r][e.index] = e.value;
        }
    }
    return d;
}

void SparseFqMatrix::write_text(std::ostream &out) const {
    out << rows_ << " " << cols_ << " " << field_.p() << " " << field_.e() << "\n";
    for (std::size_t r = 0; r < rows_; ++r) {
        for (const auto &e : row_entries_[r]) {
            out << r << " " << e.index << " " << e.value.rep << "\n";
        }
    }
}

std::string SparseFqMatrix::to_text() const {
    std::ostringstream out;
    write_text(out);
    return out.str();
}

SparseFqMatrix SparseFqMatrix::read_text(std::istream &in) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint32_t p = 0;
    std::uint32_t e = 0;
    if (!(in >> rows >> cols >> p >> e)) {
        throw ValidationError("matrix header must be 'rows cols p e'");
    }
    Field field(p, e);
    std::vector<Triplet> t;
    std::uint64_t r = 0;
    std::uint64_t c = 0;
    std::uint64_t v = 0;
    while (in >> r >> c >> v) {
        if (v >= field.q()) {
            throw ValidationError("matrix coefficient " + std::to_string(v) + " outside " +
                                  field.describe());
        }
        t.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c),
                     Fq{static_cast<std::uint32_t>(v)}});
    }
    if (!in.eof()) {
        throw ValidationError("malformed matrix entry line");
    }
    return from_triplets(field, rows, cols, t, DuplicatePolicy::reject_conflict);
}

SparseFqMatrix SparseFqMatrix::parse_text(const std::string &text) {
    std::istringstream in(text);
    return read_text(in);
}

bool SparseFqMatrix::operator==(const SparseFqMatrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && field_ == other.field_ &&
           row_entries_ == other.row_entries_;
}

namespace {

void require_same_field(const SparseFqMatrix &a, const SparseFqMatrix &b) {
    if (!(a.field() == b.field())) {
        throw ValidationError("field mismatch: " + a.field().describe() + " vs " +
                              b.field().describe());
    }
}

}  // namespace

SparseFqMatrix vstack(const SparseFqMatrix &top, const SparseFqMatrix &bottom) {
    require_same_field(top, bottom);
    if (top.cols() != bottom.cols()) {
        throw ValidationError("vstack column mismatch");
    }
    auto t = top.triplets();
    for (auto tr : bottom.triplets()) {
        tr.row += static_cast<std::uint32_t>(top.rows());
        t.push_back(tr);
    }
    return SparseFqMatrix::from_triplets(top.field(), top.rows() + bottom.rows(), top.cols(), t);
}

SparseFqMatrix hstack(const SparseFqMatrix &left, const SparseFqMatrix &right) {
    require_same_field(left, right);
    if (left.rows() != right.rows()) {
        throw ValidationError("hstack row mismatch");
    }
    auto t = left.triplets();
    for (auto tr : right.triplets()) {
        tr.col += static_cast<std::uint32_t>(left.cols());
        t.push_back(tr);
    }
    return SparseFqMatrix::from_triplets(left.field(), left.rows(), left.cols() + right.cols(), t);
}

SparseFqMatrix kron(const SparseFqMatrix &a, const SparseFqMatrix &b) {
    require_same_field(a, b);
    std::vector<Triplet> t;
    const auto &f = a.field();
    for (const auto &ta : a.triplets()) {
        for (const auto &tb : b.triplets()) {
            t.push_back({static_cast<std::uint32_t>(ta.row * b.rows() + tb.row),
                         static_cast<std::uint32_t>(ta.col * b.cols() + tb.col),
                         f.mul(ta.value, tb.value)});
        }
    }
    return SparseFqMatrix::from_triplets(f, a.rows() * b.rows(), a.cols() * b.cols(), t);
}

SparseFqMatrix negated(const SparseFqMatrix &m) {
    auto t = m.triplets();
    for (auto &tr : t) {
        tr.value = m.field().neg(tr.value);
    }
    return SparseFqMatrix::from_triplets(m.field(), m.rows(), m.cols(), t);
}

}  // namespace selfcorr
