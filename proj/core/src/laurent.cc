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

#include "selfcorr/laurent.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace selfcorr {

namespace {

constexpr char kVarNames[kMaxLatticeDim] = {'x', 'y', 'z', 'w'};

std::vector<LaurentPoly::Term> normalize(const Field &field, std::map<Monomial, Fq> acc) {
    std::vector<LaurentPoly::Term> out;
    out.reserve(acc.size());
    for (auto &[m, c] : acc) {
        if (!c.is_zero()) {
            out.emplace_back(m, c);
        }
    }
    (void)field;
    return out;
}

void check_dim(std::size_t dim) {
    if (dim < 1 || dim > kMaxLatticeDim) {
        throw ValidationError("lattice dimension must be in [1, 4], got " + std::to_string(dim));
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::int64_t parse_int(std::string_view s, std::string_view context) {
    s = trim(s);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError("bad integer '" + std::string(s) + "' in polynomial term '" +
                              std::string(context) + "'");
    }
    return v;
}

}  // namespace

bool Monomial::is_unit() const {
    return std::all_of(exps.begin(), exps.end(), [](std::int64_t e) { return e == 0; });
}

Monomial Monomial::operator+(const Monomial &other) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        r.exps[i] += other.exps[i];
    }
    return r;
}

Monomial Monomial::operator-() const {
    Monomial r = *this;
    for (auto &e : r.exps) {
        e = -e;
    }
    return r;
}

Monomial Monomial::scaled(std::int64_t k) const {
    Monomial r = *this;
    for (auto &e : r.exps) {
        e *= k;
    }
    return r;
}

LaurentPoly::LaurentPoly(Field field, std::size_t dim) : field_(std::move(field)), dim_(dim) {
    check_dim(dim);
}

LaurentPoly LaurentPoly::constant(Field field, std::size_t dim, Fq c) {
    return monomial(std::move(field), Monomial::unit(dim), c);
}

LaurentPoly LaurentPoly::monomial(Field field, Monomial m, Fq c) {
    std::size_t dim = m.dim();
    LaurentPoly r(std::move(field), dim);
    if (!c.is_zero()) {
        r.terms_.emplace_back(std::move(m), c);
    }
    return r;
}

LaurentPoly LaurentPoly::from_terms(Field field, std::size_t dim, std::vector<Term> terms) {
    LaurentPoly r(field, dim);
    std::map<Monomial, Fq> acc;
    for (auto &[m, c] : terms) {
        if (m.dim() != dim) {
            throw ValidationError("monomial dimension mismatch");
        }
        auto &slot = acc[m];
        slot = field.add(slot, c);
    }
    r.terms_ = normalize(field, std::move(acc));
    return r;
}

LaurentPoly LaurentPoly::parse(std::string_view text, const Field &field, std::size_t dim) {
    check_dim(dim);
    std::string_view s = trim(text);
    if (s.empty()) {
        throw ValidationError("empty polynomial string");
    }
    // Split into signed terms at '+'/'-' that do not follow '^'.
    std::vector<std::pair<bool, std::string_view>> pieces;
    std::size_t start = 0;
    bool negative = false;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        bool boundary = i == s.size();
        if (!boundary && (s[i] == '+' || s[i] == '-')) {
            std::size_t j = i;
            while (j > 0 && std::isspace(static_cast<unsigned char>(s[j - 1]))) {
                --j;
            }
            boundary = !(j > 0 && s[j - 1] == '^');
        }
        if (!boundary) {
            continue;
        }
        std::string_view piece = trim(s.substr(start, i - start));
        if (!piece.empty()) {
            pieces.emplace_back(negative, piece);
        } else if (i != 0 && i != s.size()) {
            throw ValidationError("empty term in polynomial '" + std::string(s) + "'");
        } else if (i == s.size() && i != 0) {
            throw ValidationError("trailing operator in polynomial '" + std::string(s) + "'");
        }
        if (i < s.size()) {
            negative = s[i] == '-';
        }
        start = i + 1;
    }

    std::vector<Term> terms;
    for (auto [neg, piece] : pieces) {
        Fq coeff = field.one();
        Monomial m = Monomial::unit(dim);
        bool have_coeff = false;
        std::size_t pos = 0;
        while (pos <= piece.size()) {
            std::size_t star = piece.find('*', pos);
            if (star == std::string_view::npos) {
                star = piece.size();
            }
            std::string_view factor = trim(piece.substr(pos, star - pos));
            if (factor.empty()) {
                throw ValidationError("empty factor in term '" + std::string(piece) + "'");
            }
            if (std::isdigit(static_cast<unsigned char>(factor.front()))) {
                if (have_coeff) {
                    throw ValidationError("two coefficients in term '" + std::string(piece) + "'");
                }
                std::int64_t v = parse_int(factor, piece);
                if (v < 0 || v >= static_cast<std::int64_t>(field.q())) {
                    throw ValidationError("coefficient " + std::to_string(v) + " outside " +
                                          field.describe());
                }
                coeff = Fq{static_cast<std::uint32_t>(v)};
                have_coeff = true;
            } else {
                const char *found = std::find(kVarNames, kVarNames + dim, factor.front());
                if (found == kVarNames + dim) {
                    throw ValidationError("unknown variable '" + std::string(1, factor.front()) +
                                          "' for dimension " + std::to_string(dim));
                }
                std::size_t axis = static_cast<std::size_t>(found - kVarNames);
                std::int64_t power = 1;
                std::string_view rest = trim(factor.substr(1));
                if (!rest.empty()) {
                    if (rest.front() != '^') {
                        throw ValidationError("bad factor '" + std::string(factor) + "'");
                    }
                    power = parse_int(rest.substr(1), piece);
                }
                m.exps[axis] += power;
            }
            pos = star + 1;
        }
        if (neg) {
            coeff = field.neg(coeff);
        }
        terms.emplace_back(std::move(m), coeff);
    }
    return from_terms(field, dim, std::move(terms));
}

Fq LaurentPoly::coeff(const Monomial &m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term &t, const Monomial &key) { return t.first < key; });
    if (it != terms_.end() && it->first == m) {
        return it->second;
    }
    return field_.zero();
}

void LaurentPoly::require_compatible(const LaurentPoly &other) const {
    if (dim_ != other.dim_) {
        throw ValidationError("polynomial dimension mismatch: " + std::to_string(dim_) + " vs " +
                              std::to_string(other.dim_));
    }
    if (!(field_ == other.field_)) {
        throw ValidationError("polynomial field mismatch: " + field_.describe() + " vs " +
                              other.field_.describe());
    }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly &other) const {
    require_compatible(other);
    LaurentPoly r(field_, dim_);
    r.terms_.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            r.terms_.push_back(*a++);
        } else if (a == terms_.end() || b->first < a->first) {
            r.terms_.push_back(*b++);
        } else {
            Fq c = field_.add(a->second, b->second);
            if (!c.is_zero()) {
                r.terms_.emplace_back(a->first, c);
            }
            ++a;
            ++b;
        }
    }
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto &t : r.terms_) {
        t.second = field_.neg(t.second);
    }
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly &other) const { return *this + (-other); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly &other) const {
    require_compatible(other);
    std::map<Monomial, Fq> acc;
    for (const auto &[ma, ca] : terms_) {
        for (const auto &[mb, cb] : other.terms_) {
            auto &slot = acc[ma + mb];
            slot = field_.add(slot, field_.mul(ca, cb));
        }
    }
    LaurentPoly r(field_, dim_);
    r.terms_ = normalize(field_, std::move(acc));
    return r;
}

LaurentPoly LaurentPoly::scaled(Fq c) const {
    LaurentPoly r(field_, dim_);
    if (c.is_zero()) {
        return r;
    }
    r.terms_ = terms_;
    for (auto &t : r.terms_) {
        t.second = field_.mul(t.second, c);
    }
    return r;
}

LaurentPoly LaurentPoly::shifted(const Monomial &m) const {
    LaurentPoly r = *this;
    for (auto &t : r.terms_) {
        t.first = t.first + m;
    }
    return r;
}

LaurentPoly LaurentPoly::conj() const {
    LaurentPoly r(field_, dim_);
    r.terms_.reserve(terms_.size());
    for (const auto &[m, c] : terms_) {
        r.terms_.emplace_back(-m, c);
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term &a, const Term &b) { return a.first < b.first; });
    return r;
}

LaurentPoly LaurentPoly::frobenius(std::uint32_t j) const {
    std::int64_t scale = 1;
    for (std::uint32_t i = 0; i < j; ++i) {
        scale *= field_.p();
    }
    LaurentPoly r(field_, dim_);
    r.terms_.reserve(terms_.size());
    for (const auto &[m, c] : terms_) {
        r.terms_.emplace_back(m.scaled(scale), field_.frobenius(c, j));
    }
    // Positive scaling preserves lexicographic order.
    return r;
}

LaurentPoly LaurentPoly::pow(std::uint64_t k) const {
    LaurentPoly result = constant(field_, dim_, field_.one());
    std::uint32_t p = field_.p();
    std::uint32_t j = 0;
    while (k > 0) {
        std::uint64_t digit = k % p;
        if (digit > 0) {
            LaurentPoly base = constant(field_, dim_, field_.one());
            for (std::uint64_t i = 0; i < digit; ++i) {
                base = base * *this;
            }
            result = result * base.frobenius(j);
        }
        k /= p;
        ++j;
    }
    return result;
}

std::vector<std::pair<std::int64_t, std::int64_t>> LaurentPoly::exponent_box() const {
    std::vector<std::pair<std::int64_t, std::int64_t>> box;
    if (terms_.empty()) {
        return box;
    }
    box.assign(dim_, {INT64_MAX, INT64_MIN});
    for (const auto &[m, c] : terms_) {
        for (std::size_t i = 0; i < dim_; ++i) {
            box[i].first = std::min(box[i].first, m.exps[i]);
            box[i].second = std::max(box[i].second, m.exps[i]);
        }
    }
    return box;
}

std::int64_t LaurentPoly::span() const {
    std::int64_t s = 0;
    for (auto [lo, hi] : exponent_box()) {
        s = std::max(s, hi - lo);
    }
    return s;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first_term = true;
    for (const auto &[m, c] : terms_) {
        if (!first_term) {
            out << "+";
        }
        first_term = false;
        bool wrote = false;
        if (c.rep != 1 || m.is_unit()) {
            out << c.rep;
            wrote = true;
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            if (m.exps[i] == 0) {
                continue;
            }
            if (wrote) {
                out << "*";
            }
            out << kVarNames[i];
            if (m.exps[i] != 1) {
                out << "^" << m.exps[i];
            }
            wrote = true;
        }
    }
    return out.str();
}

bool LaurentPoly::operator==(const LaurentPoly &other) const {
    return dim_ == other.dim_ && field_ == other.field_ && terms_ == other.terms_;
}

PolyMatrix::PolyMatrix(Field field, std::size_t dim, std::size_t rows, std::size_t cols)
    : field_(field), dim_(dim), rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) {
        throw ValidationError("polynomial matrix must have positive shape");
    }
    entries_.assign(rows * cols, LaurentPoly(field, dim));
}

PolyMatrix PolyMatrix::identity(Field field, std::size_t dim, std::size_t n) {
    PolyMatrix m(field, dim, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, LaurentPoly::constant(field, dim, field.one()));
    }
    return m;
}

PolyMatrix PolyMatrix::parse(const std::vector<std::vector<std::string>> &rows, const Field &field,
                             std::size_t dim) {
    if (rows.empty() || rows.front().empty()) {
        throw ValidationError("polynomial matrix must have positive shape");
    }
    PolyMatrix m(field, dim, rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) {
            throw ValidationError("ragged polynomial matrix");
        }
        for (std::size_t c = 0; c < m.cols_; ++c) {
            m.set(r, c, LaurentPoly::parse(rows[r][c], field, dim));
        }
    }
    return m;
}

void PolyMatrix::set(std::size_t r, std::size_t c, LaurentPoly value) {
    if (value.dim() != dim_ || !(value.field() == field_)) {
        throw ValidationError("matrix entry dimension/field mismatch");
    }
    entries_.at(r * cols_ + c) = std::move(value);
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix &other) const {
    if (cols_ != other.rows_) {
        throw ValidationError("matrix shape mismatch: " + std::to_string(rows_) + "x" +
                              std::to_string(cols_) + " times " + std::to_string(other.rows_) +
                              "x" + std::to_string(other.cols_));
    }
    if (dim_ != other.dim_ || !(field_ == other.field_)) {
        throw ValidationError("matrix dimension/field mismatch");
    }
    PolyMatrix r(field_, dim_, rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < other.cols_; ++j) {
            LaurentPoly acc(field_, dim_);
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k).is_zero() || other.at(k, j).is_zero()) {
                    continue;
                }
                acc = acc + at(i, k) * other.at(k, j);
            }
            r.set(i, j, std::move(acc));
        }
    }
    return r;
}

PolyMatrix PolyMatrix::conj_transpose() const {
    PolyMatrix r(field_, dim_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            r.set(j, i, at(i, j).conj());
        }
    }
    return r;
}

PolyMatrix PolyMatrix::transpose() const {
    PolyMatrix r(field_, dim_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            r.set(j, i, at(i, j));
        }
    }
    return r;
}

bool PolyMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const LaurentPoly &p) { return p.is_zero(); });
}

std::size_t PolyMatrix::max_column_terms() const {
    std::size_t best = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
        std::size_t s = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            s += at(i, j).weight();
        }
        best = std::max(best, s);
    }
    return best;
}

std::size_t PolyMatrix::max_row_terms() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            s += at(i, j).weight();
        }
        best = std::max(best, s);
    }
    return best;
}

std::vector<std::vector<std::string>> PolyMatrix::to_strings() const {
    std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out[i][j] = at(i, j).to_string();
        }
    }
    return out;
}

bool PolyMatrix::operator==(const PolyMatrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && dim_ == other.dim_ &&
           field_ == other.field_ && entries_ == other.entries_;
}

}  // namespace selfcorr
