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

#ifndef SELFCORR_LAURENT_H
#define SELFCORR_LAURENT_H

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfcorr/field.h"

namespace selfcorr {

/// Ambient lattice dimensions are limited to the variables x, y, z, w.
inline constexpr std::size_t kMaxLatticeDim = 4;

/// Exponent vector x_1^{e_1} ... x_D^{e_D}; negative exponents allowed.
struct Monomial {
    std::vector<std::int64_t> exps;

    Monomial() = default;
    explicit Monomial(std::vector<std::int64_t> e) : exps(std::move(e)) {}
    static Monomial unit(std::size_t dim) { return Monomial(std::vector<std::int64_t>(dim, 0)); }

    std::size_t dim() const { return exps.size(); }
    bool is_unit() const;
    Monomial operator+(const Monomial &other) const;
    Monomial operator-() const;
    Monomial scaled(std::int64_t k) const;

    bool operator==(const Monomial &) const = default;
    auto operator<=>(const Monomial &) const = default;
};

/// Sparse Laurent polynomial in F_q[x_1^{±1}, ..., x_D^{±1}].
///
/// Terms are kept sorted by exponent vector (lexicographic) with no zero coefficients, so
/// equality and serialization are canonical. Text form: terms like `c*x^a*y^b` joined by `+`;
/// the coefficient is the integer encoding of the field element and is omitted when it is 1.
class LaurentPoly {
   public:
    using Term = std::pair<Monomial, Fq>;

    LaurentPoly(Field field, std::size_t dim);
    static LaurentPoly constant(Field field, std::size_t dim, Fq c);
    static LaurentPoly monomial(Field field, Monomial m, Fq c);
    static LaurentPoly from_terms(Field field, std::size_t dim, std::vector<Term> terms);
    /// Throws ValidationError on syntax errors, unknown variables or out-of-range coefficients.
    static LaurentPoly parse(std::string_view text, const Field &field, std::size_t dim);

    const Field &field() const { return field_; }
    std::size_t dim() const { return dim_; }
    /// Number of nonzero terms.
    std::size_t weight() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term> &terms() const { return terms_; }
    Fq coeff(const Monomial &m) const;

    LaurentPoly operator+(const LaurentPoly &other) const;
    LaurentPoly operator-(const LaurentPoly &other) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly &other) const;
    LaurentPoly scaled(Fq c) const;
    LaurentPoly shifted(const Monomial &m) const;
    /// f(x^{-1}, y^{-1}, ...).
    LaurentPoly conj() const;
    /// f^(p^j): each term c x^v becomes c^(p^j) x^(p^j v).
    LaurentPoly frobenius(std::uint32_t j) const;
    /// f^k via the base-p digits of k and the Frobenius map.
    LaurentPoly pow(std::uint64_t k) const;

    /// Per-axis (min, max) exponent over the support; empty for the zero polynomial.
    std::vector<std::pair<std::int64_t, std::int64_t>> exponent_box() const;
    /// Largest max - min over all axes (0 for monomials and zero).
    std::int64_t span() const;

    std::string to_string() const;

    bool operator==(const LaurentPoly &other) const;

   private:
    void require_compatible(const LaurentPoly &other) const;

    Field field_;
    std::size_t dim_;
    std::vector<Term> terms_;
};

/// Dense matrix of Laurent polynomials sharing a field and lattice dimension.
class PolyMatrix {
   public:
    PolyMatrix(Field field, std::size_t dim, std::size_t rows, std::size_t cols);
    static PolyMatrix identity(Field field, std::size_t dim, std::size_t n);
    /// Row-major list of polynomial strings.
    static PolyMatrix parse(const std::vector<std::vector<std::string>> &rows, const Field &field,
                            std::size_t dim);

    const Field &field() const { return field_; }
    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const LaurentPoly &at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, LaurentPoly value);

    PolyMatrix operator*(const PolyMatrix &other) const;
    /// Entrywise conjugate, then transpose.
    PolyMatrix conj_transpose() const;
    PolyMatrix transpose() const;
    bool is_zero() const;
    /// Largest term count in any column (per-check weight bound when columns are checks).
    std::size_t max_column_terms() const;
    std::size_t max_row_terms() const;

    std::vector<std::vector<std::string>> to_strings() const;
    bool operator==(const PolyMatrix &other) const;

   private:
    Field field_;
    std::size_t dim_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<LaurentPoly> entries_;
};

}  // namespace selfcorr

#endif
