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

#ifndef SELFCORR_FIELD_H
#define SELFCORR_FIELD_H

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfcorr {

/// Raised when inputs violate a documented precondition (bad shapes, unsupported parameters,
/// malformed files). The CLI maps this to exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when an enumeration would exceed its configured budget. The CLI maps this to exit code 2.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An element of F_q, stored as the base-p digits of a polynomial in F_p[t] modulo the field's
/// modulus: rep = c_0 + c_1 p + ... + c_{e-1} p^{e-1}.
struct Fq {
    std::uint16_t rep = 0;

    constexpr Fq() = default;
    constexpr explicit Fq(std::uint32_t r) : rep(static_cast<std::uint16_t>(r)) {}

    constexpr bool is_zero() const { return rep == 0; }
    constexpr bool operator==(const Fq &) const = default;
    constexpr auto operator<=>(const Fq &) const = default;
};

/// The finite field F_{p^e}, q <= 2^16.
///
/// The modulus is the lexicographically smallest monic irreducible polynomial of degree e over
/// F_p (coefficients compared from t^{e-1} down to t^0), so element encodings are reproducible.
/// Multiplication goes through log/antilog tables built from a primitive element; addition uses a
/// full table when q <= 1024 and digit-wise arithmetic otherwise.
///
/// Field values are cheap to copy: the tables live behind a shared immutable pointer.
class Field {
   public:
    static constexpr std::uint32_t kMaxOrder = 1u << 16;

    /// Throws ValidationError when p is not prime, e < 1, or p^e > 2^16.
    Field(std::uint32_t p, std::uint32_t e);
    static Field binary() { return Field(2, 1); }

    std::uint32_t p() const { return tables_->p; }
    std::uint32_t e() const { return tables_->e; }
    std::uint32_t q() const { return tables_->q; }
    /// Coefficients of the monic modulus, lowest degree first, length e + 1.
    const std::vector<std::uint32_t> &modulus() const { return tables_->modulus; }

    Fq zero() const { return Fq{0}; }
    Fq one() const { return Fq{1}; }
    /// Element with the given base-p digit encoding; reduced modulo q.
    Fq from_int(std::int64_t v) const;

    Fq add(Fq a, Fq b) const {
        if (tables_->p == 2) {
            return Fq{static_cast<std::uint32_t>(a.rep ^ b.rep)};
        }
        if (!tables_->add_table.empty()) {
            return Fq{tables_->add_table[a.rep * tables_->q + b.rep]};
        }
        return add_digits(a, b);
    }
    Fq neg(Fq a) const { return Fq{tables_->neg_table[a.rep]}; }
    Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
    Fq mul(Fq a, Fq b) const {
        if (a.rep == 0 || b.rep == 0) {
            return Fq{0};
        }
        std::uint32_t s = tables_->log_table[a.rep] + tables_->log_table[b.rep];
        if (s >= tables_->q - 1) {
            s -= tables_->q - 1;
        }
        return Fq{tables_->exp_table[s]};
    }
    /// Throws std::domain_error on zero.
    Fq inv(Fq a) const;
    Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
    Fq pow(Fq a, std::uint64_t k) const;
    /// a^(p^j), the j-fold Frobenius map.
    Fq frobenius(Fq a, std::uint32_t j) const;

    bool operator==(const Field &other) const { return p() == other.p() && e() == other.e(); }

    /// "F_q" with the modulus spelled out when e > 1.
    std::string describe() const;

   private:
    struct Tables {
        std::uint32_t p = 0;
        std::uint32_t e = 0;
        std::uint32_t q = 0;
        std::vector<std::uint32_t> modulus;
        std::vector<std::uint16_t> add_table;
        std::vector<std::uint16_t> neg_table;
        std::vector<std::uint32_t> log_table;
        std::vector<std::uint16_t> exp_table;
    };

    Fq add_digits(Fq a, Fq b) const;

    std::shared_ptr<const Tables> tables_;
};

bool is_prime(std::uint64_t n);

/// True when the monic polynomial with the given coefficients (lowest first) has no nontrivial
/// factor over F_p. Trial division by every monic polynomial of degree <= deg/2.
bool is_irreducible_mod_p(const std::vector<std::uint32_t> &coeffs, std::uint32_t p);

}  // namespace selfcorr

#endif
