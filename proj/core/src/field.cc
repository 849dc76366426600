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

#include "selfcorr/field.h"

#include <sstream>

namespace selfcorr {

namespace {

using Digits = std::vector<std::uint32_t>;

Digits to_digits(std::uint32_t rep, std::uint32_t p, std::uint32_t e) {
    Digits d(e, 0);
    for (std::uint32_t i = 0; i < e; ++i) {
        d[i] = rep % p;
        rep /= p;
    }
    return d;
}

std::uint32_t from_digits(const Digits &d, std::uint32_t p) {
    std::uint32_t rep = 0;
    for (std::size_t i = d.size(); i-- > 0;) {
        rep = rep * p + d[i];
    }
    return rep;
}

// Remainder of a modulo the monic polynomial m over F_p; both lowest-degree first.
Digits poly_mod(Digits a, const Digits &m, std::uint32_t p) {
    std::size_t dm = m.size() - 1;
    for (std::size_t i = a.size(); i-- > dm;) {
        std::uint32_t c = a[i] % p;
        if (c == 0) {
            continue;
        }
        for (std::size_t j = 0; j <= dm; ++j) {
            std::size_t k = i - dm + j;
            a[k] = (a[k] + (p - c) * m[j]) % p;
        }
    }
    a.resize(dm);
    return a;
}

Digits poly_mulmod(const Digits &a, const Digits &b, const Digits &m, std::uint32_t p) {
    Digits prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    return poly_mod(std::move(prod), m, p);
}

bool is_zero_poly(const Digits &d) {
    for (auto c : d) {
        if (c != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

bool is_irreducible_mod_p(const std::vector<std::uint32_t> &coeffs, std::uint32_t p) {
    std::size_t deg = coeffs.size() - 1;
    if (deg <= 1) {
        return deg == 1;
    }
    // Enumerate monic divisors of degree 1..deg/2.
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) {
            count *= p;
        }
        for (std::uint64_t low = 0; low < count; ++low) {
            Digits divisor(d + 1, 0);
            std::uint64_t v = low;
            for (std::size_t i = 0; i < d; ++i) {
                divisor[i] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            divisor[d] = 1;
            if (is_zero_poly(poly_mod(coeffs, divisor, p))) {
                return false;
            }
        }
    }
    return true;
}

Field::Field(std::uint32_t p, std::uint32_t e) {
    if (!is_prime(p)) {
        throw ValidationError("field characteristic " + std::to_string(p) + " is not prime");
    }
    if (e < 1) {
        throw ValidationError("field extension degree must be >= 1");
    }
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxOrder) {
            throw ValidationError("field order p^e exceeds 2^16");
        }
    }
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->e = e;
    t->q = static_cast<std::uint32_t>(q);

    if (e == 1) {
        t->modulus = {0, 1};
    } else {
        // Lexicographic order on (c_{e-1}, ..., c_0) is the integer order of the low digits.
        for (std::uint32_t low = 0; low < q; ++low) {
            Digits m = to_digits(low, p, e);
            m.push_back(1);
            if (is_irreducible_mod_p(m, p)) {
                t->modulus = m;
                break;
            }
        }
    }

    t->neg_table.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
        Digits d = to_digits(a, p, e);
        for (auto &c : d) {
            c = (p - c) % p;
        }
        t->neg_table[a] = static_cast<std::uint16_t>(from_digits(d, p));
    }
    if (p != 2 && q <= 1024) {
        t->add_table.resize(static_cast<std::size_t>(q) * q);
        for (std::uint32_t a = 0; a < q; ++a) {
            Digits da = to_digits(a, p, e);
            for (std::uint32_t b = 0; b < q; ++b) {
                Digits db = to_digits(b, p, e);
                Digits s(e);
                for (std::uint32_t i = 0; i < e; ++i) {
                    s[i] = (da[i] + db[i]) % p;
                }
                t->add_table[a * q + b] = static_cast<std::uint16_t>(from_digits(s, p));
            }
        }
    }

    // Search for a primitive element, smallest encoding first.
    t->log_table.assign(q, 0);
    t->exp_table.assign(q, 0);
    const std::uint32_t order = t->q - 1;
    if (q == 2) {
        t->exp_table[0] = 1;
        t->log_table[1] = 0;
    } else {
        bool found = false;
        for (std::uint32_t g = 2; g < q && !found; ++g) {
            Digits gd = to_digits(g, p, e);
            Digits cur = to_digits(1, p, e);
            std::vector<bool> seen(q, false);
            bool primitive = true;
            for (std::uint32_t k = 0; k < order; ++k) {
                std::uint32_t r = from_digits(cur, p);
                if (seen[r]) {
                    primitive = false;
                    break;
                }
                seen[r] = true;
                t->exp_table[k] = static_cast<std::uint16_t>(r);
                t->log_table[r] = k;
                cur = poly_mulmod(cur, gd, t->modulus, p);
            }
            found = primitive;
        }
        if (!found) {
            throw std::logic_error("no primitive element in " + std::to_string(q));
        }
    }
    tables_ = std::move(t);
}

Fq Field::from_int(std::int64_t v) const {
    std::int64_t qq = q();
    std::int64_t r = ((v % qq) + qq) % qq;
    return Fq{static_cast<std::uint32_t>(r)};
}

Fq Field::add_digits(Fq a, Fq b) const {
    std::uint32_t pp = p();
    std::uint32_t x = a.rep;
    std::uint32_t y = b.rep;
    std::uint32_t out = 0;
    std::uint32_t scale = 1;
    for (std::uint32_t i = 0; i < e(); ++i) {
        out += ((x % pp + y % pp) % pp) * scale;
        x /= pp;
        y /= pp;
        scale *= pp;
    }
    return Fq{out};
}

Fq Field::inv(Fq a) const {
    if (a.is_zero()) {
        throw std::domain_error("inverse of zero in " + describe());
    }
    std::uint32_t l = tables_->log_table[a.rep];
    std::uint32_t order = q() - 1;
    return Fq{tables_->exp_table[(order - l) % order]};
}

Fq Field::pow(Fq a, std::uint64_t k) const {
    if (k == 0) {
        return one();
    }
    if (a.is_zero()) {
        return zero();
    }
    std::uint64_t order = q() - 1;
    std::uint64_t l = (static_cast<std::uint64_t>(tables_->log_table[a.rep]) * (k % order)) % order;
    return Fq{tables_->exp_table[l]};
}

Fq Field::frobenius(Fq a, std::uint32_t j) const {
    // a^(p^j) = a^(p^(j mod e)) since the Frobenius has order e.
    std::uint64_t k = 1;
    for (std::uint32_t i = 0; i < j % e(); ++i) {
        k *= p();
    }
    return pow(a, k);
}

std::string Field::describe() const {
    std::ostringstream out;
    out << "F_" << q();
    if (e() > 1) {
        out << " (modulus ";
        bool first = true;
        for (std::size_t i = modulus().size(); i-- > 0;) {
            std::uint32_t c = modulus()[i];
            if (c == 0) {
                continue;
            }
            if (!first) {
                out << "+";
            }
            first = false;
            if (c != 1 || i == 0) {
                out << c;
            }
            if (i >= 1) {
                out << "t";
            }
            if (i >= 2) {
                out << "^" << i;
            }
        }
        out << ")";
    }
    return out.str();
}

}  // namespace selfcorr
