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

#ifndef SELFCORR_LAB_SPEC_IO_H
#define SELFCORR_LAB_SPEC_IO_H

#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "selfcorr/codes.h"
#include "selfcorr/construct.h"
#include "selfcorr/instance.h"

namespace selfcorr::lab {

using nlohmann::json;

/// A code described by a spec file: either symbolic (instantiated per L) or explicit.
struct LoadedCode {
    /// Canonical spec; parsing it again yields the same code.
    json canonical;
    std::optional<TransInvCode> symbolic;
    std::optional<EmbeddedCode> embedded;

    bool is_symbolic() const { return symbolic.has_value(); }
    CodeKind kind() const;
    const Field &field() const;
};

/// Families: toric, ising, haah, bipartite_product, classical_grid, quantum, classical (generic
/// polynomial matrices), tanner, ring, path, hgp, random_local, holes. Throws ValidationError
/// naming the offending key.
LoadedCode load_code(const json &spec);

/// Canonical JSON of a symbolic code: family, kind, field, D and the polynomial matrices.
json code_to_json(const TransInvCode &code);
TransInvCode code_from_json(const json &spec);
/// Generic polynomial-matrix form without the CSS check (for validation reports).
TransInvCode code_from_json_unchecked(const json &spec);

json tanner_to_json(const TannerSpec &spec, const Field &field);
TannerSpec tanner_from_json(const json &spec);

json field_to_json(const Field &f);
Field field_from_json(const json &j);

/// Lattice selection for symbolic codes: "L" (int or per-axis list) and "boundary".
struct LatticeChoice {
    std::vector<std::size_t> shape;
    Boundary boundary = Boundary::torus;
};
/// Instance for one lattice; explicit codes ignore the lattice.
CodeInstance make_instance(const LoadedCode &code, const std::optional<LatticeChoice> &lattice);

/// Typed accessors that raise ValidationError with the key path in the message.
const json &require(const json &obj, const std::string &key, const std::string &where);
template <typename T>
T get_as(const json &value, const std::string &path) {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!value.is_number_integer()) {
            throw ValidationError(path + ": expected an integer");
        }
        if constexpr (std::is_unsigned_v<T>) {
            if (value.is_number_integer() && !value.is_number_unsigned() && value.get<std::int64_t>() < 0) {
                throw ValidationError(path + ": must be non-negative");
            }
        }
    }
    try {
        return value.get<T>();
    } catch (const json::exception &) {
        throw ValidationError(path + ": wrong type");
    }
}
template <typename T>
T get_or(const json &obj, const std::string &key, T fallback, const std::string &where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get_as<T>(obj.at(key), where + "." + key);
}
template <typename T>
T get_required(const json &obj, const std::string &key, const std::string &where) {
    return get_as<T>(require(obj, key, where), where + "." + key);
}

}  // namespace selfcorr::lab

#endif
