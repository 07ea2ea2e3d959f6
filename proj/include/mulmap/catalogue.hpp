/*
   Copyright 2026 The mulmap Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mulmap/mapping.hpp"

namespace mulmap {

/// Default materialisation window for n-dependent parameters.
inline constexpr long kWindowLo = -8;
inline constexpr long kWindowHi = 48;

/// z with z[n+4] z[n-1] = z[n+2] z[n+1]: offset * base^n * rho2(n) * rho3(n).
ParameterSequence shift4_solution(Exact base, Exact offset, std::vector<Exact> rho2, std::vector<Exact> rho3);

/// z with z[n+5] z[n+4] z[n] z[n-1] = z[n+3] z[n+2]^2 z[n+1]:
/// offset * base^n * alternating^(n (-1)^n) * rho2(n) * rho3(n).
ParameterSequence shift5_solution(Exact base, Exact offset, Exact alternating, std::vector<Exact> rho2,
                                  std::vector<Exact> rho3);

/// Free q: z_n = q[n+1] q[n-1], g_n = q[n+2] q[n-2] / q[n]^g_power (2 keeps the
/// linear degree growth).
MappingSpec third_kind_family(const ParameterSequence& q, long g_power = 2, long lo = kWindowLo, long hi = kWindowHi);

/// Free q: z_n z_{n-1} = q[n+1] q[n-1] (z solved forward from z[lo] = z_start),
/// g_n = -q[n+2] q[n-1] / (q[n+1] q[n]).
MappingSpec hky_family(const ParameterSequence& q, Exact z_start, long lo = kWindowLo, long hi = kWindowHi);

/// g_n = -q[n+2] q[n-1] / (q[n+1] q[n]) with an arbitrary z (breaks the z relation).
MappingSpec hky_family_free_z(const ParameterSequence& q, const ParameterSequence& z, long lo = kWindowLo,
                              long hi = kWindowHi);

/// Free z with g_n = z[n+1] z[n-1].
MappingSpec gambier_family(const ParameterSequence& z);

/// g_n = 1/(z[n+1] z[n-1]).
MappingSpec quadratic_m2_family(const ParameterSequence& z);

/// g_n = 1/(z[n+1] z[n]^2 z[n-1]).
MappingSpec quadratic_m4_family(const ParameterSequence& z);

/// Random nonzero rational table over [lo, hi].
ParameterSequence random_sequence(std::mt19937_64& rng, long lo = kWindowLo, long hi = kWindowHi);

struct CatalogueEntry {
    std::string id;
    std::string relation;       // human-readable statement of the mapping
    std::string expected;       // expected growth class
    std::vector<int> degrees;   // expected degree sequence prefix, if known
    std::optional<int> parameter_count;
    std::function<MappingSpec()> make;
};

/// Built-in mappings: the autonomous ansatz cases, their deautonomisations and
/// the two factorised families.
const std::vector<CatalogueEntry>& catalogue();

/// Catalogue entry by id; throws error(out_of_range).
const CatalogueEntry& catalogue_entry(const std::string& id);

} // namespace mulmap
