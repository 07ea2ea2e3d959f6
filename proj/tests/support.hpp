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

#include <random>

#include "mulmap/modp.hpp"
#include "mulmap/sequence.hpp"

namespace testing_support {

/// A second witness prime, 1 mod 12 so that i and j exist.

inline mulmap::PrimeField field12()
{
    static const mulmap::u64 p = [] {
        std::mt19937_64 rng(20261016);
        return mulmap::random_prime(rng, 60, 61, 12, 1);
    }();
    return mulmap::PrimeField(p);
}

/// Random rational other than 0 and +-1.
inline mulmap::Exact random_exact(std::mt19937_64& rng, std::int64_t bound = 60)
{
    std::uniform_int_distribution<std::int64_t> d(1, bound);
    std::int64_t a = d(rng), b = d(rng);
    while (a == b) b = d(rng); // keep away from +-1, where the relations degenerate
    if (rng() & 1) a = -a;
    return mulmap::Exact(mulmap::Rational(a, b));
}

} // namespace testing_support
