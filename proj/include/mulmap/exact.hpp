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

#include <ostream>
#include <string>

#include "mulmap/modp.hpp"
#include "mulmap/rational.hpp"

namespace mulmap {

/// Exact parameter literal r * zeta^k with r rational and zeta a fixed
/// primitive 12th root of unity (i = zeta^3, j = zeta^4). Closed under
/// products and quotients, which is all parameter sequences need.
struct Exact {
    Rational r{1};
    int root = 0; // exponent of zeta, in [0, 6)

    Exact() = default;
    Exact(Rational v, int k = 0) : r(std::move(v)), root(((k % 12) + 12) % 12)
    {
        // zeta^6 = -1, so keep root in [0, 6) and fold the sign into r.
        if (root >= 6) {
            root -= 6;
            r = -r;
        }
        if (r.is_zero()) root = 0;
    }
    Exact(std::int64_t v) : r(v) {}

    static Exact i() { return Exact(Rational(1), 3); }
    static Exact j() { return Exact(Rational(1), 4); }

    bool is_zero() const { return r.is_zero(); }
    bool is_rational() const { return root == 0 || r.is_zero(); }

    Exact inverse() const { return Exact(r.inverse(), -root); }
    Exact pow(long e) const;

    friend Exact operator*(const Exact& a, const Exact& b) { return Exact(a.r * b.r, a.root + b.root); }
    friend Exact operator/(const Exact& a, const Exact& b) { return a * b.inverse(); }
    friend Exact operator-(const Exact& a) { return Exact(-a.r, a.root); }
    friend bool operator==(const Exact& a, const Exact& b)
    {
        return a.r == b.r && a.root == b.root;
    }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const Exact& e) { return os << e.str(); }
};

/// Parses products of factors separated by '*': rationals ("3", "-2/5"),
/// "i", "j", "zeta" (12th root), each optionally raised to "^k".
Exact parse_exact(const std::string& text);

inline ModP to_field(const PrimeField& k, const Exact& e)
{
    ModP v = k.from_rational(e.r);
    if (e.root != 0 && !e.r.is_zero()) v *= k.zeta12().pow(static_cast<u64>(e.root));
    return v;
}

inline Rational to_field(const RationalField&, const Exact& e)
{
    if (!e.is_rational()) throw error(errc::no_roots_of_unity, "root of unity in " + e.str() + " is not rational");
    return e.r;
}

} // namespace mulmap
