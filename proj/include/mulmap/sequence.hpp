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
#include <random>
#include <string>
#include <vector>

#include "mulmap/exact.hpp"

namespace mulmap {

/// Index-dependent parameter (z_n, q_n, mu_n, ...). Values are exact so the
/// same sequence reduces consistently modulo every witness prime.
class ParameterSequence {
public:
    enum class Kind { constant, geometric, table, structured };

    /// Multiplicative form of a secular-plus-periodic logarithm:
    ///   value(n) = offset * base^n * alternating^(n (-1)^n) * rho2(n) * rho3(n) * rho4(n)
    /// An empty periodic table means the trivial factor 1.
    struct Structured {
        Exact offset{1};
        Exact base{1};
        Exact alternating{1};
        std::vector<Exact> rho2, rho3, rho4;
    };

    ParameterSequence() = default; // the constant 1

    static ParameterSequence constant(Exact c);
    /// first * ratio^n
    static ParameterSequence geometric(Exact first, Exact ratio);
    /// values[k] is the value at index first_index + k.
    static ParameterSequence table(long first_index, std::vector<Exact> values);
    static ParameterSequence structured(Structured s);

    /// Table of random nonzero rationals (numerator and denominator up to
    /// `bound`) over [lo, hi].
    static ParameterSequence random_table(std::mt19937_64& rng, long lo, long hi, std::int64_t bound = 1 << 16);

    Kind kind() const noexcept { return kind_; }
    const Structured& structure() const noexcept { return s_; }
    long first_index() const noexcept { return first_; }
    long last_index() const noexcept { return first_ + static_cast<long>(values_.size()) - 1; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }

    /// Exact value at n; tables throw out_of_range outside their index range.
    Exact exact_at(long n) const;

    /// Value reduced into a field.
    template <class K>
    typename K::Element at(const K& field, long n) const
    {
        if (kind_ == Kind::structured) return structured_at(field, n);
        return to_field(field, exact_at(n));
    }

    /// Materialised table of this sequence over [lo, hi].
    ParameterSequence materialise(long lo, long hi) const;

    /// One factor seq(n + shift)^exponent of a shifted product.
    struct Factor {
        const ParameterSequence* seq;
        long shift = 0;
        long exponent = 1;
    };

    /// n -> scale * prod factor(n), materialised over [lo, hi].
    static ParameterSequence product(const std::vector<Factor>& factors, Exact scale, long lo, long hi);

    /// Sequence n -> (sign(n)) * value(n) with sign from a +/-1 table of period
    /// signs.size().
    ParameterSequence with_signs(const std::vector<int>& signs, long lo, long hi) const;

    std::string describe() const;

private:
    template <class K>
    typename K::Element structured_at(const K& field, long n) const
    {
        auto pw = [&](const Exact& e, long k) {
            auto v = to_field(field, e);
            if (k >= 0) return v.pow(static_cast<u64>(k));
            return v.inverse().pow(static_cast<u64>(-k));
        };
        auto periodic = [&](const std::vector<Exact>& t) {
            if (t.empty()) return field.one();
            long m = static_cast<long>(t.size());
            return to_field(field, t[static_cast<std::size_t>(((n % m) + m) % m)]);
        };
        long alt = (n % 2 == 0) ? n : -n;
        return to_field(field, s_.offset) * pw(s_.base, n) * pw(s_.alternating, alt) * periodic(s_.rho2) *
               periodic(s_.rho3) * periodic(s_.rho4);
    }

    Kind kind_ = Kind::constant;
    Exact value_;           // constant, or first term of a geometric sequence
    Exact ratio_;           // geometric
    long first_ = 0;        // table
    std::vector<Exact> values_;
    Structured s_;
};

} // namespace mulmap
