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

#include <cstdint>
#include <ostream>
#include <optional>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "mulmap/error.hpp"

namespace mulmap {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact rational scalar. Canonical form (coprime, positive denominator) is
/// maintained by the backend; this wrapper only pins down division by zero.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : v_(n) {}
    Rational(std::int64_t n, std::int64_t d)
    {
        if (d == 0) throw error(errc::division_by_zero, "rational with zero denominator");
        v_ = BigRational(n, d);
    }
    explicit Rational(BigRational v) : v_(std::move(v)) {}

    const BigRational& big() const noexcept { return v_; }
    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Rational inverse() const
    {
        if (is_zero()) throw error(errc::division_by_zero, "inverse of rational zero");
        return Rational(BigRational(1) / v_);
    }

    Rational pow(std::uint64_t e) const
    {
        Rational r(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) throw error(errc::division_by_zero, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(BigRational(-a.v_)); }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    std::string str() const { return v_.str(); }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

private:
    BigRational v_;
};

/// Parses "n", "-n" or "n/d" (integers of any size).
Rational parse_rational(const std::string& text);

inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational int_like(const Rational&, std::int64_t n) { return Rational(n); }
inline Rational ipow(const Rational& x, long e)
{
    return e >= 0 ? x.pow(static_cast<std::uint64_t>(e)) : x.inverse().pow(static_cast<std::uint64_t>(-e));
}

/// Field context for the rational carrier.
struct RationalField {
    using Element = Rational;

    Element zero() const { return Rational(0); }
    Element one() const { return Rational(1); }
    Element from_int(std::int64_t n) const { return Rational(n); }
    Element from_rational(const Rational& r) const { return r; }

    /// Small random rational with numerator and denominator below 2^20;
    /// generic enough for tests over Q.
    template <class Rng>
    Element random(Rng& rng) const
    {
        std::uniform_int_distribution<std::int64_t> num(-(1 << 20), 1 << 20);
        std::uniform_int_distribution<std::int64_t> den(1, 1 << 20);
        return Rational(num(rng), den(rng));
    }
    template <class Rng>
    Element random_nonzero(Rng& rng) const
    {
        for (;;) {
            auto r = random(rng);
            if (!r.is_zero()) return r;
        }
    }

    /// Rational square root when numerator and denominator are both squares.
    std::optional<Element> sqrt(const Element& a) const
    {
        if (a.numerator() < 0) return std::nullopt;
        BigInt n = boost::multiprecision::sqrt(a.numerator());
        BigInt d = boost::multiprecision::sqrt(a.denominator());
        if (n * n != a.numerator() || d * d != a.denominator()) return std::nullopt;
        return Rational(BigRational(n, d));
    }
};

} // namespace mulmap
