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

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "mulmap/error.hpp"
#include "mulmap/modp.hpp"
#include "mulmap/rational.hpp"

namespace mulmap {

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = -1;

/// Dense univariate polynomial over a field, lowest degree first. The
/// coefficient vector never has a trailing zero.
template <class F>
class Polynomial {
public:
    using Scalar = F;

    Polynomial() = default;
    explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<F> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(const F& c) { return Polynomial(std::vector<F>{c}); }
    /// c * x^k
    static Polynomial monomial(const F& c, std::size_t k)
    {
        std::vector<F> v(k + 1, zero_like(c));
        v[k] = c;
        return Polynomial(std::move(v));
    }

    int degree() const noexcept { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    std::size_t size() const noexcept { return c_.size(); }
    std::span<const F> coefficients() const noexcept { return c_; }
    /// Coefficient of x^i (zero beyond the degree).
    F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(); }
    const F& lead() const { return c_.back(); }

    template <class X>
    X operator()(const X& x) const
    {
        if (c_.empty()) return x * F();
        X r = x * F() + c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) r = r * x + c_[i];
        return r;
    }
    F operator()(const F& x) const
    {
        F r{};
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_like(o.c_.back()));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_like(o.c_.back()));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator*=(const F& s)
    {
        for (auto& a : c_) a *= s;
        trim();
        return *this;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const F& s) { return a *= s; }
    friend Polynomial operator*(const F& s, Polynomial a) { return a *= s; }
    friend Polynomial operator-(Polynomial a)
    {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<F> out(a.c_.size() + b.c_.size() - 1, zero_like(a.c_.back()));
        multiply_into(a.c_, b.c_, out);
        return Polynomial(std::move(out));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p)
    {
        if (p.is_zero()) return os << "0";
        bool first = true;
        for (std::size_t i = p.c_.size(); i-- > 0;) {
            if (p.c_[i] == F()) continue;
            if (!first) os << " + ";
            first = false;
            os << p.c_[i];
            if (i > 0) os << "*t^" << i;
        }
        return os;
    }

    /// Schoolbook/Karatsuba product written into `out` (size a+b-1, zeroed).
    static void multiply_into(std::span<const F> a, std::span<const F> b, std::span<F> out);

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == F()) c_.pop_back();
    }

    std::vector<F> c_;
};

namespace detail {

inline constexpr std::size_t kKaratsubaCutoff = 40;

template <class F>
void schoolbook(std::span<const F> a, std::span<const F> b, std::span<F> out)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == F()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
}

// Balanced Karatsuba on equal halves; unbalanced inputs are split into
// chunks of the shorter length.
template <class F>
void karatsuba(std::span<const F> a, std::span<const F> b, std::span<F> out)
{
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t n = a.size(), m = b.size();
    if (m < kKaratsubaCutoff) {
        schoolbook(a, b, out);
        return;
    }
    if (n > m) {
        std::vector<F> tmp(2 * m - 1);
        for (std::size_t off = 0; off < n; off += m) {
            std::size_t len = std::min(m, n - off);
            std::fill(tmp.begin(), tmp.end(), F());
            karatsuba<F>(a.subspan(off, len), b, std::span<F>(tmp.data(), len + m - 1));
            for (std::size_t i = 0; i < len + m - 1; ++i) out[off + i] += tmp[i];
        }
        return;
    }
    const std::size_t h = n / 2;
    auto a0 = a.first(h), a1 = a.subspan(h);
    auto b0 = b.first(h), b1 = b.subspan(h);
    const std::size_t hi = n - h;

    std::vector<F> z0(2 * h - 1), z2(2 * hi - 1), sa(hi), sb(hi), z1(2 * hi - 1);
    karatsuba<F>(a0, b0, z0);
    karatsuba<F>(a1, b1, z2);
    for (std::size_t i = 0; i < hi; ++i) {
        sa[i] = a1[i] + (i < h ? a0[i] : F());
        sb[i] = b1[i] + (i < h ? b0[i] : F());
    }
    karatsuba<F>(sa, sb, z1);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];
    for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) out[i + h] += z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[i + 2 * h] += z2[i];
}

} // namespace detail

template <class F>
void Polynomial<F>::multiply_into(std::span<const F> a, std::span<const F> b, std::span<F> out)
{
    detail::karatsuba<F>(a, b, out);
}

/// Polynomial scaled so that its leading coefficient is one. Zero stays zero.
template <class F>
Polynomial<F> monic(Polynomial<F> p)
{
    if (p.is_zero() || p.lead() == one_like(p.lead())) return p;
    return p * p.lead().inverse();
}

/// Quotient and remainder; throws division_by_zero for a zero divisor.
template <class F>
std::pair<Polynomial<F>, Polynomial<F>> divmod(const Polynomial<F>& a, const Polynomial<F>& b)
{
    if (b.is_zero()) throw error(errc::division_by_zero, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Polynomial<F>(), a};
    std::vector<F> r(a.coefficients().begin(), a.coefficients().end());
    const std::size_t db = static_cast<std::size_t>(b.degree());
    std::vector<F> q(r.size() - db, zero_like(b.lead()));
    const F inv = b.lead().inverse();
    auto bc = b.coefficients();
    for (std::size_t k = r.size(); k-- > db;) {
        if (r[k] == F()) continue;
        F f = r[k] * inv;
        q[k - db] = f;
        for (std::size_t j = 0; j <= db; ++j) r[k - db + j] -= f * bc[j];
    }
    r.resize(db);
    return {Polynomial<F>(std::move(q)), Polynomial<F>(std::move(r))};
}

template <class F>
Polynomial<F> operator/(const Polynomial<F>& a, const Polynomial<F>& b)
{
    return divmod(a, b).first;
}
template <class F>
Polynomial<F> operator%(const Polynomial<F>& a, const Polynomial<F>& b)
{
    return divmod(a, b).second;
}

namespace detail {

// In-place remainder a mod b, b monic. Avoids allocating the quotient in the
// Euclidean loop.
template <class F>
void rem_monic_inplace(std::vector<F>& a, const std::vector<F>& b)
{
    const std::size_t db = b.size() - 1;
    while (!a.empty() && a.back() == F()) a.pop_back();
    while (a.size() > db) {
        F f = a.back();
        std::size_t shift = a.size() - 1 - db;
        for (std::size_t j = 0; j < db; ++j) a[shift + j] -= f * b[j];
        a.pop_back();
        while (!a.empty() && a.back() == F()) a.pop_back();
    }
}

template <class F>
void make_monic(std::vector<F>& a)
{
    if (a.empty()) return;
    F inv = a.back().inverse();
    for (auto& x : a) x *= inv;
}

inline BigInt content_of(const std::vector<BigInt>& v)
{
    BigInt g = 0;
    for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
    return g;
}

// Primitive remainder sequence over Z: pseudo-remainders with the content
// stripped after every step keep the coefficients bounded by the inputs.
inline std::vector<BigInt> primitive_prs_gcd(std::vector<BigInt> a, std::vector<BigInt> b)
{
    auto strip = [](std::vector<BigInt>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
        BigInt c = content_of(v);
        if (c > 1) for (auto& x : v) x /= c;
    };
    strip(a);
    strip(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        // pseudo-remainder of a by b
        const std::size_t db = b.size() - 1;
        while (a.size() > db && !a.empty()) {
            BigInt lb = b.back(), la = a.back();
            std::size_t shift = a.size() - 1 - db;
            for (auto& x : a) x *= lb;
            for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= la * b[j];
            a.pop_back();
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        strip(a);
        std::swap(a, b);
    }
    return a;
}

} // namespace detail

/// Monic greatest common divisor; gcd(a, 0) = monic(a), gcd(0, 0) = 0.
/// Over Z/pZ this is the monic Euclidean algorithm; over Q the inputs are
/// cleared of denominators and run through a content-stripped remainder
/// sequence.
template <class F>
Polynomial<F> gcd(const Polynomial<F>& a, const Polynomial<F>& b)
{
    if constexpr (std::is_same_v<F, Rational>) {
        auto to_int = [](const Polynomial<F>& p) {
            BigInt l = 1;
            for (const auto& c : p.coefficients()) l = boost::multiprecision::lcm(l, c.denominator());
            std::vector<BigInt> out;
            for (const auto& c : p.coefficients()) out.push_back(c.numerator() * (l / c.denominator()));
            return out;
        };
        auto g = detail::primitive_prs_gcd(to_int(a), to_int(b));
        std::vector<Rational> out;
        for (auto& x : g) out.emplace_back(BigRational(x));
        return monic(Polynomial<F>(std::move(out)));
    } else {
        if (b.is_zero()) return monic(a);
        if (a.is_zero()) return monic(b);
        std::vector<F> x(a.coefficients().begin(), a.coefficients().end());
        std::vector<F> y(b.coefficients().begin(), b.coefficients().end());
        if (x.size() < y.size()) std::swap(x, y);
        detail::make_monic(y);
        while (!y.empty()) {
            detail::rem_monic_inplace(x, y);
            detail::make_monic(x);
            std::swap(x, y);
        }
        return Polynomial<F>(std::move(x));
    }
}

template <class F>
Polynomial<F> derivative(const Polynomial<F>& p)
{
    if (p.degree() < 1) return {};
    std::vector<F> out;
    auto c = p.coefficients();
    for (std::size_t i = 1; i < c.size(); ++i) out.push_back(c[i] * int_like(c[i], static_cast<std::int64_t>(i)));
    return Polynomial<F>(std::move(out));
}

/// p^e by repeated squaring.
template <class F>
Polynomial<F> pow(const Polynomial<F>& p, unsigned e)
{
    Polynomial<F> r = Polynomial<F>::constant(one_like(p.is_zero() ? F() : p.lead()));
    Polynomial<F> b = p;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

} // namespace mulmap
