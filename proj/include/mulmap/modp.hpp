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
#include <optional>
#include <ostream>
#include <random>

#include "mulmap/error.hpp"
#include "mulmap/rational.hpp"

namespace mulmap {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// 2^61 - 1, the default working prime.
inline constexpr u64 kDefaultPrime = (u64{1} << 61) - 1;

bool is_prime(u64 n);

/// Random prime with bit length in [min_bits, max_bits] and p = residue mod
/// `modulus` (residue 1, modulus 1 means unconstrained).
u64 random_prime(std::mt19937_64& rng, unsigned min_bits, unsigned max_bits, u64 modulus = 1,
                 u64 residue = 0);

/// Montgomery constants for one odd prime below 2^62. Contexts are interned
/// and never freed, so elements can hold a raw pointer to theirs.
struct ModContext {
    u64 p;
    u64 ninv; // -p^{-1} mod 2^64
    u64 r2;   // 2^128 mod p
    u64 one;  // 2^64 mod p, i.e. 1 in Montgomery form
    u64 zeta12; // primitive 12th root of unity (Montgomery form), 0 unless p = 1 mod 12

    u64 redc(u128 t) const noexcept
    {
        u64 m = static_cast<u64>(t) * ninv;
        u64 r = static_cast<u64>((t + static_cast<u128>(m) * p) >> 64);
        return r >= p ? r - p : r;
    }
    u64 to_mont(u64 a) const noexcept { return redc(static_cast<u128>(a % p) * r2); }
    u64 from_mont(u64 a) const noexcept { return redc(a); }

    static const ModContext* get(u64 p);
};

/// Element of Z/pZ, stored in Montgomery form. A default-constructed element
/// has no context and behaves as zero in any field.
class ModP {
public:
    ModP() = default;
    ModP(const ModContext* ctx, u64 mont) : v_(mont), ctx_(ctx) {}

    const ModContext* context() const noexcept { return ctx_; }
    u64 modulus() const noexcept { return ctx_ ? ctx_->p : 0; }
    /// Canonical residue in [0, p).
    u64 value() const noexcept { return ctx_ ? ctx_->from_mont(v_) : 0; }
    u64 raw() const noexcept { return v_; }

    bool is_zero() const noexcept { return v_ == 0; }
    bool is_one() const noexcept { return ctx_ && v_ == ctx_->one; }

    ModP& operator+=(const ModP& o) noexcept
    {
        adopt(o);
        u64 s = v_ + o.v_;
        v_ = (ctx_ && s >= ctx_->p) ? s - ctx_->p : s;
        return *this;
    }
    ModP& operator-=(const ModP& o) noexcept
    {
        adopt(o);
        v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + ctx_->p - o.v_;
        return *this;
    }
    ModP& operator*=(const ModP& o) noexcept
    {
        adopt(o);
        v_ = ctx_ ? ctx_->redc(static_cast<u128>(v_) * o.v_) : 0;
        return *this;
    }
    ModP& operator/=(const ModP& o) { return *this *= o.inverse(); }

    ModP operator-() const noexcept { return ModP(ctx_, v_ == 0 ? 0 : ctx_->p - v_); }

    friend ModP operator+(ModP a, const ModP& b) noexcept { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) noexcept { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) noexcept { return a *= b; }
    friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
    friend bool operator==(const ModP& a, const ModP& b) noexcept { return a.v_ == b.v_; }

    ModP pow(u64 e) const noexcept
    {
        ModP base = *this;
        ModP r(ctx_, ctx_ ? ctx_->one : 0);
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }
    /// Signed exponent; negative powers go through the inverse.
    ModP pow_signed(long e) const
    {
        return e >= 0 ? pow(static_cast<u64>(e)) : inverse().pow(static_cast<u64>(-e));
    }

    ModP inverse() const
    {
        if (is_zero()) throw error(errc::division_by_zero, "inverse of zero in Z/pZ");
        return pow(ctx_->p - 2);
    }

    friend std::ostream& operator<<(std::ostream& os, const ModP& x) { return os << x.value(); }

private:
    void adopt(const ModP& o) noexcept
    {
        if (!ctx_) ctx_ = o.ctx_;
    }

    u64 v_ = 0;
    const ModContext* ctx_ = nullptr;
};

inline ModP one_like(const ModP& x) { return ModP(x.context(), x.context() ? x.context()->one : 0); }
inline ModP zero_like(const ModP& x) { return ModP(x.context(), 0); }
ModP int_like(const ModP& x, std::int64_t n);
inline ModP ipow(const ModP& x, long e) { return x.pow_signed(e); }

/// Field context for Z/pZ.
class PrimeField {
public:
    using Element = ModP;

    explicit PrimeField(u64 p = kDefaultPrime);

    u64 modulus() const noexcept { return ctx_->p; }
    const ModContext* context() const noexcept { return ctx_; }

    Element zero() const noexcept { return ModP(ctx_, 0); }
    Element one() const noexcept { return ModP(ctx_, ctx_->one); }
    Element from_u64(u64 v) const noexcept { return ModP(ctx_, ctx_->to_mont(v)); }
    Element from_int(std::int64_t n) const noexcept;
    /// Throws division_by_zero when p divides the denominator.
    Element from_rational(const Rational& r) const;

    template <class Rng>
    Element random(Rng& rng) const
    {
        std::uniform_int_distribution<u64> d(0, ctx_->p - 1);
        return from_u64(d(rng));
    }
    template <class Rng>
    Element random_nonzero(Rng& rng) const
    {
        std::uniform_int_distribution<u64> d(1, ctx_->p - 1);
        return from_u64(d(rng));
    }

    /// Square root if `a` is a quadratic residue (Tonelli-Shanks); returns the
    /// root with the smaller canonical residue.
    std::optional<Element> sqrt(const Element& a) const;

    /// Primitive 12th root of unity; requires p = 1 mod 12.
    Element zeta12() const;
    bool has_zeta12() const noexcept { return ctx_->p % 12 == 1; }

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.ctx_ == b.ctx_; }

private:
    const ModContext* ctx_;
};

} // namespace mulmap
