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

#include "mulmap/modp.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace mulmap {

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(u64 n)
{
    if (n < 2) return false;
    for (u64 sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % sp == 0) return n == sp;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for all 64-bit integers.
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 random_prime(std::mt19937_64& rng, unsigned min_bits, unsigned max_bits, u64 modulus, u64 residue)
{
    if (min_bits < 3 || max_bits > 62 || min_bits > max_bits) {
        throw std::invalid_argument("random_prime: bit range must lie in [3, 62]");
    }
    std::uniform_int_distribution<unsigned> bits(min_bits, max_bits);
    for (;;) {
        unsigned b = bits(rng);
        std::uniform_int_distribution<u64> d(u64{1} << (b - 1), (u64{1} << b) - 1);
        u64 c = d(rng) | 1;
        if (modulus > 1) {
            c = c - c % modulus + residue;
            if (c < (u64{1} << (b - 1))) c += modulus;
        }
        if (is_prime(c)) return c;
    }
}

const ModContext* ModContext::get(u64 p)
{
    static std::mutex mu;
    static std::map<u64, std::unique_ptr<ModContext>> registry;

    if (p < 3 || p >= (u64{1} << 62) || !is_prime(p)) {
        throw std::invalid_argument("PrimeField: modulus must be an odd prime below 2^62");
    }
    std::lock_guard lock(mu);
    auto it = registry.find(p);
    if (it != registry.end()) return it->second.get();

    auto ctx = std::make_unique<ModContext>();
    ctx->p = p;
    u64 inv = p;
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    ctx->ninv = ~inv + 1;
    u64 r1 = (~p + 1) % p; // 2^64 mod p
    ctx->one = r1;
    ctx->r2 = mulmod(r1, r1, p);
    ctx->zeta12 = 0;
    if (p % 12 == 1) {
        for (u64 a = 2;; ++a) {
            u64 w = powmod(a, (p - 1) / 12, p);
            if (powmod(w, 6, p) != 1 && powmod(w, 4, p) != 1) {
                ctx->zeta12 = ctx->to_mont(w);
                break;
            }
        }
    }
    const ModContext* out = ctx.get();
    registry.emplace(p, std::move(ctx));
    return out;
}

ModP int_like(const ModP& x, std::int64_t n)
{
    const ModContext* c = x.context();
    if (!c) return ModP();
    u64 mag = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    ModP r(c, c->to_mont(mag % c->p));
    return n < 0 ? -r : r;
}

PrimeField::PrimeField(u64 p) : ctx_(ModContext::get(p)) {}

ModP PrimeField::from_int(std::int64_t n) const noexcept { return int_like(zero(), n); }

ModP PrimeField::from_rational(const Rational& r) const
{
    BigInt p = ctx_->p;
    BigInt num = r.numerator() % p;
    if (num < 0) num += p;
    BigInt den = r.denominator() % p;
    if (den == 0) throw error(errc::division_by_zero, "denominator " + r.str() + " vanishes mod p");
    ModP n = from_u64(num.convert_to<u64>());
    ModP d = from_u64(den.convert_to<u64>());
    return n / d;
}

std::optional<ModP> PrimeField::sqrt(const ModP& a) const
{
    const u64 p = ctx_->p;
    if (a.is_zero()) return zero();
    if (a.pow((p - 1) / 2) != one()) return std::nullopt;

    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    ModP z = from_u64(2);
    while (z.pow((p - 1) / 2) == one()) z += one();

    unsigned m = s;
    ModP c = z.pow(q);
    ModP t = a.pow(q);
    ModP r = a.pow((q + 1) / 2);
    while (!t.is_one()) {
        unsigned i = 0;
        ModP t2 = t;
        while (!t2.is_one()) {
            t2 *= t2;
            ++i;
        }
        ModP b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b *= b;
        m = i;
        c = b * b;
        t *= c;
        r *= b;
    }
    ModP other = -r;
    return other.value() < r.value() ? other : r;
}

ModP PrimeField::zeta12() const
{
    if (ctx_->zeta12 == 0) {
        throw error(errc::no_roots_of_unity, "p = " + std::to_string(ctx_->p) + " is not 1 mod 12");
    }
    return ModP(ctx_, ctx_->zeta12);
}

Rational parse_rational(const std::string& text)
{
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigRational(BigInt(text)));
        BigInt n(text.substr(0, slash));
        BigInt d(text.substr(slash + 1));
        if (d == 0) throw error(errc::division_by_zero, "rational literal '" + text + "'");
        return Rational(BigRational(n, d));
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const error*>(&e)) throw;
        throw std::invalid_argument("not a rational literal: '" + text + "'");
    }
}

} // namespace mulmap
