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

#include <random>

#include "doctest.h"

#include "mulmap/exact.hpp"
#include "mulmap/linalg.hpp"
#include "mulmap/modp.hpp"
#include "mulmap/polynomial.hpp"
#include "mulmap/rational_function.hpp"
#include "mulmap/sequence.hpp"
#include "mulmap/series.hpp"

using namespace mulmap;

namespace {

using PolyP = Polynomial<ModP>;

PolyP random_poly(const PrimeField& k, std::mt19937_64& rng, int deg)
{
    std::vector<ModP> c;
    for (int i = 0; i < deg; ++i) c.push_back(k.random(rng));
    c.push_back(k.random_nonzero(rng));
    return PolyP(std::move(c));
}

// Naive O(nm) product, written independently of the library kernels.
PolyP naive_product(const PolyP& a, const PolyP& b, const PrimeField& k)
{
    std::vector<ModP> out(a.size() + b.size() - 1, k.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a.coeff(i) * b.coeff(j);
    return PolyP(std::move(out));
}

} // namespace

TEST_CASE("mod-p arithmetic matches 128-bit reference")
{
    PrimeField k(kDefaultPrime);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 1000; ++t) {
        u64 a = rng() % kDefaultPrime, b = rng() % kDefaultPrime;
        u64 want = static_cast<u64>((static_cast<unsigned __int128>(a) * b) % kDefaultPrime);
        CHECK((k.from_u64(a) * k.from_u64(b)).value() == want);
        CHECK((k.from_u64(a) + k.from_u64(b)).value() == (a + b) % kDefaultPrime);
    }
    auto x = k.random_nonzero(rng);
    CHECK((x * x.inverse()).is_one());
    CHECK_THROWS_AS(k.zero().inverse(), error);
    CHECK(k.from_rational(Rational(1, 3)) * k.from_int(3) == k.one());
    CHECK(k.from_int(-1) + k.one() == k.zero());
}

TEST_CASE("primality and roots of unity")
{
    CHECK(is_prime(kDefaultPrime));
    CHECK_FALSE(is_prime(kDefaultPrime - 2));
    CHECK(is_prime(1000000007));
    CHECK_FALSE(is_prime(561));
    std::mt19937_64 rng(3);
    u64 p = random_prime(rng, 59, 61, 12, 1);
    CHECK(is_prime(p));
    CHECK(p % 12 == 1);
    PrimeField k(p);
    REQUIRE(k.has_zeta12());
    auto z = k.zeta12();
    CHECK(z.pow(12).is_one());
    CHECK_FALSE(z.pow(6).is_one());
    CHECK_FALSE(z.pow(4).is_one());
    CHECK(to_field(k, Exact::i()).pow(2) == k.from_int(-1));
    auto j = to_field(k, Exact::j());
    CHECK(j * j + j + k.one() == k.zero());
    CHECK_THROWS_AS(PrimeField(kDefaultPrime).zeta12(), error);
}

TEST_CASE("square roots")
{
    PrimeField k(kDefaultPrime);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto a = k.random_nonzero(rng);
        auto s = k.sqrt(a * a);
        REQUIRE(s.has_value());
        CHECK((*s) * (*s) == a * a);
    }
}

TEST_CASE("fast polynomial product agrees with naive product")
{
    PrimeField k(kDefaultPrime);
    std::mt19937_64 rng(5);
    for (int da : {0, 3, 39, 40, 41, 97, 300}) {
        for (int db : {0, 1, 40, 150}) {
            auto a = random_poly(k, rng, da), b = random_poly(k, rng, db);
            auto prod = a * b;
            CHECK(prod == naive_product(a, b, k));
            CHECK(prod.degree() == da + db);
        }
    }
}

TEST_CASE("division and gcd")
{
    PrimeField k(kDefaultPrime);
    std::mt19937_64 rng(9);
    auto g = monic(random_poly(k, rng, 4));
    auto a = random_poly(k, rng, 30) * g, b = random_poly(k, rng, 20) * g;
    auto [q, r] = divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    auto h = gcd(a, b);
    CHECK(h.degree() >= 4);
    CHECK((a % h).is_zero());
    CHECK((b % h).is_zero());
    CHECK((h % g).is_zero());

    using PolyQ = Polynomial<Rational>;
    PolyQ x({Rational(-1), Rational(0), Rational(1)});       // t^2 - 1
    PolyQ y({Rational(1, 2), Rational(1, 2)});               // (t + 1)/2
    CHECK(gcd(x, y) == PolyQ({Rational(1), Rational(1)}));
    CHECK(derivative(x) == PolyQ({Rational(0), Rational(2)}));
    CHECK(pow(y, 3)(Rational(1)) == Rational(1));
}

TEST_CASE("rational functions reduce to lowest terms")
{
    using PolyQ = Polynomial<Rational>;
    using RF = RationalFunction<Rational>;
    RF t = RF::variable(Rational(1));
    RF one = RF::constant(Rational(1));
    RF f = (t * t - one) / (t - one);
    CHECK(f.den().degree() == 0);
    CHECK(f.num() == PolyQ({Rational(1), Rational(1)}));
    CHECK(f.degree() == 1);
    RF g = one / (t - one);
    CHECK(g(Rational(3)) == Rational(1, 2));
    CHECK_THROWS_AS(g(Rational(1)), error);
    CHECK(((g * (t - one)) == one));
}

TEST_CASE("truncated series")
{
    using S = TruncatedSeries<Rational>;
    // 1/(1 - e) = 1 + e + e^2 + ...
    S a(0, {Rational(1), Rational(-1)}, 8);
    S inv = invert(a);
    for (int e = 0; e < 8; ++e) CHECK(inv.coefficient(e) == Rational(1));
    CHECK_THROWS_AS(inv.coefficient(8), error);
    // e^-2 scaling keeps relative precision.
    S b = S::monomial(Rational(2), 2, 6);
    S ib = invert(b);
    CHECK(ib.valuation() == -2);
    CHECK(ib.coefficient(-2) == Rational(1, 2));
    CHECK(ib.truncation_order() == 2);
    // Cancellation raises the valuation.
    S c = a - S::constant(Rational(1), 8);
    CHECK(c.valuation() == 1);
    CHECK(c.coefficient(1) == Rational(-1));
    CHECK_THROWS_AS(invert(S(0, {}, 4)), error);
    // (e + e^2) * (1/e) = 1 + e with truncation shrinking by one.
    S d(1, {Rational(1), Rational(1)}, 6);
    S q = d / S::monomial(Rational(1), 1, 6);
    CHECK(q.coefficient(0) == Rational(1));
    CHECK(q.coefficient(1) == Rational(1));
    CHECK(q.truncation_order() == 5);
}

TEST_CASE("nullspace over a prime field")
{
    PrimeField k(kDefaultPrime);
    std::mt19937_64 rng(2);
    Matrix<ModP> m(3, 5);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = k.random(rng);
    for (int j = 0; j < 5; ++j) m(2, j) = m(0, j) + m(1, j) * k.from_int(3);
    CHECK(rank(m) == 2);
    Matrix<ModP> n = nullspace(m, k.one());
    REQUIRE(n.cols() == 3);
    Matrix<ModP> prod = multiply(m, n, k.zero());
    for (Eigen::Index i = 0; i < prod.rows(); ++i)
        for (Eigen::Index j = 0; j < prod.cols(); ++j) CHECK(prod(i, j).is_zero());
}

TEST_CASE("exact literals and parameter sequences")
{
    Exact e = parse_exact("-3/2*i^3*j");
    CHECK(e.root == 1);
    CHECK(e.r == Rational(-3, 2));
    CHECK(parse_exact("i").pow(4) == Exact(1));
    CHECK((Exact::j().pow(3)) == Exact(1));
    CHECK_THROWS_AS(parse_exact("3/0"), error);

    PrimeField k(1000000009); // 1000000009 = 1 mod 12
    REQUIRE(k.has_zeta12());
    auto s = ParameterSequence::structured({Exact(2), Exact(Rational(3)), Exact(Rational(5)), {Exact(1), Exact(-1)}, {}, {}});
    for (long n = -3; n <= 3; ++n) {
        Exact want = Exact(2) * Exact(3).pow(n) * Exact(5).pow(n % 2 == 0 ? n : -n) * Exact(n % 2 == 0 ? 1 : -1);
        CHECK(s.at(k, n) == to_field(k, want));
        CHECK(s.at(RationalField{}, n) == want.r);
    }
    auto t = ParameterSequence::table(2, {Exact(1), Exact(4)});
    CHECK(t.exact_at(3) == Exact(4));
    CHECK_THROWS_AS(t.exact_at(5), error);
    auto g = ParameterSequence::geometric(Exact(3), Exact::i());
    CHECK(g.exact_at(2) == Exact(-3));
}
