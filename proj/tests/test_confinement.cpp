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
#include "support.hpp"

#include "mulmap/catalogue.hpp"
#include "mulmap/confinement.hpp"
#include "mulmap/growth.hpp"

using namespace mulmap;
using testing_support::field12;
using testing_support::random_exact;

namespace {

ParameterSequence random_shift4(std::mt19937_64& rng)
{
    return shift4_solution(random_exact(rng), random_exact(rng), {random_exact(rng), random_exact(rng)},
                           {random_exact(rng), random_exact(rng), random_exact(rng)});
}

ParameterSequence random_shift5(std::mt19937_64& rng)
{
    return shift5_solution(random_exact(rng), random_exact(rng), random_exact(rng),
                           {random_exact(rng), random_exact(rng)},
                           {random_exact(rng), random_exact(rng), random_exact(rng)});
}

MappingSpec confining(RhsSpec::Family fam, std::mt19937_64& rng)
{
    const bool m2 = fam == RhsSpec::Family::m2;
    auto z = m2 ? random_shift4(rng) : random_shift5(rng);
    std::vector<Exact> rho;
    for (int i = 0; i < (m2 ? 3 : 4); ++i) rho.push_back(random_exact(rng));
    return factorised_family("f", z, mu_lambda_solution(z, fam, random_exact(rng), rho, -6, 24));
}

} // namespace

TEST_CASE("z constraints")
{
    std::mt19937_64 rng(1);
    RationalField q;
    CHECK(constraint_check_z(q, random_shift4(rng), ZConstraint::shift4, 0, 10).satisfied);
    CHECK(constraint_check_z(q, random_shift5(rng), ZConstraint::shift5, 0, 10).satisfied);
    auto c = ParameterSequence::constant(random_exact(rng));
    CHECK(constraint_check_z(q, c, ZConstraint::shift4, 0, 10).satisfied);
    CHECK(constraint_check_z(q, c, ZConstraint::shift5, 0, 10).satisfied);
    auto r = ParameterSequence::random_table(rng, -4, 20);
    auto r4 = constraint_check_z(q, r, ZConstraint::shift4, 0, 10);
    auto r5 = constraint_check_z(q, r, ZConstraint::shift5, 0, 10);
    CHECK_FALSE(r4.satisfied);
    CHECK_FALSE(r5.satisfied);
    for (const auto& v : r4.residuals) CHECK_FALSE(v.is_zero());

    // Residuals vanish exactly where the report says satisfied.
    auto s = constraint_check_z(q, random_shift4(rng), ZConstraint::shift4, -3, 12);
    for (const auto& v : s.residuals) CHECK(v.is_zero());

    // The shift4 solution with the alternating term is not a shift4 solution.
    auto alt = shift5_solution(Exact(2), Exact(3), Exact(5), {}, {});
    CHECK(constraint_check_z(q, alt, ZConstraint::shift5, 0, 10).satisfied);
    CHECK_FALSE(constraint_check_z(q, alt, ZConstraint::shift4, 0, 10).satisfied);

    // Complex periodic parts work over a field with twelfth roots of unity.
    auto k = field12();
    auto cz = shift4_solution(Exact(Rational(2, 3)), Exact::i(), {Exact::i(), Exact(2)}, {Exact::j(), Exact(1), Exact(3)});
    CHECK(constraint_check_z(k, cz, ZConstraint::shift4, -2, 12).satisfied);
}

TEST_CASE("sign gauge leaves shift4 satisfied")
{
    std::mt19937_64 rng(2);
    RationalField q;
    for (int trial = 0; trial < 5; ++trial) {
        auto z = random_shift4(rng);
        auto flipped = z.with_signs({-1}, -6, 24);
        CHECK(constraint_check_z(q, flipped, ZConstraint::shift4, -4, 16).satisfied);
        auto r = ParameterSequence::random_table(rng, -6, 24);
        CHECK(constraint_check_z(q, r, ZConstraint::shift4, -4, 16).satisfied ==
              constraint_check_z(q, r.with_signs({-1}, -6, 24), ZConstraint::shift4, -4, 16).satisfied);
    }
}

TEST_CASE("characteristic roots")
{
    auto k = field12();
    const auto roots = characteristic_roots(ZConstraint::shift5);
    REQUIRE(roots.size() == 6);
    // Expand prod (x - r) and compare with the polynomial.
    std::vector<ModP> prod{k.one()};
    for (const auto& r : roots) {
        std::vector<ModP> next(prod.size() + 1, k.zero());
        for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i + 1] += prod[i];
            next[i] -= prod[i] * to_field(k, r);
        }
        prod = next;
    }
    const auto poly = characteristic_polynomial(ZConstraint::shift5);
    REQUIRE(prod.size() == poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) CHECK(prod[i] == k.from_int(poly[i]));

    Polynomial<Rational> p;
    {
        std::vector<Rational> c;
        for (long v : poly) c.emplace_back(v);
        p = Polynomial<Rational>(c);
    }
    auto dp = derivative(p);
    for (long x : {1L, -1L}) {
        CHECK(p(Rational(x)).is_zero());
        CHECK(dp(Rational(x)).is_zero());
    }
    CHECK_FALSE(derivative(dp)(Rational(1)).is_zero());

    // Over a prime 1 mod 3 the cube roots are in the field: brute-force root
    // count mod a small prime.
    PrimeField small(37);
    std::vector<ModP> c;
    for (long v : poly) c.push_back(small.from_int(v));
    Polynomial<ModP> pm(c);
    int found = 0;
    for (u64 v = 0; v < 37; ++v)
        if (pm(small.from_u64(v)).is_zero()) ++found;
    CHECK(found == 4); // 1, -1, j, j^2 as distinct residues

    CHECK(characteristic_roots(ZConstraint::shift4).size() == 5);
}

TEST_CASE("mu lambda solutions and parameter counts")
{
    std::mt19937_64 rng(3);
    // Constant z, trivial periodic part.
    auto zc = ParameterSequence::constant(Exact(3));
    auto ml = mu_lambda_solution(zc, RhsSpec::Family::m2, Exact(5), {}, -4, 20);
    CHECK(ml.mu.exact_at(0) == Exact(9 * 5));
    CHECK(ml.lambda.exact_at(0) == Exact(Rational(9, 5)));
    for (int trial = 0; trial < 3; ++trial) {
        CHECK_NOTHROW(confining(RhsSpec::Family::m2, rng));
        CHECK_NOTHROW(confining(RhsSpec::Family::m4, rng));
    }
    auto bad = ParameterSequence::random_table(rng, -6, 24);
    CHECK_THROWS_AS(mu_lambda_solution(bad, RhsSpec::Family::m2, Exact(2), {}, -6, 24), error);
    try {
        // shift4 solutions also solve shift5, not conversely.
        CHECK_NOTHROW(mu_lambda_solution(random_shift4(rng), RhsSpec::Family::m4, Exact(2), {}, -6, 24));
        mu_lambda_solution(random_shift5(rng), RhsSpec::Family::m2, Exact(2), {}, -6, 24);
        FAIL("expected constraint_violated");
    } catch (const error& e) {
        CHECK(e.code() == errc::constraint_violated);
    }

    CHECK(parameter_count(RhsSpec::Family::m2) == 7);
    CHECK(parameter_count(RhsSpec::Family::m4) == 8);
    ParameterFreedom none{false, false, false, false};
    CHECK(parameter_count(RhsSpec::Family::m2, none) == 2);
    CHECK(parameter_count(RhsSpec::Family::m4, none) == 2);
}

TEST_CASE("kappa = i collapses the factorised families to 1/z^2 and 1/z^4")
{
    auto k = field12();
    std::mt19937_64 rng(4);
    auto z = ParameterSequence::constant(random_exact(rng));
    for (auto fam : {RhsSpec::Family::m2, RhsSpec::Family::m4}) {
        auto f = factorised_family("f", z, mu_lambda_solution(z, fam, Exact::i(), {}, -6, 24));
        auto r = MappingSpec::ratio("r", z, RhsSpec::power(Exact(1), fam == RhsSpec::Family::m2 ? -2 : -4));
        CHECK(same_step(solve_forward(f, k, 3), solve_forward(r, k, 3)));
    }
}

TEST_CASE("confinement patterns")
{
    auto k = field12();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2; ++trial) {
        for (std::size_t entry : {0u, 1u}) {
            auto m2 = confining(RhsSpec::Family::m2, rng);
            auto p2 = confinement_trace(m2, k, entry, 4, rng);
            CHECK(p2.confined);
            CHECK(p2.memory_check);
            CHECK(p2.pattern_length == 3);
            MESSAGE(p2.entry, " -> ", p2.exit);

            auto m4 = confining(RhsSpec::Family::m4, rng);
            auto p4 = confinement_trace(m4, k, entry, 4, rng);
            CHECK(p4.confined);
            CHECK(p4.pattern_length == 4);
        }
    }

    // Unconstrained mu, lambda.
    for (int trial = 0; trial < 3; ++trial) {
        auto z = ParameterSequence::random_table(rng, -6, 24);
        auto g = MappingSpec::factorised("g", z, {ParameterSequence::random_table(rng, -6, 24),
                                                  ParameterSequence::random_table(rng, -6, 24)});
        auto p = confinement_trace(g, k, 0, 4, rng);
        CHECK_FALSE(p.confined);
        CHECK_FALSE(p.memory_check);
    }
}

TEST_CASE("confined traces are stable across primes and samples")
{
    std::mt19937_64 rng(6);
    auto spec = confining(RhsSpec::Family::m2, rng);
    auto a = confinement_trace(spec, field12(), 0, 3, rng);
    auto b = confinement_trace(spec, PrimeField(kDefaultPrime), 0, 3, rng);
    auto c = confinement_trace(spec, field12(), 0, 3, rng);
    CHECK(a.confined);
    CHECK(a.pattern_length == b.pattern_length);
    CHECK(a.pattern_length == c.pattern_length);
    CHECK(a.valuations == b.valuations);
}
