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

#include "mulmap/invariants.hpp"

using namespace mulmap;
using testing_support::field12;
using testing_support::random_exact;

namespace {

const Exact kZ(Rational(5, 3));

MappingSpec ansatz(long N, long f) { return MappingSpec::autonomous(kZ, N, Exact(f)); }

bool same_grids(const InvariantCandidate<ModP>& a, const InvariantCandidate<ModP>& b)
{
    return a.num == b.num && a.den == b.den;
}

template <class K>
void check_conserved(const K& k, long N, long f, KnownInvariant which, bool expected)
{
    std::mt19937_64 rng(static_cast<std::uint64_t>(N * 31 + f));
    auto r = check_invariant(ansatz(N, f), k, known_invariant(which, k, kZ), 100, rng);
    CHECK(r.tested == 100);
    CHECK(r.valid);
    CHECK(r.conserved == expected);
}

} // namespace

TEST_CASE("closed-form invariants are conserved")
{
    for (const PrimeField& k : {PrimeField(kDefaultPrime), field12()}) {
        check_conserved(k, -2, 1, KnownInvariant::biquadratic_m2, true);
        check_conserved(k, -4, 1, KnownInvariant::biquadratic_m4, true);
        check_conserved(k, 0, -1, KnownInvariant::squared_ratio, true);
        // Cross-applied invariants fail.
        check_conserved(k, -4, 1, KnownInvariant::biquadratic_m2, false);
        check_conserved(k, -2, 1, KnownInvariant::biquadratic_m4, false);
        check_conserved(k, 0, 1, KnownInvariant::squared_ratio, false);
    }
    // Over the rationals too, on a short run.
    RationalField q;
    std::mt19937_64 rng(1);
    auto spec = ansatz(-2, 1);
    auto K = known_invariant(KnownInvariant::biquadratic_m2, q, kZ);
    Rational x0(2, 7), x1(-3, 5);
    Rational prev = *evaluate(K, x1, x0);
    for (long n = 1; n < 6; ++n) {
        Rational x2 = solve_forward(spec, q, n)(x1, x0);
        Rational now = *evaluate(K, x2, x1);
        CHECK(now == prev);
        x0 = x1;
        x1 = x2;
    }
}

TEST_CASE("check_invariant preconditions")
{
    std::mt19937_64 rng(2);
    PrimeField k;
    auto K = known_invariant(KnownInvariant::biquadratic_m2, k, kZ);
    CHECK_THROWS_AS(check_invariant(ansatz(-2, 1), k, K, 10, rng), std::invalid_argument);
    auto nonauto = MappingSpec::ratio("t", ParameterSequence::geometric(Exact(2), Exact(3)), RhsSpec::power(Exact(1), -2));
    CHECK_THROWS_AS(check_invariant(nonauto, k, K, 20, rng), std::invalid_argument);

    // A K whose denominator vanishes everywhere is all poles.
    auto dead = K;
    dead.den.setConstant(k.zero());
    try {
        check_invariant(ansatz(-2, 1), k, dead, 20, rng);
        FAIL("expected AllSamplesSingular");
    } catch (const error& e) {
        CHECK(e.code() == errc::all_samples_singular);
    }
}

TEST_CASE("normalise_candidate")
{
    PrimeField k;
    auto K = known_invariant(KnownInvariant::biquadratic_m4, k, kZ);
    auto n1 = normalise_candidate(K);
    auto scaled = K;
    scaled.num *= k.from_int(3);
    scaled.den *= k.from_int(3);
    auto n2 = normalise_candidate(scaled);
    CHECK(same_grids(n1, n2));
    auto n3 = normalise_candidate(n1);
    CHECK(same_grids(n3, n1));

    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        InvariantCandidate<ModP> r{2, Matrix<ModP>(3, 3), Matrix<ModP>(3, 3), false, 1};
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index j = 0; j < 3; ++j) {
                r.num(i, j) = (t % 2 && i == 0) ? k.zero() : k.random(rng);
                r.den(i, j) = k.random(rng);
            }
        auto once = normalise_candidate(r);
        auto twice = normalise_candidate(once);
        CHECK(same_grids(once, twice));
    }
    InvariantCandidate<ModP> zero{1, Matrix<ModP>::Constant(2, 2, k.zero()), Matrix<ModP>::Constant(2, 2, k.zero())};
    CHECK_THROWS_AS(normalise_candidate(zero), std::invalid_argument);
}

TEST_CASE("invariant search")
{
    PrimeField k;
    std::mt19937_64 rng(4);

    auto qrt = search_invariant(ansatz(-2, 1), k, 2, true, rng);
    CHECK(qrt.pencil.size() == 2);
    REQUIRE(qrt.basis.size() == 1);
    CHECK(same_pencil(qrt.basis[0], known_invariant(KnownInvariant::biquadratic_m2, k, kZ)));
    CHECK(is_symmetric(qrt.basis[0].num));
    std::mt19937_64 fresh(99);
    CHECK(check_invariant(ansatz(-2, 1), k, qrt.basis[0], 50, fresh));

    // Without the symmetry restriction the same pencil comes back.
    auto full = search_invariant(ansatz(-2, 1), k, 2, false, rng);
    REQUIRE(full.basis.size() == 1);
    CHECK(same_pencil(full.basis[0], qrt.basis[0]));

    auto m4 = search_invariant(ansatz(-4, 1), k, 2, true, rng);
    REQUIRE(m4.basis.size() == 1);
    CHECK(same_pencil(m4.basis[0], known_invariant(KnownInvariant::biquadratic_m4, k, kZ)));

    // Not biquadratic.
    auto none = search_invariant(ansatz(0, -1), k, 2, true, rng);
    CHECK(none.basis.empty());
    CHECK(search_invariant(ansatz(0, -1), k, 2, false, rng).basis.empty());
    // Non-integrable.
    CHECK(search_invariant(ansatz(1, 1), k, 2, false, rng).basis.empty());

    auto hky = search_invariant(ansatz(0, -1), k, 4, true, rng);
    REQUIRE(hky.basis.size() == 1);
    const auto sq = known_invariant(KnownInvariant::squared_ratio, k, kZ);
    CHECK(pencil_contains(hky, sq));
    CHECK_FALSE(pencil_contains(hky, known_invariant(KnownInvariant::biquadratic_m2, k, kZ)));
    REQUIRE(hky.squared.has_value());
    CHECK(hky.squared->power == 2);
    CHECK(same_pencil(*hky.squared, sq));
    // The detected A and B match the closed form up to separate constants.
    using detail::flatten;
    auto prop = [](const Matrix<ModP>& x, const Matrix<ModP>& y) {
        return detail::span_rank<ModP>({flatten(x), flatten(y)}) == 1;
    };
    const auto& d = *hky.squared;
    CHECK(((prop(d.num, sq.num) && prop(d.den, sq.den)) || (prop(d.num, sq.den) && prop(d.den, sq.num))));
}
