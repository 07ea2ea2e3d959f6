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

#include "mulmap/catalogue.hpp"

#include <stdexcept>

#include "mulmap/confinement.hpp"

namespace mulmap {

ParameterSequence shift4_solution(Exact base, Exact offset, std::vector<Exact> rho2, std::vector<Exact> rho3)
{
    ParameterSequence::Structured s;
    s.base = std::move(base);
    s.offset = std::move(offset);
    s.rho2 = std::move(rho2);
    s.rho3 = std::move(rho3);
    return ParameterSequence::structured(std::move(s));
}

ParameterSequence shift5_solution(Exact base, Exact offset, Exact alternating, std::vector<Exact> rho2,
                                  std::vector<Exact> rho3)
{
    ParameterSequence::Structured s;
    s.base = std::move(base);
    s.offset = std::move(offset);
    s.alternating = std::move(alternating);
    s.rho2 = std::move(rho2);
    s.rho3 = std::move(rho3);
    return ParameterSequence::structured(std::move(s));
}

ParameterSequence random_sequence(std::mt19937_64& rng, long lo, long hi)
{
    return ParameterSequence::random_table(rng, lo, hi);
}

MappingSpec third_kind_family(const ParameterSequence& q, long g_power, long lo, long hi)
{
    using Fa = ParameterSequence::Factor;
    auto z = ParameterSequence::product({Fa{&q, 1}, Fa{&q, -1}}, Exact(1), lo + 1, hi - 1);
    auto g = ParameterSequence::product({Fa{&q, 2}, Fa{&q, -2}, Fa{&q, 0, -g_power}}, Exact(1), lo + 2, hi - 2);
    std::string id = g_power == 2 ? "third-kind" : "third-kind/g-power-" + std::to_string(g_power);
    return MappingSpec::ratio(id, std::move(z), RhsSpec::sequence(std::move(g)));
}

MappingSpec hky_family(const ParameterSequence& q, Exact z_start, long lo, long hi)
{
    std::vector<Exact> z{z_start};
    for (long n = lo + 2; n <= hi - 1; ++n) z.push_back(q.exact_at(n + 1) * q.exact_at(n - 1) / z.back());
    auto zs = ParameterSequence::table(lo + 1, std::move(z));
    return hky_family_free_z(q, zs, lo, hi);
}

MappingSpec hky_family_free_z(const ParameterSequence& q, const ParameterSequence& z, long lo, long hi)
{
    using Fa = ParameterSequence::Factor;
    auto g = ParameterSequence::product({Fa{&q, 2}, Fa{&q, -1}, Fa{&q, 1, -1}, Fa{&q, 0, -1}}, Exact(-1), lo + 1,
                                        hi - 2);
    return MappingSpec::ratio("hky", z, RhsSpec::sequence(std::move(g)));
}

MappingSpec gambier_family(const ParameterSequence& z)
{
    return MappingSpec::ratio("gambier", z, RhsSpec::monomial(Exact(1), {{1, 1}, {-1, 1}}));
}

MappingSpec quadratic_m2_family(const ParameterSequence& z)
{
    return MappingSpec::ratio("quadratic-m2", z, RhsSpec::monomial(Exact(1), {{1, -1}, {-1, -1}}));
}

MappingSpec quadratic_m4_family(const ParameterSequence& z)
{
    return MappingSpec::ratio("quadratic-m4", z, RhsSpec::monomial(Exact(1), {{1, -1}, {0, -2}, {-1, -1}}));
}

namespace {

ParameterSequence seeded_table(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return ParameterSequence::random_table(rng, kWindowLo, kWindowHi, 1 << 10);
}

ParameterSequence demo_shift4()
{
    return shift4_solution(Exact(Rational(3, 2)), Exact(Rational(5, 7)), {Exact(2), Exact(Rational(-1, 3))},
                           {Exact(Rational(4, 5)), Exact(3), Exact(Rational(-2, 9))});
}

ParameterSequence demo_shift5()
{
    return shift5_solution(Exact(Rational(3, 2)), Exact(Rational(5, 7)), Exact(Rational(6, 5)),
                           {Exact(2), Exact(Rational(-1, 3))}, {Exact(Rational(4, 5)), Exact(3), Exact(Rational(-2, 9))});
}

std::vector<int> linear_degrees()
{
    std::vector<int> d{0, 1};
    for (int n = 2; n <= 11; ++n) d.push_back(2 * (n - 1));
    return d;
}

std::vector<CatalogueEntry> build()
{
    const Exact z0(3);
    std::vector<CatalogueEntry> c;
    auto autonomous = [&](long N, long f, std::string relation, std::string expected, std::vector<int> degrees) {
        c.push_back({MappingSpec::autonomous(z0, N, Exact(f)).id, std::move(relation), std::move(expected),
                     std::move(degrees), std::nullopt, [=] { return MappingSpec::autonomous(z0, N, Exact(f)); }});
    };
    autonomous(0, 1, "ratio ansatz with g = 1", "linear", linear_degrees());
    autonomous(0, -1, "ratio ansatz with g = -1 (non-QRT, squared-ratio invariant)", "linear", linear_degrees());
    autonomous(2, 1, "ratio ansatz with g = z^2 (QRT-Gambier)", "bounded", {0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    autonomous(2, -1, "ratio ansatz with g = -z^2", "bounded", {0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    autonomous(-2, 1, "ratio ansatz with g = 1/z^2 (biquadratic invariant)", "quadratic",
               {0, 1, 2, 3, 6, 9, 12, 17, 22, 27, 34, 41, 48, 57});
    autonomous(-4, 1, "ratio ansatz with g = 1/z^4 (biquadratic invariant)", "quadratic",
               {0, 1, 1, 2, 3, 5, 6, 9, 11, 14, 17, 21, 24, 29, 33, 38});
    autonomous(4, 1, "ratio ansatz with g = z^4 (reduces to a linear equation)", "linear-equation", {});
    autonomous(4, -1, "ratio ansatz with g = -z^4", "exponential", {});
    autonomous(1, 1, "ratio ansatz with g = z (odd power)", "exponential", {});

    c.push_back({"third-kind", "z[n] = q[n+1] q[n-1], g[n] = q[n+2] q[n-2] / q[n]^2, q free", "linear",
                 linear_degrees(), std::nullopt, [] { return third_kind_family(seeded_table(101)); }});
    c.push_back({"hky", "z[n] z[n-1] = q[n+1] q[n-1], g[n] = -q[n+2] q[n-1] / (q[n+1] q[n]), q free", "linear",
                 linear_degrees(), std::nullopt,
                 [] { return hky_family(seeded_table(102), Exact(Rational(7, 3))); }});
    c.push_back({"gambier", "g[n] = z[n+1] z[n-1], z free", "bounded", {0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2},
                 std::nullopt, [] { return gambier_family(seeded_table(103)); }});
    c.push_back({"quadratic-m2", "g[n] = 1/(z[n+1] z[n-1]), " + formula(ZConstraint::shift4), "quadratic",
                 {0, 1, 2, 3, 6, 9, 12, 17, 22, 27, 34, 41, 48, 57}, std::nullopt,
                 [] { return quadratic_m2_family(demo_shift4()); }});
    c.push_back({"quadratic-m4", "g[n] = 1/(z[n+1] z[n]^2 z[n-1]), " + formula(ZConstraint::shift5), "quadratic",
                 {0, 1, 1, 2, 3, 5, 6, 9, 11, 14, 17, 21, 24, 29, 33, 38}, std::nullopt,
                 [] { return quadratic_m4_family(demo_shift5()); }});
    c.push_back({"factorised-m2",
                 "factorised, mu lambda = z[n-1] z[n+1] rho3(n)^(+-1) kappa^(+-1), " + formula(ZConstraint::shift4),
                 "quadratic", {0, 1, 2, 3, 6, 9, 12, 17, 22, 27, 34, 41, 48, 57}, parameter_count(RhsSpec::Family::m2), [] {
                     auto z = demo_shift4();
                     auto ml = mu_lambda_solution(z, RhsSpec::Family::m2, Exact(2),
                                                  {Exact(Rational(3, 5)), Exact(7), Exact(Rational(-1, 4))}, kWindowLo,
                                                  kWindowHi);
                     return factorised_family("factorised-m2", z, ml);
                 }});
    c.push_back({"factorised-m4",
                 "factorised, mu lambda = z[n-1] z[n] z[n+1] rho4(n)^(+-1) kappa^(+-1), " +
                     formula(ZConstraint::shift5),
                 "quadratic", {0, 1, 1, 2, 3, 5, 6, 9, 11, 14, 17, 21, 24, 29, 33, 38},
                 parameter_count(RhsSpec::Family::m4), [] {
                     auto z = demo_shift5();
                     auto ml = mu_lambda_solution(
                         z, RhsSpec::Family::m4, Exact(2),
                         {Exact(Rational(3, 5)), Exact(7), Exact(Rational(-1, 4)), Exact(Rational(9, 2))}, kWindowLo,
                         kWindowHi);
                     return factorised_family("factorised-m4", z, ml);
                 }});
    return c;
}

} // namespace

const std::vector<CatalogueEntry>& catalogue()
{
    static const std::vector<CatalogueEntry> entries = build();
    return entries;
}

const CatalogueEntry& catalogue_entry(const std::string& id)
{
    for (const auto& e : catalogue())
        if (e.id == id) return e;
    throw error(errc::out_of_range, "no catalogue entry '" + id + "'");
}

} // namespace mulmap
