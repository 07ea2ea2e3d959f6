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

#include "mulmap/confinement.hpp"

namespace mulmap {

std::string to_string(ZConstraint c)
{
    return c == ZConstraint::shift4 ? "shift4" : "shift5";
}

std::string formula(ZConstraint c)
{
    if (c == ZConstraint::shift4) return "z[n+4] z[n-1] = z[n+2] z[n+1]";
    return "z[n+5] z[n+4] z[n] z[n-1] = z[n+3] z[n+2]^2 z[n+1]";
}

std::optional<ZConstraint> parse_constraint(const std::string& name)
{
    if (name == "shift4") return ZConstraint::shift4;
    if (name == "shift5") return ZConstraint::shift5;
    return std::nullopt;
}

std::pair<Exact, Exact> constraint_sides(const ParameterSequence& z, ZConstraint c, long n)
{
    auto at = [&](long m) { return z.exact_at(m); };
    if (c == ZConstraint::shift4) return {at(n + 4) * at(n - 1), at(n + 2) * at(n + 1)};
    return {at(n + 5) * at(n + 4) * at(n) * at(n - 1), at(n + 3) * at(n + 2).pow(2) * at(n + 1)};
}

std::vector<long> characteristic_polynomial(ZConstraint c)
{
    // log z_n = k^n turns the relation into a polynomial in k.
    if (c == ZConstraint::shift4) return {1, 0, -1, -1, 0, 1};
    return {1, 1, -1, -2, -1, 1, 1};
}

std::vector<Exact> characteristic_roots(ZConstraint c)
{
    if (c == ZConstraint::shift4) {
        // (k - 1)^2 (k + 1) (k^2 + k + 1)
        return {Exact(1), Exact(1), Exact(-1), Exact::j(), Exact::j().pow(2)};
    }
    return {Exact(1), Exact(1), Exact(-1), Exact(-1), Exact::j(), Exact::j().pow(2)};
}

namespace {

ParameterSequence shifted_product(const ParameterSequence& z, std::vector<long> shifts, const std::vector<Exact>& rho,
                                  Exact scale, long sign, long lo, long hi)
{
    std::vector<Exact> v;
    for (long n = lo; n <= hi; ++n) {
        Exact e = scale;
        for (long s : shifts) e = e * z.exact_at(n + s);
        if (!rho.empty()) {
            const long m = static_cast<long>(rho.size());
            e = e * rho[static_cast<std::size_t>(((n % m) + m) % m)].pow(sign);
        }
        v.push_back(e);
    }
    return ParameterSequence::table(lo, std::move(v));
}

} // namespace

MuLambda mu_lambda_solution(const ParameterSequence& z, RhsSpec::Family family, Exact kappa,
                            std::vector<Exact> periodic, long lo, long hi)
{
    const bool m2 = family == RhsSpec::Family::m2;
    const std::size_t period = m2 ? 3 : 4;
    if (!periodic.empty() && periodic.size() != period) {
        throw std::invalid_argument("periodic ancillary part needs " + std::to_string(period) + " values");
    }
    if (kappa.is_zero()) throw std::invalid_argument("kappa must be nonzero");
    const ZConstraint c = constraint_for(family);
    const long span = m2 ? 4 : 5;
    if (hi - lo < span + 2) throw std::invalid_argument("index window too small for the constraint");
    for (long n = lo + 1; n + span <= hi; ++n) {
        auto [lhs, rhs] = constraint_sides(z, c, n);
        if (!(lhs == rhs)) throw error(errc::constraint_violated, "z breaks the " + to_string(c) + " constraint " + formula(c), n);
    }

    std::vector<long> shifts = m2 ? std::vector<long>{-1, 1} : std::vector<long>{-1, 0, 1};
    MuLambda ml{shifted_product(z, shifts, periodic, kappa, 1, lo + 1, hi - 1),
                shifted_product(z, shifts, periodic, kappa.inverse(), -1, lo + 1, hi - 1)};

    auto zz = [&](long m) { return z.exact_at(m).pow(2); };
    auto fail = [](const std::string& what, long n) { throw error(errc::constraint_violated, what, n); };
    const long d = m2 ? 3 : 4;
    for (long n = lo + 1; n + d <= hi - 1; ++n) {
        const Exact mu = ml.mu.exact_at(n), la = ml.lambda.exact_at(n);
        if (m2) {
            const Exact prod = mu * la * ml.mu.exact_at(n + 1) * ml.lambda.exact_at(n + 1);
            if (!(prod == zz(n + 2) * zz(n + 1) * zz(n) * zz(n - 1))) fail("mu lambda product relation", n);
            const Exact target = zz(n + 2) * zz(n + 1);
            if (!(mu * ml.lambda.exact_at(n + 3) == target) || !(la * ml.mu.exact_at(n + 3) == target)) {
                fail("confinement constraint mu[n] lambda[n+3] = lambda[n] mu[n+3] = z[n+2]^2 z[n+1]^2", n);
            }
        } else {
            if (!(mu * la == zz(n + 1) * zz(n) * zz(n - 1))) fail("mu lambda product relation", n);
            const Exact target = zz(n + 1) * zz(n + 2) * zz(n + 3);
            if (!(mu * ml.lambda.exact_at(n + 4) == target) || !(la * ml.mu.exact_at(n + 4) == target)) {
                fail("confinement constraint mu[n] lambda[n+4] = lambda[n] mu[n+4] = z[n+1]^2 z[n+2]^2 z[n+3]^2", n);
            }
        }
    }
    return ml;
}

MappingSpec factorised_family(std::string id, const ParameterSequence& z, const MuLambda& ml)
{
    return MappingSpec::factorised(std::move(id), z, {ml.mu, ml.lambda});
}

int parameter_count(RhsSpec::Family family, ParameterFreedom freedom)
{
    int count = 1; // secular slope
    count += 1;    // kappa
    if (freedom.rho3) count += 2;
    if (family == RhsSpec::Family::m2) {
        if (freedom.rho2) count += 1;
        if (freedom.ancillary) count += 2;
    } else {
        // rho2 cancels from every product of consecutive z that enters; the
        // n (-1)^n term survives as an effective period-2 part.
        if (freedom.alternating) count += 1;
        if (freedom.ancillary) count += 3;
    }
    return count;
}

} // namespace mulmap
