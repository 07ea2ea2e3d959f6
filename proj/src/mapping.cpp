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

#include "mulmap/mapping.hpp"

#include <sstream>
#include <stdexcept>

namespace mulmap {

std::string to_string(Form f)
{
    switch (f) {
        case Form::ratio_ansatz: return "ratio";
        case Form::factorised_ancillary: return "factorised";
        case Form::explicit_step: return "explicit";
    }
    return "?";
}

RhsSpec RhsSpec::power(Exact f, long N)
{
    RhsSpec r;
    r.kind = Kind::z_monomial;
    r.scale = std::move(f);
    if (N != 0) r.factors.push_back({0, N});
    return r;
}

RhsSpec RhsSpec::monomial(Exact scale, std::vector<ZFactor> factors)
{
    RhsSpec r;
    r.kind = Kind::z_monomial;
    r.scale = std::move(scale);
    r.factors = std::move(factors);
    return r;
}

RhsSpec RhsSpec::sequence(ParameterSequence g)
{
    RhsSpec r;
    r.kind = Kind::sequence;
    r.g = std::move(g);
    return r;
}

RhsSpec RhsSpec::two_factor(Family family, Exact kappa)
{
    if (kappa.is_zero()) throw std::invalid_argument("kappa must be nonzero");
    RhsSpec r;
    r.kind = Kind::two_factor;
    r.family = family;
    r.kappa = std::move(kappa);
    return r;
}

RhsSpec RhsSpec::symmetric(std::vector<ParameterSequence> mu)
{
    if (mu.size() != 8) throw std::invalid_argument("symmetric right-hand side needs eight parameters");
    RhsSpec r;
    r.kind = Kind::symmetric;
    r.mu = std::move(mu);
    return r;
}

std::string RhsSpec::describe() const
{
    std::ostringstream os;
    switch (kind) {
        case Kind::z_monomial:
            os << scale;
            for (const auto& f : factors) {
                os << "*z[n";
                if (f.shift > 0) os << "+" << f.shift;
                if (f.shift < 0) os << f.shift;
                os << "]";
                if (f.exponent != 1) os << "^" << f.exponent;
            }
            break;
        case Kind::sequence: os << "g=" << g.describe(); break;
        case Kind::two_factor:
            os << (family == Family::m2 ? "(z x - z^4 K)/(z^3 x - K)" : "(x - z^4 K)/(z^4 x - K)") << ", K = kappa + 1/kappa, kappa="
               << kappa;
            break;
        case Kind::symmetric: os << "eight-factor symmetric"; break;
    }
    return os.str();
}

MappingSpec MappingSpec::autonomous(Exact z, long N, Exact f)
{
    MappingSpec s;
    std::ostringstream id;
    id << "N=" << N << ",f=" << f;
    s.id = id.str();
    s.form = Form::ratio_ansatz;
    s.z = ParameterSequence::constant(std::move(z));
    s.rhs = RhsSpec::power(f, N);
    s.N = N;
    s.f = std::move(f);
    return s;
}

MappingSpec MappingSpec::ratio(std::string id, ParameterSequence z, RhsSpec rhs)
{
    MappingSpec s;
    s.id = std::move(id);
    s.form = Form::ratio_ansatz;
    s.z = std::move(z);
    s.rhs = std::move(rhs);
    s.validate();
    return s;
}

MappingSpec MappingSpec::factorised(std::string id, ParameterSequence z, std::vector<ParameterSequence> mu)
{
    MappingSpec s;
    s.id = std::move(id);
    s.form = Form::factorised_ancillary;
    s.z = std::move(z);
    s.ancillary = std::move(mu);
    s.validate();
    return s;
}

MappingSpec MappingSpec::explicit_step(std::string id, ExplicitCoefficients c)
{
    MappingSpec s;
    s.id = std::move(id);
    s.form = Form::explicit_step;
    s.step = std::move(c);
    s.validate();
    return s;
}

void MappingSpec::validate() const
{
    switch (form) {
        case Form::ratio_ansatz:
            if (!ancillary.empty()) throw std::invalid_argument(id + ": ratio form carries ancillary parameters");
            if (rhs.kind == RhsSpec::Kind::symmetric && rhs.mu.size() != 8)
                throw std::invalid_argument(id + ": symmetric right-hand side needs eight parameters");
            break;
        case Form::factorised_ancillary:
            if (ancillary.empty()) throw std::invalid_argument(id + ": factorised form needs ancillary parameters");
            break;
        case Form::explicit_step: {
            bool any_den = !step.abcd[2].empty() || !step.abcd[3].empty();
            if (!any_den) throw std::invalid_argument(id + ": explicit step has a zero denominator");
            if (!ancillary.empty()) throw std::invalid_argument(id + ": explicit step carries ancillary parameters");
            break;
        }
    }
}

bool MappingSpec::is_autonomous() const
{
    if (form == Form::explicit_step) return true;
    if (!z.is_constant()) return false;
    for (const auto& m : ancillary)
        if (!m.is_constant()) return false;
    if (form == Form::ratio_ansatz) {
        if (rhs.kind == RhsSpec::Kind::sequence && !rhs.g.is_constant()) return false;
        for (const auto& m : rhs.mu)
            if (!m.is_constant()) return false;
    }
    return true;
}

std::string MappingSpec::describe() const
{
    std::ostringstream os;
    os << id << " [" << to_string(form) << "]";
    if (form != Form::explicit_step) os << " z: " << z.describe();
    if (form == Form::ratio_ansatz) os << "; g: " << rhs.describe();
    if (form == Form::factorised_ancillary) os << "; " << ancillary.size() << " ancillary parameters";
    return os.str();
}

MappingSpec sign_gauge(const MappingSpec& spec, const std::vector<int>& signs, long lo, long hi)
{
    if (signs.empty()) throw std::invalid_argument("sign gauge needs at least one sign");
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
    if (spec.form == Form::explicit_step) throw std::invalid_argument("sign gauge acts on z, absent from explicit steps");
    MappingSpec out = spec;
    out.id = spec.id + "/gauge";
    out.z = spec.z.with_signs(signs, lo, hi);
    return out;
}

MappingSpec to_explicit(const MappingSpec& spec)
{
    if (!spec.is_autonomous()) throw std::invalid_argument(spec.id + ": explicit form needs an autonomous spec");
    RationalField q;
    auto s = solve_forward(spec, q, 0);
    ExplicitCoefficients c;
    const Polynomial<Rational>* parts[4] = {&s.a, &s.b, &s.c, &s.d};
    for (int i = 0; i < 4; ++i) c.abcd[i].assign(parts[i]->coefficients().begin(), parts[i]->coefficients().end());
    auto out = MappingSpec::explicit_step(spec.id + "/explicit", std::move(c));
    out.N = spec.N;
    out.f = spec.f;
    return out;
}

} // namespace mulmap
