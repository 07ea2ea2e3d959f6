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

#include <optional>
#include <string>
#include <vector>

#include "mulmap/mapping.hpp"
#include "mulmap/series.hpp"

namespace mulmap {

/// Linear recurrences on log z_n that make the two factorised families confine.
enum class ZConstraint {
    shift4, // z[n+4] z[n-1] = z[n+2] z[n+1]
    shift5  // z[n+5] z[n+4] z[n] z[n-1] = z[n+3] z[n+2]^2 z[n+1]
};

std::string to_string(ZConstraint c);
/// The relation as a readable formula.
std::string formula(ZConstraint c);
std::optional<ZConstraint> parse_constraint(const std::string& name);

/// The constraint each factorised family imposes on z.
inline ZConstraint constraint_for(RhsSpec::Family f)
{
    return f == RhsSpec::Family::m2 ? ZConstraint::shift4 : ZConstraint::shift5;
}

template <class F>
struct ConstraintReport {
    std::string id;
    std::vector<long> indices;
    std::vector<F> residuals; // lhs - rhs in the reporting field
    bool satisfied = true;    // decided by exact comparison of the two sides
};

/// Exact left and right sides of a constraint at n.
std::pair<Exact, Exact> constraint_sides(const ParameterSequence& z, ZConstraint c, long n);

/// Residuals over [lo, hi]; the sequence must be evaluable on [lo - 1, hi + 5].
template <class K>
ConstraintReport<ElementOf<K>> constraint_check_z(const K& k, const ParameterSequence& z, ZConstraint c, long lo,
                                                  long hi)
{
    ConstraintReport<ElementOf<K>> r;
    r.id = to_string(c);
    for (long n = lo; n <= hi; ++n) {
        auto [lhs, rhs] = constraint_sides(z, c, n);
        r.indices.push_back(n);
        r.residuals.push_back(to_field(k, lhs) - to_field(k, rhs));
        if (!(lhs == rhs)) r.satisfied = false;
    }
    return r;
}

/// Roots of the characteristic polynomial of shift5 with multiplicity, as
/// exact values (1, 1, -1, -1, j, j^2).
std::vector<Exact> characteristic_roots(ZConstraint c = ZConstraint::shift5);

/// Characteristic polynomial coefficients, lowest degree first.
std::vector<long> characteristic_polynomial(ZConstraint c);

/// z[n+a] products used by both families.
struct MuLambda {
    ParameterSequence mu;
    ParameterSequence lambda;
};

/// Confining ancillary parameters for a family:
///   m2: mu = z[n-1] z[n+1] rho(n) kappa,        lambda = z[n-1] z[n+1] / (rho(n) kappa), rho of period 3
///   m4: mu = z[n-1] z[n] z[n+1] rho(n) kappa,   lambda = z[n-1] z[n] z[n+1] / (rho(n) kappa), rho of period 4
/// An empty `periodic` means rho = 1. Throws constraint_violated if z breaks
/// the family's constraint on [lo, hi]; the product relation and the
/// confinement constraints are re-verified exactly before returning.
MuLambda mu_lambda_solution(const ParameterSequence& z, RhsSpec::Family family, Exact kappa,
                            std::vector<Exact> periodic, long lo, long hi);

/// The factorised spec built from z and a (mu, lambda) pair.
MappingSpec factorised_family(std::string id, const ParameterSequence& z, const MuLambda& ml);

/// Which parts of the general solution are switched on when counting.
struct ParameterFreedom {
    bool rho2 = true;        // period-2 part of log z
    bool rho3 = true;        // period-3 part of log z
    bool alternating = true; // the n (-1)^n term (m4 only)
    bool ancillary = true;   // periodic part of log(mu/lambda)
};

/// Effective parameter count of the confining solution: the secular slope,
/// the surviving periodic parts of z, the ancillary periodic part and kappa.
/// The constant term of log z is absorbed by the choice of origin of n.
int parameter_count(RhsSpec::Family family, ParameterFreedom freedom = {});

struct SingularityPattern {
    std::string entry;
    std::string exit;
    long entry_index = 0;
    long exit_index = 0;     // last iterate pinned to a c-independent value
    int pattern_length = 0;  // exit_index - entry_index
    bool confined = false;
    bool memory_check = false;
    /// Leading exponent of each traced iterate (negative = pole), from entry on.
    std::vector<int> valuations;
};

struct TraceOptions {
    int truncation = kDefaultTruncation;
    int horizon = 8;
    int max_truncation = 96;
};

namespace detail {

/// Forward iteration of the explicit step on series data; the step's
/// coefficients are polynomials in x_n evaluated on the series x_n.
template <class K>
std::vector<TruncatedSeries<ElementOf<K>>> trace_series(const MappingSpec& spec, const K& k, long n0,
                                                        const TruncatedSeries<ElementOf<K>>& before,
                                                        const TruncatedSeries<ElementOf<K>>& at, int steps)
{
    using S = TruncatedSeries<ElementOf<K>>;
    std::vector<S> xs{before, at};
    for (int i = 0; i < steps; ++i) {
        const long n = n0 + i;
        const auto s = solve_forward(spec, k, n);
        const S& xn = xs[xs.size() - 1];
        const S& xm = xs[xs.size() - 2];
        xs.push_back((s.a(xn) * xm + s.b(xn)) / (s.c(xn) * xm + s.d(xn)));
    }
    return xs;
}

} // namespace detail

/// Follows the singularity entered through xi_{n0} = z_{n0} v_{n0}, where v is
/// ancillary sequence `entry_factor` of a factorised spec. x_{n0-1} is a
/// generic c and x_{n0} = z v + 1/(z v) + eps. Iterates whose eps^0 value does
/// not depend on c are singular; the pattern exits at the last of them and is
/// confined when the next iterate depends on c again within the horizon. The
/// c dependence is probed with two samples.
template <class K, class Rng>
SingularityPattern confinement_trace(const MappingSpec& spec, const K& k, std::size_t entry_factor, long n0,
                                     Rng& rng, TraceOptions opt = {})
{
    using F = ElementOf<K>;
    using S = TruncatedSeries<F>;
    if (spec.form != Form::factorised_ancillary || entry_factor >= spec.ancillary.size()) {
        throw std::invalid_argument("confinement_trace needs a factorised spec and a valid entry factor");
    }
    const F v = nonzero_at(spec.z, k, n0, "z") * spec.ancillary[entry_factor].at(k, n0);
    const F xi_entry = v;
    if (xi_entry * xi_entry == k.one()) {
        throw error(errc::no_singularity_entered, "entry value z v = +-1 is a branch point", n0);
    }
    const F x_entry = xi_entry + xi_entry.inverse();
    const F c1 = k.random_nonzero(rng), c2 = k.random_nonzero(rng);

    for (int trunc = opt.truncation;; trunc *= 2) {
        try {
            const S eps = S::monomial(k.one(), 1, trunc);
            const S at = eps + x_entry;
            const auto o1 = detail::trace_series(spec, k, n0, S::constant(c1, trunc), at, opt.horizon);
            const auto o2 = detail::trace_series(spec, k, n0, S::constant(c2, trunc), at, opt.horizon);

            // o[i] is x_{n0 - 1 + i}
            auto pinned = [&](std::size_t i) {
                const S& a = o1[i];
                const S& b = o2[i];
                if (a.is_zero() && b.is_zero()) return true;
                if (a.valuation() < 0 || b.valuation() < 0) return a.valuation() == b.valuation() &&
                                                                   a.coefficient(a.valuation()) ==
                                                                       b.coefficient(b.valuation());
                return a.coefficient(0) == b.coefficient(0);
            };
            if (!pinned(2)) {
                throw error(errc::no_singularity_entered, "the next iterate still depends on x_{n-1}", n0);
            }

            SingularityPattern p;
            p.entry_index = n0;
            p.entry = "xi[n] = z[n] v" + std::to_string(entry_factor) + "[n] at n = " + std::to_string(n0);
            for (std::size_t i = 1; i < o1.size(); ++i) p.valuations.push_back(o1[i].is_zero() ? trunc : o1[i].valuation());
            std::size_t last = 1;
            while (last + 1 < o1.size() && pinned(last + 1)) ++last;
            p.exit_index = n0 - 1 + static_cast<long>(last);
            p.pattern_length = static_cast<int>(p.exit_index - n0);
            p.memory_check = last + 1 < o1.size();
            p.confined = p.memory_check;
            if (p.confined) {
                std::string which = "none of the ancillary values";
                const F x_exit = o1[last].coefficient(0);
                for (std::size_t f = 0; f < spec.ancillary.size(); ++f) {
                    const F w = nonzero_at(spec.z, k, p.exit_index, "z") * spec.ancillary[f].at(k, p.exit_index);
                    if (o1[last].valuation() >= 0 && w + w.inverse() == x_exit) {
                        which = "z[n] v" + std::to_string(f) + "[n] xi[n] = 1";
                    }
                }
                p.exit = which + " at n = " + std::to_string(p.exit_index);
            } else {
                p.exit = "not reached within " + std::to_string(opt.horizon) + " steps";
            }
            return p;
        } catch (const error& e) {
            if (e.code() != errc::truncation_exhausted && e.code() != errc::zero_series) throw;
            if (trunc * 2 > opt.max_truncation) {
                throw error(errc::truncation_exhausted,
                            "trace needs more than " + std::to_string(opt.max_truncation) + " series terms", n0);
            }
        }
    }
}

} // namespace mulmap
