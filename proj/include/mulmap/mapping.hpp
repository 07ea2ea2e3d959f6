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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mulmap/error.hpp"
#include "mulmap/exact.hpp"
#include "mulmap/polynomial.hpp"
#include "mulmap/rational_function.hpp"
#include "mulmap/sequence.hpp"

namespace mulmap {

// A mapping is a three-point relation between x_{n-1}, x_n, x_{n+1}. The
// ratio ansatz reads
//
//   ((X a - x)(Y b - x) - D) / ((X - a x)(Y - b x) - D/(ab)) = g_n(x)
//
// with X = x_{n+1}, Y = x_{n-1}, x = x_n, a = z_{n+1} z_n, b = z_{n-1} z_n and
// D = (a^2 - 1)(b^2 - 1). The factorised form replaces the right-hand side by
// a product over v_i = z_n mu^i_n in the ancillary variable xi, x = xi + 1/xi:
//
//   (X - xi/a - a/xi)/(X - a xi - 1/(a xi)) * (Y - xi/b - b/xi)/(Y - b xi - 1/(b xi))
//       = prod (xi - v_i) / prod (v_i xi - 1)
//
// Both are linear in X (and in Y), so each index n yields a homographic step.

enum class Form { ratio_ansatz, factorised_ancillary, explicit_step };

std::string to_string(Form f);

/// z_{n+shift}^exponent inside a right-hand side built from z.
struct ZFactor {
    long shift = 0;
    long exponent = 1;
};

struct RhsSpec {
    enum class Kind {
        z_monomial, // g_n = scale * prod z_{n+shift}^exponent
        sequence,   // g_n given directly
        two_factor, // autonomous two-factor reductions, kappa-parametrised
        symmetric   // eight-factor form through elementary symmetric functions
    };
    /// Two-factor shapes: with K = kappa + 1/kappa and z = z_n,
    ///   m2: (z x - z^4 K) / (z^3 x - K)      m4: (x - z^4 K) / (z^4 x - K)
    enum class Family { m2, m4 };

    Kind kind = Kind::z_monomial;
    Exact scale{1};
    std::vector<ZFactor> factors;
    ParameterSequence g;
    Family family = Family::m2;
    Exact kappa{1};
    std::vector<ParameterSequence> mu;

    /// f * z_n^N
    static RhsSpec power(Exact f, long N);
    static RhsSpec monomial(Exact scale, std::vector<ZFactor> factors);
    static RhsSpec sequence(ParameterSequence g);
    static RhsSpec two_factor(Family family, Exact kappa);
    static RhsSpec symmetric(std::vector<ParameterSequence> mu);

    std::string describe() const;
};

/// Autonomous explicit step: coefficient lists (lowest degree first) of
/// a, b, c, d as polynomials in x_n, for x_{n+1} = (a x_{n-1} + b)/(c x_{n-1} + d).
struct ExplicitCoefficients {
    std::array<std::vector<Rational>, 4> abcd;
};

struct MappingSpec {
    std::string id;
    Form form = Form::ratio_ansatz;
    ParameterSequence z;
    RhsSpec rhs;                               // ratio ansatz
    std::vector<ParameterSequence> ancillary;  // factorised: 2 or 8 sequences mu^i
    ExplicitCoefficients step;                 // explicit step
    std::optional<long> N;                     // labels of the autonomous family, if any
    std::optional<Exact> f;

    /// The autonomous ansatz with constant z and right-hand side f z^N.
    static MappingSpec autonomous(Exact z, long N, Exact f);
    static MappingSpec ratio(std::string id, ParameterSequence z, RhsSpec rhs);
    static MappingSpec factorised(std::string id, ParameterSequence z, std::vector<ParameterSequence> mu);
    static MappingSpec explicit_step(std::string id, ExplicitCoefficients c);

    /// Structural checks (one form populated, table sizes); throws on violation.
    void validate() const;
    /// True when no ingredient depends on n.
    bool is_autonomous() const;
    std::string describe() const;
};

/// x_{n+1} = (a x_{n-1} + b) / (c x_{n-1} + d), a..d polynomials in x_n.
template <class F>
struct HomographicStep {
    Polynomial<F> a, b, c, d;

    int degree() const { return std::max({a.degree(), b.degree(), c.degree(), d.degree(), 0}); }
    Polynomial<F> determinant() const { return a * d - b * c; }

    /// Next value from (x_n, x_{n-1}); throws singular_orbit at a pole.
    F operator()(const F& x, const F& y) const
    {
        const F den = c(x) * y + d(x);
        if (den == F()) throw error(errc::singular_orbit, "step denominator vanishes");
        return (a(x) * y + b(x)) / den;
    }
};

/// Orbit x_{first}, x_{first+1}, ...
template <class V>
struct Orbit {
    long first_index = 0;
    std::vector<V> x;

    long last_index() const { return first_index + static_cast<long>(x.size()) - 1; }
    const V& at(long n) const
    {
        if (n < first_index || n > last_index()) throw error(errc::out_of_range, "orbit index out of range", n);
        return x[static_cast<std::size_t>(n - first_index)];
    }
};

namespace detail {

template <class F>
Polynomial<F> xvar(const F& one)
{
    return Polynomial<F>::monomial(one, 1);
}

template <class F>
void strip_common_factor(HomographicStep<F>& s)
{
    auto g = gcd(gcd(s.a, s.b), gcd(s.c, s.d));
    if (g.degree() > 0) {
        s.a = s.a / g;
        s.b = s.b / g;
        s.c = s.c / g;
        s.d = s.d / g;
    }
}

/// Solves the ratio ansatz for X with right-hand side r1(x)/r2(x).
template <class F>
HomographicStep<F> ratio_step(const F& a, const F& b, const Polynomial<F>& r1, const Polynomial<F>& r2)
{
    const F one = one_like(a);
    const auto x = xvar(one);
    const auto x2 = x * x;
    const F d1 = (a * a - one) * (b * b - one);
    const F ab = a * b;
    HomographicStep<F> s;
    s.a = (x * b) * r2 - (x * a) * r1;
    s.b = x2 * (-one) * r2 + r2 * d1 + (x2 * ab) * r1 - r1 * (d1 / ab);
    s.c = r2 * ab - r1;
    s.d = (x * (-a)) * r2 + (x * b) * r1;
    return s;
}

/// Element u + v xi of F[x][xi]/(xi^2 - x xi + 1); xi^{-1} = x - xi.
template <class F>
struct Ancillary {
    Polynomial<F> u, v;

    friend Ancillary operator+(const Ancillary& p, const Ancillary& q) { return {p.u + q.u, p.v + q.v}; }
    friend Ancillary operator-(const Ancillary& p, const Ancillary& q) { return {p.u - q.u, p.v - q.v}; }
};

template <class F>
Ancillary<F> mul(const Ancillary<F>& p, const Ancillary<F>& q, const Polynomial<F>& x)
{
    const auto vv = p.v * q.v;
    return {p.u * q.u - vv, p.u * q.v + q.u * p.v + vv * x};
}

/// Solves the factorised relation for X. The coefficients live in the
/// ancillary algebra; since X itself is a function of x alone, the xi^0 and
/// xi^1 components each give the same homographic step.
template <class F>
HomographicStep<F> ancillary_step(const F& a, const F& b, const std::vector<F>& v)
{
    using A = Ancillary<F>;
    const F one = one_like(a);
    const auto x = xvar(one);
    const auto c = [](const F& k) { return Polynomial<F>::constant(k); };
    const A xi{Polynomial<F>(), c(one)};
    // w/xi + xi/w and w xi + 1/(w xi), written in the basis {1, xi}.
    auto l = [&](const F& w) { return A{x * w, c(w.inverse() - w)}; };
    auto m = [&](const F& w) { return A{x * w.inverse(), c(w - w.inverse())}; };
    A p{c(one), Polynomial<F>()}, ps = p;
    for (const F& vi : v) {
        p = mul(p, xi - A{c(vi), Polynomial<F>()}, x);
        ps = mul(ps, A{Polynomial<F>(), c(vi)} - A{c(one), Polynomial<F>()}, x);
    }
    const A l1 = l(a), m1 = m(a), l2 = l(b), m2 = m(b);
    const A alpha = mul(l1, ps, x) - mul(m1, p, x);
    const A beta = mul(mul(m1, m2, x), p, x) - mul(mul(l1, l2, x), ps, x);
    const A gamma = ps - p;
    const A delta = mul(m2, p, x) - mul(l2, ps, x);

    HomographicStep<F> s0{alpha.u, beta.u, gamma.u, delta.u};
    HomographicStep<F> s1{alpha.v, beta.v, gamma.v, delta.v};
    // Both components describe X; the cross products must agree.
    if (!(s0.a * s1.c == s1.a * s0.c && s0.a * s1.d + s0.b * s1.c == s1.a * s0.d + s1.b * s0.c &&
          s0.b * s1.d == s1.b * s0.d)) {
        throw std::logic_error("ancillary step components disagree");
    }
    HomographicStep<F> s = (s0.c.is_zero() && s0.d.is_zero()) ? s1 : s0;
    strip_common_factor(s);
    return s;
}

/// Numeric X for known xi (branch-tracked stepping).
template <class F>
F ancillary_step_at(const F& a, const F& b, const std::vector<F>& v, const F& xi, const F& y)
{
    const F one = one_like(a);
    if (xi == F()) throw error(errc::singular_orbit, "ancillary variable is zero");
    const F ixi = xi.inverse();
    const F l1 = xi / a + a * ixi, m1 = a * xi + ixi / a;
    const F l2 = xi / b + b * ixi, m2 = b * xi + ixi / b;
    F p = one, ps = one;
    for (const F& vi : v) {
        p *= xi - vi;
        ps *= vi * xi - one;
    }
    const F num = (l1 * ps - m1 * p) * y + (m1 * m2 * p - l1 * l2 * ps);
    const F den = (ps - p) * y + (m2 * p - l2 * ps);
    if (den == F()) throw error(errc::singular_orbit, "ancillary step denominator vanishes");
    return num / den;
}

} // namespace detail

/// Q_0..Q_8 (Q_0 = 1) of the given values: Q_k is the sum of all k-fold products.
template <class F>
std::vector<F> elementary_symmetric(const std::vector<F>& values)
{
    if (values.empty()) throw std::invalid_argument("elementary_symmetric needs at least one value");
    std::vector<F> q(values.size() + 1, zero_like(values[0]));
    q[0] = one_like(values[0]);
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) q[k] += q[k - 1] * values[i];
    return q;
}

/// Numerator and denominator (without the z prefactor) of the eight-factor
/// right-hand side as polynomials in x.
template <class F>
std::pair<Polynomial<F>, Polynomial<F>> symmetric_rhs(const std::vector<F>& q)
{
    if (q.size() != 9) throw std::invalid_argument("symmetric right-hand side needs Q_0..Q_8");
    const F one = q[0];
    const F three = int_like(one, 3), two = int_like(one, 2);
    const F tail = q[8] - q[6] + q[4] - q[2] + one;
    Polynomial<F> num({tail, q[7] - q[3] + two * q[1], -(q[8] - q[2] + three), -q[1], one});
    Polynomial<F> den({tail, two * q[7] - q[5] + q[1], -(three * q[8] - q[6] + one), -q[7], q[8]});
    return {num, den};
}

template <class K>
using ElementOf = typename K::Element;

/// Nonzero parameter at n; throws degenerate_z otherwise.
template <class K>
ElementOf<K> nonzero_at(const ParameterSequence& s, const K& k, long n, const char* what)
{
    auto v = s.at(k, n);
    if (v == ElementOf<K>()) throw error(errc::degenerate_z, std::string(what) + " vanishes", n);
    return v;
}

/// Right-hand side at n as r1(x)/r2(x).
template <class K>
std::pair<Polynomial<ElementOf<K>>, Polynomial<ElementOf<K>>> rhs_at(const MappingSpec& spec, const K& k, long n)
{
    using F = ElementOf<K>;
    using P = Polynomial<F>;
    const RhsSpec& r = spec.rhs;
    const F one = k.one();
    switch (r.kind) {
        case RhsSpec::Kind::z_monomial: {
            F g = to_field(k, r.scale);
            for (const auto& f : r.factors) g *= ipow(nonzero_at(spec.z, k, n + f.shift, "z"), f.exponent);
            return {P::constant(g), P::constant(one)};
        }
        case RhsSpec::Kind::sequence: return {P::constant(r.g.at(k, n)), P::constant(one)};
        case RhsSpec::Kind::two_factor: {
            const F z = nonzero_at(spec.z, k, n, "z");
            const F kap = to_field(k, r.kappa);
            const F big = kap + kap.inverse();
            const F z3 = z * z * z, z4 = z3 * z;
            if (r.family == RhsSpec::Family::m2) return {P({-(z4 * big), z}), P({-big, z3})};
            return {P({-(z4 * big), one}), P({-big, z4})};
        }
        case RhsSpec::Kind::symmetric: {
            const F z = nonzero_at(spec.z, k, n, "z");
            std::vector<F> v;
            for (const auto& mu : r.mu) v.push_back(z * mu.at(k, n));
            auto [num, den] = symmetric_rhs(elementary_symmetric(v));
            const F pre = nonzero_at(spec.z, k, n + 1, "z") * z * z * nonzero_at(spec.z, k, n - 1, "z");
            return {num * pre, den};
        }
    }
    throw std::logic_error("unknown right-hand side kind");
}

namespace detail {

template <class K>
HomographicStep<ElementOf<K>> solve_with(const MappingSpec& spec, const K& k, long n, bool backward)
{
    using F = ElementOf<K>;
    if (spec.form == Form::explicit_step) {
        auto poly = [&](const std::vector<Rational>& c) {
            std::vector<F> v;
            for (const auto& r : c) v.push_back(k.from_rational(r));
            return Polynomial<F>(std::move(v));
        };
        HomographicStep<F> s{poly(spec.step.abcd[0]), poly(spec.step.abcd[1]), poly(spec.step.abcd[2]),
                             poly(spec.step.abcd[3])};
        if (backward) s = HomographicStep<F>{s.d, -s.b, -s.c, s.a};
        if (s.determinant().is_zero()) throw error(errc::degenerate_step, "explicit step is degenerate", n);
        return s;
    }
    const F z = nonzero_at(spec.z, k, n, "z");
    F a = nonzero_at(spec.z, k, n + 1, "z") * z;
    F b = nonzero_at(spec.z, k, n - 1, "z") * z;
    if (backward) std::swap(a, b);
    HomographicStep<F> s;
    if (spec.form == Form::ratio_ansatz) {
        auto [r1, r2] = rhs_at(spec, k, n);
        s = ratio_step(a, b, r1, r2);
    } else {
        std::vector<F> v;
        for (const auto& mu : spec.ancillary) v.push_back(z * mu.at(k, n));
        s = ancillary_step(a, b, v);
    }
    strip_common_factor(s);
    if (s.determinant().is_zero()) throw error(errc::degenerate_step, "solved step has ad - bc = 0", n);
    return s;
}

} // namespace detail

/// Explicit forward step x_{n+1} = (a x_{n-1} + b)/(c x_{n-1} + d) at index n.
template <class K>
HomographicStep<ElementOf<K>> solve_forward(const MappingSpec& spec, const K& k, long n)
{
    return detail::solve_with(spec, k, n, false);
}

/// Backward step x_{n-1} = (a x_{n+1} + b)/(c x_{n+1} + d) at index n.
template <class K>
HomographicStep<ElementOf<K>> solve_backward(const MappingSpec& spec, const K& k, long n)
{
    return detail::solve_with(spec, k, n, true);
}

/// Left side minus right side of the defining relation, cleared of
/// denominators, at (X, x, Y). Zero exactly when the triple satisfies the
/// relation (explicit steps compare against the step itself).
template <class K>
ElementOf<K> relation_residual(const MappingSpec& spec, const K& k, long n, const ElementOf<K>& xn1,
                               const ElementOf<K>& xn, const ElementOf<K>& xm1)
{
    using F = ElementOf<K>;
    const F one = k.one();
    if (spec.form == Form::explicit_step) {
        auto s = solve_forward(spec, k, n);
        return xn1 * (s.c(xn) * xm1 + s.d(xn)) - (s.a(xn) * xm1 + s.b(xn));
    }
    const F z = nonzero_at(spec.z, k, n, "z");
    const F a = nonzero_at(spec.z, k, n + 1, "z") * z;
    const F b = nonzero_at(spec.z, k, n - 1, "z") * z;
    if (spec.form == Form::ratio_ansatz) {
        auto [r1, r2] = rhs_at(spec, k, n);
        const F d1 = (a * a - one) * (b * b - one);
        const F lhs_num = (xn1 * a - xn) * (xm1 * b - xn) - d1;
        const F lhs_den = (xn1 - a * xn) * (xm1 - b * xn) - d1 / (a * b);
        return lhs_num * r2(xn) - lhs_den * r1(xn);
    }
    // Factorised: the relation is a statement about both conjugate roots
    // xi, 1/xi, so test it through the solved step.
    auto s = solve_forward(spec, k, n);
    return xn1 * (s.c(xn) * xm1 + s.d(xn)) - (s.a(xn) * xm1 + s.b(xn));
}

/// Numeric orbit x_{n0}, ..., x_{n0+steps}.
template <class K>
Orbit<ElementOf<K>> iterate(const MappingSpec& spec, const K& k, const ElementOf<K>& x0, const ElementOf<K>& x1,
                            int steps, long n0 = 0)
{
    if (steps < 1) throw std::invalid_argument("iterate needs at least one step");
    Orbit<ElementOf<K>> o{n0, {x0, x1}};
    o.x.reserve(static_cast<std::size_t>(steps) + 1);
    for (long n = n0 + 1; n < n0 + steps; ++n) {
        const auto s = solve_forward(spec, k, n);
        try {
            o.x.push_back(s(o.x.back(), o.x[o.x.size() - 2]));
        } catch (const error&) {
            throw error(errc::singular_orbit, "orbit reaches a singularity", n + 1);
        }
    }
    return o;
}

/// x_{n+1}(t) from x_n = f(t), x_{n-1} = g(t), reduced.
template <class F>
RationalFunction<F> ratfun_compose_step(const RationalFunction<F>& f, const RationalFunction<F>& g,
                                        const HomographicStep<F>& step)
{
    // Homogenise every coefficient polynomial to degree m in (num f, den f);
    // the common factor den(f)^m cancels in the quotient.
    const int m = step.degree();
    const auto& p = f.num();
    const auto& q = f.den();
    std::vector<Polynomial<F>> pp{Polynomial<F>::constant(one_like(q.lead()))}, qq = pp;
    for (int i = 1; i <= m; ++i) {
        pp.push_back(pp.back() * p);
        qq.push_back(qq.back() * q);
    }
    auto hom = [&](const Polynomial<F>& c) {
        Polynomial<F> out;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c.coeff(i) == F()) continue;
            out += (pp[i] * qq[static_cast<std::size_t>(m) - i]) * c.coeff(i);
        }
        return out;
    };
    const auto ha = hom(step.a), hb = hom(step.b), hc = hom(step.c), hd = hom(step.d);
    auto num = ha * g.num() + hb * g.den();
    auto den = hc * g.num() + hd * g.den();
    if (den.is_zero()) throw error(errc::identically_singular, "step denominator vanishes identically on the orbit");
    return RationalFunction<F>(std::move(num), std::move(den));
}

/// Symbolic orbit with x_{n0} = x0 constant and x_{n0+1} = t.
template <class K>
Orbit<RationalFunction<ElementOf<K>>> iterate_symbolic(const MappingSpec& spec, const K& k, const ElementOf<K>& x0,
                                                       int steps, long n0 = 0)
{
    using R = RationalFunction<ElementOf<K>>;
    if (steps < 1) throw std::invalid_argument("iterate needs at least one step");
    Orbit<R> o{n0, {R::constant(x0), R::variable(k.one())}};
    for (long n = n0 + 1; n < n0 + steps; ++n) {
        const auto s = solve_forward(spec, k, n);
        try {
            o.x.push_back(ratfun_compose_step(o.x.back(), o.x[o.x.size() - 2], s));
        } catch (const error& e) {
            throw error(e.code(), e.message(), n + 1);
        }
    }
    return o;
}

/// x = xi + 1/xi.
template <class F>
F ancillary_to_x(const F& xi)
{
    if (xi == F()) throw error(errc::zero_division, "ancillary variable is zero");
    return xi + xi.inverse();
}

template <class F>
struct Branch {
    F xi;
    int branch = 0; // 0: (x + s)/2, 1: (x - s)/2 with s the field's chosen square root of x^2 - 4
};

/// A root xi of xi^2 - x xi + 1 = 0; the other root is 1/xi.
template <class K>
Branch<ElementOf<K>> x_to_ancillary(const K& k, const ElementOf<K>& x, int branch = 0)
{
    const auto four = k.from_int(4), two = k.from_int(2);
    auto s = k.sqrt(x * x - four);
    if (!s) throw error(errc::no_branch, "x^2 - 4 is not a square in this field");
    return {branch == 0 ? (x + *s) / two : (x - *s) / two, branch};
}

/// y_n = x_{n+1}/x_n over the orbit (one fewer term).
template <class F>
Orbit<F> substitute_y(const Orbit<F>& xs)
{
    Orbit<F> y{xs.first_index, {}};
    for (std::size_t i = 0; i + 1 < xs.x.size(); ++i) {
        if (xs.x[i] == F())
            throw error(errc::zero_division, "x vanishes", xs.first_index + static_cast<long>(i));
        y.x.push_back(xs.x[i + 1] / xs.x[i]);
    }
    return y;
}

/// Outcome of comparing the eight-factor form with the symmetric-function
/// right-hand side at one sample.
template <class F>
struct EquivalenceSample {
    F from_factors;   // x_{n+1} from the factorised relation
    F from_symmetric; // x_{n+1} from the ratio relation with the symmetric right-hand side
    bool equal() const { return from_factors == from_symmetric; }
};

/// Solves both forms for x_{n+1} at x_n = xi + 1/xi, x_{n-1} = y. `perturb`
/// adds a constant to one Q_k (for mismatch tests). Throws sample_pole_hit.
template <class K>
EquivalenceSample<ElementOf<K>> rhs_equivalence_sample(const MappingSpec& spec, const K& k, long n,
                                                       const ElementOf<K>& xi, const ElementOf<K>& y,
                                                       std::optional<std::pair<int, ElementOf<K>>> perturb = {})
{
    using F = ElementOf<K>;
    if (spec.form != Form::factorised_ancillary || spec.ancillary.size() != 8)
        throw std::invalid_argument("equivalence check needs a factorised spec with eight parameters");
    const F one = k.one();
    const F z = nonzero_at(spec.z, k, n, "z");
    const F zp = nonzero_at(spec.z, k, n + 1, "z"), zm = nonzero_at(spec.z, k, n - 1, "z");
    const F a = zp * z, b = zm * z;
    std::vector<F> v;
    for (const auto& mu : spec.ancillary) v.push_back(z * mu.at(k, n));
    if (xi == F()) throw error(errc::sample_pole_hit, "xi = 0", n);

    F lhs;
    try {
        lhs = detail::ancillary_step_at(a, b, v, xi, y);
    } catch (const error&) {
        throw error(errc::sample_pole_hit, "factorised side at a pole", n);
    }
    auto q = elementary_symmetric(v);
    if (perturb) q.at(static_cast<std::size_t>(perturb->first)) += perturb->second;
    auto [num, den] = symmetric_rhs(q);
    const F x = xi + xi.inverse();
    const F r2 = den(x);
    if (r2 == F()) throw error(errc::sample_pole_hit, "symmetric side at a pole", n);
    const F r1 = num(x) * zp * z * z * zm;
    const auto s = detail::ratio_step(a, b, Polynomial<F>::constant(r1), Polynomial<F>::constant(r2));
    const F d = s.c(x) * y + s.d(x);
    if (d == F()) throw error(errc::sample_pole_hit, "ratio side at a pole", n);
    (void)one;
    return {lhs, (s.a(x) * y + s.b(x)) / d};
}

/// True when the two forms agree at the sample.
template <class K>
bool rhs_equivalence_check(const MappingSpec& spec, const K& k, long n, const ElementOf<K>& xi,
                           const ElementOf<K>& y, std::optional<std::pair<int, ElementOf<K>>> perturb = {})
{
    return rhs_equivalence_sample(spec, k, n, xi, y, perturb).equal();
}

/// Steps in the ancillary coordinate: x_{n+1} from (xi_n, x_{n-1}).
template <class K>
ElementOf<K> ancillary_step(const MappingSpec& spec, const K& k, long n, const ElementOf<K>& xi,
                            const ElementOf<K>& y)
{
    using F = ElementOf<K>;
    if (spec.form != Form::factorised_ancillary) throw std::invalid_argument("ancillary step needs a factorised spec");
    const F z = nonzero_at(spec.z, k, n, "z");
    const F a = nonzero_at(spec.z, k, n + 1, "z") * z, b = nonzero_at(spec.z, k, n - 1, "z") * z;
    std::vector<F> v;
    for (const auto& mu : spec.ancillary) v.push_back(z * mu.at(k, n));
    return detail::ancillary_step_at(a, b, v, xi, y);
}

/// True when the two steps agree projectively (all 2x2 minors vanish).
template <class F>
bool same_step(const HomographicStep<F>& s, const HomographicStep<F>& t)
{
    const std::array<const Polynomial<F>*, 4> u{&s.a, &s.b, &s.c, &s.d}, w{&t.a, &t.b, &t.c, &t.d};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (!((*u[i]) * (*w[j]) == (*u[j]) * (*w[i]))) return false;
    return true;
}

/// Sign gauge: z_n -> s_n z_n (s periodic, taken from `signs`), materialised
/// over [lo, hi]. Right-hand sides built from z follow automatically; the
/// matching orbit transformation is x_n -> s_n x_n.
MappingSpec sign_gauge(const MappingSpec& spec, const std::vector<int>& signs, long lo, long hi);

/// Autonomous explicit form of a spec with rational parameters, solved at n = 0.
MappingSpec to_explicit(const MappingSpec& spec);

} // namespace mulmap
