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

#include <string>
#include <vector>

#include "mulmap/mapping.hpp"

namespace mulmap {

template <class F>
struct ResidualTable {
    std::vector<long> indices;
    std::vector<F> residuals;

    bool all_zero() const
    {
        for (const auto& r : residuals)
            if (!(r == zero_like(r))) return false;
        return true;
    }
    void add(long n, F r)
    {
        indices.push_back(n);
        residuals.push_back(std::move(r));
    }
};

namespace detail {

template <class F>
F checked_inverse(const F& d, const char* what, long n)
{
    if (d == zero_like(d)) throw error(errc::denominator_zero, what, n);
    return d.inverse();
}

/// q_{n+i} reduced into the field, nonzero.
template <class K>
struct QWindow {
    const K& k;
    const ParameterSequence& q;
    long n;
    ElementOf<K> operator()(long i) const
    {
        auto v = q.at(k, n + i);
        if (v == k.zero()) throw error(errc::denominator_zero, "q vanishes", n + i);
        return v;
    }
};

/// Parts of the linear pencil at n: the residual is
/// (k + c1) t1 - (k + cm) x_n + (k + c3) t3.
template <class F>
struct PencilTerms {
    F t1, t3, c1, c3, cm;
};

template <class K>
PencilTerms<ElementOf<K>> pencil_terms(const K& k, const ParameterSequence& q, long n, const ElementOf<K>& xm,
                                       const ElementOf<K>& x, const ElementOf<K>& xp)
{
    using F = ElementOf<K>;
    const QWindow<K> Q{k, q, n};
    const F one = k.one();
    const F up = Q(-1) * Q(0) * Q(1) * Q(2);
    const F down = Q(-2) * Q(-1) * Q(0) * Q(1);
    const F a = Q(0) * Q(-1), b = Q(0) * Q(1);
    PencilTerms<F> t;
    t.t1 = (xp * up - x) * checked_inverse(up * up - one, "q[n-1]^2 q[n]^2 q[n+1]^2 q[n+2]^2 - 1", n);
    t.t3 = (xm * down - x) * checked_inverse(down * down - one, "q[n-2]^2 q[n-1]^2 q[n]^2 q[n+1]^2 - 1", n);
    t.c1 = (a - a.inverse()) * (a - a.inverse());
    t.c3 = (b - b.inverse()) * (b - b.inverse());
    t.cm = -k.from_int(2) + (a * a).inverse() + (b * b).inverse();
    return t;
}

} // namespace detail

/// The third-kind linear pencil: parameter k and the free function q.
template <class F>
struct PencilInstance {
    F k;
    ParameterSequence q;
};

/// Pencil value k at index n from an orbit triple; the pencil is affine in k.
template <class K>
ElementOf<K> thirdkind_k(const K& k, const ParameterSequence& q, const ElementOf<K>& xm, const ElementOf<K>& x,
                         const ElementOf<K>& xp, long n)
{
    detail::PencilTerms<ElementOf<K>> t;
    try {
        t = detail::pencil_terms(k, q, n, xm, x, xp);
    } catch (const error& e) {
        if (e.code() != errc::denominator_zero) throw;
        throw error(errc::k_undefined, "pencil is degenerate: " + e.message(), n);
    }
    const auto coef = t.t1 + t.t3 - x;
    if (coef == k.zero()) throw error(errc::k_undefined, "coefficient of k vanishes", n);
    return -(t.c1 * t.t1 + t.c3 * t.t3 - t.cm * x) / coef;
}

/// Left side of the pencil at n for an orbit with x_{n-1}, x_n, x_{n+1} known.
template <class K>
ElementOf<K> pencil_residual(const K& k, const PencilInstance<ElementOf<K>>& p, const Orbit<ElementOf<K>>& o, long n)
{
    const auto t = detail::pencil_terms(k, p.q, n, o.at(n - 1), o.at(n), o.at(n + 1));
    return (p.k + t.c1) * t.t1 - (p.k + t.cm) * o.at(n) + (p.k + t.c3) * t.t3;
}

/// lambda = (z^2 + 1/z^2)/2.
template <class K>
ElementOf<K> hky_lambda(const K& k, const Exact& z)
{
    const auto z2 = to_field(k, z) * to_field(k, z);
    return (z2 + z2.inverse()) / k.from_int(2);
}

/// C_n = (x_{n+1} - lambda x_n)/(x_{n-1} - lambda x_n) for every interior n.
template <class F>
Orbit<F> hky_C(const Orbit<F>& o, const F& lambda)
{
    Orbit<F> c;
    c.first_index = o.first_index + 1;
    for (long n = o.first_index + 1; n < o.last_index(); ++n) {
        const F den = o.at(n - 1) - lambda * o.at(n);
        c.x.push_back((o.at(n + 1) - lambda * o.at(n)) * detail::checked_inverse(den, "x[n-1] - lambda x[n]", n));
    }
    return c;
}

/// x_{n+1} from x_n, x_{n-1} through
///   x_{n+1} x_{n-1} - (x_n / lambda)(x_{n+1} + x_{n-1}) + x_n^2 - 4 (lambda^2 - 1) = 0.
template <class F>
F hky_step(const F& lambda, const F& x, const F& xm, long n = 0)
{
    const F il = lambda.inverse();
    const F four = int_like(lambda, 4);
    const F den = xm - x * il;
    return (x * il * xm - x * x + four * (lambda * lambda - one_like(lambda))) *
           detail::checked_inverse(den, "x[n-1] - x[n]/lambda", n);
}

/// Orbit x_0..x_steps of the autonomous g = -1 map rebuilt from the linear
/// recurrence x_{n+1} = lambda x_n + C_n (x_{n-1} - lambda x_n) with
/// C_n = C_1^((-1)^(n-1)); C_1 comes from one nonlinear step.
template <class F>
Orbit<F> hky_reconstruct(const F& x0, const F& x1, const F& lambda, int steps)
{
    const F one = one_like(lambda);
    if (lambda * lambda == one) throw error(errc::degenerate_start, "lambda = +-1 (z^4 = 1)");
    if (x0 - lambda * x1 == zero_like(lambda)) throw error(errc::degenerate_start, "x0 = lambda x1");
    Orbit<F> o;
    o.x = {x0, x1};
    F x2;
    try {
        x2 = hky_step(lambda, x1, x0, 1);
    } catch (const error&) {
        throw error(errc::degenerate_start, "first nonlinear step is singular");
    }
    const F c1 = (x2 - lambda * x1) / (x0 - lambda * x1);
    if (c1 == zero_like(c1)) throw error(errc::degenerate_start, "C vanishes");
    F c = c1;
    for (int n = 1; n < steps; ++n) {
        const F& x = o.x[static_cast<std::size_t>(n)];
        const F& xm = o.x[static_cast<std::size_t>(n - 1)];
        o.x.push_back(lambda * x + c * (xm - lambda * x));
        c = c.inverse();
    }
    return o;
}

/// Residual of y_{n+1} y_{n-1} y_n (y_n - lambda) - lambda y_{n-1} (y_n^2 - 1) + lambda y_n - 1.
template <class F>
F hky_y_residual(const F& lambda, const F& ym, const F& y, const F& yp)
{
    const F one = one_like(y);
    return yp * ym * y * (y - lambda) - lambda * ym * (y * y - one) + lambda * y - one;
}

/// Residual of the non-autonomous Gambier-type equation for y_n = x_{n+1}/x_n
/// on the q-deautonomised g = -1 family, at index n.
template <class K>
ElementOf<K> hky_y_residual(const K& k, const ParameterSequence& q, const Orbit<ElementOf<K>>& y, long n)
{
    using F = ElementOf<K>;
    const detail::QWindow<K> Q{k, q, n};
    const F one = k.one();
    auto sq = [](const F& v) { return v * v; };
    const F q_1 = Q(-1), q0 = Q(0), q1 = Q(1), q2 = Q(2), q3 = Q(3);
    const F ym = y.at(n - 1), yn = y.at(n), yp = y.at(n + 1);
    const F t1 = yp * ym * yn * q3 * q2 * (sq(q0) * sq(q1) + one) * (sq(q_1) * sq(q1) - one) *
                 ((sq(q0) + sq(q1)) * q2 * yn - q0 * (sq(q2) * sq(q1) + one));
    const F t2 = -ym * q1 *
                 (sq(q2) * (sq(q_1) * sq(q1) - one) * (sq(q0) * sq(q1) + one) * (sq(q0) * sq(q3) + one) * sq(yn) -
                  sq(q0) * (sq(q1) * sq(q3) - one) * (sq(q2) * sq(q1) + one) * (sq(q_1) * sq(q2) + one));
    const F t3 = -ym * yn * q0 * q1 * q2 *
                 ((sq(q3) - sq(q_1)) * (one + sq(q0) * sq(q1)) * (one + sq(q1) * sq(q2)) +
                  (sq(q2) - sq(q0)) * (sq(q1) * sq(q_1) - one) * (sq(q1) * sq(q3) - one));
    const F t4 = q0 * q_1 * (sq(q2) * sq(q1) + one) * (sq(q3) * sq(q1) - one) *
                 ((sq(q0) * sq(q1) + one) * q2 * yn - q0 * (sq(q2) + sq(q1)));
    return t1 + t2 + t3 + t4;
}

template <class F>
struct GambierCoefficients {
    F a, d, f, h, k, m;
};

namespace detail {

template <class K>
ElementOf<K> gambier_d(const K& k, const ParameterSequence& q, long n)
{
    using F = ElementOf<K>;
    const QWindow<K> Q{k, q, n};
    const F one = k.one();
    auto sq = [](const F& v) { return v * v; };
    const F num = Q(1) * Q(2) * (sq(Q(0)) + sq(Q(1))) * (sq(Q(-1)) * sq(Q(2)) + one) -
                  Q(0) * Q(-1) * (sq(Q(1)) + sq(Q(2))) * (sq(Q(1)) * sq(Q(2)) + one);
    const F den = Q(2) * Q(1) * (sq(Q(-1)) * sq(Q(0)) + one) * (sq(Q(1)) + sq(Q(2)));
    return num * checked_inverse(den, "denominator of d: q[n+2] q[n+1] (q[n-1]^2 q[n]^2 + 1)(q[n+1]^2 + q[n+2]^2)", n);
}

template <class K>
ElementOf<K> gambier_f(const K& k, const ParameterSequence& q, long n)
{
    using F = ElementOf<K>;
    const QWindow<K> Q{k, q, n};
    const F one = k.one();
    auto sq = [](const F& v) { return v * v; };
    const F num = Q(1) * Q(2) * (sq(Q(-1)) * sq(Q(1)) - one) * (sq(Q(2)) - sq(Q(0)));
    const F den = Q(0) * Q(-1) * (sq(Q(1)) + sq(Q(2))) * (sq(Q(1)) * sq(Q(2)) + one);
    return num * checked_inverse(den, "denominator of f: q[n] q[n-1] (q[n+1]^2 + q[n+2]^2)(q[n+1]^2 q[n+2]^2 + 1)", n);
}

} // namespace detail

/// Coefficients of the Gambier system w_n = (y_n y_{n-1} + a y_{n-1} + d)/(f y_n y_{n-1} + a y_{n-1} + 1),
/// w_{n+1} = (h w_n + k)/(w_n + m) for the q-deautonomised g = -1 family.
template <class K>
GambierCoefficients<ElementOf<K>> gambier_coefficients(const K& k, const ParameterSequence& q, long n)
{
    using F = ElementOf<K>;
    const detail::QWindow<K> Q{k, q, n};
    const F one = k.one();
    auto sq = [](const F& v) { return v * v; };
    GambierCoefficients<F> c;
    c.a = -Q(1) * (sq(Q(-1)) * sq(Q(2)) + one) *
          detail::checked_inverse(Q(-1) * (sq(Q(1)) + sq(Q(2))), "denominator of a: q[n-1] (q[n+1]^2 + q[n+2]^2)", n);
    c.d = detail::gambier_d(k, q, n);
    c.f = detail::gambier_f(k, q, n);
    c.h = detail::gambier_d(k, q, n + 1);
    const F frac = Q(0) * Q(1) * (sq(Q(1)) * sq(Q(3)) - one) * (sq(Q(-1)) * sq(Q(2)) + one) *
                   detail::checked_inverse(Q(2) * Q(3) * (sq(Q(-1)) * sq(Q(1)) - one) * (sq(Q(1)) * sq(Q(0)) + one),
                                           "denominator of k: q[n+2] q[n+3] (q[n-1]^2 q[n+1]^2 - 1)(q[n+1]^2 q[n]^2 + 1)",
                                           n);
    c.k = -c.d * c.h + (one - c.d) * frac;
    c.m = detail::gambier_f(k, q, n + 1) * (c.k + c.d * c.h) - c.d;
    return c;
}

/// w_n from y_{n-1}, y_n and the coefficients at n.
template <class F>
F gambier_w(const GambierCoefficients<F>& c, const F& ym, const F& y, long n = 0)
{
    const F one = one_like(y);
    const F den = c.f * y * ym + c.a * ym + one;
    return (y * ym + c.a * ym + c.d) * detail::checked_inverse(den, "denominator of w", n);
}

template <class F>
struct GambierReport {
    ResidualTable<F> y_equation; // second-order equation for y
    ResidualTable<F> w_equation; // w_{n+1} - (h w_n + k)/(w_n + m)
    bool ok() const { return y_equation.all_zero() && w_equation.all_zero(); }
    explicit operator bool() const { return ok(); }
};

/// Checks a y-orbit against its second-order equation and the Gambier system
/// built from it, at every index where all ingredients exist.
template <class K>
GambierReport<ElementOf<K>> gambier_verify(const K& k, const ParameterSequence& q, const Orbit<ElementOf<K>>& y)
{
    using F = ElementOf<K>;
    GambierReport<F> r;
    for (long n = y.first_index + 1; n < y.last_index(); ++n) r.y_equation.add(n, hky_y_residual(k, q, y, n));
    for (long n = y.first_index + 1; n < y.last_index(); ++n) {
        const auto c = gambier_coefficients(k, q, n);
        const F w = gambier_w(c, y.at(n - 1), y.at(n), n);
        const F wn = gambier_w(gambier_coefficients(k, q, n + 1), y.at(n), y.at(n + 1), n + 1);
        r.w_equation.add(n, wn - (c.h * w + c.k) * detail::checked_inverse(w + c.m, "w[n] + m[n]", n));
    }
    return r;
}

/// Residuals of (y_{n+1} + y_n)(y_n + y_{n-1}) = R_n (y_n^2 + 1) with
/// y_n = x_n/(z_n - 1/z_n) and
/// R_n = (z_{n+1}^2 z_n^2 - 1)(z_{n-1}^2 z_n^2 - 1) / (z_n^2 (z_{n+1}^2 - 1)(z_{n-1}^2 - 1)).
template <class K>
ResidualTable<ElementOf<K>> gambier_qrt_form(const K& k, const ParameterSequence& z, const Orbit<ElementOf<K>>& x)
{
    using F = ElementOf<K>;
    const F one = k.one();
    auto zz = [&](long n) {
        const F v = nonzero_at(z, k, n, "z");
        if (v * v == one) throw error(errc::degenerate_z, "z = +-1", n);
        return v;
    };
    auto y = [&](long n) { const F v = zz(n); return x.at(n) / (v - v.inverse()); };
    ResidualTable<F> t;
    for (long n = x.first_index + 1; n < x.last_index(); ++n) {
        const F zp = zz(n + 1), z0 = zz(n), zm = zz(n - 1);
        const F rn = (zp * zp * z0 * z0 - one) * (zm * zm * z0 * z0 - one) /
                     (z0 * z0 * (zp * zp - one) * (zm * zm - one));
        const F yp = y(n + 1), y0 = y(n), ym = y(n - 1);
        t.add(n, (yp + y0) * (y0 + ym) - rn * (y0 * y0 + one));
    }
    return t;
}

} // namespace mulmap
