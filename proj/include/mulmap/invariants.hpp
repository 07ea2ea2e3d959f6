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
#include <stdexcept>
#include <utility>
#include <vector>

#include "mulmap/linalg.hpp"
#include "mulmap/mapping.hpp"

namespace mulmap {

/// K(u, v) = (num(u, v) / den(u, v))^power with u = x_n, v = x_{n-1}. Grid
/// entry (i, j) multiplies u^i v^j.
template <class F>
struct InvariantCandidate {
    int degree = 0;
    Matrix<F> num, den;
    bool symmetric = false;
    int power = 1;
};

template <class F>
F eval_grid(const Matrix<F>& g, const F& u, const F& v)
{
    F acc = zero_like(u);
    for (Eigen::Index i = g.rows(); i-- > 0;) {
        F row = zero_like(u);
        for (Eigen::Index j = g.cols(); j-- > 0;) row = row * v + g(i, j);
        acc = acc * u + row;
    }
    return acc;
}

/// Value of K, or nullopt at a pole.
template <class F>
std::optional<F> evaluate(const InvariantCandidate<F>& c, const F& u, const F& v)
{
    const F d = eval_grid(c.den, u, v);
    if (d == zero_like(u)) return std::nullopt;
    F r = eval_grid(c.num, u, v) / d;
    F out = one_like(u);
    for (int p = 0; p < c.power; ++p) out *= r;
    return out;
}

template <class F>
bool is_symmetric(const Matrix<F>& g)
{
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (!(g(i, j) == g(j, i))) return false;
    return true;
}

/// Scales num and den together so the first nonzero coefficient (num then den,
/// row-major) is 1.
template <class F>
InvariantCandidate<F> normalise_candidate(InvariantCandidate<F> c)
{
    for (const Matrix<F>* g : {&c.num, &c.den}) {
        for (Eigen::Index i = 0; i < g->rows(); ++i) {
            for (Eigen::Index j = 0; j < g->cols(); ++j) {
                if ((*g)(i, j) == zero_like((*g)(i, j))) continue;
                const F s = (*g)(i, j).inverse();
                for (Matrix<F>* h : {&c.num, &c.den})
                    for (Eigen::Index a = 0; a < h->rows(); ++a)
                        for (Eigen::Index b = 0; b < h->cols(); ++b) (*h)(a, b) *= s;
                return c;
            }
        }
    }
    throw std::invalid_argument("candidate is identically zero");
}

template <class F>
Matrix<F> grid_product(const Matrix<F>& a, const Matrix<F>& b)
{
    const F zero = zero_like(a(0, 0));
    Matrix<F> out(a.rows() + b.rows() - 1, a.cols() + b.cols() - 1);
    out.setConstant(zero);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i + k, j + l) += a(i, j) * b(k, l);
    return out;
}

/// The same K written with power 1.
template <class F>
InvariantCandidate<F> expand_power(const InvariantCandidate<F>& c)
{
    InvariantCandidate<F> out = c;
    for (int p = 1; p < c.power; ++p) {
        out.num = grid_product(out.num, c.num);
        out.den = grid_product(out.den, c.den);
    }
    out.degree = c.degree * c.power;
    out.power = 1;
    return out;
}

namespace detail {

template <class F>
Vector<F> flatten(const Matrix<F>& g)
{
    Vector<F> v(g.size());
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) v(i * g.cols() + j) = g(i, j);
    return v;
}

template <class F>
Matrix<F> unflatten(const Vector<F>& v, int degree)
{
    Matrix<F> g(degree + 1, degree + 1);
    for (Eigen::Index i = 0; i <= degree; ++i)
        for (Eigen::Index j = 0; j <= degree; ++j) g(i, j) = v(i * (degree + 1) + j);
    return g;
}

template <class F>
Eigen::Index span_rank(const std::vector<Vector<F>>& vs)
{
    if (vs.empty()) return 0;
    Matrix<F> m(static_cast<Eigen::Index>(vs.size()), vs[0].size());
    for (std::size_t r = 0; r < vs.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = vs[r].transpose();
    return rank(m);
}

} // namespace detail

/// True when span{num, den} of both candidates (expanded to power 1) agree,
/// i.e. the two invariants are Mobius transforms of each other.
template <class F>
bool same_pencil(const InvariantCandidate<F>& a, const InvariantCandidate<F>& b)
{
    auto x = expand_power(a), y = expand_power(b);
    if (x.degree != y.degree) return false;
    using detail::flatten;
    const auto r = detail::span_rank<F>({flatten(x.num), flatten(x.den)});
    return r == detail::span_rank<F>({flatten(y.num), flatten(y.den)}) &&
           r == detail::span_rank<F>({flatten(x.num), flatten(x.den), flatten(y.num), flatten(y.den)});
}

/// Closed-form invariants of three autonomous ansatz cases.
enum class KnownInvariant {
    biquadratic_m2, // g = 1/z^2
    biquadratic_m4, // g = 1/z^4
    squared_ratio   // g = -1
};

template <class K>
InvariantCandidate<ElementOf<K>> known_invariant(KnownInvariant which, const K& k, const Exact& z_exact)
{
    using F = ElementOf<K>;
    const F z = to_field(k, z_exact);
    const F one = k.one(), zero = k.zero();
    const F z2 = z * z, iz2 = z2.inverse();
    const F w = (z2 - iz2) * (z2 - iz2);
    InvariantCandidate<F> c;
    c.degree = 2;
    c.symmetric = true;
    c.num = Matrix<F>::Constant(3, 3, zero);
    c.den = Matrix<F>::Constant(3, 3, zero);
    auto biquadratic_den = [&] {
        // (z^2 u - v)(u - z^2 v) + (z^4 - 1)^2 / z^2
        const F z4 = z2 * z2;
        c.den(2, 0) = z2;
        c.den(0, 2) = z2;
        c.den(1, 1) = -(z4 + one);
        c.den(0, 0) = (z4 - one) * (z4 - one) * iz2;
    };
    switch (which) {
        case KnownInvariant::biquadratic_m2: {
            // (u + v)(u v + z^4 - z^2 - 1/z^2 + 1/z^4)
            const F cst = z2 * z2 - z2 - iz2 + iz2 * iz2;
            c.num(2, 1) = one;
            c.num(1, 2) = one;
            c.num(1, 0) = cst;
            c.num(0, 1) = cst;
            biquadratic_den();
            break;
        }
        case KnownInvariant::biquadratic_m4:
            // (u^2 + w)(v^2 + w)
            c.num(2, 2) = one;
            c.num(2, 0) = w;
            c.num(0, 2) = w;
            c.num(0, 0) = w * w;
            biquadratic_den();
            break;
        case KnownInvariant::squared_ratio: {
            const F s = z2 + iz2;
            c.power = 2;
            c.num(2, 0) = one;
            c.num(0, 2) = one;
            c.num(1, 1) = -(k.from_int(4) / s);
            c.num(0, 0) = -w;
            c.den(2, 0) = one;
            c.den(0, 2) = one;
            c.den(1, 1) = -s;
            c.den(0, 0) = w;
            break;
        }
    }
    return c;
}

/// Numeric orbit x_0..x_len from random data, cut short at a singularity.
template <class K, class Rng>
std::vector<ElementOf<K>> random_orbit(const MappingSpec& spec, const K& k, Rng& rng, int len, long n0 = 0)
{
    std::vector<ElementOf<K>> xs{k.random(rng), k.random(rng)};
    for (int i = 1; i < len; ++i) {
        try {
            const auto s = solve_forward(spec, k, n0 + i);
            xs.push_back(s(xs[xs.size() - 1], xs[xs.size() - 2]));
        } catch (const error& e) {
            if (e.code() != errc::singular_orbit) throw;
            break;
        }
    }
    return xs;
}

struct InvariantCheck {
    bool conserved = true;
    int tested = 0;
    int excluded = 0;   // sample points at a pole of K
    bool valid = true;  // at most half of the visited points excluded
    explicit operator bool() const { return conserved && valid; }
};

/// Compares K(x_{n+1}, x_n) with K(x_n, x_{n-1}) at `trials` orbit points.
template <class K, class Rng>
InvariantCheck check_invariant(const MappingSpec& spec, const K& k, const InvariantCandidate<ElementOf<K>>& cand,
                               int trials, Rng& rng)
{
    if (!spec.is_autonomous()) throw std::invalid_argument(spec.id + ": invariants need an autonomous spec");
    if (trials < 20) throw std::invalid_argument("check_invariant needs at least 20 trials");
    InvariantCheck r;
    const int budget = 4 * trials;
    while (r.tested < trials && r.tested + r.excluded < budget) {
        const auto xs = random_orbit(spec, k, rng, 8);
        for (std::size_t m = 1; m + 1 < xs.size() && r.tested < trials; ++m) {
            const auto after = evaluate(cand, xs[m + 1], xs[m]);
            const auto before = evaluate(cand, xs[m], xs[m - 1]);
            if (!after || !before) {
                ++r.excluded;
                continue;
            }
            ++r.tested;
            if (!(*after == *before)) r.conserved = false;
        }
    }
    if (r.tested < trials) {
        throw error(errc::all_samples_singular, "only " + std::to_string(r.tested) + " of " + std::to_string(trials) +
                                                    " sample points were regular");
    }
    r.valid = 2 * r.excluded <= r.tested + r.excluded;
    return r;
}

template <class F>
struct InvariantSearch {
    /// Pencil basis P_1..P_r of bidegree-(d, d) curves through whole orbits.
    std::vector<Matrix<F>> pencil;
    /// Verified candidates P_i / P_r.
    std::vector<InvariantCandidate<F>> basis;
    /// A (d/2, d/2) ratio whose square lies in the pencil, when one exists.
    std::optional<InvariantCandidate<F>> squared;
    int samples = 0;
};

namespace detail {

template <class F>
std::vector<std::pair<int, int>> grid_monomials(int d, bool symmetric)
{
    std::vector<std::pair<int, int>> m;
    for (int i = 0; i <= d; ++i)
        for (int j = symmetric ? i : 0; j <= d; ++j) m.emplace_back(i, j);
    return m;
}

/// Curves of bidegree (d, d) through all given points (u, v), as grids.
template <class F>
std::vector<Vector<F>> curves_through(const std::vector<std::pair<F, F>>& pts, int d, bool symmetric, const F& one)
{
    const auto mons = grid_monomials<F>(d, symmetric);
    Matrix<F> a(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(mons.size()));
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const auto& [u, v] = pts[r];
        for (std::size_t c = 0; c < mons.size(); ++c) {
            const auto [i, j] = mons[c];
            F val = ipow(u, i) * ipow(v, j);
            if (symmetric && i != j) val += ipow(u, j) * ipow(v, i);
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = val;
        }
    }
    const Matrix<F> ns = nullspace(a, one);
    std::vector<Vector<F>> out;
    for (Eigen::Index c = 0; c < ns.cols(); ++c) {
        Matrix<F> g = Matrix<F>::Constant(d + 1, d + 1, zero_like(one));
        for (std::size_t m = 0; m < mons.size(); ++m) {
            const auto [i, j] = mons[m];
            g(i, j) = ns(static_cast<Eigen::Index>(m), c);
            if (symmetric) g(j, i) = ns(static_cast<Eigen::Index>(m), c);
        }
        out.push_back(flatten(g));
    }
    return out;
}

/// Row-reduced basis of the span of the given vectors.
template <class F>
std::vector<Vector<F>> span_basis(const std::vector<Vector<F>>& vs)
{
    Matrix<F> m(static_cast<Eigen::Index>(vs.size()), vs[0].size());
    for (std::size_t r = 0; r < vs.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = vs[r].transpose();
    const auto piv = row_reduce(m);
    std::vector<Vector<F>> out;
    for (std::size_t r = 0; r < piv.size(); ++r) out.push_back(m.row(static_cast<Eigen::Index>(r)).transpose());
    return out;
}

/// Coordinates (a, b) with target = a p + b q, if any.
template <class F>
std::optional<std::pair<F, F>> coordinates(const Vector<F>& p, const Vector<F>& q, const Vector<F>& target)
{
    Matrix<F> m(p.size(), 3);
    m.col(0) = p;
    m.col(1) = q;
    m.col(2) = target;
    const auto piv = row_reduce(m);
    if (piv.size() != 2 || piv[0] != 0 || piv[1] != 1) return std::nullopt;
    return std::make_pair(m(0, 2), m(1, 2));
}

} // namespace detail

/// Samples per orbit for bidegree d: the unknown count plus a margin.
inline int orbit_samples(int d) { return (d + 1) * (d + 1) + 4; }

/// Squared-ratio invariant (A/B)^2 of bidegree (d, d), found from the level
/// curves of the two-step map: the even and odd points of an orbit lie on
/// A - s B = 0 and A + s B = 0. The one-step map swaps the two curves, an
/// involution t -> l / t on the pencil parameter, whose fixed points
/// t = +-sqrt(l) give A and B.
template <class K, class Rng>
std::optional<InvariantCandidate<ElementOf<K>>> detect_squared(const MappingSpec& spec, const K& k, int d,
                                                               bool symmetric, Rng& rng)
{
    using F = ElementOf<K>;
    const int need = orbit_samples(d);
    std::vector<std::pair<Vector<F>, Vector<F>>> levels;
    for (int o = 0; o < 3; ++o) {
        const auto xs = random_orbit(spec, k, rng, 2 * need + 2);
        if (static_cast<int>(xs.size()) < 2 * need + 2) return std::nullopt;
        std::vector<std::pair<F, F>> even, odd;
        for (std::size_t m = 1; m < xs.size(); ++m) (m % 2 ? odd : even).emplace_back(xs[m], xs[m - 1]);
        auto e = detail::curves_through(even, d, symmetric, k.one());
        auto od = detail::curves_through(odd, d, symmetric, k.one());
        if (e.size() != 1 || od.size() != 1) return std::nullopt;
        levels.emplace_back(e[0], od[0]);
    }
    const auto& q1 = levels[0].first;
    const auto& q2 = levels[0].second;
    const auto ab = detail::coordinates(q1, q2, levels[1].first);
    const auto cd = detail::coordinates(q1, q2, levels[1].second);
    if (!ab || !cd) return std::nullopt;
    const F zero = k.zero();
    if (ab->second == zero || cd->second == zero || ab->first == zero || cd->first == zero) return std::nullopt;
    const F lambda = (ab->first * cd->first) / (ab->second * cd->second);
    const auto t = k.sqrt(lambda);
    if (!t) return std::nullopt;
    InvariantCandidate<F> c;
    c.degree = d;
    c.symmetric = symmetric;
    c.power = 2;
    c.num = detail::unflatten<F>(Vector<F>(q1 * *t + q2), d);
    c.den = detail::unflatten<F>(Vector<F>(q2 - q1 * *t), d);
    c = normalise_candidate(c);
    if (!check_invariant(spec, k, c, 20, rng)) return std::nullopt;
    return c;
}

/// Invariants of bidegree (d, d) by exact linear algebra: the curves of the
/// invariant pencil through each of three random orbits span the pencil.
/// Every returned candidate is re-verified on fresh orbits. An empty basis
/// means no invariant of this bidegree. For even d the squared-ratio
/// structure is looked for as well.
template <class K, class Rng>
InvariantSearch<ElementOf<K>> search_invariant(const MappingSpec& spec, const K& k, int d, bool symmetric, Rng& rng)
{
    using F = ElementOf<K>;
    if (!spec.is_autonomous()) throw std::invalid_argument(spec.id + ": invariants need an autonomous spec");
    if (d < 1) throw std::invalid_argument("bidegree must be at least 1");
    InvariantSearch<F> out;
    const int need = orbit_samples(d);
    std::vector<Vector<F>> curves;
    for (int o = 0; o < 3; ++o) {
        std::vector<std::pair<F, F>> pts;
        for (int attempt = 0; static_cast<int>(pts.size()) < need; ++attempt) {
            if (attempt == 4) throw error(errc::rank_deficient_samples, "orbits keep hitting singularities");
            pts.clear();
            const auto xs = random_orbit(spec, k, rng, need + 1);
            for (std::size_t m = 1; m < xs.size(); ++m) pts.emplace_back(xs[m], xs[m - 1]);
        }
        out.samples += static_cast<int>(pts.size());
        auto c = detail::curves_through(pts, d, symmetric, k.one());
        if (c.empty()) return out; // some orbit lies on no such curve
        curves.insert(curves.end(), c.begin(), c.end());
    }
    const auto basis = detail::span_basis(curves);
    for (const auto& b : basis) out.pencil.push_back(detail::unflatten<F>(b, d));
    if (out.pencil.size() < 2) {
        throw error(errc::rank_deficient_samples, "all sampled orbits lie on a single curve");
    }
    for (std::size_t i = 0; i + 1 < out.pencil.size(); ++i) {
        InvariantCandidate<F> c{d, out.pencil[i], out.pencil.back(), symmetric, 1};
        c = normalise_candidate(c);
        if (check_invariant(spec, k, c, 20, rng)) out.basis.push_back(std::move(c));
    }
    if (d % 2 == 0 && !out.basis.empty()) {
        auto sq = detect_squared(spec, k, d / 2, symmetric, rng);
        if (sq) {
            const auto e = expand_power(*sq);
            std::vector<Vector<F>> all;
            for (const auto& p : out.pencil) all.push_back(detail::flatten(p));
            const auto r = detail::span_rank(all);
            all.push_back(detail::flatten(e.num));
            all.push_back(detail::flatten(e.den));
            if (detail::span_rank(all) == r) out.squared = std::move(sq);
        }
    }
    return out;
}

/// True when both grids of `c` (expanded to power 1) lie in the pencil.
template <class F>
bool pencil_contains(const InvariantSearch<F>& s, const InvariantCandidate<F>& c)
{
    if (s.pencil.empty()) return false;
    const auto e = expand_power(c);
    if (e.num.rows() != s.pencil[0].rows()) return false;
    std::vector<Vector<F>> all;
    for (const auto& p : s.pencil) all.push_back(detail::flatten(p));
    const auto r = detail::span_rank(all);
    all.push_back(detail::flatten(e.num));
    all.push_back(detail::flatten(e.den));
    return detail::span_rank(all) == r;
}

} // namespace mulmap
