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

#include <algorithm>
#include <ostream>
#include <utility>

#include "mulmap/polynomial.hpp"

namespace mulmap {

/// Reduced ratio num/den of univariate polynomials: gcd(num, den) = 1 and den
/// monic. Every constructor and operator re-establishes that form.
template <class F>
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(Polynomial<F> num, Polynomial<F> den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }
    explicit RationalFunction(Polynomial<F> num) : num_(std::move(num))
    {
        den_ = Polynomial<F>::constant(one_like(num_.is_zero() ? F() : num_.lead()));
    }

    static RationalFunction constant(const F& c) { return RationalFunction(Polynomial<F>::constant(c), Polynomial<F>::constant(one_like(c))); }
    /// The seed variable t.
    static RationalFunction variable(const F& one) { return RationalFunction(Polynomial<F>({F(), one}), Polynomial<F>::constant(one)); }

    const Polynomial<F>& num() const noexcept { return num_; }
    const Polynomial<F>& den() const noexcept { return den_; }

    /// max(deg num, deg den); the zero function has degree 0.
    int degree() const noexcept { return std::max({num_.degree(), den_.degree(), 0}); }
    bool is_zero() const noexcept { return num_.is_zero(); }

    F operator()(const F& t) const
    {
        F d = den_(t);
        if (d == F()) throw error(errc::division_by_zero, "rational function evaluated at a pole");
        return num_(t) / d;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
    {
        if (b.is_zero()) throw error(errc::division_by_zero, "rational function division by zero");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RationalFunction operator-(const RationalFunction& a) { return RationalFunction(-a.num_, a.den_); }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::ostream& operator<<(std::ostream& os, const RationalFunction& r)
    {
        return os << "(" << r.num_ << ")/(" << r.den_ << ")";
    }

private:
    void reduce()
    {
        if (den_.is_zero()) throw error(errc::division_by_zero, "rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial<F>::constant(one_like(den_.lead()));
            return;
        }
        Polynomial<F> g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        F l = den_.lead();
        if (!(l == one_like(l))) {
            F inv = l.inverse();
            num_ *= inv;
            den_ *= inv;
        }
    }

    Polynomial<F> num_;
    Polynomial<F> den_;
};

} // namespace mulmap
