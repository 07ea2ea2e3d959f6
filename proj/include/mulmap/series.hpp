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
#include <vector>

#include "mulmap/error.hpp"
#include "mulmap/modp.hpp"
#include "mulmap/rational.hpp"

namespace mulmap {

/// Default truncation order for confinement traces.
inline constexpr int kDefaultTruncation = 12;

// Truncated Laurent series in a perturbation variable eps:
//
//   sum_{e = offset}^{truncation - 1} c_e eps^e + O(eps^truncation)
//
// `truncation` is absolute. Coefficients past the stored vector (but below
// the truncation) are zero. Products and quotients shrink the truncation
// according to the valuations involved, so every stored coefficient is exact.
template <class F>
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(int offset, std::vector<F> coeffs, int truncation)
        : offset_(offset), c_(std::move(coeffs)), trunc_(truncation)
    {
        normalise();
    }

    /// The constant c, known to the given truncation order.
    static TruncatedSeries constant(const F& c, int truncation = kDefaultTruncation)
    {
        return TruncatedSeries(0, {c}, truncation);
    }
    /// c * eps^k.
    static TruncatedSeries monomial(const F& c, int k, int truncation = kDefaultTruncation)
    {
        return TruncatedSeries(k, {c}, truncation);
    }

    int order_offset() const noexcept { return offset_; }
    int truncation_order() const noexcept { return trunc_; }
    std::span<const F> coefficients() const noexcept { return c_; }

    /// True when every known coefficient vanishes.
    bool is_zero() const noexcept { return c_.empty(); }
    /// Lowest exponent with a nonzero coefficient (valid unless is_zero()).
    int valuation() const noexcept { return offset_; }

    /// Coefficient of eps^e; throws truncation_exhausted when e is not known.
    F coefficient(int e) const
    {
        if (e >= trunc_) {
            throw error(errc::truncation_exhausted, "coefficient of eps^" + std::to_string(e) +
                                                        " lies beyond truncation " + std::to_string(trunc_));
        }
        if (e < offset_ || e - offset_ >= static_cast<int>(c_.size())) return c_.empty() ? F() : zero_like(c_[0]);
        return c_[e - offset_];
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = add(*this, o, false); }
    TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = add(*this, o, true); }
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }
    TruncatedSeries& operator/=(const TruncatedSeries& o) { return *this = *this * invert(o); }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b, false); }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b, true); }
    friend TruncatedSeries operator-(TruncatedSeries a)
    {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        const int off = a.offset_ + b.offset_;
        const int trunc = std::min(a.offset_ + b.trunc_, b.offset_ + a.trunc_);
        if (a.is_zero() || b.is_zero() || trunc <= off) return TruncatedSeries(off, {}, trunc);
        const std::size_t n = static_cast<std::size_t>(trunc - off);
        std::vector<F> out(std::min(n, a.c_.size() + b.c_.size() - 1), zero_like(a.c_[0]));
        for (std::size_t i = 0; i < a.c_.size() && i < out.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size() && i + j < out.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        }
        return TruncatedSeries(off, std::move(out), trunc);
    }
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) { return a * invert(b); }

    // Scalars act as exact constants, so they never shrink the truncation.
    friend TruncatedSeries operator*(TruncatedSeries a, const F& s)
    {
        for (auto& x : a.c_) x *= s;
        a.normalise();
        return a;
    }
    friend TruncatedSeries operator*(const F& s, TruncatedSeries a) { return std::move(a) * s; }
    friend TruncatedSeries operator+(const TruncatedSeries& a, const F& s) { return add_scalar(a, s); }
    friend TruncatedSeries operator+(const F& s, const TruncatedSeries& a) { return add_scalar(a, s); }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const F& s) { return add_scalar(a, -s); }
    friend TruncatedSeries operator-(const F& s, const TruncatedSeries& a) { return add_scalar(-a, s); }

    /// Multiplicative inverse; offset becomes -offset and the relative
    /// precision is preserved.
    friend TruncatedSeries invert(const TruncatedSeries& s)
    {
        if (s.is_zero()) throw error(errc::zero_series, "series vanishes below eps^" + std::to_string(s.trunc_));
        const int rel = s.trunc_ - s.offset_;
        std::vector<F> inv(static_cast<std::size_t>(rel), zero_like(s.c_[0]));
        const F l = s.c_[0].inverse();
        inv[0] = l;
        for (int k = 1; k < rel; ++k) {
            F acc = zero_like(l);
            for (int j = 1; j <= k && j < static_cast<int>(s.c_.size()); ++j) acc += s.c_[j] * inv[k - j];
            inv[k] = -acc * l;
        }
        return TruncatedSeries(-s.offset_, std::move(inv), -s.offset_ + rel);
    }

    friend std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s)
    {
        for (std::size_t i = 0; i < s.c_.size(); ++i) {
            if (s.c_[i] == F()) continue;
            os << s.c_[i] << "*e^" << (s.offset_ + static_cast<int>(i)) << " + ";
        }
        return os << "O(e^" << s.trunc_ << ")";
    }

private:
    static TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b, bool negate_b)
    {
        const int trunc = std::min(a.trunc_, b.trunc_);
        const int off = std::min(a.is_zero() ? trunc : a.offset_, b.is_zero() ? trunc : b.offset_);
        if (off >= trunc) return TruncatedSeries(trunc, {}, trunc);
        const F z = !a.c_.empty() ? zero_like(a.c_[0]) : zero_like(b.c_[0]);
        std::vector<F> out(static_cast<std::size_t>(trunc - off), z);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int e = a.offset_ + static_cast<int>(i);
            if (e < trunc) out[e - off] += a.c_[i];
        }
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            int e = b.offset_ + static_cast<int>(i);
            if (e < trunc) out[e - off] += negate_b ? -b.c_[i] : b.c_[i];
        }
        return TruncatedSeries(off, std::move(out), trunc);
    }
    static TruncatedSeries add_scalar(const TruncatedSeries& a, const F& s)
    {
        return add(a, constant(s, a.trunc_), false);
    }

    void normalise()
    {
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead] == F()) ++lead;
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            offset_ += static_cast<int>(lead);
        }
        if (static_cast<int>(c_.size()) > trunc_ - offset_) c_.resize(static_cast<std::size_t>(std::max(0, trunc_ - offset_)));
        while (!c_.empty() && c_.back() == F()) c_.pop_back();
        if (c_.empty()) offset_ = trunc_;
    }

    int offset_ = 0;
    std::vector<F> c_;
    int trunc_ = kDefaultTruncation;
};

} // namespace mulmap
