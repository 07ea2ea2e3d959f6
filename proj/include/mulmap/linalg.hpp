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

#include <vector>

#include <Eigen/Core>

#include "mulmap/modp.hpp"
#include "mulmap/rational.hpp"

namespace Eigen {

// Exact scalars: Eigen is used for storage and block access only. The
// pivoting decompositions assume an ordered field, so elimination below is
// our own.
template <>
struct NumTraits<mulmap::ModP> : GenericNumTraits<mulmap::ModP> {
    using Real = mulmap::ModP;
    using NonInteger = mulmap::ModP;
    using Nested = mulmap::ModP;
    using Literal = mulmap::ModP;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
};

template <>
struct NumTraits<mulmap::Rational> : GenericNumTraits<mulmap::Rational> {
    using Real = mulmap::Rational;
    using NonInteger = mulmap::Rational;
    using Nested = mulmap::Rational;
    using Literal = mulmap::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 64,
        MulCost = 64
    };
};

} // namespace Eigen

namespace mulmap {

template <class F>
using Matrix = Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic>;
template <class F>
using Vector = Eigen::Matrix<F, Eigen::Dynamic, 1>;

/// Reduced row echelon form in place; returns the pivot columns.
template <class F>
std::vector<Eigen::Index> row_reduce(Matrix<F>& a)
{
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index piv = row;
        while (piv < a.rows() && a(piv, col) == F()) ++piv;
        if (piv == a.rows()) continue;
        if (piv != row) a.row(piv).swap(a.row(row));
        const F inv = a(row, col).inverse();
        for (Eigen::Index j = col; j < a.cols(); ++j) a(row, j) *= inv;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r == row || a(r, col) == F()) continue;
            const F f = a(r, col);
            for (Eigen::Index j = col; j < a.cols(); ++j) a(r, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Exact product. Eigen's product kernels construct Scalar(0) and Scalar(1),
/// which a runtime modulus cannot supply.
template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b, const F& zero)
{
    Matrix<F> out(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            F acc = zero;
            for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

template <class F>
Eigen::Index rank(Matrix<F> a)
{
    return static_cast<Eigen::Index>(row_reduce(a).size());
}

/// Basis of the right kernel, one vector per column. `one` supplies the
/// field's unit (Eigen cannot construct it for a runtime modulus).
template <class F>
Matrix<F> nullspace(Matrix<F> a, const F& one)
{
    const auto pivots = row_reduce(a);
    std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
    for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

    Matrix<F> basis(a.cols(), a.cols() - static_cast<Eigen::Index>(pivots.size()));
    basis.setConstant(zero_like(one));
    Eigen::Index k = 0;
    for (Eigen::Index free = 0; free < a.cols(); ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        basis(free, k) = one;
        for (std::size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], k) = -a(static_cast<Eigen::Index>(r), free);
        ++k;
    }
    return basis;
}

} // namespace mulmap
