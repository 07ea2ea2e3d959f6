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

#include "mulmap/sequence.hpp"

#include <sstream>

namespace mulmap {

ParameterSequence ParameterSequence::constant(Exact c)
{
    ParameterSequence s;
    s.kind_ = Kind::constant;
    s.value_ = std::move(c);
    return s;
}

ParameterSequence ParameterSequence::geometric(Exact first, Exact ratio)
{
    ParameterSequence s;
    s.kind_ = Kind::geometric;
    s.value_ = std::move(first);
    s.ratio_ = std::move(ratio);
    return s;
}

ParameterSequence ParameterSequence::table(long first_index, std::vector<Exact> values)
{
    if (values.empty()) throw std::invalid_argument("parameter table must not be empty");
    ParameterSequence s;
    s.kind_ = Kind::table;
    s.first_ = first_index;
    s.values_ = std::move(values);
    return s;
}

ParameterSequence ParameterSequence::structured(Structured st)
{
    auto check = [](const std::vector<Exact>& t, std::size_t m, const char* name) {
        if (!t.empty() && t.size() != m) {
            throw std::invalid_argument(std::string("periodic factor ") + name + " needs exactly " +
                                        std::to_string(m) + " values");
        }
    };
    check(st.rho2, 2, "rho2");
    check(st.rho3, 3, "rho3");
    check(st.rho4, 4, "rho4");
    ParameterSequence s;
    s.kind_ = Kind::structured;
    s.s_ = std::move(st);
    return s;
}

ParameterSequence ParameterSequence::random_table(std::mt19937_64& rng, long lo, long hi, std::int64_t bound)
{
    std::uniform_int_distribution<std::int64_t> num(1, bound);
    std::uniform_int_distribution<int> sign(0, 1);
    std::vector<Exact> v;
    for (long n = lo; n <= hi; ++n) {
        std::int64_t a = num(rng), b = num(rng);
        v.emplace_back(Rational(sign(rng) ? a : -a, b));
    }
    return table(lo, std::move(v));
}

Exact ParameterSequence::exact_at(long n) const
{
    switch (kind_) {
        case Kind::constant: return value_;
        case Kind::geometric: return value_ * ratio_.pow(n);
        case Kind::table:
            if (n < first_ || n > last_index()) {
                throw error(errc::out_of_range,
                            "index " + std::to_string(n) + " outside table [" + std::to_string(first_) + ", " +
                                std::to_string(last_index()) + "]",
                            n);
            }
            return values_[static_cast<std::size_t>(n - first_)];
        case Kind::structured: {
            auto periodic = [n](const std::vector<Exact>& t) {
                if (t.empty()) return Exact(1);
                long m = static_cast<long>(t.size());
                return t[static_cast<std::size_t>(((n % m) + m) % m)];
            };
            long alt = (n % 2 == 0) ? n : -n;
            return s_.offset * s_.base.pow(n) * s_.alternating.pow(alt) * periodic(s_.rho2) * periodic(s_.rho3) *
                   periodic(s_.rho4);
        }
    }
    return value_;
}

ParameterSequence ParameterSequence::materialise(long lo, long hi) const
{
    std::vector<Exact> v;
    for (long n = lo; n <= hi; ++n) v.push_back(exact_at(n));
    return table(lo, std::move(v));
}

ParameterSequence ParameterSequence::product(const std::vector<Factor>& factors, Exact scale, long lo, long hi)
{
    std::vector<Exact> v;
    for (long n = lo; n <= hi; ++n) {
        Exact acc = scale;
        for (const auto& f : factors) acc = acc * f.seq->exact_at(n + f.shift).pow(f.exponent);
        v.push_back(acc);
    }
    return table(lo, std::move(v));
}

ParameterSequence ParameterSequence::with_signs(const std::vector<int>& signs, long lo, long hi) const
{
    std::vector<Exact> v;
    const long m = static_cast<long>(signs.size());
    for (long n = lo; n <= hi; ++n) {
        Exact e = exact_at(n);
        if (signs[static_cast<std::size_t>(((n % m) + m) % m)] < 0) e = -e;
        v.push_back(e);
    }
    return table(lo, std::move(v));
}

std::string ParameterSequence::describe() const
{
    std::ostringstream os;
    auto list = [&os](const std::vector<Exact>& t) {
        os << "[";
        for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
        os << "]";
    };
    switch (kind_) {
        case Kind::constant: os << "constant " << value_; break;
        case Kind::geometric: os << "geometric " << value_ << "*(" << ratio_ << ")^n"; break;
        case Kind::table: os << "table[" << first_ << ".." << last_index() << "]"; break;
        case Kind::structured:
            os << "structured offset=" << s_.offset << " base=" << s_.base << " alternating=" << s_.alternating
               << " rho2=";
            list(s_.rho2);
            os << " rho3=";
            list(s_.rho3);
            os << " rho4=";
            list(s_.rho4);
            break;
    }
    return os.str();
}

} // namespace mulmap
