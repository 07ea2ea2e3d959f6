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

#include "mulmap/exact.hpp"

#include <cctype>
#include <stdexcept>

namespace mulmap {

Exact Exact::pow(long e) const
{
    if (e < 0) return inverse().pow(-e);
    return Exact(r.pow(static_cast<std::uint64_t>(e)), static_cast<int>((static_cast<long>(root) * e) % 12));
}

std::string Exact::str() const
{
    if (root == 0 || r.is_zero()) return r.str();
    std::string base;
    switch (root) {
        case 3: base = "i"; break;
        case 4: base = "j"; break;
        default: base = "zeta^" + std::to_string(root); break;
    }
    if (r.is_one()) return base;
    if (r == Rational(-1)) return "-" + base;
    return r.str() + "*" + base;
}

Exact parse_exact(const std::string& text)
{
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw std::invalid_argument("empty exact literal");
    Exact out(Rational(1));
    if (s[0] == '-') {
        out = -out;
        s.erase(0, 1);
    }
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t star = s.find('*', start);
        std::string factor = s.substr(start, star == std::string::npos ? std::string::npos : star - start);
        long power = 1;
        if (auto caret = factor.find('^'); caret != std::string::npos) {
            power = std::stol(factor.substr(caret + 1));
            factor = factor.substr(0, caret);
        }
        Exact f;
        if (factor == "i") f = Exact::i();
        else if (factor == "j") f = Exact::j();
        else if (factor == "zeta") f = Exact(Rational(1), 1);
        else f = Exact(parse_rational(factor));
        out = out * f.pow(power);
        if (star == std::string::npos) break;
        start = star + 1;
    }
    return out;
}

} // namespace mulmap
