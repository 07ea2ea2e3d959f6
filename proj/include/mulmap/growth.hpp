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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mulmap/mapping.hpp"
#include "mulmap/modp.hpp"

namespace mulmap {

struct DegreeSequence {
    std::vector<int> degrees;
    std::string spec_id;
    std::vector<u64> prime_witnesses; // primes whose runs agreed
    bool capped = false;              // stopped early at the degree cap
};

enum class GrowthKind { bounded, linear, quadratic, exponential };
std::string to_string(GrowthKind k);

struct GrowthClass {
    GrowthKind kind = GrowthKind::bounded;
    double entropy_estimate = 0.0;
    double fit_residual = 0.0; // rms residual of the entropy fit (0 if not fitted)
    int period = 0;            // period of the differences that decided the verdict
    bool provisional = false;  // fewer than 10 terms, or no clear pattern
};

struct DegreeOptions {
    /// Witness primes; one random x0 draw each. Failing runs are replaced by
    /// fresh random primes (1 mod 12, so roots of unity in parameters work).
    std::vector<u64> primes{kDefaultPrime, 0};
    std::uint64_t seed = 1;
    int max_retries = 4;
    long n0 = 0;              // index of x0
    int degree_cap = 1 << 15; // stop once a degree exceeds this
};

/// Second witness prime used when DegreeOptions::primes holds a 0.
u64 default_witness_prime();

/// Incremental symbolic orbit x_{n0} = x0, x_{n0+1} = t over one prime.
class SymbolicIterator {
public:
    SymbolicIterator(const MappingSpec& spec, const PrimeField& k, const ModP& x0, long n0 = 0);
    /// Degree of the next iterate.
    int next();
    const RationalFunction<ModP>& current() const noexcept { return cur_; }
    long index() const noexcept { return n_; }

private:
    const MappingSpec* spec_;
    PrimeField k_;
    RationalFunction<ModP> prev_, cur_;
    long n_;
};

/// Degrees of x_0(t)..x_{n_max}(t), agreed between two witness runs.
DegreeSequence degree_sequence(const MappingSpec& spec, int n_max, const DegreeOptions& opts = {});

/// Degrees of a single run (no witness agreement).
std::vector<int> degree_run(const MappingSpec& spec, const PrimeField& k, const ModP& x0, int n_max, long n0 = 0,
                            int degree_cap = 1 << 15);

GrowthClass classify_growth(const std::vector<int>& degrees);
inline GrowthClass classify_growth(const DegreeSequence& s) { return classify_growth(s.degrees); }

/// Entropy estimate from a fit log d_n = h n + k log n + c over the tail.
double entropy_estimate(const std::vector<int>& degrees, double* residual = nullptr);
inline double entropy_estimate(const DegreeSequence& s) { return entropy_estimate(s.degrees); }

struct GrowthMatch {
    bool match = false;
    std::optional<int> first_mismatch;
    std::vector<int> a, b;
    explicit operator bool() const { return match; }
};

/// Termwise comparison of the two degree sequences up to n_max, stopping at
/// the first mismatch. A match is confirmed by a second witness prime.
GrowthMatch growth_match(const MappingSpec& a, const MappingSpec& b, int n_max, const DegreeOptions& opts = {});

/// True when every sampled step is x_{n+1} = A x_{n-1} + B x_n.
bool is_linear_equation(const MappingSpec& spec, long lo = 0, long hi = 4);

} // namespace mulmap
