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
#include <string>
#include <string_view>

namespace mulmap {

enum class errc {
    division_by_zero,
    identically_singular,
    zero_series,
    degenerate_step,
    singular_orbit,
    sample_pole_hit,
    no_branch,
    zero_division,
    unlucky_evaluation,
    too_short,
    all_samples_singular,
    rank_deficient_samples,
    truncation_exhausted,
    no_singularity_entered,
    constraint_violated,
    k_undefined,
    denominator_zero,
    degenerate_start,
    degenerate_z,
    out_of_range,
    no_roots_of_unity,
    manifest_invalid,
    analysis_failed,
};

constexpr std::string_view to_string(errc e) noexcept
{
    switch (e) {
        case errc::division_by_zero: return "DivisionByZero";
        case errc::identically_singular: return "IdenticallySingular";
        case errc::zero_series: return "ZeroSeries";
        case errc::degenerate_step: return "DegenerateStep";
        case errc::singular_orbit: return "SingularOrbit";
        case errc::sample_pole_hit: return "SamplePoleHit";
        case errc::no_branch: return "NoBranch";
        case errc::zero_division: return "ZeroDivision";
        case errc::unlucky_evaluation: return "UnluckyEvaluation";
        case errc::too_short: return "TooShort";
        case errc::all_samples_singular: return "AllSamplesSingular";
        case errc::rank_deficient_samples: return "RankDeficientSamples";
        case errc::truncation_exhausted: return "TruncationExhausted";
        case errc::no_singularity_entered: return "NoSingularityEntered";
        case errc::constraint_violated: return "ConstraintViolated";
        case errc::k_undefined: return "KUndefined";
        case errc::denominator_zero: return "DenominatorZero";
        case errc::degenerate_start: return "DegenerateStart";
        case errc::degenerate_z: return "DegenerateZ";
        case errc::out_of_range: return "OutOfRange";
        case errc::no_roots_of_unity: return "NoRootsOfUnity";
        case errc::manifest_invalid: return "ManifestInvalid";
        case errc::analysis_failed: return "AnalysisFailed";
    }
    return "Unknown";
}

/// Every failure raised by the library. `index()` carries the offending
/// orbit/sequence index when there is one.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what, std::optional<long> index = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + what +
                             (index ? " (index " + std::to_string(*index) + ")" : std::string())),
          code_(code), index_(index), message_(what)
    {
    }

    errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }
    std::optional<long> index() const noexcept { return index_; }

private:
    errc code_;
    std::optional<long> index_;
    std::string message_;
};

} // namespace mulmap
