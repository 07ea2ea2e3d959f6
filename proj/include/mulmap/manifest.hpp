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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mulmap/confinement.hpp"
#include "mulmap/growth.hpp"
#include "mulmap/invariants.hpp"
#include "mulmap/mapping.hpp"

namespace mulmap {

/// A named mapping. Construction is deferred to analysis time so that a
/// mapping whose parameters break a constraint fails the analyses that use
/// it instead of the whole manifest.
struct MappingBlock {
    std::string id;
    std::string form;
    std::function<MappingSpec()> build;
};

enum class AnalysisKind {
    degrees,
    growth_match,
    invariant_check,
    invariant_search,
    constraint,
    characteristic,
    parameter_count,
    confine,
    linearise,
    equivalence,
};

std::string to_string(AnalysisKind k);
std::optional<AnalysisKind> parse_analysis_kind(std::string_view name);

enum class SearchExpectation { any, found, none, contains };
enum class LineariseScheme { third_kind, two_point, gambier, gambier_qrt };
std::string to_string(LineariseScheme s);

/// One analysis block. Only the fields of its kind are meaningful; the parser
/// rejects keys that do not belong to the kind.
struct AnalysisBlock {
    std::string id;
    AnalysisKind kind = AnalysisKind::degrees;
    std::vector<std::string> specs; // mapping ids

    // degrees / growth-match
    std::optional<int> n_max;
    std::optional<std::vector<int>> expect_degrees;
    std::optional<GrowthKind> expect_class;
    bool expect_linear_equation = false; // class "linear-equation"
    std::optional<double> expect_entropy_above;
    bool expect_match = true;
    std::optional<int> diverge_by;

    // invariant-check / invariant-search
    KnownInvariant invariant = KnownInvariant::biquadratic_m2;
    Exact z{1};
    int trials = 100;
    int degree = 2;
    bool symmetric = false;
    SearchExpectation expect_search = SearchExpectation::any;
    bool expect_conserved = true;

    // constraint / characteristic / parameter-count
    ParameterSequence sequence;
    ZConstraint constraint = ZConstraint::shift4;
    long lo = 0, hi = 16;
    bool expect_satisfied = true;
    std::optional<std::vector<Exact>> expect_roots;
    RhsSpec::Family family = RhsSpec::Family::m2;
    std::optional<int> expect_count;

    // confine
    std::size_t entry = 0;
    long n0 = 4;
    std::optional<int> expect_length;
    bool expect_confined = true;

    // linearise / equivalence
    LineariseScheme scheme = LineariseScheme::third_kind;
    int orbits = 3;
    std::optional<int> steps;
    int samples = 200;
};

struct OutputBlock {
    std::string dir = "mulmap-report";
    std::string csv = "report.csv";
    std::string json = "report.json";
};

struct Manifest {
    std::uint64_t seed = 1;
    /// Working prime first, then the witness. Empty means the defaults.
    std::vector<u64> primes;
    std::vector<MappingBlock> mappings;
    std::vector<AnalysisBlock> analyses;
    OutputBlock output;

    const MappingBlock* mapping(const std::string& id) const;
};

/// Parses and validates a manifest. Throws error(manifest_invalid) naming the
/// line (syntax errors) or the field path (schema errors).
Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::filesystem::path& path);

/// Manifest whose mappings are the whole built-in catalogue, ids unchanged.
Manifest catalogue_manifest();

} // namespace mulmap
