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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mulmap/manifest.hpp"

namespace mulmap {

/// One CSV line: analysis, spec, index, value, verdict. Summary rows have no
/// index; verdict is "pass", "fail" or empty when nothing was asserted.
struct ReportRow {
    std::string analysis;
    std::string spec;
    std::optional<long> index;
    std::string value;
    std::string verdict;
};

struct AnalysisResult {
    std::string id;
    AnalysisKind kind = AnalysisKind::degrees;
    std::vector<ReportRow> rows;
    std::vector<std::string> failures;
    nlohmann::ordered_json detail = nlohmann::ordered_json::object();

    bool passed() const { return failures.empty(); }
};

struct Report {
    std::uint64_t seed = 1;
    std::vector<u64> primes;
    std::vector<AnalysisResult> analyses; // sorted by id

    bool passed() const;
    std::vector<std::string> failures() const;
};

struct RunOverrides {
    std::optional<u64> prime;          // replaces the working prime
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;          // default n_max / steps where a block sets none
    std::optional<int> truncation;     // initial series truncation for confine
    std::optional<std::string> out_dir;
    std::optional<std::filesystem::path> golden_dir;
    bool fail_fast = false;
};

/// Runs every analysis block. Analysis errors are recorded as failures, never
/// thrown; only an invalid override throws.
Report execute(const Manifest& m, const RunOverrides& o = {});

/// Rows of all analyses, sorted by (analysis, spec, index) with summary rows
/// last, under a fixed header line.
std::string to_csv(const Report& r);
std::string to_json(const Report& r);

struct RunOutcome {
    int exit_status = 0; // 0 iff every assertion passed (and golden files matched)
    Report report;
    std::vector<std::string> failures;
    std::vector<std::filesystem::path> written;
};

/// Executes a manifest and writes its CSV and JSON reports. With a golden
/// directory the fresh reports are also compared byte for byte against the
/// files of the same name there.
RunOutcome run(const Manifest& m, const RunOverrides& o = {});
RunOutcome run(const std::filesystem::path& manifest, const RunOverrides& o = {});

} // namespace mulmap
