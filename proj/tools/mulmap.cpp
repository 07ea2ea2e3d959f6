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

// Command-line front end. Every subcommand other than `run` and `catalogue`
// assembles a one-analysis manifest and goes through the same runner.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mulmap/catalogue.hpp"
#include "mulmap/report.hpp"

using namespace mulmap;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct Globals {
    std::optional<std::string> prime;
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
    std::optional<int> truncation;
    std::optional<std::string> out;
    bool fail_fast = false;
};

RunOverrides overrides(const Globals& g)
{
    RunOverrides o;
    if (g.prime) {
        try {
            std::size_t used = 0;
            o.prime = std::stoull(*g.prime, &used);
            if (used != g.prime->size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw error(errc::manifest_invalid, "--prime: expected a decimal prime");
        }
    }
    o.seed = g.seed;
    o.steps = g.steps;
    o.truncation = g.truncation;
    o.out_dir = g.out;
    o.fail_fast = g.fail_fast;
    return o;
}

json read_json(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::manifest_invalid, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw error(errc::manifest_invalid, path + ": " + e.what());
    }
}

/// JSON value from a command-line literal: JSON if it parses, else a string.
json literal(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return text;
    }
}

/// Mapping blocks for `ids`: taken from --manifest when defined there,
/// otherwise from the built-in catalogue.
json mappings_for(const std::vector<std::string>& ids, const std::string& manifest_path)
{
    json from_file = json::array();
    if (!manifest_path.empty()) {
        auto j = read_json(manifest_path);
        if (j.contains("mappings")) from_file = j.at("mappings");
    }
    json out = json::array();
    for (const auto& id : ids) {
        bool found = false;
        for (const auto& m : from_file) {
            if (m.is_object() && m.value("id", "") == id) {
                out.push_back(m);
                found = true;
                break;
            }
        }
        if (!found) out.push_back({{"id", id}, {"form", "catalogue"}, {"entry", id}});
    }
    return out;
}

void print_failures(const std::vector<std::string>& failures)
{
    if (failures.empty()) return;
    std::cerr << "AnalysisFailed: " << failures.size() << " failure(s)\n";
    for (const auto& f : failures) std::cerr << "  " << f << "\n";
}

/// Runs a generated manifest: CSV to stdout, report files only with --out.
int run_generated(const json& manifest, const Globals& g)
{
    const auto m = parse_manifest(manifest.dump());
    const auto o = overrides(g);
    std::vector<std::string> failures;
    if (g.out) {
        auto outcome = run(m, o);
        std::cout << to_csv(outcome.report);
        failures = outcome.failures;
    } else {
        const auto r = execute(m, o);
        std::cout << to_csv(r);
        failures = r.failures();
    }
    print_failures(failures);
    return failures.empty() ? 0 : kExitFailed;
}

json one_analysis(const json& mappings, json analysis)
{
    json m;
    m["mappings"] = mappings;
    m["analyses"] = json::array({std::move(analysis)});
    return m;
}

void print_catalogue()
{
    for (const auto& e : catalogue()) {
        std::cout << e.id << "\n  relation: " << e.relation << "\n  growth:   " << e.expected << "\n";
        if (!e.degrees.empty()) {
            std::cout << "  degrees: ";
            for (std::size_t i = 0; i < e.degrees.size(); ++i) std::cout << (i ? "," : "") << e.degrees[i];
            std::cout << "\n";
        }
        if (e.parameter_count) std::cout << "  parameters: " << *e.parameter_count << "\n";
    }
}

/// Autonomous counterpart of each deautonomised family.
const std::map<std::string, std::string>& autonomous_of()
{
    static const std::map<std::string, std::string> m{
        {"third-kind", "N=0,f=1"},      {"hky", "N=0,f=-1"},           {"gambier", "N=2,f=1"},
        {"quadratic-m2", "N=-2,f=1"},   {"quadratic-m4", "N=-4,f=1"},  {"factorised-m2", "N=-2,f=1"},
        {"factorised-m4", "N=-4,f=1"},
    };
    return m;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Degree growth, invariants, confinement and linearisation of multiplicative mappings"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--prime", g.prime, "working prime (overrides the manifest)");
    app.add_option("--seed", g.seed, "random seed (overrides the manifest)");
    app.add_option("--steps", g.steps, "default number of steps where an analysis sets none")->check(CLI::Range(4, 64));
    app.add_option("--truncation", g.truncation, "initial series truncation order for confinement")
        ->check(CLI::Range(2, 96));
    app.add_option("--out", g.out, "output directory for report files");
    app.add_flag("--fail-fast", g.fail_fast, "stop at the first failing analysis");

    std::string manifest_path, golden;
    auto* run_cmd = app.add_subcommand("run", "run every analysis of a manifest");
    run_cmd->fallthrough();
    run_cmd->add_option("manifest", manifest_path, "manifest file (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--golden", golden, "directory of expected reports to compare against")
        ->check(CLI::ExistingDirectory);

    auto* cat_cmd = app.add_subcommand("catalogue", "list the built-in mappings");
    cat_cmd->fallthrough();

    std::vector<std::string> specs;
    std::string spec_manifest;
    auto* deg_cmd = app.add_subcommand("degrees", "degree sequences and growth class");
    deg_cmd->fallthrough();
    deg_cmd->add_option("specs", specs, "catalogue ids or mapping ids from --manifest")->required();
    deg_cmd->add_option("--manifest", spec_manifest, "manifest providing mapping definitions")
        ->check(CLI::ExistingFile);

    std::string spec;
    int degree = 2;
    bool symmetric = false;
    std::string check_name, z_text;
    auto* inv_cmd = app.add_subcommand("invariant", "search for, or check, an invariant");
    inv_cmd->fallthrough();
    inv_cmd->add_option("spec", spec, "autonomous mapping id")->required();
    inv_cmd->add_option("--manifest", spec_manifest, "manifest providing mapping definitions")
        ->check(CLI::ExistingFile);
    inv_cmd->add_option("--degree", degree, "bidegree of the search")->check(CLI::Range(1, 8));
    inv_cmd->add_flag("--symmetric", symmetric, "restrict the search to symmetric polynomials");
    inv_cmd->add_option("--check", check_name, "closed-form invariant to verify instead of searching")
        ->check(CLI::IsMember({"biquadratic-m2", "biquadratic-m4", "squared-ratio"}));
    inv_cmd->add_option("--z", z_text, "z of the closed-form invariant (exact)");

    int entry = 0;
    long n0 = 4;
    auto* conf_cmd = app.add_subcommand("confine", "follow a singularity of a factorised mapping");
    conf_cmd->fallthrough();
    conf_cmd->add_option("spec", spec, "factorised mapping id")->required();
    conf_cmd->add_option("--manifest", spec_manifest, "manifest providing mapping definitions")
        ->check(CLI::ExistingFile);
    conf_cmd->add_option("--entry", entry, "ancillary factor through which the singularity is entered")
        ->check(CLI::Range(0, 7));
    conf_cmd->add_option("--n0", n0, "index of the singular iterate");

    std::string scheme, q_text;
    int orbits = 3;
    auto* lin_cmd = app.add_subcommand("linearise", "verify a linearisation scheme on sampled orbits");
    lin_cmd->fallthrough();
    lin_cmd->add_option("scheme", scheme, "third-kind, two-point, gambier or gambier-qrt")
        ->required()
        ->check(CLI::IsMember({"third-kind", "two-point", "gambier", "gambier-qrt"}));
    lin_cmd->add_option("--q", q_text, "q sequence as a JSON sequence literal");
    lin_cmd->add_option("--z", z_text, "z: exact value (two-point) or JSON sequence literal (gambier-qrt)");
    std::string z_start;
    lin_cmd->add_option("--z-start", z_start, "initial z of the gambier scheme (exact)");
    lin_cmd->add_option("--orbits", orbits, "number of random orbits")->check(CLI::Range(1, 64));

    std::string family;
    bool violate = false;
    auto* deauto_cmd = app.add_subcommand("deauto", "compare a deautonomised family with its autonomous map");
    deauto_cmd->fallthrough();
    deauto_cmd->add_option("family", family, "deautonomised catalogue id")->required();
    deauto_cmd->add_flag("--violate", violate, "use parameters that break the family's constraint");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run_cmd) {
            auto o = overrides(g);
            if (!golden.empty()) o.golden_dir = golden;
            const auto outcome = run(std::filesystem::path(manifest_path), o);
            for (const auto& p : outcome.written) std::cout << "wrote " << p.string() << "\n";
            const auto& r = outcome.report;
            std::size_t passed = 0;
            for (const auto& a : r.analyses) passed += a.passed();
            std::cout << passed << " of " << r.analyses.size() << " analyses passed\n";
            print_failures(outcome.failures);
            return outcome.exit_status;
        }
        if (*cat_cmd) {
            print_catalogue();
            return 0;
        }
        if (*deg_cmd) {
            json a{{"id", "degrees"}, {"kind", "degrees"}, {"specs", specs}};
            // A single catalogue entry is checked against its recorded sequence.
            if (specs.size() == 1 && spec_manifest.empty()) {
                try {
                    const auto& e = catalogue_entry(specs[0]);
                    if (!e.degrees.empty()) a["expect"] = e.degrees;
                    for (const char* k : {"bounded", "linear", "quadratic", "exponential"})
                        if (e.expected == k) a["class"] = k;
                } catch (const error& e) {
                    if (e.code() != errc::out_of_range) throw;
                }
            }
            return run_generated(one_analysis(mappings_for(specs, spec_manifest), a), g);
        }
        if (*inv_cmd) {
            json a{{"id", "invariant"}, {"spec", spec}};
            if (!check_name.empty()) {
                if (z_text.empty()) throw error(errc::manifest_invalid, "--check needs --z");
                a["kind"] = "invariant-check";
                a["invariant"] = check_name;
                a["z"] = literal(z_text);
            } else {
                a["kind"] = "invariant-search";
                a["degree"] = degree;
                a["symmetric"] = symmetric;
            }
            return run_generated(one_analysis(mappings_for({spec}, spec_manifest), a), g);
        }
        if (*conf_cmd) {
            json a{{"id", "confine"}, {"kind", "confine"}, {"spec", spec}, {"entry", entry}, {"n0", n0}};
            return run_generated(one_analysis(mappings_for({spec}, spec_manifest), a), g);
        }
        if (*lin_cmd) {
            json a{{"id", "linearise"}, {"kind", "linearise"}, {"scheme", scheme}, {"orbits", orbits}};
            const json random_q{{"random", {{"seed", 1}}}};
            if (scheme == "third-kind") {
                a["q"] = q_text.empty() ? random_q : literal(q_text);
            } else if (scheme == "two-point") {
                a["z"] = z_text.empty() ? json("7/2") : literal(z_text);
            } else if (scheme == "gambier") {
                a["q"] = q_text.empty() ? random_q : literal(q_text);
                a["z_start"] = z_start.empty() ? json("7/3") : literal(z_start);
            } else {
                a["z"] = z_text.empty() ? random_q : literal(z_text);
            }
            return run_generated(one_analysis(json::array(), a), g);
        }
        if (*deauto_cmd) {
            const auto it = autonomous_of().find(family);
            if (it == autonomous_of().end()) throw error(errc::manifest_invalid, "no deautonomised family '" + family + "'");
            json mappings = mappings_for({it->second, family}, "");
            if (violate) {
                // Same family shape with parameters outside its constraint.
                const json random_seq{{"random", {{"seed", 7}}}};
                json& m = mappings[1];
                m = {{"id", family}};
                if (family == "third-kind") m.update({{"form", "third-kind"}, {"q", random_seq}, {"g_power", 3}});
                else if (family == "hky") m.update({{"form", "hky-free-z"}, {"q", random_seq}, {"z", {{"random", {{"seed", 8}}}}}});
                else if (family == "gambier") m.update({{"form", "ratio"}, {"z", random_seq}, {"rhs", {{"sequence", {{"random", {{"seed", 8}}}}}}}});
                else if (family == "quadratic-m2" || family == "quadratic-m4") m.update({{"form", family}, {"z", random_seq}});
                else m.update({{"form", "factorised"}, {"z", random_seq}, {"ancillary", json::array({random_seq, {{"random", {{"seed", 8}}}}})}});
            }
            json a{{"id", "deauto"}, {"kind", "growth-match"}, {"specs", {it->second, family}}};
            if (violate) a["expect"] = "diverge";
            return run_generated(one_analysis(mappings, a), g);
        }
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == errc::manifest_invalid ? kExitInvalid : kExitFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return 0;
}
