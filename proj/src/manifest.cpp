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

#include "mulmap/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mulmap/catalogue.hpp"

namespace mulmap {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& what)
{
    throw error(errc::manifest_invalid, path + ": " + what);
}

/// Object view that rejects keys outside an allowed set.
class Fields {
public:
    Fields(const json& j, std::string path, const std::set<std::string>& allowed) : j_(j), path_(std::move(path))
    {
        if (!j.is_object()) invalid(path_, "expected an object");
        for (const auto& [key, value] : j.items()) {
            if (!allowed.count(key)) invalid(at(key), "unknown key");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const std::string& path() const { return path_; }
    bool has(const std::string& key) const { return j_.contains(key); }
    const json* find(const std::string& key) const { return has(key) ? &j_.at(key) : nullptr; }
    const json& get(const std::string& key) const
    {
        if (!has(key)) invalid(at(key), "required key is missing");
        return j_.at(key);
    }

private:
    const json& j_;
    std::string path_;
};

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Exact exact_of(const json& j, const std::string& path)
{
    if (j.is_number_float()) {
        invalid(path, "floating-point numbers are not accepted; write an exact value such as \"3/2\"");
    }
    if (j.is_number_unsigned()) {
        if (j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            invalid(path, "integer too large; write it as a string");
        return Exact(Rational(static_cast<std::int64_t>(j.get<std::uint64_t>())));
    }
    if (j.is_number_integer()) return Exact(Rational(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return parse_exact(j.get<std::string>());
        } catch (const std::exception& e) {
            invalid(path, std::string("not an exact number: ") + e.what());
        }
    }
    invalid(path, "expected an exact number (integer or string)");
}

long int_of(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) invalid(path, "expected an integer");
    if (j.is_number_unsigned() &&
        j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<long>::max()))
        invalid(path, "integer out of range");
    return j.get<long>();
}

int positive_int_of(const json& j, const std::string& path, int max = 1 << 20)
{
    const long v = int_of(j, path);
    if (v < 1 || v > max) invalid(path, "expected an integer in [1, " + std::to_string(max) + "]");
    return static_cast<int>(v);
}

bool bool_of(const json& j, const std::string& path)
{
    if (!j.is_boolean()) invalid(path, "expected true or false");
    return j.get<bool>();
}

std::string string_of(const json& j, const std::string& path)
{
    if (!j.is_string()) invalid(path, "expected a string");
    return j.get<std::string>();
}

const json& array_of(const json& j, const std::string& path)
{
    if (!j.is_array()) invalid(path, "expected an array");
    return j;
}

std::vector<Exact> exact_list(const json& j, const std::string& path)
{
    std::vector<Exact> out;
    const auto& a = array_of(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(exact_of(a[i], index_path(path, i)));
    return out;
}

u64 prime_of(const json& j, const std::string& path)
{
    u64 p = 0;
    if (j.is_number_unsigned()) {
        p = j.get<u64>();
    } else if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            invalid(path, "expected a decimal prime");
        try {
            p = std::stoull(s);
        } catch (const std::exception&) {
            invalid(path, "prime out of range");
        }
    } else {
        invalid(path, "expected a prime (integer or decimal string)");
    }
    if (p < 5 || p >= (u64{1} << 62) || !is_prime(p)) invalid(path, "expected an odd prime in [5, 2^62)");
    return p;
}

std::pair<long, long> range_of(const json& j, const std::string& path)
{
    const auto& a = array_of(j, path);
    if (a.size() != 2) invalid(path, "expected [lo, hi]");
    const long lo = int_of(a[0], index_path(path, 0)), hi = int_of(a[1], index_path(path, 1));
    if (lo > hi) invalid(path, "lo exceeds hi");
    return {lo, hi};
}

RhsSpec::Family family_of(const json& j, const std::string& path)
{
    const auto s = string_of(j, path);
    if (s == "m2") return RhsSpec::Family::m2;
    if (s == "m4") return RhsSpec::Family::m4;
    invalid(path, "expected \"m2\" or \"m4\"");
}

ZConstraint constraint_of(const json& j, const std::string& path)
{
    const auto c = parse_constraint(string_of(j, path));
    if (!c) invalid(path, "expected \"shift4\" or \"shift5\"");
    return *c;
}

KnownInvariant invariant_of(const json& j, const std::string& path)
{
    const auto s = string_of(j, path);
    if (s == "biquadratic-m2") return KnownInvariant::biquadratic_m2;
    if (s == "biquadratic-m4") return KnownInvariant::biquadratic_m4;
    if (s == "squared-ratio") return KnownInvariant::squared_ratio;
    invalid(path, "expected one of biquadratic-m2, biquadratic-m4, squared-ratio");
}

GrowthKind growth_of(const json& j, const std::string& path)
{
    const auto s = string_of(j, path);
    for (auto k : {GrowthKind::bounded, GrowthKind::linear, GrowthKind::quadratic, GrowthKind::exponential}) {
        if (to_string(k) == s) return k;
    }
    invalid(path, "expected one of bounded, linear, quadratic, exponential, linear-equation");
}

/// The single key of a one-of object.
std::string tag_of(const json& j, const std::string& path, const std::set<std::string>& tags)
{
    if (!j.is_object() || j.size() != 1) {
        std::string list;
        for (const auto& t : tags) list += (list.empty() ? "" : ", ") + t;
        invalid(path, "expected an object with exactly one of: " + list);
    }
    const auto key = j.begin().key();
    if (!tags.count(key)) invalid(path + "." + key, "unknown key");
    return key;
}

ParameterSequence sequence_of(const json& j, const std::string& path)
{
    if (!j.is_object()) return ParameterSequence::constant(exact_of(j, path));
    const auto tag = tag_of(j, path, {"constant", "geometric", "table", "shift4", "shift5", "structured", "random"});
    const auto& body = j.at(tag);
    const std::string p = path + "." + tag;
    if (tag == "constant") return ParameterSequence::constant(exact_of(body, p));
    if (tag == "geometric") {
        Fields f(body, p, {"first", "ratio"});
        return ParameterSequence::geometric(exact_of(f.get("first"), f.at("first")),
                                            exact_of(f.get("ratio"), f.at("ratio")));
    }
    if (tag == "table") {
        Fields f(body, p, {"first", "values"});
        auto values = exact_list(f.get("values"), f.at("values"));
        if (values.empty()) invalid(f.at("values"), "empty table");
        return ParameterSequence::table(int_of(f.get("first"), f.at("first")), std::move(values));
    }
    auto optional_exact = [](const Fields& f, const std::string& key) {
        return f.has(key) ? exact_of(*f.find(key), f.at(key)) : Exact(1);
    };
    auto optional_list = [](const Fields& f, const std::string& key, std::size_t period) {
        if (!f.has(key)) return std::vector<Exact>{};
        auto v = exact_list(*f.find(key), f.at(key));
        if (v.size() != period) invalid(f.at(key), "expected " + std::to_string(period) + " values");
        return v;
    };
    if (tag == "shift4") {
        Fields f(body, p, {"base", "offset", "rho2", "rho3"});
        return shift4_solution(optional_exact(f, "base"), optional_exact(f, "offset"), optional_list(f, "rho2", 2),
                               optional_list(f, "rho3", 3));
    }
    if (tag == "shift5") {
        Fields f(body, p, {"base", "offset", "alternating", "rho2", "rho3"});
        return shift5_solution(optional_exact(f, "base"), optional_exact(f, "offset"),
                               optional_exact(f, "alternating"), optional_list(f, "rho2", 2),
                               optional_list(f, "rho3", 3));
    }
    if (tag == "structured") {
        Fields f(body, p, {"base", "offset", "alternating", "rho2", "rho3", "rho4"});
        ParameterSequence::Structured s;
        s.base = optional_exact(f, "base");
        s.offset = optional_exact(f, "offset");
        s.alternating = optional_exact(f, "alternating");
        s.rho2 = optional_list(f, "rho2", 2);
        s.rho3 = optional_list(f, "rho3", 3);
        s.rho4 = optional_list(f, "rho4", 4);
        return ParameterSequence::structured(std::move(s));
    }
    // random
    Fields f(body, p, {"seed", "range"});
    const auto seed = static_cast<std::uint64_t>(int_of(f.get("seed"), f.at("seed")));
    auto [lo, hi] = f.has("range") ? range_of(*f.find("range"), f.at("range")) : std::pair{kWindowLo, kWindowHi};
    std::mt19937_64 rng(seed);
    return random_sequence(rng, lo, hi);
}

RhsSpec rhs_of(const json& j, const std::string& path)
{
    const auto tag = tag_of(j, path, {"power", "monomial", "sequence", "two-factor"});
    const auto& body = j.at(tag);
    const std::string p = path + "." + tag;
    if (tag == "power") {
        Fields f(body, p, {"N", "f"});
        return RhsSpec::power(f.has("f") ? exact_of(f.get("f"), f.at("f")) : Exact(1), int_of(f.get("N"), f.at("N")));
    }
    if (tag == "monomial") {
        Fields f(body, p, {"scale", "factors"});
        std::vector<ZFactor> factors;
        const auto& a = array_of(f.get("factors"), f.at("factors"));
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto fp = index_path(f.at("factors"), i);
            if (!a[i].is_array() || a[i].size() != 2) invalid(fp, "expected [shift, exponent]");
            factors.push_back({int_of(a[i][0], fp + "[0]"), int_of(a[i][1], fp + "[1]")});
        }
        return RhsSpec::monomial(f.has("scale") ? exact_of(f.get("scale"), f.at("scale")) : Exact(1),
                                 std::move(factors));
    }
    if (tag == "sequence") return RhsSpec::sequence(sequence_of(body, p));
    Fields f(body, p, {"family", "kappa"});
    return RhsSpec::two_factor(family_of(f.get("family"), f.at("family")), exact_of(f.get("kappa"), f.at("kappa")));
}

const std::set<std::string> kForms = {"catalogue",  "autonomous", "ratio",        "factorised",
                                      "explicit",   "third-kind", "hky",          "hky-free-z",
                                      "gambier",    "quadratic-m2", "quadratic-m4"};

MappingBlock mapping_of(const json& j, const std::string& path)
{
    if (!j.is_object()) invalid(path, "expected an object");
    if (!j.contains("form")) invalid(path + ".form", "required key is missing");
    const auto form = string_of(j.at("form"), path + ".form");
    if (!kForms.count(form)) invalid(path + ".form", "unknown form '" + form + "'");

    std::set<std::string> keys{"id", "form"};
    if (form == "catalogue") keys.insert("entry");
    else if (form == "autonomous") keys.insert({"N", "f", "z"});
    else if (form == "ratio") keys.insert({"z", "rhs"});
    else if (form == "factorised") keys.insert({"z", "ancillary", "confining"});
    else if (form == "explicit") keys.insert({"a", "b", "c", "d"});
    else if (form == "third-kind") keys.insert({"q", "g_power"});
    else if (form == "hky") keys.insert({"q", "z_start"});
    else if (form == "hky-free-z") keys.insert({"q", "z"});
    else keys.insert("z");
    Fields f(j, path, keys);

    MappingBlock b;
    b.id = string_of(f.get("id"), f.at("id"));
    if (b.id.empty()) invalid(f.at("id"), "empty id");
    b.form = form;
    std::function<MappingSpec()> make;

    if (form == "catalogue") {
        const auto entry = string_of(f.get("entry"), f.at("entry"));
        try {
            make = catalogue_entry(entry).make;
        } catch (const error& e) {
            if (e.code() != errc::out_of_range) throw;
            invalid(f.at("entry"), "no catalogue entry '" + entry + "'");
        }
    } else if (form == "autonomous") {
        const long N = int_of(f.get("N"), f.at("N"));
        const Exact fv = f.has("f") ? exact_of(f.get("f"), f.at("f")) : Exact(1);
        const Exact z = exact_of(f.get("z"), f.at("z"));
        make = [=] { return MappingSpec::autonomous(z, N, fv); };
    } else if (form == "ratio") {
        auto z = sequence_of(f.get("z"), f.at("z"));
        auto rhs = rhs_of(f.get("rhs"), f.at("rhs"));
        make = [z, rhs] { return MappingSpec::ratio("", z, rhs); };
    } else if (form == "factorised") {
        auto z = sequence_of(f.get("z"), f.at("z"));
        if (f.has("ancillary") == f.has("confining")) invalid(f.path(), "give exactly one of ancillary, confining");
        if (f.has("ancillary")) {
            std::vector<ParameterSequence> mu;
            const auto& a = array_of(f.get("ancillary"), f.at("ancillary"));
            for (std::size_t i = 0; i < a.size(); ++i) mu.push_back(sequence_of(a[i], index_path(f.at("ancillary"), i)));
            if (mu.size() != 2 && mu.size() != 8) invalid(f.at("ancillary"), "expected 2 or 8 sequences");
            make = [z, mu] { return MappingSpec::factorised("", z, mu); };
        } else {
            Fields c(f.get("confining"), f.at("confining"), {"family", "kappa", "periodic", "range"});
            const auto fam = family_of(c.get("family"), c.at("family"));
            const Exact kappa = exact_of(c.get("kappa"), c.at("kappa"));
            std::vector<Exact> periodic;
            if (c.has("periodic")) {
                periodic = exact_list(c.get("periodic"), c.at("periodic"));
                const std::size_t want = fam == RhsSpec::Family::m2 ? 3 : 4;
                if (periodic.size() != want) invalid(c.at("periodic"), "expected " + std::to_string(want) + " values");
            }
            auto [lo, hi] = c.has("range") ? range_of(c.get("range"), c.at("range")) : std::pair{kWindowLo, kWindowHi};
            make = [=] { return factorised_family("", z, mu_lambda_solution(z, fam, kappa, periodic, lo, hi)); };
        }
    } else if (form == "explicit") {
        ExplicitCoefficients c;
        const char* names[] = {"a", "b", "c", "d"};
        for (std::size_t i = 0; i < 4; ++i) {
            for (const auto& e : exact_list(f.get(names[i]), f.at(names[i]))) {
                if (!e.is_rational()) invalid(f.at(names[i]), "explicit coefficients must be rational");
                c.abcd[i].push_back(e.r);
            }
        }
        make = [c] { return MappingSpec::explicit_step("", c); };
    } else if (form == "third-kind") {
        auto q = sequence_of(f.get("q"), f.at("q"));
        const long g_power = f.has("g_power") ? int_of(f.get("g_power"), f.at("g_power")) : 2;
        make = [q, g_power] { return third_kind_family(q, g_power); };
    } else if (form == "hky") {
        auto q = sequence_of(f.get("q"), f.at("q"));
        const Exact z0 = exact_of(f.get("z_start"), f.at("z_start"));
        make = [q, z0] { return hky_family(q, z0); };
    } else if (form == "hky-free-z") {
        auto q = sequence_of(f.get("q"), f.at("q"));
        auto z = sequence_of(f.get("z"), f.at("z"));
        make = [q, z] { return hky_family_free_z(q, z); };
    } else {
        auto z = sequence_of(f.get("z"), f.at("z"));
        if (form == "gambier") make = [z] { return gambier_family(z); };
        else if (form == "quadratic-m2") make = [z] { return quadratic_m2_family(z); };
        else make = [z] { return quadratic_m4_family(z); };
    }
    b.build = [make, id = b.id] {
        auto s = make();
        s.id = id;
        return s;
    };
    return b;
}

std::set<std::string> analysis_keys(AnalysisKind k)
{
    std::set<std::string> keys{"id", "kind"};
    switch (k) {
        case AnalysisKind::degrees: keys.insert({"spec", "specs", "n_max", "expect", "class", "entropy_above"}); break;
        case AnalysisKind::growth_match: keys.insert({"specs", "n_max", "expect", "diverge_by"}); break;
        case AnalysisKind::invariant_check: keys.insert({"spec", "specs", "invariant", "z", "trials", "expect"}); break;
        case AnalysisKind::invariant_search:
            keys.insert({"spec", "specs", "degree", "symmetric", "expect", "invariant", "z"});
            break;
        case AnalysisKind::constraint: keys.insert({"z", "constraint", "range", "expect"}); break;
        case AnalysisKind::characteristic: keys.insert({"constraint", "expect_roots"}); break;
        case AnalysisKind::parameter_count: keys.insert({"family", "expect"}); break;
        case AnalysisKind::confine:
            keys.insert({"spec", "specs", "entry", "n0", "expect_length", "expect_confined"});
            break;
        case AnalysisKind::linearise: keys.insert({"scheme", "q", "z", "z_start", "orbits", "steps"}); break;
        case AnalysisKind::equivalence: keys.insert({"spec", "specs", "samples", "range"}); break;
    }
    return keys;
}

bool uses_specs(AnalysisKind k)
{
    return k == AnalysisKind::degrees || k == AnalysisKind::growth_match || k == AnalysisKind::invariant_check ||
           k == AnalysisKind::invariant_search || k == AnalysisKind::confine || k == AnalysisKind::equivalence;
}

AnalysisBlock analysis_of(const json& j, const std::string& path)
{
    if (!j.is_object()) invalid(path, "expected an object");
    if (!j.contains("kind")) invalid(path + ".kind", "required key is missing");
    const auto kind_name = string_of(j.at("kind"), path + ".kind");
    const auto kind = parse_analysis_kind(kind_name);
    if (!kind) invalid(path + ".kind", "unknown analysis kind '" + kind_name + "'");
    Fields f(j, path, analysis_keys(*kind));

    AnalysisBlock a;
    a.kind = *kind;
    a.id = string_of(f.get("id"), f.at("id"));
    if (a.id.empty()) invalid(f.at("id"), "empty id");

    if (uses_specs(a.kind)) {
        if (f.has("spec") && f.has("specs")) invalid(f.path(), "give one of spec, specs");
        if (f.has("spec")) {
            a.specs.push_back(string_of(f.get("spec"), f.at("spec")));
        } else {
            const auto& s = array_of(f.get("specs"), f.at("specs"));
            for (std::size_t i = 0; i < s.size(); ++i) a.specs.push_back(string_of(s[i], index_path(f.at("specs"), i)));
        }
        if (a.specs.empty()) invalid(f.at("specs"), "no mappings named");
        if (a.kind == AnalysisKind::growth_match && a.specs.size() != 2) invalid(f.at("specs"), "expected two mappings");
    }
    auto opt_int = [&](const std::string& key, int max = 1 << 20) -> std::optional<int> {
        if (!f.has(key)) return std::nullopt;
        return positive_int_of(f.get(key), f.at(key), max);
    };

    switch (a.kind) {
        case AnalysisKind::degrees: {
            a.n_max = opt_int("n_max", 64);
            if (a.n_max && *a.n_max < 4) invalid(f.at("n_max"), "n_max must be at least 4");
            if (f.has("expect")) {
                std::vector<int> d;
                const auto& e = array_of(f.get("expect"), f.at("expect"));
                for (std::size_t i = 0; i < e.size(); ++i) {
                    const long v = int_of(e[i], index_path(f.at("expect"), i));
                    if (v < 0) invalid(index_path(f.at("expect"), i), "degrees are non-negative");
                    d.push_back(static_cast<int>(v));
                }
                a.expect_degrees = std::move(d);
            }
            if (f.has("class")) {
                if (f.get("class") == "linear-equation") a.expect_linear_equation = true;
                else a.expect_class = growth_of(f.get("class"), f.at("class"));
            }
            if (f.has("entropy_above")) {
                const Exact e = exact_of(f.get("entropy_above"), f.at("entropy_above"));
                if (!e.is_rational()) invalid(f.at("entropy_above"), "expected a rational");
                a.expect_entropy_above = e.r.big().convert_to<double>();
            }
            break;
        }
        case AnalysisKind::growth_match: {
            a.n_max = opt_int("n_max", 64);
            if (f.has("expect")) {
                const auto e = string_of(f.get("expect"), f.at("expect"));
                if (e != "match" && e != "diverge") invalid(f.at("expect"), "expected \"match\" or \"diverge\"");
                a.expect_match = e == "match";
            }
            a.diverge_by = opt_int("diverge_by", 64);
            if (a.diverge_by && a.expect_match) invalid(f.at("diverge_by"), "only meaningful with \"diverge\"");
            break;
        }
        case AnalysisKind::invariant_check:
            a.invariant = invariant_of(f.get("invariant"), f.at("invariant"));
            a.z = exact_of(f.get("z"), f.at("z"));
            if (auto t = opt_int("trials", 100000)) a.trials = *t;
            if (a.trials < 20) invalid(f.at("trials"), "at least 20 trials");
            if (f.has("expect")) a.expect_conserved = bool_of(f.get("expect"), f.at("expect"));
            break;
        case AnalysisKind::invariant_search: {
            if (auto d = opt_int("degree", 8)) a.degree = *d;
            if (f.has("symmetric")) a.symmetric = bool_of(f.get("symmetric"), f.at("symmetric"));
            if (f.has("expect")) {
                const auto e = string_of(f.get("expect"), f.at("expect"));
                if (e == "found") a.expect_search = SearchExpectation::found;
                else if (e == "none") a.expect_search = SearchExpectation::none;
                else if (e == "contains") a.expect_search = SearchExpectation::contains;
                else invalid(f.at("expect"), "expected \"found\", \"none\" or \"contains\"");
            }
            const bool named = f.has("invariant");
            if (named != f.has("z")) invalid(f.path(), "invariant and z go together");
            if (a.expect_search == SearchExpectation::contains && !named)
                invalid(f.path(), "\"contains\" needs invariant and z");
            if (named) {
                a.invariant = invariant_of(f.get("invariant"), f.at("invariant"));
                a.z = exact_of(f.get("z"), f.at("z"));
                if (a.expect_search == SearchExpectation::any) a.expect_search = SearchExpectation::contains;
            }
            break;
        }
        case AnalysisKind::constraint: {
            a.sequence = sequence_of(f.get("z"), f.at("z"));
            a.constraint = constraint_of(f.get("constraint"), f.at("constraint"));
            if (f.has("range")) std::tie(a.lo, a.hi) = range_of(f.get("range"), f.at("range"));
            if (f.has("expect")) a.expect_satisfied = bool_of(f.get("expect"), f.at("expect"));
            break;
        }
        case AnalysisKind::characteristic:
            a.constraint = constraint_of(f.get("constraint"), f.at("constraint"));
            if (f.has("expect_roots")) a.expect_roots = exact_list(f.get("expect_roots"), f.at("expect_roots"));
            break;
        case AnalysisKind::parameter_count:
            a.family = family_of(f.get("family"), f.at("family"));
            if (f.has("expect")) a.expect_count = static_cast<int>(int_of(f.get("expect"), f.at("expect")));
            break;
        case AnalysisKind::confine:
            if (f.has("entry")) {
                const long e = int_of(f.get("entry"), f.at("entry"));
                if (e < 0 || e > 7) invalid(f.at("entry"), "expected an ancillary index in [0, 7]");
                a.entry = static_cast<std::size_t>(e);
            }
            if (f.has("n0")) a.n0 = int_of(f.get("n0"), f.at("n0"));
            a.expect_length = opt_int("expect_length", 64);
            if (f.has("expect_confined")) a.expect_confined = bool_of(f.get("expect_confined"), f.at("expect_confined"));
            break;
        case AnalysisKind::linearise: {
            const auto s = string_of(f.get("scheme"), f.at("scheme"));
            if (s == "third-kind") a.scheme = LineariseScheme::third_kind;
            else if (s == "two-point") a.scheme = LineariseScheme::two_point;
            else if (s == "gambier") a.scheme = LineariseScheme::gambier;
            else if (s == "gambier-qrt") a.scheme = LineariseScheme::gambier_qrt;
            else invalid(f.at("scheme"), "expected third-kind, two-point, gambier or gambier-qrt");
            auto forbid = [&](const std::string& key) {
                if (f.has(key)) invalid(f.at(key), "not used by scheme " + s);
            };
            switch (a.scheme) {
                case LineariseScheme::third_kind:
                    a.sequence = sequence_of(f.get("q"), f.at("q"));
                    forbid("z");
                    forbid("z_start");
                    break;
                case LineariseScheme::two_point:
                    a.z = exact_of(f.get("z"), f.at("z"));
                    forbid("q");
                    forbid("z_start");
                    break;
                case LineariseScheme::gambier:
                    a.sequence = sequence_of(f.get("q"), f.at("q"));
                    a.z = exact_of(f.get("z_start"), f.at("z_start"));
                    forbid("z");
                    break;
                case LineariseScheme::gambier_qrt:
                    a.sequence = sequence_of(f.get("z"), f.at("z"));
                    forbid("q");
                    forbid("z_start");
                    break;
            }
            if (auto o = opt_int("orbits", 64)) a.orbits = *o;
            a.steps = opt_int("steps", 40);
            if (a.steps && *a.steps < 6) invalid(f.at("steps"), "at least 6 steps");
            break;
        }
        case AnalysisKind::equivalence:
            if (auto s = opt_int("samples", 100000)) a.samples = *s;
            if (f.has("range")) std::tie(a.lo, a.hi) = range_of(f.get("range"), f.at("range"));
            else a.lo = 0, a.hi = 8;
            break;
    }
    return a;
}

OutputBlock output_of(const json& j, const std::string& path)
{
    Fields f(j, path, {"dir", "csv", "json"});
    OutputBlock o;
    auto name = [&](const std::string& key, std::string& slot) {
        if (!f.has(key)) return;
        slot = string_of(f.get(key), f.at(key));
        if (slot.empty()) invalid(f.at(key), "empty path");
    };
    name("dir", o.dir);
    name("csv", o.csv);
    name("json", o.json);
    if (o.csv == o.json) invalid(f.path(), "csv and json must be different files");
    return o;
}

} // namespace

std::string to_string(AnalysisKind k)
{
    switch (k) {
        case AnalysisKind::degrees: return "degrees";
        case AnalysisKind::growth_match: return "growth-match";
        case AnalysisKind::invariant_check: return "invariant-check";
        case AnalysisKind::invariant_search: return "invariant-search";
        case AnalysisKind::constraint: return "constraint";
        case AnalysisKind::characteristic: return "characteristic";
        case AnalysisKind::parameter_count: return "parameter-count";
        case AnalysisKind::confine: return "confine";
        case AnalysisKind::linearise: return "linearise";
        case AnalysisKind::equivalence: return "equivalence";
    }
    return "?";
}

std::optional<AnalysisKind> parse_analysis_kind(std::string_view name)
{
    for (int i = 0; i <= static_cast<int>(AnalysisKind::equivalence); ++i) {
        const auto k = static_cast<AnalysisKind>(i);
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::string to_string(LineariseScheme s)
{
    switch (s) {
        case LineariseScheme::third_kind: return "third-kind";
        case LineariseScheme::two_point: return "two-point";
        case LineariseScheme::gambier: return "gambier";
        case LineariseScheme::gambier_qrt: return "gambier-qrt";
    }
    return "?";
}

const MappingBlock* Manifest::mapping(const std::string& id) const
{
    for (const auto& m : mappings)
        if (m.id == id) return &m;
    return nullptr;
}

Manifest parse_manifest(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
        throw error(errc::manifest_invalid, "line " + std::to_string(line) + ": " + e.what());
    }
    Fields top(j, "", {"seed", "primes", "mappings", "analyses", "output"});

    Manifest m;
    if (top.has("seed")) {
        const long s = int_of(top.get("seed"), "seed");
        if (s < 0) invalid("seed", "expected a non-negative integer");
        m.seed = static_cast<std::uint64_t>(s);
    }
    if (top.has("primes")) {
        const auto& p = array_of(top.get("primes"), "primes");
        if (p.size() > 2) invalid("primes", "at most two primes (working, witness)");
        for (std::size_t i = 0; i < p.size(); ++i) m.primes.push_back(prime_of(p[i], index_path("primes", i)));
        if (m.primes.size() == 2 && m.primes[0] == m.primes[1]) invalid("primes", "the two primes must differ");
    }
    if (top.has("mappings")) {
        const auto& a = array_of(top.get("mappings"), "mappings");
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto b = mapping_of(a[i], index_path("mappings", i));
            if (m.mapping(b.id)) invalid(index_path("mappings", i) + ".id", "duplicate id '" + b.id + "'");
            m.mappings.push_back(std::move(b));
        }
    }
    if (top.has("analyses")) {
        const auto& a = array_of(top.get("analyses"), "analyses");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto path = index_path("analyses", i);
            auto b = analysis_of(a[i], path);
            if (!ids.insert(b.id).second) invalid(path + ".id", "duplicate id '" + b.id + "'");
            for (const auto& s : b.specs)
                if (!m.mapping(s)) invalid(path, "unknown mapping '" + s + "'");
            m.analyses.push_back(std::move(b));
        }
    }
    if (top.has("output")) m.output = output_of(top.get("output"), "output");
    return m;
}

Manifest load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::manifest_invalid, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_manifest(ss.str());
    } catch (const error& e) {
        throw error(errc::manifest_invalid, path.string() + ": " + e.message());
    }
}

Manifest catalogue_manifest()
{
    Manifest m;
    for (const auto& e : catalogue()) {
        m.mappings.push_back({e.id, "catalogue", [make = e.make, id = e.id] {
                                  auto s = make();
                                  s.id = id;
                                  return s;
                              }});
    }
    return m;
}

} // namespace mulmap
