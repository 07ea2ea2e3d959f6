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

#include "mulmap/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mulmap/catalogue.hpp"
#include "mulmap/linearisation.hpp"

namespace mulmap {

namespace {

using ojson = nlohmann::ordered_json;

std::string fixed4(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

template <class T>
std::string str(const T& v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

/// Working prime, witness prime and the first of them that has 12th roots of
/// unity (falling back to the default witness).
struct Fields {
    PrimeField working;
    PrimeField witness;
    PrimeField roots;
};

Fields fields_for(const Manifest& m, const RunOverrides& o)
{
    u64 w = m.primes.empty() ? kDefaultPrime : m.primes[0];
    if (o.prime) w = *o.prime;
    u64 v = m.primes.size() > 1 ? m.primes[1] : default_witness_prime();
    if (v == w) v = w == default_witness_prime() ? kDefaultPrime : default_witness_prime();
    const u64 r = w % 12 == 1 ? w : v % 12 == 1 ? v : default_witness_prime();
    return {PrimeField(w), PrimeField(v), PrimeField(r)};
}

/// Independent stream per analysis, fixed by (seed, analysis id).
std::mt19937_64 stream(std::uint64_t seed, const std::string& id)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : id) h = (h ^ c) * 1099511628211ull;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

struct Context {
    const Manifest& m;
    const RunOverrides& o;
    Fields f;
    std::uint64_t seed;
};

class Recorder {
public:
    explicit Recorder(AnalysisResult& r) : r_(r) {}

    void row(const std::string& spec, std::optional<long> index, std::string value, std::string verdict = "")
    {
        r_.rows.push_back({r_.id, spec, index, std::move(value), std::move(verdict)});
    }
    /// Records an assertion; returns its verdict string.
    std::string check(bool ok, const std::string& spec, const std::string& what)
    {
        if (!ok) r_.failures.push_back(r_.id + ": " + spec + ": " + what);
        return ok ? "pass" : "fail";
    }
    void fail(const std::string& spec, const std::string& what) { check(false, spec, what); }
    ojson& detail() { return r_.detail; }

private:
    AnalysisResult& r_;
};

MappingSpec build(const Context& c, const std::string& id)
{
    const auto* b = c.m.mapping(id);
    if (!b) throw std::invalid_argument("unknown mapping '" + id + "'");
    return b->build();
}

ojson primes_json(const std::vector<u64>& ps)
{
    ojson a = ojson::array();
    for (u64 p : ps) a.push_back(std::to_string(p));
    return a;
}

void run_degrees(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    int n_max = a.n_max.value_or(c.o.steps.value_or(16));
    if (a.expect_degrees && !a.n_max) n_max = std::max<int>(n_max, static_cast<int>(a.expect_degrees->size()) - 1);
    DegreeOptions opts;
    opts.primes = {c.f.working.modulus(), c.f.witness.modulus()};
    opts.seed = c.seed;
    for (const auto& id : a.specs) {
        const auto spec = build(c, id);
        const auto seq = degree_sequence(spec, n_max, opts);
        const auto& d = seq.degrees;
        for (std::size_t i = 0; i < d.size(); ++i) {
            std::string verdict;
            if (a.expect_degrees && i < a.expect_degrees->size()) {
                const int want = (*a.expect_degrees)[i];
                verdict = rec.check(d[i] == want, id,
                                    "degree at n=" + std::to_string(i) + " is " + std::to_string(d[i]) +
                                        ", expected " + std::to_string(want));
            }
            rec.row(id, static_cast<long>(i), std::to_string(d[i]), verdict);
        }
        if (a.expect_degrees && a.expect_degrees->size() > d.size()) {
            rec.fail(id, "sequence stopped at n=" + std::to_string(d.size() - 1) + " (degree cap)");
        }
        const auto g = classify_growth(seq);
        std::string verdict;
        bool ok = true;
        std::string what;
        if (a.expect_class && g.kind != *a.expect_class) {
            ok = false;
            what = "class " + to_string(g.kind) + ", expected " + to_string(*a.expect_class);
        }
        if (a.expect_entropy_above && !(g.entropy_estimate > *a.expect_entropy_above)) {
            ok = false;
            what += (what.empty() ? "" : "; ") + std::string("entropy ") + fixed4(g.entropy_estimate) +
                    " not above " + fixed4(*a.expect_entropy_above);
        }
        bool linear_equation = false;
        try {
            linear_equation = is_linear_equation(spec);
        } catch (const error&) {
            // a singular sampled step says nothing either way
        }
        if (a.expect_linear_equation && !linear_equation) {
            ok = false;
            what += (what.empty() ? "" : "; ") + std::string("step is not a linear equation");
        }
        if (a.expect_class || a.expect_entropy_above || a.expect_linear_equation) verdict = rec.check(ok, id, what);
        rec.row(id, std::nullopt,
                "class=" + (linear_equation ? std::string("linear-equation") : to_string(g.kind)) +
                    (g.provisional ? " (provisional)" : "") + " entropy=" + fixed4(g.entropy_estimate),
                verdict);

        ojson& dj = rec.detail()[id];
        dj["degrees"] = d;
        dj["class"] = to_string(g.kind);
        dj["linear_equation"] = linear_equation;
        dj["provisional"] = g.provisional;
        dj["entropy"] = fixed4(g.entropy_estimate);
        dj["witnesses"] = primes_json(seq.prime_witnesses);
        dj["capped"] = seq.capped;
    }
}

void run_growth_match(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    const int n_max = a.n_max.value_or(c.o.steps.value_or(16));
    DegreeOptions opts;
    opts.primes = {c.f.working.modulus(), c.f.witness.modulus()};
    opts.seed = c.seed;
    const std::string label = a.specs[0] + "~" + a.specs[1];
    const auto g = growth_match(build(c, a.specs[0]), build(c, a.specs[1]), n_max, opts);
    for (std::size_t i = 0; i < std::min(g.a.size(), g.b.size()); ++i) {
        rec.row(label, static_cast<long>(i), std::to_string(g.a[i]) + "/" + std::to_string(g.b[i]));
    }
    std::string value = g.match ? "match to n=" + std::to_string(n_max)
                                : "diverge at n=" + std::to_string(g.first_mismatch.value_or(-1));
    bool ok = g.match == a.expect_match;
    std::string what = a.expect_match ? "degree sequences " + value : "sequences still match to n=" + std::to_string(n_max);
    if (ok && !a.expect_match && a.diverge_by && g.first_mismatch && *g.first_mismatch > *a.diverge_by) {
        ok = false;
        what = "divergence at n=" + std::to_string(*g.first_mismatch) + ", expected by n=" + std::to_string(*a.diverge_by);
    }
    rec.row(label, std::nullopt, value, rec.check(ok, label, what));
    ojson& dj = rec.detail()[label];
    dj["a"] = g.a;
    dj["b"] = g.b;
    dj["match"] = g.match;
    if (g.first_mismatch) dj["first_mismatch"] = *g.first_mismatch;
}

std::string invariant_name(KnownInvariant k)
{
    switch (k) {
        case KnownInvariant::biquadratic_m2: return "biquadratic-m2";
        case KnownInvariant::biquadratic_m4: return "biquadratic-m4";
        case KnownInvariant::squared_ratio: return "squared-ratio";
    }
    return "?";
}

void run_invariant_check(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    const auto spec = build(c, a.specs[0]);
    auto rng = stream(c.seed, a.id);
    const std::string& id = a.specs[0];
    long w = 0;
    for (const PrimeField& k : {c.f.working, c.f.witness}) {
        const auto cand = known_invariant(a.invariant, k, a.z);
        const auto r = check_invariant(spec, k, cand, a.trials, rng);
        const bool held = r.conserved && r.valid;
        const std::string verdict =
            rec.check(held == a.expect_conserved, id,
                      invariant_name(a.invariant) + (held ? " conserved" : " not conserved") + " mod " +
                          std::to_string(k.modulus()));
        rec.row(id, w++,
                "p=" + std::to_string(k.modulus()) + (held ? " conserved" : " broken") +
                    " tested=" + std::to_string(r.tested) + " excluded=" + std::to_string(r.excluded),
                verdict);
    }
    rec.detail()["invariant"] = invariant_name(a.invariant);
    rec.detail()["z"] = a.z.str();
}

template <class F>
ojson grid_json(const Matrix<F>& g)
{
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < g.cols(); ++j) row.push_back(str(g(i, j)));
        rows.push_back(row);
    }
    return rows;
}

void run_invariant_search(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    const auto spec = build(c, a.specs[0]);
    const std::string& id = a.specs[0];
    auto rng = stream(c.seed, a.id);
    const auto& k = c.f.working;
    const auto s = search_invariant(spec, k, a.degree, a.symmetric, rng);
    const bool found = !s.basis.empty() || s.squared.has_value();
    std::string verdict;
    switch (a.expect_search) {
        case SearchExpectation::any: break;
        case SearchExpectation::found: verdict = rec.check(found, id, "no invariant found"); break;
        case SearchExpectation::none: verdict = rec.check(!found, id, "an invariant was found"); break;
        case SearchExpectation::contains: {
            const auto known = known_invariant(a.invariant, k, a.z);
            verdict = rec.check(pencil_contains(s, known), id,
                                "pencil does not contain " + invariant_name(a.invariant));
            break;
        }
    }
    rec.row(id, std::nullopt,
            "degree=" + std::to_string(a.degree) + (a.symmetric ? " symmetric" : "") +
                " pencil=" + std::to_string(s.pencil.size()) + " candidates=" + std::to_string(s.basis.size()) +
                " squared=" + (s.squared ? "yes" : "no"),
            verdict);
    ojson& dj = rec.detail();
    dj["prime"] = std::to_string(k.modulus());
    dj["pencil"] = ojson::array();
    for (const auto& p : s.pencil) dj["pencil"].push_back(grid_json(p));
    if (s.squared) dj["squared"] = {{"num", grid_json(s.squared->num)}, {"den", grid_json(s.squared->den)}};
}

void run_constraint(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    const std::string id = to_string(a.constraint);
    auto report = [&](const auto& k) {
        const auto r = constraint_check_z(k, a.sequence, a.constraint, a.lo, a.hi);
        std::optional<long> first_bad;
        for (std::size_t i = 0; i < r.indices.size(); ++i) {
            const bool zero = r.residuals[i] == zero_like(r.residuals[i]);
            if (!zero && !first_bad) first_bad = r.indices[i];
            rec.row(id, r.indices[i], str(r.residuals[i]));
        }
        // The field residual can vanish by accident; the verdict is exact.
        if (!r.satisfied && !first_bad) first_bad = r.indices.front();
        return std::pair{r.satisfied, first_bad};
    };
    std::pair<bool, std::optional<long>> res;
    bool rational = true;
    for (long n = a.lo - 1; n <= a.hi + 5 && rational; ++n) rational = a.sequence.exact_at(n).is_rational();
    res = rational ? report(RationalField{}) : report(c.f.roots);
    const auto [sat, bad] = res;
    const std::string what = sat ? id + " constraint " + formula(a.constraint) + " holds but was expected to fail"
                                 : id + " constraint " + formula(a.constraint) + " violated at n=" +
                                       std::to_string(bad.value_or(a.lo));
    rec.row(id, std::nullopt, sat ? "satisfied" : "violated at n=" + std::to_string(bad.value_or(a.lo)),
            rec.check(sat == a.expect_satisfied, id, what));
    rec.detail()["formula"] = formula(a.constraint);
    rec.detail()["range"] = {a.lo, a.hi};
    rec.detail()["sequence"] = a.sequence.describe();
}

void run_characteristic(const Context&, const AnalysisBlock& a, Recorder& rec)
{
    const std::string id = to_string(a.constraint);
    const auto poly = characteristic_polynomial(a.constraint);
    for (std::size_t i = 0; i < poly.size(); ++i) rec.row(id + "/coefficient", static_cast<long>(i), std::to_string(poly[i]));
    const auto roots = characteristic_roots(a.constraint);
    std::vector<std::string> got;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        got.push_back(roots[i].str());
        rec.row(id + "/root", static_cast<long>(i), roots[i].str());
    }
    std::string verdict;
    if (a.expect_roots) {
        std::vector<std::string> want;
        for (const auto& r : *a.expect_roots) want.push_back(r.str());
        std::sort(want.begin(), want.end());
        auto sorted = got;
        std::sort(sorted.begin(), sorted.end());
        std::string list;
        for (const auto& r : got) list += (list.empty() ? "" : " ") + r;
        verdict = rec.check(sorted == want, id, "roots " + list + " differ from the expected multiset");
    }
    rec.row(id, std::nullopt, "degree=" + std::to_string(poly.size() - 1) + " roots=" + std::to_string(roots.size()),
            verdict);
    rec.detail()["coefficients"] = poly;
    rec.detail()["roots"] = got;
}

void run_parameter_count(const Context&, const AnalysisBlock& a, Recorder& rec)
{
    const std::string id = a.family == RhsSpec::Family::m2 ? "m2" : "m4";
    const int n = parameter_count(a.family);
    std::string verdict;
    if (a.expect_count) {
        verdict = rec.check(n == *a.expect_count, id,
                            "parameter count " + std::to_string(n) + ", expected " + std::to_string(*a.expect_count));
    }
    rec.row(id, std::nullopt, std::to_string(n), verdict);
    rec.detail()["count"] = n;
    rec.detail()["without_periodic_parts"] = parameter_count(a.family, {false, false, false, false});
}

void run_confine(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    const auto spec = build(c, a.specs[0]);
    const std::string& id = a.specs[0];
    auto rng = stream(c.seed, a.id);
    TraceOptions opt;
    if (c.o.truncation) opt.truncation = *c.o.truncation;
    const auto p = confinement_trace(spec, c.f.roots, a.entry, a.n0, rng, opt);
    for (std::size_t i = 0; i < p.valuations.size(); ++i) {
        const long n = p.entry_index + static_cast<long>(i);
        rec.row(id, n,
                "valuation=" + std::to_string(p.valuations[i]) + (n <= p.exit_index ? " singular" : " regular"));
    }
    std::string verdict = "pass";
    bool ok = p.confined == a.expect_confined;
    std::string what = p.confined ? "confined, expected unconfined" : "unconfined within the horizon";
    if (ok && a.expect_length && p.confined && p.pattern_length != *a.expect_length) {
        ok = false;
        what = "pattern length " + std::to_string(p.pattern_length) + ", expected " + std::to_string(*a.expect_length);
    }
    verdict = rec.check(ok, id, what);
    rec.row(id, std::nullopt,
            p.confined ? "confined length=" + std::to_string(p.pattern_length) + " exit=" + std::to_string(p.exit_index)
                       : "unconfined within " + std::to_string(opt.horizon) + " steps",
            verdict);
    ojson& dj = rec.detail();
    dj["entry"] = p.entry;
    dj["exit"] = p.exit;
    dj["entry_index"] = p.entry_index;
    dj["exit_index"] = p.exit_index;
    dj["pattern_length"] = p.pattern_length;
    dj["confined"] = p.confined;
    dj["memory_check"] = p.memory_check;
    dj["valuations"] = p.valuations;
    dj["prime"] = std::to_string(c.f.roots.modulus());
}

template <class K>
Orbit<ElementOf<K>> orbit_of(const MappingSpec& spec, const K& k, std::mt19937_64& rng, int len, long n0)
{
    return {n0, random_orbit(spec, k, rng, len, n0)};
}

void run_linearise(const Context& c, const AnalysisBlock& a, Recorder& rec, const PrimeField& k)
{
    auto rng = stream(c.seed, a.id);
    const int steps = a.steps.value_or(c.o.steps.value_or(20));
    const auto scheme = to_string(a.scheme);
    auto label = [&](int o, const char* part = nullptr) {
        return scheme + "/orbit" + std::to_string(o) + (part ? std::string("/") + part : "");
    };
    auto zero = [&](const ModP& v) { return v == k.zero(); };

    for (int o = 0; o < a.orbits; ++o) {
        switch (a.scheme) {
            case LineariseScheme::third_kind: {
                const auto spec = third_kind_family(a.sequence);
                const auto x = orbit_of(spec, k, rng, steps, 2);
                const long first = x.first_index + 1, last = x.last_index() - 1;
                if (last - first + 1 < 6) {
                    rec.fail(label(o), "orbit too short for six pencil values");
                    break;
                }
                const auto k0 = thirdkind_k(k, a.sequence, x.at(first - 1), x.at(first), x.at(first + 1), first);
                for (long n = first; n <= last; ++n) {
                    const auto kn = thirdkind_k(k, a.sequence, x.at(n - 1), x.at(n), x.at(n + 1), n);
                    rec.row(label(o), n, str(kn),
                            rec.check(kn == k0, label(o), "pencil value changes at n=" + std::to_string(n)));
                }
                break;
            }
            case LineariseScheme::two_point: {
                const auto spec = MappingSpec::autonomous(a.z, 0, Exact(-1));
                const auto lambda = hky_lambda(k, a.z);
                const auto x = orbit_of(spec, k, rng, steps + 1, 0);
                const auto C = hky_C(x, lambda);
                for (long n = C.first_index; n < C.last_index(); ++n) {
                    const auto p = C.at(n) * C.at(n + 1);
                    rec.row(label(o, "CC"), n, str(p),
                            rec.check(p == k.one(), label(o), "C_n C_{n+1} != 1 at n=" + std::to_string(n)));
                }
                const auto r = hky_reconstruct(x.at(0), x.at(1), lambda, static_cast<int>(x.x.size()) - 1);
                for (long n = 0; n <= x.last_index(); ++n) {
                    const bool same = r.at(n) == x.at(n);
                    rec.row(label(o, "rebuilt"), n, same ? "equal" : "differs",
                            rec.check(same, label(o), "reconstruction differs at n=" + std::to_string(n)));
                }
                if (x.last_index() < steps)
                    rec.fail(label(o), "orbit stopped at n=" + std::to_string(x.last_index()));
                break;
            }
            case LineariseScheme::gambier: {
                const auto spec = hky_family(a.sequence, a.z);
                const auto x = orbit_of(spec, k, rng, steps, 2);
                const auto y = substitute_y(x);
                const auto rep = gambier_verify(k, a.sequence, y);
                auto table = [&](const char* part, const auto& t) {
                    for (std::size_t i = 0; i < t.indices.size(); ++i) {
                        rec.row(label(o, part), t.indices[i], str(t.residuals[i]),
                                rec.check(zero(t.residuals[i]), label(o, part),
                                          std::string(part) + " residual nonzero at n=" + std::to_string(t.indices[i])));
                    }
                };
                table("y", rep.y_equation);
                table("w", rep.w_equation);
                auto bad = y;
                bad.x[bad.x.size() / 2] += k.one();
                const auto broken = gambier_verify(k, a.sequence, bad);
                const bool caught = !broken.y_equation.all_zero() && !broken.w_equation.all_zero();
                rec.row(label(o, "perturbed"), std::nullopt, caught ? "residuals nonzero" : "residuals zero",
                        rec.check(caught, label(o), "perturbed data passes the chain"));
                break;
            }
            case LineariseScheme::gambier_qrt: {
                const auto spec = gambier_family(a.sequence);
                const auto x = orbit_of(spec, k, rng, steps, 2);
                const auto t = gambier_qrt_form(k, a.sequence, x);
                for (std::size_t i = 0; i < t.indices.size(); ++i) {
                    rec.row(label(o), t.indices[i], str(t.residuals[i]),
                            rec.check(zero(t.residuals[i]), label(o),
                                      "residual nonzero at n=" + std::to_string(t.indices[i])));
                }
                auto bad = x;
                bad.x[bad.x.size() / 2] += k.one();
                const bool caught = !gambier_qrt_form(k, a.sequence, bad).all_zero();
                rec.row(label(o, "perturbed"), std::nullopt, caught ? "residuals nonzero" : "residuals zero",
                        rec.check(caught, label(o), "perturbed data passes the QRT form"));
                break;
            }
        }
    }
    rec.detail()["scheme"] = scheme;
    rec.detail()["prime"] = std::to_string(k.modulus());
}

void run_equivalence(const Context& c, const AnalysisBlock& a, Recorder& rec)
{
    const auto spec = build(c, a.specs[0]);
    const std::string& id = a.specs[0];
    auto rng = stream(c.seed, a.id);
    const auto& k = c.f.roots;
    std::uniform_int_distribution<long> pick(a.lo, a.hi);
    int agreed = 0, excluded = 0, disagreed = 0, perturbed_caught = 0, perturbed_tested = 0;
    const int budget = 4 * a.samples;
    for (int tries = 0; agreed + disagreed < a.samples && tries < budget; ++tries) {
        const long n = pick(rng);
        const auto xi = k.random_nonzero(rng), y = k.random(rng);
        try {
            const auto s = rhs_equivalence_sample(spec, k, n, xi, y);
            if (s.equal()) ++agreed;
            else ++disagreed;
            const auto bent = rhs_equivalence_sample(spec, k, n, xi, y, std::pair{3, k.one()});
            ++perturbed_tested;
            if (!bent.equal()) ++perturbed_caught;
        } catch (const error& e) {
            if (e.code() != errc::sample_pole_hit) throw;
            ++excluded;
        }
    }
    const int tested = agreed + disagreed;
    rec.row(id, std::nullopt,
            "agreed=" + std::to_string(agreed) + " disagreed=" + std::to_string(disagreed) +
                " excluded=" + std::to_string(excluded),
            rec.check(disagreed == 0 && tested == a.samples, id,
                      std::to_string(disagreed) + " of " + std::to_string(tested) + " samples disagree"));
    rec.row(id + "/perturbed", std::nullopt,
            "caught=" + std::to_string(perturbed_caught) + " of " + std::to_string(perturbed_tested),
            rec.check(perturbed_tested > 0 && perturbed_caught == perturbed_tested, id,
                      "a perturbed symmetric function still agrees"));
}

AnalysisResult run_one(const Context& c, const AnalysisBlock& a)
{
    AnalysisResult r;
    r.id = a.id;
    r.kind = a.kind;
    Recorder rec(r);
    const std::string who = a.specs.empty() ? to_string(a.kind) : a.specs.front();
    auto attempt = [&](auto&& body) {
        try {
            body();
        } catch (const error& e) {
            rec.fail(who, e.what());
        } catch (const std::exception& e) {
            rec.fail(who, e.what());
        }
    };
    switch (a.kind) {
        case AnalysisKind::degrees: attempt([&] { run_degrees(c, a, rec); }); break;
        case AnalysisKind::growth_match: attempt([&] { run_growth_match(c, a, rec); }); break;
        case AnalysisKind::invariant_check: attempt([&] { run_invariant_check(c, a, rec); }); break;
        case AnalysisKind::invariant_search: attempt([&] { run_invariant_search(c, a, rec); }); break;
        case AnalysisKind::constraint: attempt([&] { run_constraint(c, a, rec); }); break;
        case AnalysisKind::characteristic: attempt([&] { run_characteristic(c, a, rec); }); break;
        case AnalysisKind::parameter_count: attempt([&] { run_parameter_count(c, a, rec); }); break;
        case AnalysisKind::confine: attempt([&] { run_confine(c, a, rec); }); break;
        case AnalysisKind::equivalence: attempt([&] { run_equivalence(c, a, rec); }); break;
        case AnalysisKind::linearise: {
            // Parameters with roots of unity need p = 1 mod 12.
            try {
                run_linearise(c, a, rec, c.f.working);
            } catch (const error& e) {
                if (e.code() != errc::no_roots_of_unity) {
                    rec.fail(who, e.what());
                    break;
                }
                r.rows.clear();
                r.failures.clear();
                r.detail = ojson::object();
                attempt([&] { run_linearise(c, a, rec, c.f.roots); });
            } catch (const std::exception& e) {
                rec.fail(who, e.what());
            }
            break;
        }
    }
    auto key = [](const ReportRow& x) {
        return std::tuple{x.spec, !x.index.has_value(), x.index.value_or(0)};
    };
    std::stable_sort(r.rows.begin(), r.rows.end(), [&](const ReportRow& x, const ReportRow& y) { return key(x) < key(y); });
    return r;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + p.string());
}

/// Empty when equal, else the first differing line.
std::string first_difference(const std::string& want, const std::string& got)
{
    if (want == got) return {};
    std::istringstream a(want), b(got);
    std::string la, lb;
    for (long line = 1;; ++line) {
        const bool ea = !std::getline(a, la), eb = !std::getline(b, lb);
        if (ea && eb) return "line endings differ";
        if (ea || eb || la != lb) {
            return "line " + std::to_string(line) + ": expected '" + (ea ? "<eof>" : la) + "', got '" +
                   (eb ? "<eof>" : lb) + "'";
        }
    }
}

} // namespace

bool Report::passed() const
{
    return std::all_of(analyses.begin(), analyses.end(), [](const AnalysisResult& a) { return a.passed(); });
}

std::vector<std::string> Report::failures() const
{
    std::vector<std::string> out;
    for (const auto& a : analyses) out.insert(out.end(), a.failures.begin(), a.failures.end());
    return out;
}

Report execute(const Manifest& m, const RunOverrides& o)
{
    if (o.prime && (*o.prime < 5 || *o.prime >= (u64{1} << 62) || !is_prime(*o.prime)))
        throw error(errc::manifest_invalid, "--prime: expected an odd prime in [5, 2^62)");
    if (o.steps && *o.steps < 4) throw error(errc::manifest_invalid, "--steps: at least 4");
    if (o.truncation && *o.truncation < 2) throw error(errc::manifest_invalid, "--truncation: at least 2");

    const Context c{m, o, fields_for(m, o), o.seed.value_or(m.seed)};
    Report r;
    r.seed = c.seed;
    r.primes = {c.f.working.modulus(), c.f.witness.modulus()};

    std::vector<const AnalysisBlock*> order;
    for (const auto& a : m.analyses) order.push_back(&a);
    std::sort(order.begin(), order.end(), [](const AnalysisBlock* x, const AnalysisBlock* y) { return x->id < y->id; });
    for (const auto* a : order) {
        r.analyses.push_back(run_one(c, *a));
        if (o.fail_fast && !r.analyses.back().passed()) break;
    }
    return r;
}

std::string to_csv(const Report& r)
{
    std::string out = "analysis,spec,index,value,verdict\n";
    for (const auto& a : r.analyses) {
        for (const auto& row : a.rows) {
            out += csv_field(row.analysis) + ',' + csv_field(row.spec) + ',' +
                   (row.index ? std::to_string(*row.index) : std::string()) + ',' + csv_field(row.value) + ',' +
                   row.verdict + '\n';
        }
    }
    return out;
}

std::string to_json(const Report& r)
{
    ojson j;
    j["seed"] = r.seed;
    j["primes"] = primes_json(r.primes);
    j["passed"] = r.passed();
    j["failures"] = r.failures();
    j["analyses"] = ojson::array();
    for (const auto& a : r.analyses) {
        ojson rows = ojson::array();
        for (const auto& row : a.rows) {
            ojson x;
            x["spec"] = row.spec;
            x["index"] = row.index ? ojson(*row.index) : ojson(nullptr);
            x["value"] = row.value;
            x["verdict"] = row.verdict;
            rows.push_back(std::move(x));
        }
        ojson e;
        e["id"] = a.id;
        e["kind"] = to_string(a.kind);
        e["passed"] = a.passed();
        e["failures"] = a.failures;
        e["detail"] = a.detail;
        e["rows"] = std::move(rows);
        j["analyses"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

RunOutcome run(const Manifest& m, const RunOverrides& o)
{
    RunOutcome out;
    out.report = execute(m, o);
    out.failures = out.report.failures();

    const std::string csv = to_csv(out.report), js = to_json(out.report);
    const std::filesystem::path dir = o.out_dir.value_or(m.output.dir);
    std::filesystem::create_directories(dir);
    write_file(dir / m.output.csv, csv);
    write_file(dir / m.output.json, js);
    out.written = {dir / m.output.csv, dir / m.output.json};

    if (o.golden_dir) {
        for (const auto& [name, text] : {std::pair{m.output.csv, csv}, std::pair{m.output.json, js}}) {
            const auto path = *o.golden_dir / name;
            std::string want;
            try {
                want = read_file(path);
            } catch (const std::exception& e) {
                out.failures.push_back("golden: " + std::string(e.what()));
                continue;
            }
            const auto diff = first_difference(want, text);
            if (!diff.empty()) out.failures.push_back("golden: " + path.string() + " differs, " + diff);
        }
    }
    out.exit_status = out.failures.empty() ? 0 : 1;
    return out;
}

RunOutcome run(const std::filesystem::path& manifest, const RunOverrides& o)
{
    return run(load_manifest(manifest), o);
}

} // namespace mulmap
