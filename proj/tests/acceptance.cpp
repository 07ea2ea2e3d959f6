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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "mulmap/catalogue.hpp"
#include "mulmap/confinement.hpp"
#include "mulmap/growth.hpp"
#include "mulmap/invariants.hpp"
#include "mulmap/linearisation.hpp"
#include "mulmap/report.hpp"

using namespace mulmap;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = MULMAP_SOURCE_DIR;
const fs::path kBinary = MULMAP_BINARY_DIR;

/// Collects the failed checks of one criterion.
class Criterion {
public:
    void require(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    bool passed() const { return failures_.empty(); }
    int checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::string& notes() const { return notes_; }

private:
    int checks_ = 0;
    std::vector<std::string> failures_;
    std::string notes_;
};

Exact random_exact(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::int64_t> d(2, 60);
    std::int64_t a = d(rng), b = d(rng);
    while (a == b) b = d(rng);
    if (rng() & 1) a = -a;
    return Exact(Rational(a, b));
}

PrimeField working() { return PrimeField(kDefaultPrime); }
PrimeField witness() { return PrimeField(default_witness_prime()); }

MappingSpec ansatz(long N, long f, Exact z = Exact(Rational(5, 3))) { return MappingSpec::autonomous(z, N, Exact(f)); }

ParameterSequence random_shift4(std::mt19937_64& rng)
{
    return shift4_solution(random_exact(rng), random_exact(rng), {random_exact(rng), random_exact(rng)},
                           {random_exact(rng), random_exact(rng), random_exact(rng)});
}

ParameterSequence random_shift5(std::mt19937_64& rng)
{
    return shift5_solution(random_exact(rng), random_exact(rng), random_exact(rng),
                           {random_exact(rng), random_exact(rng)},
                           {random_exact(rng), random_exact(rng), random_exact(rng)});
}

std::string join(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// 1. Degree sequences against the bundled golden files, over Z/pZ.
void degree_sequences(Criterion& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = load_manifest(kSource / "manifests" / "degree-table.json");
    RunOverrides o;
    o.out_dir = (kBinary / "acceptance" / "degree-table").string();
    o.golden_dir = kSource / "golden" / "degree-table";
    const auto out = run(m, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& f : out.failures) c.require(false, f);
    c.require(out.exit_status == 0, "degree-table run exit status");
    c.require(secs < 10.0, "runtime " + std::to_string(secs) + " s exceeds 10 s");

    // The prefixes, independently of the manifest's expectations.
    const std::vector<std::pair<MappingSpec, std::vector<int>>> table{
        {ansatz(0, 1), {0, 1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20}},
        {ansatz(0, -1), {0, 1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20}},
        {ansatz(2, 1), {0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2}},
        {ansatz(2, -1), {0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2}},
        {ansatz(-2, 1), {0, 1, 2, 3, 6, 9, 12, 17, 22, 27, 34, 41, 48, 57}},
        {ansatz(-4, 1), {0, 1, 1, 2, 3, 5, 6, 9, 11, 14, 17, 21, 24, 29, 33, 38}},
    };
    for (const auto& [spec, want] : table) {
        const auto d = degree_sequence(spec, static_cast<int>(want.size()) - 1).degrees;
        c.require(d == want, spec.id + ": " + join(d));
    }
    c.require(is_linear_equation(ansatz(4, 1)), "N=4, f=1 is not a linear equation");
    for (const auto& spec : {ansatz(4, -1), ansatz(1, 1), ansatz(3, 1), ansatz(5, 1), ansatz(6, 1), ansatz(-6, 1),
                             ansatz(0, 2), ansatz(-2, 3)}) {
        const auto g = classify_growth(degree_sequence(spec, 11));
        c.require(g.kind == GrowthKind::exponential && g.entropy_estimate > 0.2,
                  spec.id + ": " + to_string(g.kind) + ", entropy " + std::to_string(g.entropy_estimate));
    }
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << secs << " s for the golden run";
    c.note(s.str());
}

// 2. Closed-form invariants conserved at 100 orbit points, two primes.
void invariant_conservation(Criterion& c)
{
    const Exact z(Rational(5, 3));
    std::mt19937_64 rng(2);
    const std::vector<std::pair<MappingSpec, KnownInvariant>> cases{
        {ansatz(-2, 1), KnownInvariant::biquadratic_m2},
        {ansatz(-4, 1), KnownInvariant::biquadratic_m4},
        {ansatz(0, -1), KnownInvariant::squared_ratio},
    };
    for (const auto& [spec, which] : cases) {
        for (const PrimeField& k : {working(), witness()}) {
            const auto r = check_invariant(spec, k, known_invariant(which, k, z), 100, rng);
            c.require(r.conserved && r.valid && r.tested >= 100,
                      spec.id + " mod " + std::to_string(k.modulus()) + ": not conserved");
        }
        // Negative control: the same grid on another map.
        const auto other = which == KnownInvariant::squared_ratio ? ansatz(0, 1) : ansatz(0, -1);
        const auto k = working();
        c.require(!check_invariant(other, k, known_invariant(which, k, z), 100, rng).conserved,
                  other.id + " wrongly conserves the invariant of " + spec.id);
    }
}

/// Cross-ratio of four field values.
ModP cross_ratio(const ModP& a, const ModP& b, const ModP& c, const ModP& d)
{
    return ((a - c) * (b - d)) / ((a - d) * (b - c));
}

// 3. Invariant search by orbit pencils.
void invariant_search(Criterion& c)
{
    const auto k = working();
    const Exact z(Rational(5, 3));
    std::mt19937_64 rng(3);

    const auto none = search_invariant(ansatz(0, -1), k, 2, false, rng);
    c.require(none.pencil.empty() && none.basis.empty(), "bidegree-(2,2) search succeeded on g = -1");

    const auto qrt = search_invariant(ansatz(-2, 1), k, 2, false, rng);
    const auto known = known_invariant(KnownInvariant::biquadratic_m2, k, z);
    c.require(qrt.basis.size() == 1, "bidegree-(2,2) search on N=-2 found " + std::to_string(qrt.basis.size()));
    if (!qrt.basis.empty()) {
        const auto& found = qrt.basis[0];
        c.require(same_pencil(found, known), "found invariant is outside the closed-form pencil");
        // Pointwise: the two are related by one fixed Moebius map, so all
        // cross-ratios of values agree.
        std::vector<std::pair<ModP, ModP>> vals;
        while (vals.size() < 24) {
            const auto u = k.random(rng), v = k.random(rng);
            const auto a = evaluate(found, u, v), b = evaluate(known, u, v);
            if (a && b) vals.emplace_back(*a, *b);
        }
        for (std::size_t i = 3; i < vals.size(); ++i) {
            const auto& [a0, b0] = vals[0];
            const auto& [a1, b1] = vals[1];
            const auto& [a2, b2] = vals[2];
            const auto& [ai, bi] = vals[i];
            c.require(cross_ratio(a0, a1, a2, ai) == cross_ratio(b0, b1, b2, bi),
                      "pointwise relation to the closed form fails at sample " + std::to_string(i));
        }
    }

    const auto quartic = search_invariant(ansatz(0, -1), k, 4, true, rng);
    c.require(pencil_contains(quartic, known_invariant(KnownInvariant::squared_ratio, k, z)),
              "symmetric (4,4) pencil of g = -1 misses the squared-ratio invariant");
    c.require(quartic.squared.has_value(), "squared structure not detected");
}

// 4. Deautonomisations keep the autonomous degrees; violations do not.
void deautonomisation(Criterion& c)
{
    std::mt19937_64 rng(4);
    const auto q = random_sequence(rng);
    const auto z4 = random_shift4(rng);
    const auto z5 = random_shift5(rng);
    const std::vector<std::pair<MappingSpec, MappingSpec>> good{
        {ansatz(0, 1), third_kind_family(q)},
        {ansatz(0, -1), hky_family(q, random_exact(rng))},
        {ansatz(-2, 1), quadratic_m2_family(z4)},
        {ansatz(-4, 1), quadratic_m4_family(z5)},
    };
    for (const auto& [a, b] : good) {
        const auto m = growth_match(a, b, 16);
        c.require(m.match, b.id + " diverges from " + a.id + " at n=" + std::to_string(m.first_mismatch.value_or(-1)));
    }
    const std::vector<std::pair<MappingSpec, MappingSpec>> bad{
        {ansatz(0, 1), third_kind_family(q, 3)},
        {ansatz(0, -1), hky_family_free_z(q, random_sequence(rng))},
        {ansatz(-2, 1), quadratic_m2_family(random_sequence(rng))},
        {ansatz(-4, 1), quadratic_m4_family(random_sequence(rng))},
    };
    std::string where;
    for (const auto& [a, b] : bad) {
        const auto m = growth_match(a, b, 10);
        c.require(!m.match && m.first_mismatch && *m.first_mismatch <= 10,
                  "violated " + b.id + " still matches " + a.id + " to n=10");
        where += (where.empty() ? "" : ",") + std::to_string(m.first_mismatch.value_or(-1));
    }
    c.note("violations diverge at n=" + where);
}

// 5. Singularity confinement, characteristic roots and parameter counts.
void confinement(Criterion& c)
{
    const PrimeField k(default_witness_prime());
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2; ++trial) {
        for (std::size_t entry : {0u, 1u}) {
            for (auto fam : {RhsSpec::Family::m2, RhsSpec::Family::m4}) {
                const bool m2 = fam == RhsSpec::Family::m2;
                const auto z = m2 ? random_shift4(rng) : random_shift5(rng);
                std::vector<Exact> rho;
                for (int i = 0; i < (m2 ? 3 : 4); ++i) rho.push_back(random_exact(rng));
                const auto spec = factorised_family(m2 ? "m2" : "m4", z,
                                                    mu_lambda_solution(z, fam, random_exact(rng), rho, -6, 24));
                const auto p = confinement_trace(spec, k, entry, 4, rng);
                const int want = m2 ? 3 : 4;
                c.require(p.confined && p.memory_check && p.pattern_length == want,
                          spec.id + " entry " + std::to_string(entry) + ": length " + std::to_string(p.pattern_length));
            }
        }
        const auto generic = MappingSpec::factorised("generic", random_sequence(rng, -6, 24),
                                                     {random_sequence(rng, -6, 24), random_sequence(rng, -6, 24)});
        c.require(!confinement_trace(generic, k, 0, 4, rng).confined, "generic parameters confine");
    }

    auto roots = characteristic_roots(ZConstraint::shift5);
    std::vector<Exact> want{Exact(1), Exact(1), Exact(-1), Exact(-1), Exact::j(), Exact::j().pow(2)};
    auto key = [](const Exact& e) { return e.str(); };
    std::sort(roots.begin(), roots.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
    std::sort(want.begin(), want.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
    c.require(roots == want, "characteristic roots differ from 1,1,-1,-1,j,j^2");
    c.require(parameter_count(RhsSpec::Family::m2) == 7, "m2 parameter count");
    c.require(parameter_count(RhsSpec::Family::m4) == 8, "m4 parameter count");
}

template <class K>
Orbit<ElementOf<K>> orbit(const MappingSpec& spec, const K& k, std::mt19937_64& rng, int len, long n0)
{
    return {n0, random_orbit(spec, k, rng, len, n0)};
}

// 6. Linearisation schemes, exactly, with perturbation controls.
void linearisation(Criterion& c)
{
    std::mt19937_64 rng(6);
    for (const PrimeField& k : {working(), witness()}) {
        for (int o = 0; o < 3; ++o) {
            const auto q = random_sequence(rng);
            const auto x = orbit(third_kind_family(q), k, rng, 12, 2);
            c.require(x.last_index() - x.first_index >= 8, "third-kind orbit too short");
            const auto k0 = thirdkind_k(k, q, x.at(2), x.at(3), x.at(4), 3);
            int constant = 1;
            for (long n = 4; n < x.last_index(); ++n) {
                const bool same = thirdkind_k(k, q, x.at(n - 1), x.at(n), x.at(n + 1), n) == k0;
                c.require(same, "third-kind k changes at n=" + std::to_string(n));
                constant += same;
            }
            c.require(constant >= 6, "k constant along fewer than 6 indices");
        }

        for (int o = 0; o < 3; ++o) {
            const Exact z = random_exact(rng);
            const auto lambda = hky_lambda(k, z);
            const auto x = orbit(ansatz(0, -1, z), k, rng, 21, 0);
            const auto C = hky_C(x, lambda);
            for (long n = C.first_index; n < C.last_index(); ++n)
                c.require(C.at(n) * C.at(n + 1) == k.one(), "C_n C_{n+1} != 1 at n=" + std::to_string(n));
            const auto r = hky_reconstruct(x.at(0), x.at(1), lambda, 20);
            for (long n = 0; n <= 20; ++n) c.require(r.at(n) == x.at(n), "reconstruction differs at n=" + std::to_string(n));
        }

        for (int o = 0; o < 3; ++o) {
            const auto q = random_sequence(rng);
            const auto y = substitute_y(orbit(hky_family(q, random_exact(rng)), k, rng, 16, 2));
            const auto rep = gambier_verify(k, q, y);
            c.require(rep.y_equation.all_zero() && rep.y_equation.residuals.size() >= 10, "y-equation residuals");
            c.require(rep.w_equation.all_zero() && rep.w_equation.residuals.size() >= 10, "w-equation residuals");
            auto bad = y;
            bad.x[7] += k.one();
            const auto broken = gambier_verify(k, q, bad);
            c.require(!broken.y_equation.all_zero() && !broken.w_equation.all_zero(), "perturbed chain passes");

            const auto zs = random_sequence(rng);
            const auto xg = orbit(gambier_family(zs), k, rng, 14, 2);
            c.require(gambier_qrt_form(k, zs, xg).all_zero(), "QRT form residuals");
            auto badx = xg;
            badx.x[5] += k.one();
            c.require(!gambier_qrt_form(k, zs, badx).all_zero(), "perturbed QRT data passes");
        }
    }
}

// 7. Gauge invariance, the eight-factor equivalence, prime independence and
// report determinism.
void properties(Criterion& c)
{
    std::mt19937_64 rng(7);
    const auto k = working();
    // x -> -x with z -> -z; a symmetry when the right-hand side has even
    // total degree in x and z.
    std::vector<MappingSpec> even{ansatz(0, 1), ansatz(0, -1), ansatz(2, 1), ansatz(-2, 1), ansatz(-4, 1),
                                  quadratic_m2_family(random_shift4(rng)),
                                  quadratic_m4_family(random_shift5(rng))};
    for (const auto& spec : even) {
        const auto g = sign_gauge(spec, {-1}, -4, 30);
        const auto x0 = k.random(rng), x1 = k.random(rng);
        const auto o = iterate(spec, k, x0, x1, 20);
        const auto og = iterate(g, k, -x0, -x1, 20);
        bool same = true;
        for (long n = 0; n <= 20; ++n) same = same && og.at(n) == -o.at(n);
        c.require(same, spec.id + ": sign flip of x and z is not a symmetry");
        c.require(degree_sequence(spec, 12).degrees == degree_sequence(g, 12).degrees,
                  spec.id + ": sign flip changes the degrees");
    }

    auto mu = std::vector<ParameterSequence>{};
    for (int i = 0; i < 8; ++i) mu.push_back(random_sequence(rng));
    const auto eight = MappingSpec::factorised("eight", random_sequence(rng), mu);
    int agreed = 0, tested = 0;
    while (tested < 200) {
        std::uniform_int_distribution<long> pick(0, 8);
        try {
            const auto s = rhs_equivalence_sample(eight, k, pick(rng), k.random_nonzero(rng), k.random(rng));
            ++tested;
            agreed += s.equal();
        } catch (const error& e) {
            if (e.code() != errc::sample_pole_hit) throw;
        }
    }
    c.require(agreed == 200, std::to_string(200 - agreed) + " of 200 equivalence samples disagree");

    std::mt19937_64 prng(77);
    const std::vector<u64> primes{kDefaultPrime, default_witness_prime(), random_prime(prng, 40, 50),
                                  random_prime(prng, 55, 60, 12, 1)};
    for (const auto& spec : {ansatz(0, 1), ansatz(0, -1), ansatz(2, 1), ansatz(2, -1), ansatz(-2, 1), ansatz(-4, 1)}) {
        std::vector<int> first;
        for (u64 p : primes) {
            const auto d = degree_run(spec, PrimeField(p), PrimeField(p).random(prng), 24);
            if (first.empty()) first = d;
            c.require(d == first, spec.id + ": degrees depend on the prime " + std::to_string(p));
        }
    }

    const auto m = load_manifest(kSource / "manifests" / "example.json");
    const auto a = execute(m), b = execute(m);
    c.require(to_csv(a) == to_csv(b) && to_json(a) == to_json(b), "reports differ between identical runs");
    c.require(a.passed(), "example manifest fails");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
        {"1 degree-sequence golden files", degree_sequences},
        {"2 invariant conservation", invariant_conservation},
        {"3 invariant search", invariant_search},
        {"4 deautonomisation growth match", deautonomisation},
        {"5 confinement, characteristic roots, parameter counts", confinement},
        {"6 linearisation suites", linearisation},
        {"7 property suites", properties},
    };
    int failed = 0;
    for (const auto& [name, body] : criteria) {
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line.precision(2);
        line << std::fixed << (c.passed() ? "PASS" : "FAIL") << "  criterion " << name << "  (" << c.checks()
             << " checks, " << secs << " s" << (c.notes().empty() ? "" : "; " + c.notes()) << ")";
        std::cout << line.str() << "\n";
        for (const auto& f : c.failures()) std::cout << "      " << f << "\n";
        failed += !c.passed();
    }
    return failed == 0 ? 0 : 1;
}
