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

#include "mulmap/growth.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace mulmap {

std::string to_string(GrowthKind k)
{
    switch (k) {
        case GrowthKind::bounded: return "bounded";
        case GrowthKind::linear: return "linear";
        case GrowthKind::quadratic: return "quadratic";
        case GrowthKind::exponential: return "exponential";
    }
    return "?";
}

u64 default_witness_prime()
{
    static const u64 p = [] {
        std::mt19937_64 rng(0x5eed);
        return random_prime(rng, 60, 61, 12, 1);
    }();
    return p;
}

SymbolicIterator::SymbolicIterator(const MappingSpec& spec, const PrimeField& k, const ModP& x0, long n0)
    : spec_(&spec), k_(k), prev_(RationalFunction<ModP>::constant(x0)), cur_(RationalFunction<ModP>::variable(k.one())),
      n_(n0 + 1)
{
}

int SymbolicIterator::next()
{
    const auto step = solve_forward(*spec_, k_, n_);
    RationalFunction<ModP> nxt;
    try {
        nxt = ratfun_compose_step(cur_, prev_, step);
    } catch (const error& e) {
        throw error(e.code(), e.message(), n_ + 1);
    }
    prev_ = std::move(cur_);
    cur_ = std::move(nxt);
    ++n_;
    return cur_.degree();
}

std::vector<int> degree_run(const MappingSpec& spec, const PrimeField& k, const ModP& x0, int n_max, long n0,
                            int degree_cap)
{
    std::vector<int> d{0, 1};
    SymbolicIterator it(spec, k, x0, n0);
    while (static_cast<int>(d.size()) <= n_max) {
        d.push_back(it.next());
        if (d.back() > degree_cap) break;
    }
    return d;
}

namespace {

struct Witness {
    u64 p;
    std::vector<int> degrees;
};

// Runs until two witnesses on distinct primes agree. Runs that throw, or
// that disagree with every earlier run, are replaced by fresh primes.
template <class Run>
std::vector<Witness> agree(const std::string& id, const DegreeOptions& opts, Run run)
{
    std::mt19937_64 rng(opts.seed);
    std::vector<u64> queue;
    for (u64 p : opts.primes) queue.push_back(p == 0 ? default_witness_prime() : p);
    std::vector<Witness> done;
    std::ostringstream diag;
    const std::size_t budget = queue.size() + static_cast<std::size_t>(opts.max_retries);
    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
        const u64 p = attempt < queue.size() ? queue[attempt] : random_prime(rng, 59, 62, 12, 1);
        const PrimeField k(p);
        const ModP x0 = k.random_nonzero(rng);
        try {
            auto d = run(k, x0);
            for (const auto& w : done) {
                if (w.degrees == d && w.p != p) return {w, Witness{p, std::move(d)}};
            }
            diag << " p=" << p << " disagrees;";
            done.push_back({p, std::move(d)});
        } catch (const error& e) {
            if (e.code() == errc::degenerate_z || e.code() == errc::out_of_range) throw;
            diag << " p=" << p << ": " << e.what() << ";";
        }
    }
    throw error(errc::unlucky_evaluation, id + ": no two witness runs agreed;" + diag.str());
}

} // namespace

DegreeSequence degree_sequence(const MappingSpec& spec, int n_max, const DegreeOptions& opts)
{
    if (n_max < 4) throw std::invalid_argument("degree_sequence needs n_max >= 4");
    auto w = agree(spec.id, opts, [&](const PrimeField& k, const ModP& x0) {
        return degree_run(spec, k, x0, n_max, opts.n0, opts.degree_cap);
    });
    DegreeSequence out;
    out.spec_id = spec.id;
    out.degrees = w[0].degrees;
    out.capped = static_cast<int>(out.degrees.size()) <= n_max;
    for (const auto& x : w) out.prime_witnesses.push_back(x.p);
    return out;
}

GrowthMatch growth_match(const MappingSpec& a, const MappingSpec& b, int n_max, const DegreeOptions& opts)
{
    GrowthMatch out;
    // Lockstep run; returns both sequences (truncated at the first mismatch).
    auto lockstep = [&](const PrimeField& k, const ModP& x0) {
        std::vector<int> da{0, 1}, db{0, 1};
        SymbolicIterator ia(a, k, x0, opts.n0), ib(b, k, x0, opts.n0);
        while (static_cast<int>(da.size()) <= n_max) {
            da.push_back(ia.next());
            db.push_back(ib.next());
            if (da.back() != db.back() || da.back() > opts.degree_cap) break;
        }
        da.insert(da.end(), db.begin(), db.end());
        da.push_back(static_cast<int>(db.size()));
        return da;
    };
    auto w = agree(a.id + " vs " + b.id, opts, lockstep);
    std::vector<int> both = w[0].degrees;
    const std::size_t nb = static_cast<std::size_t>(both.back());
    both.pop_back();
    out.a.assign(both.begin(), both.end() - static_cast<std::ptrdiff_t>(nb));
    out.b.assign(both.end() - static_cast<std::ptrdiff_t>(nb), both.end());
    out.match = out.a == out.b && static_cast<int>(out.a.size()) == n_max + 1;
    if (out.a != out.b) out.first_mismatch = static_cast<int>(out.a.size()) - 1;
    return out;
}

namespace {

// Smallest period p <= max_period with s[i] == s[i + p] across the window,
// backed by at least four comparisons.
std::optional<int> find_period(const std::vector<long>& s, int max_period = 6)
{
    for (int p = 1; p <= max_period; ++p) {
        if (static_cast<int>(s.size()) < p + 4) break;
        bool ok = true;
        for (std::size_t i = 0; i + static_cast<std::size_t>(p) < s.size(); ++i) {
            if (s[i] != s[i + static_cast<std::size_t>(p)]) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    return std::nullopt;
}

std::vector<long> diff(const std::vector<long>& s)
{
    std::vector<long> d;
    for (std::size_t i = 1; i < s.size(); ++i) d.push_back(s[i] - s[i - 1]);
    return d;
}

} // namespace

double entropy_estimate(const std::vector<int>& degrees, double* residual)
{
    if (degrees.size() < 8) throw error(errc::too_short, "entropy estimate needs at least 8 terms");
    const std::size_t start = std::max<std::size_t>(degrees.size() / 2 - 1, 2);
    std::vector<double> ns, ys;
    for (std::size_t n = start; n < degrees.size(); ++n) {
        if (degrees[n] <= 0) continue;
        ns.push_back(static_cast<double>(n));
        ys.push_back(std::log(static_cast<double>(degrees[n])));
    }
    if (ns.size() < 3) throw error(errc::too_short, "too few nonzero tail degrees");
    Eigen::MatrixXd a(static_cast<Eigen::Index>(ns.size()), 3);
    Eigen::VectorXd y(static_cast<Eigen::Index>(ns.size()));
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        a(r, 0) = ns[i];
        a(r, 1) = std::log(ns[i]);
        a(r, 2) = 1.0;
        y(r) = ys[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    if (residual) *residual = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(ns.size()));
    return std::max(0.0, c(0));
}

GrowthClass classify_growth(const std::vector<int>& degrees)
{
    if (degrees.size() < 5) throw error(errc::too_short, "classification needs at least 5 terms");
    constexpr std::size_t burn_in = 4;
    GrowthClass g;
    g.provisional = degrees.size() < 10;
    std::vector<long> tail(degrees.begin() + burn_in, degrees.end());

    const auto d1 = diff(tail);
    if (std::all_of(d1.begin(), d1.end(), [](long v) { return v == 0; })) {
        g.kind = GrowthKind::bounded;
        return g;
    }
    if (auto p = find_period(d1)) {
        g.kind = GrowthKind::linear;
        g.period = *p;
        return g;
    }
    const auto d2 = diff(d1);
    if (auto p = find_period(d2)) {
        long sum = 0;
        for (int i = 0; i < *p; ++i) sum += d2[static_cast<std::size_t>(i)];
        if (sum > 0) {
            g.kind = GrowthKind::quadratic;
            g.period = *p;
            return g;
        }
    }
    g.kind = GrowthKind::exponential;
    if (degrees.size() >= 8) g.entropy_estimate = entropy_estimate(degrees, &g.fit_residual);
    // Three consecutive tail ratios above threshold confirm the verdict.
    int run = 0, best = 0;
    for (std::size_t i = burn_in; i + 1 < degrees.size(); ++i) {
        if (degrees[i] > 0 && std::log(static_cast<double>(degrees[i + 1]) / degrees[i]) > 0.2) {
            best = std::max(best, ++run);
        } else {
            run = 0;
        }
    }
    if (best < 3) g.provisional = true;
    return g;
}

bool is_linear_equation(const MappingSpec& spec, long lo, long hi)
{
    const PrimeField k(default_witness_prime());
    for (long n = lo; n <= hi; ++n) {
        const auto s = solve_forward(spec, k, n);
        if (!(s.c.is_zero() && s.d.degree() == 0 && s.a.degree() == 0 && s.b.degree() <= 1 && s.b.coeff(0) == ModP()))
            return false;
    }
    return true;
}

} // namespace mulmap
