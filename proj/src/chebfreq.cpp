#include "splitdens/chebfreq.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "splitdens/delta.hpp"

namespace splitdens {

namespace {

constexpr i64 kMaxDdfPrime = 50'000'000;

// --- dense polynomials over F_p, constant term first, no trailing zeros ---

using Poly = std::vector<i64>;

int pdeg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

void ptrim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly reduce_mod_p(const std::vector<i64>& c, i64 p) {
    Poly out(c.size());
    for (size_t i = 0; i < c.size(); ++i) out[i] = ((c[i] % p) + p) % p;
    ptrim(out);
    return out;
}

i64 inv_mod(i64 a, i64 p) { return mod_pow(a, p - 2, p); }

void make_monic(Poly& a, i64 p) {
    if (a.empty() || a.back() == 1) return;
    i64 inv = inv_mod(a.back(), p);
    for (i64& c : a) c = c * inv % p;
}

// a mod f, f monic with deg(f) >= 1. Coefficient products stay below
// kMaxDdfPrime^2 * (deg+1) < 2^63 thanks to the degree-60 cap.
Poly pmod(Poly a, const Poly& f, i64 p) {
    while (pdeg(a) >= pdeg(f)) {
        i64 c = a.back();
        if (c != 0) {
            size_t sh = a.size() - f.size();
            for (size_t i = 0; i + 1 < f.size(); ++i)
                a[sh + i] = ((a[sh + i] - c * f[i]) % p + p) % p;
        }
        a.pop_back();
        ptrim(a);
    }
    return a;
}

// Exact quotient a / f for monic f dividing a.
Poly pdiv(Poly a, const Poly& f, i64 p) {
    if (pdeg(a) < pdeg(f)) return {};
    Poly q(a.size() - f.size() + 1, 0);
    for (int k = pdeg(a); k >= pdeg(f); --k) {
        i64 c = a[static_cast<size_t>(k)];
        if (c == 0) continue;
        size_t sh = static_cast<size_t>(k) - (f.size() - 1);
        q[sh] = c;
        for (size_t i = 0; i < f.size(); ++i)
            a[sh + i] = ((a[sh + i] - c * f[i]) % p + p) % p;
    }
    ptrim(q);
    return q;
}

Poly pmul(const Poly& a, const Poly& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
    ptrim(out);
    return out;
}

Poly psub(const Poly& a, const Poly& b, i64 p) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        i64 x = i < a.size() ? a[i] : 0;
        i64 y = i < b.size() ? b[i] : 0;
        out[i] = ((x - y) % p + p) % p;
    }
    ptrim(out);
    return out;
}

Poly pgcd(Poly a, Poly b, i64 p) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        make_monic(b, p);
        Poly r = pmod(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    make_monic(a, p);
    return a;
}

Poly ppowmod(Poly base, i64 e, const Poly& f, i64 p) {
    Poly r = {1};
    base = pmod(std::move(base), f, p);
    while (e > 0) {
        if (e & 1) r = pmod(pmul(r, base, p), f, p);
        base = pmod(pmul(base, base, p), f, p);
        e >>= 1;
    }
    return r;
}

Poly pderiv(const Poly& a, i64 p) {
    Poly out;
    for (size_t i = 1; i < a.size(); ++i)
        out.push_back(static_cast<i64>(i) % p * a[i] % p);
    ptrim(out);
    return out;
}

// Distinct-degree factorization of monic squarefree f, degrees ascending.
std::vector<int> ddf_degrees(Poly f, i64 p) {
    std::vector<int> out;
    const Poly x = {0, 1};
    Poly h = pmod(x, f, p);   // x^{p^i} mod current f
    int i = 0;
    while (pdeg(f) >= 1) {
        ++i;
        if (2 * i > pdeg(f)) {
            out.push_back(pdeg(f));
            break;
        }
        h = ppowmod(std::move(h), p, f, p);
        Poly g = pgcd(psub(h, x, p), f, p);
        if (pdeg(g) >= 1) {
            for (int k = 0; k < pdeg(g) / i; ++k) out.push_back(i);
            f = pdiv(std::move(f), g, p);
            if (pdeg(f) >= 1) h = pmod(std::move(h), f, p);
        }
    }
    return out;
}

// --- squarefreeness over Q: rational-coefficient Euclid against f' ---

using QPoly = std::vector<Rational>;

void qtrim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly qmod(QPoly a, const QPoly& b) {
    while (a.size() >= b.size()) {
        Rational q = a.back() / b.back();
        size_t sh = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[sh + i] -= q * b[i];
        qtrim(a);   // the top coefficient cancels exactly
    }
    return a;
}

int q_gcd_degree_with_derivative(const std::vector<i64>& c) {
    QPoly a(c.begin(), c.end());
    QPoly b;
    for (size_t i = 1; i < c.size(); ++i)
        b.push_back(Rational(static_cast<long long>(i)) * c[i]);
    qtrim(a);
    qtrim(b);
    while (!b.empty()) {
        QPoly r = qmod(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return static_cast<int>(a.size()) - 1;
}

// --- fixed-chunk per-prime evaluation, deterministic in the worker count ---

constexpr size_t kPrimeChunk = 256;

std::vector<i64> per_prime_map(i64 X, const PrimeTable& table, int workers,
                               const std::function<i64(i64)>& fn) {
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (X > table.limit())
        throw std::invalid_argument("prime table smaller than X");
    const std::vector<i64>& primes = table.primes();
    const size_t n = static_cast<size_t>(
        std::upper_bound(primes.begin(), primes.end(), X) - primes.begin());
    std::vector<i64> out(n, 0);
    const size_t nchunks = (n + kPrimeChunk - 1) / kPrimeChunk;

    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex err_mu;
    bool failed = false;
    std::string err_msg;

    auto work = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) return;
            size_t ci = next.fetch_add(1, std::memory_order_relaxed);
            if (ci >= nchunks) return;
            size_t lo = ci * kPrimeChunk;
            size_t hi = std::min(n, lo + kPrimeChunk);
            try {
                for (size_t i = lo; i < hi; ++i) out[i] = fn(primes[i]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!failed) {
                    failed = true;
                    err_msg = e.what();
                }
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    size_t nthreads = std::min<size_t>(static_cast<size_t>(workers),
                                       std::max<size_t>(nchunks, 1));
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (failed) throw std::runtime_error(err_msg);
    return out;
}

// Per-prime codes for the degree-based densities.
enum : i64 { kSkip = -1, kMiss = 0, kHit = 1 };

i64 degree_code(const IntPolynomial& f, i64 p, bool want_gcd_one) {
    if (f.coeffs().back() % p == 0) return kSkip;
    std::optional<std::vector<int>> deg = factor_degrees_mod_p(f, p);
    if (!deg) return kSkip;
    if (want_gcd_one) {
        i64 g = 0;
        for (int e : *deg) g = std::gcd(g, static_cast<i64>(e));
        return g == 1 ? kHit : kMiss;
    }
    return !deg->empty() && deg->front() == 1 ? kHit : kMiss;
}

DensityReport fold_density(i64 X, const std::vector<i64>& codes,
                           std::optional<Rational> predicted) {
    DensityReport rep;
    rep.X = X;
    rep.predicted = std::move(predicted);
    for (i64 c : codes) {
        if (c == kSkip) continue;
        ++rep.primes_used;
        if (c == kHit) ++rep.hits;
    }
    if (rep.primes_used == 0)
        throw std::runtime_error("no usable primes below X");
    rep.empirical =
        static_cast<double>(rep.hits) / static_cast<double>(rep.primes_used);
    return rep;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t k = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < k; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = k * sxx - sx * sx;
    if (denom == 0) throw std::runtime_error("degenerate cutoff ladder");
    return (k * sxy - sx * sy) / denom;
}

} // namespace

IntPolynomial::IntPolynomial(std::vector<i64> coeffs) : c_(std::move(coeffs)) {
    ptrim(c_);
    if (c_.empty()) throw std::invalid_argument("zero polynomial");
    if (degree() > kMaxDegree)
        throw std::invalid_argument("polynomial degree above 60");
    if (degree() >= 1 && q_gcd_degree_with_derivative(c_) >= 1)
        throw std::invalid_argument("polynomial is not squarefree over Q");
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
    std::istringstream is(text);
    std::vector<i64> c;
    long long v = 0;
    while (is >> v) c.push_back(v);
    if (!is.eof())
        throw std::invalid_argument("bad polynomial coefficient in '" + text +
                                    "'");
    if (c.empty())
        throw std::invalid_argument("empty polynomial specification");
    return IntPolynomial(std::move(c));
}

std::optional<std::vector<int>> factor_degrees_mod_p(const IntPolynomial& f,
                                                     i64 p) {
    if (p < 2) throw std::invalid_argument("p must be a prime");
    if (p > kMaxDdfPrime)
        throw std::invalid_argument("p above the factorization prime cap");
    if (f.coeffs().back() % p == 0)
        throw std::invalid_argument("p divides the leading coefficient");
    Poly fp = reduce_mod_p(f.coeffs(), p);
    if (pdeg(fp) == 0) return std::vector<int>{};
    make_monic(fp, p);
    Poly g = pgcd(fp, pderiv(fp, p), p);
    if (pdeg(g) >= 1) return std::nullopt;   // ramified
    return ddf_degrees(std::move(fp), p);
}

DensityReport root_density(const IntPolynomial& f, i64 X,
                           std::optional<Rational> predicted,
                           const PrimeTable& table, int workers) {
    if (X < 100) throw std::invalid_argument("X must be at least 100");
    std::vector<i64> codes = per_prime_map(
        X, table, workers, [&f](i64 p) { return degree_code(f, p, false); });
    return fold_density(X, codes, std::move(predicted));
}

DensityReport gcd_one_density(const IntPolynomial& f, i64 X,
                              std::optional<Rational> predicted,
                              const PrimeTable& table, int workers) {
    if (X < 100) throw std::invalid_argument("X must be at least 100");
    std::vector<i64> codes = per_prime_map(
        X, table, workers, [&f](i64 p) { return degree_code(f, p, true); });
    return fold_density(X, codes, std::move(predicted));
}

DensityReport fermat_delta_empirical(int d, i64 X, const PrimeTable& table,
                                     int workers) {
    if (d < 2) throw std::invalid_argument("degree must be >= 2");
    if (X < 100) throw std::invalid_argument("X must be at least 100");

    auto fn = [d](i64 p) -> i64 {
        if (d % p == 0) return kSkip;   // ramified for the family
        using u64 = std::uint64_t;
        const u64 up = static_cast<u64>(p);
        thread_local std::vector<std::uint8_t> mark;
        mark.assign(static_cast<size_t>(p), 0);
        for (u64 x = 1; x < up; ++x) {
            u64 r = 1, b = x;
            int e = d;
            while (e > 0) {
                if (e & 1) r = r * b % up;
                b = b * b % up;
                e >>= 1;
            }
            mark[static_cast<size_t>(r)] = 1;
        }
        // (a0:a1) with a0 a1 != 0 <-> t = a1/a0 in F_p^*; the fibre has no
        // line exactly when -t is outside the d-th-power image.
        i64 count = 0;
        for (i64 t = 1; t < p; ++t)
            if (!mark[static_cast<size_t>(p - t)]) ++count;
        return count;
    };

    std::vector<i64> counts = per_prime_map(X, table, workers, fn);
    const std::vector<i64>& primes = table.primes();

    DensityReport rep;
    rep.X = X;
    double sum = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == kSkip) continue;
        ++rep.primes_used;
        rep.hits += counts[i];
        sum += static_cast<double>(counts[i]) / static_cast<double>(primes[i]);
    }
    if (rep.primes_used == 0)
        throw std::runtime_error("no usable primes below X");
    rep.empirical = 3.0 * sum / static_cast<double>(rep.primes_used);
    rep.predicted = Rational(3) * (Rational(1) - fermat_delta_closed(d));
    return rep;
}

double mertens_exponent(const IntPolynomial& f, i64 X, const PrimeTable& table,
                        int workers) {
    if (X < 10'000) throw std::invalid_argument("X must be at least 10^4");

    std::vector<i64> cutoffs;
    for (int j = 4; j <= 8; ++j) {
        i64 c = j == 8 ? X
                       : static_cast<i64>(std::floor(
                             std::pow(static_cast<double>(X), j / 8.0)));
        c = std::min(c, X);
        if (cutoffs.empty() || c > cutoffs.back()) cutoffs.push_back(c);
    }

    std::vector<i64> codes = per_prime_map(
        X, table, workers, [&f](i64 p) { return degree_code(f, p, false); });
    const std::vector<i64>& primes = table.primes();

    std::vector<double> shell(cutoffs.size(), 0.0);
    for (size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] != kHit) continue;
        size_t j = static_cast<size_t>(
            std::lower_bound(cutoffs.begin(), cutoffs.end(), primes[i]) -
            cutoffs.begin());
        shell[j] += 1.0 / static_cast<double>(primes[i]);
    }
    std::vector<double> xs(cutoffs.size()), ys(cutoffs.size());
    double acc = 0.0;
    for (size_t j = 0; j < cutoffs.size(); ++j) {
        acc += shell[j];
        xs[j] = std::log(std::log(static_cast<double>(cutoffs[j])));
        ys[j] = acc;
    }
    return ls_slope(xs, ys);
}

std::string density_csv(const std::vector<DensityReport>& reports) {
    std::ostringstream os;
    os << "X,primes_used,hits,empirical,predicted\n";
    os << std::fixed << std::setprecision(6);
    for (const DensityReport& r : reports) {
        os << r.X << ',' << r.primes_used << ',' << r.hits << ','
           << r.empirical << ',';
        if (r.predicted) os << frac_string(*r.predicted);
        os << '\n';
    }
    return os.str();
}

} // namespace splitdens
