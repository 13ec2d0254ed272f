#include "splitdens/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace splitdens {

Rational excluded_residue_density(const FamilySpec& family, i64 p,
                                  const PrimeTable& table) {
    if (p < 2 || p > table.limit() || !table.is_prime(p))
        throw std::invalid_argument(
            "excluded_residue_density needs a prime inside the table");
    switch (family.kind) {
    case FamilySpec::Kind::serre_conic:
    case FamilySpec::Kind::quadratic_norm:
        if (p == 2 || family.a % p == 0)
            throw std::invalid_argument("prime lies in the family's bad set");
        return legendre(family.a, p) == -1 ? make_rational(1, p) : Rational(0);
    case FamilySpec::Kind::ct_multinorm:
        if (p == 2 || family.a % p == 0 || family.b % p == 0)
            throw std::invalid_argument("prime lies in the family's bad set");
        return Rational(0);   // every fibre splits; nothing is excluded
    default:
        throw std::invalid_argument("unsupported family for the sieve");
    }
}

OmegaFunction OmegaFunction::zero() {
    OmegaFunction f;
    f.kind_ = Kind::zero;
    return f;
}

OmegaFunction OmegaFunction::reciprocal() {
    OmegaFunction f;
    f.kind_ = Kind::reciprocal;
    return f;
}

OmegaFunction OmegaFunction::from_table(
    std::vector<std::pair<i64, Rational>> entries) {
    OmegaFunction f;
    f.kind_ = Kind::table;
    f.table_.reserve(entries.size());
    for (const auto& [p, v] : entries) {
        if (p < 2)
            throw std::invalid_argument("omega table keys must be primes");
        if (v < Rational(0) || v >= Rational(1))
            throw std::invalid_argument("omega values must lie in [0,1)");
        f.table_.emplace_back(p, v.convert_to<double>());
    }
    std::sort(f.table_.begin(), f.table_.end());
    for (size_t i = 1; i < f.table_.size(); ++i)
        if (f.table_[i].first == f.table_[i - 1].first)
            throw std::invalid_argument("duplicate prime in omega table");
    return f;
}

OmegaFunction OmegaFunction::from_family(FamilySpec family) {
    if (family.projective_base)
        throw std::invalid_argument("unsupported family for the sieve");
    OmegaFunction f;
    f.kind_ = Kind::family;
    f.family_ = family;
    return f;
}

double OmegaFunction::value(i64 p) const {
    switch (kind_) {
    case Kind::zero:
        return 0.0;
    case Kind::reciprocal:
        return 1.0 / static_cast<double>(p);
    case Kind::table: {
        auto it = std::lower_bound(
            table_.begin(), table_.end(), p,
            [](const std::pair<i64, double>& e, i64 key) { return e.first < key; });
        return it != table_.end() && it->first == p ? it->second : 0.0;
    }
    case Kind::family:
        // Bad primes are left out of the sieve entirely.
        if (p == 2 || family_.a % p == 0)
            return 0.0;
        if (family_.kind == FamilySpec::Kind::ct_multinorm)
            return 0.0;
        return legendre(family_.a, p) == -1 ? 1.0 / static_cast<double>(p) : 0.0;
    }
    return 0.0;
}

double large_sieve_L(i64 B, const OmegaFunction& omega, const PrimeTable& table) {
    if (B < 1)
        throw std::invalid_argument("large_sieve_L needs B >= 1");
    if (B > table.limit())
        throw std::invalid_argument("prime table too small for L(B)");

    // w[p] = omega(p)/(1-omega(p)) at primes, 0 elsewhere.
    std::vector<double> w(static_cast<size_t>(B) + 1, 0.0);
    for (i64 p : table.primes()) {
        if (p > B)
            break;
        const double om = omega.value(p);
        if (om < 0.0 || om >= 1.0)
            throw std::domain_error("omega weight must lie in [0,1)");
        w[static_cast<size_t>(p)] = om / (1.0 - om);
    }

    // g[a] = |mu(a)| prod w(p): strip the smallest prime factor once; a
    // second copy of it kills the term.
    std::vector<double> g(static_cast<size_t>(B) + 1, 0.0);
    g[1] = 1.0;
    double L = 1.0;
    for (i64 a = 2; a <= B; ++a) {
        const i64 p = table.smallest_factor(a);
        const i64 m = a / p;
        if (m % p == 0)
            continue;
        const double val = g[static_cast<size_t>(m)] * w[static_cast<size_t>(p)];
        g[static_cast<size_t>(a)] = val;
        L += val;
    }
    return L;
}

SieveReport sieve_bound(i64 B, const OmegaFunction& omega, int n, int m,
                        const PrimeTable& table, int workers) {
    if (n != 1 || m != 2)
        throw std::invalid_argument(
            "only the n = 1, m = 2 square-moduli sieve is instantiated");
    if (B < 1)
        throw std::invalid_argument("sieve_bound needs B >= 1");

    i64 z = static_cast<i64>(std::floor(std::pow(static_cast<double>(B), 0.25)));
    if (z < 1)
        z = 1;
    while ((z + 1) * (z + 1) * (z + 1) * (z + 1) <= B)
        ++z;
    while (z > 1 && z * z * z * z > B)
        --z;

    SieveReport rep;
    rep.B = B;
    rep.L_value = large_sieve_L(z, omega, table);
    rep.bound = 2.0 * static_cast<double>(B) / rep.L_value;
    if (const FamilySpec* fam = omega.family())
        rep.empirical = count_nloc(*fam, {B}, table, workers).rows[0].n_loc;
    return rep;
}

FitResult verify_L_growth(const OmegaFunction& omega,
                          const Rational& expected_delta,
                          const std::vector<i64>& ladder,
                          const PrimeTable& table) {
    if (expected_delta < Rational(0))
        throw std::invalid_argument("expected exponent must be nonnegative");
    if (ladder.size() < 4)
        throw std::invalid_argument("verify_L_growth needs >= 4 ladder entries");
    if (ladder.front() < 2)
        throw std::invalid_argument("verify_L_growth needs B >= 2");
    for (size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1])
            throw std::invalid_argument("ladder must be strictly increasing");

    std::vector<double> xs, ys;
    for (i64 B : ladder) {
        xs.push_back(std::log(std::log(static_cast<double>(B))));
        ys.push_back(std::log(large_sieve_L(B, omega, table)));
    }
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / k;
    double sse = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        sse += e * e;
    }
    FitResult fit;
    fit.delta_hat = slope;
    fit.constant_hat = std::exp(intercept);
    fit.residual = std::sqrt(sse / k);
    fit.rows_used = static_cast<int>(xs.size());
    return fit;
}

std::string sieve_csv(const std::vector<SieveReport>& reports) {
    std::ostringstream os;
    os << "B,L,bound,empirical\n" << std::fixed << std::setprecision(6);
    for (const SieveReport& r : reports) {
        os << r.B << ',' << r.L_value << ',' << r.bound << ',';
        if (r.empirical)
            os << *r.empirical;
        os << '\n';
    }
    return os.str();
}

} // namespace splitdens
