#include "splitdens/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace splitdens {

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("64-bit multiply overflow");
    return r;
}

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("64-bit add overflow");
    return r;
}

PrimeTable::PrimeTable(i64 limit) : limit_(limit) {
    if (limit < 2)
        throw std::invalid_argument("PrimeTable limit must be >= 2");
    if (limit > kMaxLimit)
        throw std::invalid_argument("PrimeTable limit exceeds desk-scale cap");
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    for (i64 i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(i);
        }
        for (i64 p : primes_) {
            if (p > spf_[i] || p * i > limit)
                break;
            spf_[p * i] = static_cast<std::uint32_t>(p);
        }
    }
}

bool PrimeTable::is_prime(i64 n) const {
    if (n < 2)
        return false;
    if (n > limit_)
        throw std::out_of_range("PrimeTable::is_prime beyond table limit");
    return spf_[n] == static_cast<std::uint32_t>(n);
}

i64 PrimeTable::smallest_factor(i64 n) const {
    if (n < 2 || n > limit_)
        throw std::out_of_range("PrimeTable::smallest_factor out of range");
    return spf_[n];
}

i64 Factorization::reconstruct() const {
    i64 v = sign;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i)
            v = checked_mul(v, p);
    return v;
}

Factorization factorize(i64 n, const PrimeTable& table) {
    if (n == 0)
        throw std::invalid_argument("factorize(0) undefined");
    Factorization f;
    if (n < 0) {
        f.sign = -1;
        n = -n;
    }
    if (n > table.limit())
        throw std::out_of_range("factorize beyond table limit");
    while (n > 1) {
        i64 p = table.smallest_factor(n);
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    }
    return f;
}

int valuation(i64 n, i64 p) {
    if (n == 0)
        throw std::invalid_argument("valuation of 0 undefined");
    if (p < 2)
        throw std::invalid_argument("valuation needs p >= 2");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int mobius(i64 n, const PrimeTable& table) {
    Factorization f = factorize(n, table);
    for (auto [p, e] : f.factors)
        if (e >= 2)
            return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

i64 euler_phi(i64 n, const PrimeTable& table) {
    if (n < 1)
        throw std::invalid_argument("euler_phi needs n >= 1");
    i64 phi = 1;
    for (auto [p, e] : factorize(n, table).factors) {
        phi *= p - 1;
        for (int i = 1; i < e; ++i)
            phi *= p;
    }
    return phi;
}

bool is_perfect_square(i64 n) {
    if (n < 0)
        return false;
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    for (i64 s = std::max<i64>(0, r - 2); s <= r + 2; ++s)
        if (s * s == n)
            return true;
    return false;
}

i64 mod_pow(i64 base, i64 exp, i64 mod) {
    if (mod <= 0)
        throw std::invalid_argument("mod_pow needs positive modulus");
    if (exp < 0)
        throw std::invalid_argument("mod_pow needs nonnegative exponent");
    i64 r = 1 % mod;
    i64 b = base % mod;
    if (b < 0)
        b += mod;
    while (exp > 0) {
        if (exp & 1)
            r = static_cast<i64>(static_cast<__int128>(r) * b % mod);
        b = static_cast<i64>(static_cast<__int128>(b) * b % mod);
        exp >>= 1;
    }
    return r;
}

int legendre(i64 a, i64 p) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("legendre needs an odd prime");
    i64 r = a % p;
    if (r < 0)
        r += p;
    if (r == 0)
        return 0;
    i64 e = mod_pow(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

int jacobi(i64 a, i64 n) {
    if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi needs odd positive n");
    a %= n;
    if (a < 0)
        a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5)
                result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

namespace {

// (u-1)/2 mod 2 for odd u, read off u mod 4.
int eps2(i64 u) {
    i64 r = ((u % 4) + 4) % 4;
    return r == 1 ? 0 : 1;
}

// (u^2-1)/8 mod 2 for odd u, read off u mod 8.
int omega2(i64 u) {
    i64 r = ((u % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 0 : 1;
}

} // namespace

int hilbert_symbol(i64 a, i64 b, const PlaceQ& v) {
    if (a == 0 || b == 0)
        throw std::invalid_argument("hilbert_symbol needs nonzero arguments");
    if (v.is_real)
        return (a < 0 && b < 0) ? -1 : 1;

    i64 p = v.p;
    int alpha = valuation(a, p);
    int beta = valuation(b, p);
    i64 u = a;
    for (int i = 0; i < alpha; ++i)
        u /= p;
    i64 w = b;
    for (int i = 0; i < beta; ++i)
        w /= p;

    if (p == 2) {
        int e = eps2(u) * eps2(w) + alpha * omega2(w) + beta * omega2(u);
        return e % 2 == 0 ? 1 : -1;
    }
    int sign = 1;
    if ((alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1)
        sign = -sign;
    if (beta % 2 == 1 && legendre(u, p) == -1)
        sign = -sign;
    if (alpha % 2 == 1 && legendre(w, p) == -1)
        sign = -sign;
    return sign;
}

} // namespace splitdens
