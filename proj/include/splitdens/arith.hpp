#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace splitdens {

using i64 = std::int64_t;

// Overflow-checked 64-bit helpers; throw std::overflow_error.
i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);

// Smallest-prime-factor sieve shared by everything that factors integers.
// Memory is ~4 bytes per entry; the cap keeps desk-scale builds sane.
class PrimeTable {
public:
    static constexpr i64 kMaxLimit = 100'000'000;

    explicit PrimeTable(i64 limit);

    i64 limit() const { return limit_; }
    bool is_prime(i64 n) const;
    i64 smallest_factor(i64 n) const;   // n in [2, limit]
    const std::vector<i64>& primes() const { return primes_; }

private:
    i64 limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<i64> primes_;
};

struct Factorization {
    int sign = 1;                                // +1 or -1
    std::vector<std::pair<i64, int>> factors;    // (prime, exponent), primes increasing

    i64 reconstruct() const;
};

// |n| must be within the table; n == 0 is an error.
Factorization factorize(i64 n, const PrimeTable& table);

// Exponent of p in n; n != 0, p >= 2.
int valuation(i64 n, i64 p);

int mobius(i64 n, const PrimeTable& table);
i64 euler_phi(i64 n, const PrimeTable& table);

bool is_perfect_square(i64 n);   // false for negatives

i64 mod_pow(i64 base, i64 exp, i64 mod);

// Legendre symbol (a|p), p an odd prime.
int legendre(i64 a, i64 p);

// Jacobi symbol via the reciprocity loop; n odd positive, no factorization.
int jacobi(i64 a, i64 n);

// A place of Q: the real place or a finite prime.
struct PlaceQ {
    bool is_real;
    i64 p;   // meaningful only when finite

    static PlaceQ real() { return {true, 0}; }
    static PlaceQ finite(i64 prime) { return {false, prime}; }
};

// Hilbert symbol (a,b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial
// solution over the completion at v. Standard formulae: sign rule at the
// real place, valuation/Legendre rule at odd p, eps/omega mod-8 rule at 2.
int hilbert_symbol(i64 a, i64 b, const PlaceQ& v);

} // namespace splitdens
