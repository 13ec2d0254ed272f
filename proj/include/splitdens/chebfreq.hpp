#pragma once

// Empirical frobenian densities from prime data: distinct-degree
// factorization of an integer polynomial at many primes, root and
// gcd-of-degrees densities, the Fermat-family exponent estimator, and a
// Mertens-style pole-order probe.

#include <optional>
#include <string>
#include <vector>

#include "splitdens/arith.hpp"
#include "splitdens/rational.hpp"

namespace splitdens {

// Dense integer polynomial, constant term first. Construction trims
// trailing zeros, rejects the zero polynomial, degrees above 60 (the mod-p
// arithmetic packs coefficient products into 64 bits), and polynomials
// that are not squarefree over Q (gcd with the derivative, exact rational
// arithmetic).
class IntPolynomial {
public:
    static constexpr int kMaxDegree = 60;

    explicit IntPolynomial(std::vector<i64> coeffs);

    // Space-separated coefficients, constant term first: "-2 0 1" = x^2 - 2.
    static IntPolynomial parse(const std::string& text);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<i64>& coeffs() const { return c_; }

private:
    std::vector<i64> c_;
};

struct DensityReport {
    i64 X = 0;
    i64 hits = 0;
    i64 primes_used = 0;
    double empirical = 0.0;
    std::optional<Rational> predicted;
};

// Multiset (ascending) of irreducible-factor degrees of f mod p, or nullopt
// when p is ramified (f mod p not squarefree; such primes are skipped by
// the density estimators). p must be a prime not dividing the leading
// coefficient, and at most 5*10^7.
std::optional<std::vector<int>> factor_degrees_mod_p(const IntPolynomial& f,
                                                     i64 p);

// Fraction of unramified primes p <= X where f has a root mod p (a
// degree-1 factor). X >= 100.
DensityReport root_density(const IntPolynomial& f, i64 X,
                           std::optional<Rational> predicted,
                           const PrimeTable& table, int workers = 1);

// Fraction of unramified primes p <= X with gcd of the factor degrees
// equal to 1 (the fibre-splitting condition for a multinorm algebra).
DensityReport gcd_one_density(const IntPolynomial& f, i64 X,
                              std::optional<Rational> predicted,
                              const PrimeTable& table, int workers = 1);

// Exponent estimator for the degree-d Fermat family: for each prime
// p <= X not dividing d, count points (a0:a1) of P^1(F_p) with a0*a1 != 0
// whose ratio -a1/a0 is not a d-th power in F_p (marking the d-th-power
// image residue by residue), then average 3*count/p over the primes.
// predicted is 3*(1 - fermat_delta_closed(d)). d >= 2, X >= 100.
DensityReport fermat_delta_empirical(int d, i64 X, const PrimeTable& table,
                                     int workers = 1);

// Slope of sum_{p in F, p <= x} 1/p against log log x over five geometric
// cutoffs x = X^{4/8..8/8}, where F is the set of unramified primes at
// which f has a root; estimates the frobenian mean m(F). X >= 10^4.
double mertens_exponent(const IntPolynomial& f, i64 X, const PrimeTable& table,
                        int workers = 1);

// CSV with header `X,primes_used,hits,empirical,predicted`; the predicted
// column is a `p/q` string or empty.
std::string density_csv(const std::vector<DensityReport>& reports);

} // namespace splitdens
