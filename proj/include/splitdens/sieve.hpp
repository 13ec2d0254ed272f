#pragma once

// Explicit large sieve: per-prime excluded-residue weights omega(p), the
// weight sum L(B) over squarefree moduli, and the resulting upper bound
// 2B / L(B^{1/4}) for affine counts sieved by square moduli.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitdens/arith.hpp"
#include "splitdens/census.hpp"
#include "splitdens/rational.hpp"

namespace splitdens {

// Excluded-residue density r(p)/p of an affine conic-type family at a good
// odd prime p: r(p) = 1 when the fibre over t = 0 is nonsplit at p (a a
// nonsquare mod p), 0 otherwise; identically 0 for ct_multinorm. Throws for
// projective families, composite p, or p in the family's bad set.
Rational excluded_residue_density(const FamilySpec& family, i64 p,
                                  const PrimeTable& table);

// A per-prime sieve weight, always in [0,1). Evaluation assumes p is prime.
class OmegaFunction {
public:
    enum class Kind { zero, reciprocal, table, family };

    static OmegaFunction zero();                      // omega = 0 everywhere
    static OmegaFunction reciprocal();                // omega(p) = 1/p
    static OmegaFunction from_table(
        std::vector<std::pair<i64, Rational>> entries);   // absent -> 0
    static OmegaFunction from_family(FamilySpec family);  // r(p)/p, 0 on bad p

    double value(i64 p) const;
    Kind kind() const { return kind_; }
    const FamilySpec* family() const {
        return kind_ == Kind::family ? &family_ : nullptr;
    }

private:
    OmegaFunction() = default;

    Kind kind_ = Kind::zero;
    std::vector<std::pair<i64, double>> table_;   // sorted by prime
    FamilySpec family_ = FamilySpec::quadratic_norm(-1);
};

// L(B) = sum over squarefree a <= B of prod_{p | a} omega(p)/(1-omega(p)),
// evaluated by a divisor recurrence over the SPF table. Terms are
// nonnegative doubles, so the accumulation carries no cancellation.
double large_sieve_L(i64 B, const OmegaFunction& omega, const PrimeTable& table);

struct SieveReport {
    i64 B = 0;
    double L_value = 0.0;             // L at floor(B^{1/4})
    double bound = 0.0;               // 2B / L_value
    std::optional<i64> empirical;     // N_loc(B) when omega came from a family
};

// The instantiated case n = 1, m = 2 of the square-moduli sieve over Z:
// count <= 2B / L(floor(B^{1/4})). For a family-derived omega over an
// affine base, the empirical N_loc(B) is attached for comparison.
SieveReport sieve_bound(i64 B, const OmegaFunction& omega, int n, int m,
                        const PrimeTable& table, int workers = 1);

// Fit log L(B) = delta * log log B + const over the ladder (>= 4 increasing
// entries, B >= 2). The expected exponent is the caller's reference value;
// it must be nonnegative.
FitResult verify_L_growth(const OmegaFunction& omega,
                          const Rational& expected_delta,
                          const std::vector<i64>& ladder,
                          const PrimeTable& table);

// CSV with header `B,L,bound,empirical`; empirical column empty when absent.
std::string sieve_csv(const std::vector<SieveReport>& reports);

} // namespace splitdens
