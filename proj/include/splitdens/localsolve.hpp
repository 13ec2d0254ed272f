#pragma once

#include "splitdens/arith.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitdens {

// Diagonal form a0 x0^d + ... + a_{n-1} x_{n-1}^d with n >= 3, all ai nonzero.
struct DiagonalForm {
    int degree;
    std::vector<i64> coeffs;
    DiagonalForm(int d, std::vector<i64> a);
};

// Certificate for a p-adic zero: f(point) == 0 mod p^k, the coord-th partial
// derivative has valuation exactly m, and k >= 2m+1, so Newton iteration in
// that coordinate converges to an exact zero. The form stored here is the
// p-power-reduced equivalent of the queried form (coefficient valuations
// pushed into [0, d) and the common p-power removed), which is what the
// search runs on; it has the same solvability over Q_p.
struct HenselPoint {
    DiagonalForm form;
    i64 p;
    std::vector<i64> point;   // residues mod p^k
    int k;
    int m;
    int coord;
};

struct LocalVerdict {
    enum class Cert { hensel, real_signs, exhausted_tree, symbol };
    bool solvable = false;
    Cert cert = Cert::exhausted_tree;
    std::optional<HenselPoint> hensel;   // cert == hensel
    int depth = 0;                       // cert == exhausted_tree: deepest live level
    int symbol = 0;                      // cert == symbol: the Hilbert symbol value
};

// The residue tree needed to go deeper than the configured cap allows; the
// verdict is unknown and must never be guessed.
struct DepthCapExceeded : std::runtime_error {
    explicit DepthCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// ax^2 + by^2 + cz^2 = 0 over Q_v, decided by the Hilbert symbol (-ac,-bc)_v.
LocalVerdict conic_local(i64 a, i64 b, i64 c, PlaceQ v);

// Nontrivial real zero: always for odd degree, mixed signs for even.
LocalVerdict diag_form_real(const DiagonalForm& f);

// Nontrivial zero over Q_p, by depth-first search over primitive residue
// vectors with quantitative Hensel acceptance.
LocalVerdict diag_form_padic(const DiagonalForm& f, i64 p);

// Recheck a certificate from scratch with exact integer arithmetic.
bool verify_hensel_certificate(const HenselPoint& cert);

// Smallest P such that every prime p > P not dividing d*prod(coeffs) is
// guaranteed a Q_p point (Hasse-Weil bound for the smooth plane curve).
long long good_prime_threshold(const DiagonalForm& f);

// Everywhere-locally-solvable test for a0 x^d + a1 y^d + a2 z^d = 0: the real
// place plus every prime below the good reduction threshold or dividing
// d*a0*a1*a2. The degree-2 case goes through the symbol formula.
bool fermat_els(int d, i64 a0, i64 a1, i64 a2, const PrimeTable& table);

// Is t a product of local norms from Q(sqrt a), Q(sqrt b), Q(sqrt ab) inside
// Q_v? Computed in the square-class group of Q_v as the join of the three
// character kernels.
bool multinorm_ct_local(i64 a, i64 b, i64 t, PlaceQ v);

} // namespace splitdens
