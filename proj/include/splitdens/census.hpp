#pragma once

// Parameter census over families of varieties: enumerate base points of
// bounded height, count everywhere-locally-solvable fibres, and fit the
// log-power decay exponent of N_loc.

#include <functional>
#include <string>
#include <vector>

#include "splitdens/arith.hpp"

namespace splitdens {

// The four families in scope. Bases: serre_conic, quadratic_norm and
// ct_multinorm live over an affine t-line (t = 1..B); fermat lives over
// the projective plane of coefficient triples.
struct FamilySpec {
    enum class Kind { serre_conic, fermat, quadratic_norm, ct_multinorm };

    Kind kind;
    i64 a = 0;
    i64 b = 0;                     // ct_multinorm only
    int d = 0;                     // fermat only
    bool projective_base = false;
    int base_dim = 1;              // n of P^n resp. A^n

    // Factories validate: a (and b, ab) nonsquare where the family needs a
    // field, d >= 2. quadratic_norm allows square a (split algebra; the
    // census then degenerates to N_loc = N_total, which is still a useful
    // control) but not a = 0.
    static FamilySpec serre_conic(i64 a);
    static FamilySpec fermat(int d);
    static FamilySpec quadratic_norm(i64 a);
    static FamilySpec ct_multinorm(i64 a, i64 b);

    std::string name() const;
};

struct ParamPoint {
    std::vector<i64> coords;
};

struct CountRow {
    i64 B = 0;
    i64 n_total = 0;
    i64 n_loc = 0;
};

struct CountLadder {
    std::vector<CountRow> rows;
};

struct FitResult {
    double delta_hat = 0.0;
    double constant_hat = 0.0;
    double residual = 0.0;      // rms residual of the fitted line
    int rows_used = 0;
    int rows_skipped = 0;       // N_loc = 0 rows dropped from the window
};

// Every point of P^n(Q) with H <= B exactly once, n in {1,2}: coprime
// integer coordinates, first nonzero coordinate positive, max |x_i| <= B.
// Emitted in lexicographic coordinate order.
void enum_projective(int n, i64 B,
                     const std::function<void(const ParamPoint&)>& sink);
i64 count_projective(int n, i64 B);

// One fibre: is the fibre of `family` over `point` everywhere locally
// solvable? Checks the real place plus every prime below the good-prime
// threshold or dividing the relevant coefficient data. The table must be
// large enough to factor the coordinates.
bool fibre_els(const FamilySpec& family, const ParamPoint& point,
               const PrimeTable& table);

// Count N_total and N_loc at each ladder height. The ladder must be
// strictly increasing and positive. Work is split into fixed chunks of the
// outermost coordinate and handed to `workers` threads; per-chunk integer
// tallies are merged positionally, so the result is identical for every
// worker count. DepthCapExceeded from a fibre decision is rethrown with the
// offending parameter point in the message.
CountLadder count_nloc(const FamilySpec& family, const std::vector<i64>& ladder,
                       const PrimeTable& table, int workers = 1);

// Least squares for log(N_loc / B^{n+1}) = log c - delta * log log B over
// the top half of the ladder (largest B), dropping rows with N_loc = 0.
// Pass n = base dimension for projective bases; for an affine base with m
// coordinates pass n = m - 1 so that B^{n+1} matches N_total growth.
// Needs at least 4 rows with B >= 100.
FitResult fit_exponent(const CountLadder& ladder, int n);

// CSV with header `B,N_total,N_loc`, one row per rung, trailing newline.
std::string ladder_csv(const CountLadder& ladder);

// Single-line key/value block for a fit, fixed six-decimal formatting.
std::string fit_block(const FitResult& fit);

} // namespace splitdens
