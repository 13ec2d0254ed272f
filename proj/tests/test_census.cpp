#include "doctest.h"

#include "splitdens/arith.hpp"
#include "splitdens/census.hpp"
#include "splitdens/localsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using namespace splitdens;

namespace {

// Normalized representatives of P^n(Q) with H <= B by raw double/triple
// loop plus a set; the oracle the streaming enumerator is held to.
std::set<std::vector<i64>> brute_p1(i64 B) {
    std::set<std::vector<i64>> pts;
    for (i64 x0 = -B; x0 <= B; ++x0)
        for (i64 x1 = -B; x1 <= B; ++x1) {
            if (x0 == 0 && x1 == 0)
                continue;
            if (std::gcd(x0, x1) != 1)
                continue;
            i64 a = x0, b = x1;
            if (a < 0 || (a == 0 && b < 0)) {
                a = -a;
                b = -b;
            }
            pts.insert({a, b});
        }
    return pts;
}

std::set<std::vector<i64>> brute_p2(i64 B) {
    std::set<std::vector<i64>> pts;
    for (i64 x0 = -B; x0 <= B; ++x0)
        for (i64 x1 = -B; x1 <= B; ++x1)
            for (i64 x2 = -B; x2 <= B; ++x2) {
                if (x0 == 0 && x1 == 0 && x2 == 0)
                    continue;
                if (std::gcd(std::gcd(x0, x1), x2) != 1)
                    continue;
                i64 a = x0, b = x1, c = x2;
                i64 lead = a != 0 ? a : (b != 0 ? b : c);
                if (lead < 0) {
                    a = -a;
                    b = -b;
                    c = -c;
                }
                pts.insert({a, b, c});
            }
    return pts;
}

std::vector<std::vector<i64>> collect(int n, i64 B) {
    std::vector<std::vector<i64>> out;
    enum_projective(n, B, [&](const ParamPoint& p) { out.push_back(p.coords); });
    return out;
}

// Every prime = 3 mod 4 divides t to even order; the classical criterion
// for t to be a sum of two squares.
bool two_squares_condition(i64 t) {
    for (i64 p = 2; p * p <= t; ++p) {
        if (t % p != 0)
            continue;
        int e = 0;
        while (t % p == 0) {
            t /= p;
            ++e;
        }
        if (p % 4 == 3 && e % 2 == 1)
            return false;
    }
    if (t > 1 && t % 4 == 3)
        return false;
    return true;
}

bool rows_equal(const CountLadder& u, const CountLadder& v) {
    if (u.rows.size() != v.rows.size())
        return false;
    for (size_t i = 0; i < u.rows.size(); ++i)
        if (u.rows[i].B != v.rows[i].B || u.rows[i].n_total != v.rows[i].n_total ||
            u.rows[i].n_loc != v.rows[i].n_loc)
            return false;
    return true;
}

ParamPoint pt(std::vector<i64> c) { return ParamPoint{std::move(c)}; }

} // namespace

TEST_SUITE("census") {

TEST_CASE("projective enumeration matches the brute-force oracle") {
    for (i64 B : {1, 2, 3, 7}) {
        auto got = collect(1, B);
        auto want = brute_p1(B);
        CHECK(got.size() == want.size());
        std::set<std::vector<i64>> seen(got.begin(), got.end());
        CHECK(seen.size() == got.size());
        CHECK(seen == want);
        CHECK(std::is_sorted(got.begin(), got.end()));
    }
    for (i64 B : {1, 2, 3}) {
        auto got = collect(2, B);
        auto want = brute_p2(B);
        CHECK(got.size() == want.size());
        std::set<std::vector<i64>> seen(got.begin(), got.end());
        CHECK(seen.size() == got.size());
        CHECK(seen == want);
        CHECK(std::is_sorted(got.begin(), got.end()));
    }

    // Hand-enumerable heights: P^1 has (0:1),(1:0),(1:1),(1:-1) at B = 1 and
    // picks up (1:+-2),(2:+-1) at B = 2; P^2 has 13 points at B = 1.
    CHECK(count_projective(1, 1) == 4);
    CHECK(count_projective(1, 2) == 8);
    CHECK(count_projective(2, 1) == 13);

    CHECK_THROWS_AS(count_projective(3, 5), std::invalid_argument);
    CHECK_THROWS_AS(count_projective(1, 0), std::invalid_argument);
}

TEST_CASE("projective point properties and the Schanuel density") {
    for (const auto& c : collect(2, 4)) {
        CHECK(std::gcd(std::gcd(c[0], c[1]), c[2]) == 1);
        i64 lead = c[0] != 0 ? c[0] : (c[1] != 0 ? c[1] : c[2]);
        CHECK(lead > 0);
        CHECK(std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])}) <= 4);
    }

    const double pi = std::acos(-1.0);
    const double expected = 12.0 / (pi * pi) * 1e6;
    const double got = static_cast<double>(count_projective(1, 1000));
    CHECK(std::abs(got - expected) <= 0.005 * expected);
}

TEST_CASE("quadratic norm census against the two-squares criterion") {
    PrimeTable table(1000);
    auto fam = FamilySpec::quadratic_norm(-1);
    auto ladder = count_nloc(fam, {25, 50, 100}, table);

    i64 oracle = 0;
    size_t row = 0;
    for (i64 t = 1; t <= 100; ++t) {
        if (two_squares_condition(t))
            ++oracle;
        if (t == ladder.rows[row].B) {
            CHECK(ladder.rows[row].n_total == t);
            CHECK(ladder.rows[row].n_loc == oracle);
            ++row;
        }
    }
    CHECK(ladder.rows.back().n_loc == 43);

    // Same conic through the other route, fibre by fibre.
    for (i64 t = 1; t <= 60; ++t)
        CHECK(fibre_els(fam, pt({t}), table) == fermat_els(2, 1, 1, -t, table));

    // Square a: split algebra, everything is locally solvable.
    auto split = count_nloc(FamilySpec::quadratic_norm(4), {50, 100}, table);
    for (const auto& r : split.rows)
        CHECK(r.n_loc == r.n_total);
}

TEST_CASE("serre conic census and sparsity near ramified t") {
    PrimeTable table(1000);
    auto fam = FamilySpec::serre_conic(-1);

    // -x^2 + t y^2 = z^2 is solvable iff t is a sum of two squares, so the
    // B = 100 count coincides with the classical 43.
    auto ladder = count_nloc(fam, {100}, table);
    CHECK(ladder.rows[0].n_total == 100);
    CHECK(ladder.rows[0].n_loc == 43);

    // t of valuation one at a prime where -1 stays nonsquare kills the
    // fibre; even valuation rescues it.
    for (i64 p : {3, 7, 11, 19})
        CHECK_FALSE(fibre_els(fam, pt({p}), table));
    CHECK(fibre_els(fam, pt({9}), table));
    CHECK(fibre_els(fam, pt({49}), table));

    CHECK_THROWS_AS(FamilySpec::serre_conic(4), std::invalid_argument);
    CHECK_THROWS_AS(FamilySpec::serre_conic(0), std::invalid_argument);
}

TEST_CASE("ct multinorm fibres are everywhere locally solvable") {
    PrimeTable table(2000);
    auto ladder = count_nloc(FamilySpec::ct_multinorm(3, 5), {100, 1000}, table);
    for (const auto& r : ladder.rows) {
        CHECK(r.n_total == r.B);
        CHECK(r.n_loc == r.n_total);
    }
    auto ladder2 = count_nloc(FamilySpec::ct_multinorm(-1, 2), {500}, table);
    CHECK(ladder2.rows[0].n_loc == 500);

    CHECK_THROWS_AS(FamilySpec::ct_multinorm(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(FamilySpec::ct_multinorm(2, 8), std::invalid_argument);
    CHECK_THROWS_AS(FamilySpec::ct_multinorm(0, 5), std::invalid_argument);
}

TEST_CASE("fermat quadric census at small height") {
    PrimeTable table(1000);
    auto fam = FamilySpec::fermat(2);

    // The 13 height-1 coefficient triples: only x^2 + y^2 + z^2 = 0 fails
    // (at the real place); the triples with a zero coefficient all carry a
    // rational coordinate point.
    auto one = count_nloc(fam, {1}, table);
    CHECK(one.rows[0].n_total == 13);
    CHECK(one.rows[0].n_loc == 12);
    CHECK_FALSE(fibre_els(fam, pt({1, 1, 1}), table));
    CHECK(fibre_els(fam, pt({1, 1, -1}), table));
    CHECK(fibre_els(fam, pt({1, 0, 0}), table));

    auto ladder = count_nloc(fam, {1, 2, 3}, table);
    CHECK(ladder.rows[2].n_total == count_projective(2, 3));
    for (size_t i = 0; i < ladder.rows.size(); ++i) {
        CHECK(ladder.rows[i].n_loc <= ladder.rows[i].n_total);
        if (i > 0) {
            CHECK(ladder.rows[i].n_total > ladder.rows[i - 1].n_total);
            CHECK(ladder.rows[i].n_loc >= ladder.rows[i - 1].n_loc);
        }
    }

    // Census route (symbol based for d = 2) against fermat_els on every
    // height-3 parameter.
    i64 loc = 0;
    enum_projective(2, 3, [&](const ParamPoint& p) {
        bool got = fibre_els(fam, p, table);
        if (p.coords[0] != 0 && p.coords[1] != 0 && p.coords[2] != 0)
            CHECK(got ==
                  fermat_els(2, p.coords[0], p.coords[1], p.coords[2], table));
        else
            CHECK(got);
        if (got)
            ++loc;
    });
    CHECK(loc == ladder.rows[2].n_loc);
}

TEST_CASE("fermat cubic census agrees with a direct sweep") {
    PrimeTable table(1000);
    auto fam = FamilySpec::fermat(3);
    auto ladder = count_nloc(fam, {2}, table);

    i64 total = 0, loc = 0;
    enum_projective(2, 2, [&](const ParamPoint& p) {
        ++total;
        bool els = (p.coords[0] == 0 || p.coords[1] == 0 || p.coords[2] == 0)
                       ? true
                       : fermat_els(3, p.coords[0], p.coords[1], p.coords[2],
                                    table);
        if (els)
            ++loc;
    });
    CHECK(ladder.rows[0].n_total == total);
    CHECK(ladder.rows[0].n_loc == loc);
}

TEST_CASE("fermat quadric local ratio decays") {
    PrimeTable table(1000);
    auto ladder = count_nloc(FamilySpec::fermat(2), {20, 30, 40}, table);
    double prev = 2.0;
    for (const auto& r : ladder.rows) {
        double ratio = static_cast<double>(r.n_loc) /
                       (static_cast<double>(r.B) * r.B * r.B);
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("fit recovers synthetic exponents") {
    std::vector<i64> bs = {100, 300, 1000, 3000, 10000, 100000};

    CountLadder one_log;
    for (i64 B : bs) {
        double v = static_cast<double>(B) * B / std::log(static_cast<double>(B));
        one_log.rows.push_back({B, B * B, static_cast<i64>(v)});
    }
    auto fit = fit_exponent(one_log, 1);
    CHECK(std::abs(fit.delta_hat - 1.0) <= 0.02);
    CHECK(fit.rows_used == 3);
    CHECK(fit.residual >= 0.0);

    CountLadder no_log;
    for (i64 B : bs)
        no_log.rows.push_back({B, B * B, B * B});
    fit = fit_exponent(no_log, 1);
    CHECK(std::abs(fit.delta_hat) <= 0.02);
    CHECK(std::abs(fit.constant_hat - 1.0) <= 0.01);

    // Only the top half enters: garbage in the lower rungs is ignored.
    CountLadder mixed;
    mixed.rows.push_back({4, 99, 7});
    mixed.rows.push_back({10, 999, 999});
    mixed.rows.push_back({40, 9999, 1});
    for (i64 B : {100, 1000, 10000, 100000, 1000000})
        mixed.rows.push_back(
            {B, B * B, static_cast<i64>(static_cast<double>(B) * B /
                                        std::log(static_cast<double>(B)))});
    fit = fit_exponent(mixed, 1);
    CHECK(std::abs(fit.delta_hat - 1.0) <= 0.02);
    CHECK(fit.rows_used == 4);

    // N_loc = 0 rows inside the window are skipped, not fitted.
    CountLadder holed = no_log;
    holed.rows[4].n_loc = 0;
    fit = fit_exponent(holed, 1);
    CHECK(fit.rows_skipped == 1);
    CHECK(fit.rows_used == 2);
    CHECK(std::abs(fit.delta_hat) <= 0.02);

    CountLadder few;
    for (i64 B : {100, 200, 300})
        few.rows.push_back({B, B, B});
    CHECK_THROWS_AS(fit_exponent(few, 0), std::invalid_argument);

    CountLadder dead = no_log;
    for (size_t i = 3; i < dead.rows.size(); ++i)
        dead.rows[i].n_loc = 0;
    CHECK_THROWS_AS(fit_exponent(dead, 1), std::invalid_argument);
}

TEST_CASE("census is independent of the worker count") {
    PrimeTable table(1000);
    auto fam = FamilySpec::quadratic_norm(-1);
    auto w1 = count_nloc(fam, {200, 500, 1000}, table, 1);
    auto w2 = count_nloc(fam, {200, 500, 1000}, table, 2);
    auto w8 = count_nloc(fam, {200, 500, 1000}, table, 8);
    CHECK(rows_equal(w1, w2));
    CHECK(rows_equal(w1, w8));
    CHECK(ladder_csv(w1) == ladder_csv(w8));

    auto f1 = count_nloc(FamilySpec::fermat(2), {2, 5}, table, 1);
    auto f3 = count_nloc(FamilySpec::fermat(2), {2, 5}, table, 3);
    CHECK(rows_equal(f1, f3));
}

TEST_CASE("csv and fit block formats") {
    PrimeTable table(100);
    auto one = count_nloc(FamilySpec::fermat(2), {1}, table);
    CHECK(ladder_csv(one) == "B,N_total,N_loc\n1,13,12\n");

    CountLadder synth;
    for (i64 B : {100, 1000, 10000, 100000})
        synth.rows.push_back({B, B, B});
    auto fit = fit_exponent(synth, 0);
    auto block = fit_block(fit);
    CHECK(block.find("delta_hat=") == 0);
    CHECK(block.find(", constant_hat=") != std::string::npos);
    CHECK(block.find(", residual=") != std::string::npos);
    CHECK(block.find("window=top-half") != std::string::npos);
    CHECK(block.back() == '\n');
    CHECK(std::abs(fit.delta_hat) <= 1e-9);
    CHECK(std::abs(fit.constant_hat - 1.0) <= 1e-9);
}

TEST_CASE("census input validation") {
    PrimeTable table(1000);
    auto fam = FamilySpec::quadratic_norm(-1);
    CHECK_THROWS_AS(count_nloc(fam, {}, table), std::invalid_argument);
    CHECK_THROWS_AS(count_nloc(fam, {0, 5}, table), std::invalid_argument);
    CHECK_THROWS_AS(count_nloc(fam, {10, 10}, table), std::invalid_argument);
    CHECK_THROWS_AS(count_nloc(fam, {10, 5}, table), std::invalid_argument);
    CHECK_THROWS_AS(count_nloc(fam, {10}, table, 0), std::invalid_argument);

    PrimeTable small(50);
    CHECK_THROWS_AS(count_nloc(fam, {100}, small), std::invalid_argument);

    CHECK_THROWS_AS(FamilySpec::fermat(1), std::invalid_argument);
    CHECK_THROWS_AS(FamilySpec::quadratic_norm(0), std::invalid_argument);

    CHECK_THROWS_AS(fibre_els(fam, pt({1, 2}), table), std::invalid_argument);
    CHECK_THROWS_AS(fibre_els(fam, pt({0}), table), std::invalid_argument);
    CHECK_THROWS_AS(fibre_els(FamilySpec::fermat(2), pt({1, 2}), table),
                    std::invalid_argument);
    CHECK_THROWS_AS(fibre_els(FamilySpec::fermat(2), pt({0, 0, 0}), table),
                    std::invalid_argument);
}

} // TEST_SUITE
