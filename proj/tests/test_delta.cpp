#include "doctest.h"

#include "splitdens/arith.hpp"
#include "splitdens/delta.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace splitdens;

namespace {

Permutation from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> im(degree);
    std::iota(im.begin(), im.end(), 0);
    for (const auto& c : cycles)
        for (std::size_t k = 0; k < c.size(); ++k)
            im[c[k]] = c[(k + 1) % c.size()];
    return Permutation(std::move(im));
}

std::vector<int> full_support(int degree) {
    std::vector<int> s(degree);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

PermutationGroup s3() {
    return PermutationGroup::generate(3, {from_cycles(3, {{0, 1}}), from_cycles(3, {{0, 1, 2}})});
}

PermutationGroup s4() {
    return PermutationGroup::generate(4, {from_cycles(4, {{0, 1}}), from_cycles(4, {{0, 1, 2, 3}})});
}

Rational frac(long long n, long long d) { return make_rational(n, d); }

long long phi_slow(long long d) {
    long long c = 0;
    for (long long k = 1; k <= d; ++k)
        if (std::gcd(k, d) == 1)
            ++c;
    return c;
}

} // namespace

TEST_SUITE("delta") {

TEST_CASE("delta_of_action examples") {
    CHECK(delta_of_action(ComponentAction::empty()) == Rational(0));

    auto klein_pairs = PermutationGroup::generate(
        4, {from_cycles(4, {{0, 1}}), from_cycles(4, {{2, 3}})});
    CHECK(delta_of_action(ComponentAction::of(klein_pairs, full_support(4))) == frac(3, 4));

    CHECK(delta_of_action(ComponentAction::of(s3(), full_support(3))) == frac(2, 3));
    // stabilizer of a single point in S3 has index 3
    CHECK(delta_of_action(ComponentAction::of(s3(), {0})) == frac(1, 3));

    CHECK_THROWS(ComponentAction::of(s3(), {}));
    CHECK_THROWS(ComponentAction::of(s3(), {3}));
}

TEST_CASE("delta_of_action relabeling invariance and lower bound") {
    std::mt19937 rng(20240812);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3 + static_cast<int>(rng() % 5);
        auto rand_perm = [&] {
            std::vector<int> im(n);
            std::iota(im.begin(), im.end(), 0);
            std::shuffle(im.begin(), im.end(), rng);
            return Permutation(std::move(im));
        };
        std::vector<Permutation> gens{rand_perm()};
        if (rng() % 2)
            gens.push_back(rand_perm());
        auto g = PermutationGroup::generate(n, gens);

        std::vector<int> supp;
        for (int pt = 0; pt < n; ++pt)
            if (rng() % 2)
                supp.push_back(pt);
        if (supp.empty())
            supp.push_back(static_cast<int>(rng() % n));

        auto d = delta_of_action(ComponentAction::of(g, supp));
        CHECK(d >= Rational(1, static_cast<long long>(g.order())));
        CHECK(d <= Rational(1));

        // conjugate everything by a random relabeling
        auto sigma = rand_perm();
        auto inv = sigma.inverse();
        std::vector<Permutation> cgens;
        for (const auto& e : gens)
            cgens.push_back(sigma * e * inv);
        std::vector<int> csupp;
        for (int pt : supp)
            csupp.push_back(sigma(pt));
        auto cg = PermutationGroup::generate(n, cgens);
        CHECK(delta_of_action(ComponentAction::of(cg, csupp)) == d);
    }
}

TEST_CASE("delta_total examples") {
    CHECK(delta_total(FamilySplitData{}) == Rational(0));

    auto c2 = PermutationGroup::generate(2, {from_cycles(2, {{0, 1}})});
    auto act = ComponentAction::of(c2, full_support(2));

    FamilySplitData two;
    two.divisors = {{"a", act}, {"b", act}};
    CHECK(delta_total(two) == Rational(1));

    // the affine maps n -> s + tn of Z/2 are exactly the regular C2
    FamilySplitData three;
    three.divisors = {{"p", act}, {"q", act}, {"r", act}};
    CHECK(delta_total(three) == frac(3, 2));

    FamilySplitData dup;
    dup.divisors = {{"a", act}, {"a", act}};
    CHECK_THROWS(delta_total(dup));
}

TEST_CASE("fermat F brute force") {
    CHECK(fermat_F_bruteforce(1) == 1);
    CHECK(fermat_F_bruteforce(2) == 1);   // only (0,1)
    CHECK(fermat_F_bruteforce(3) == 4);   // (0,1) and (s,2) for every s
    CHECK(fermat_F_bruteforce(4) == 3);   // (0,1), (0,3), (2,3)
    CHECK(fermat_F_bruteforce(6) == 4);
    CHECK_THROWS(fermat_F_bruteforce(0));
}

TEST_CASE("fermat delta closed form") {
    CHECK(fermat_delta_closed(1) == Rational(1));
    CHECK(fermat_delta_closed(2) == frac(1, 2));    // 1 - 3/6
    CHECK(fermat_delta_closed(4) == frac(3, 8));    // 1 - 15/24
    CHECK(fermat_delta_closed(6) == frac(1, 3));    // 1/2 * 2/3
    CHECK_THROWS(fermat_delta_closed(0));
}

TEST_CASE("closed form matches F(d)/(d phi(d)) up to 500") {
    for (long long d = 1; d <= 500; ++d) {
        auto lhs = fermat_delta_closed(d);
        auto rhs = make_rational(fermat_F_bruteforce(d), d * phi_slow(d));
        CHECK_MESSAGE(lhs == rhs, "d = ", d);
    }
}

TEST_CASE("affine action oracle matches closed form") {
    CHECK(fermat_delta_action(1) == Rational(1));
    CHECK(fermat_delta_action(3) == frac(2, 3));
    CHECK(fermat_delta_action(4) == frac(3, 8));
    for (long long d = 1; d <= 60; ++d)
        CHECK_MESSAGE(fermat_delta_action(d) == fermat_delta_closed(d), "d = ", d);
}

TEST_CASE("fermat delta is multiplicative") {
    for (long long d1 = 2; d1 * d1 <= 10000; ++d1)
        for (long long d2 = d1 + 1; d1 * d2 <= 10000; ++d2) {
            if (std::gcd(d1, d2) != 1)
                continue;
            CHECK(fermat_delta_closed(d1 * d2) ==
                  fermat_delta_closed(d1) * fermat_delta_closed(d2));
        }
}

TEST_CASE("bd_psi examples and comparison with 1 - delta") {
    CHECK(bd_psi(2) == frac(1, 2));
    CHECK(bd_psi(3) == frac(1, 3));
    CHECK(bd_psi(4) == frac(3, 8));
    CHECK(bd_psi(6) == frac(5, 12));
    CHECK_THROWS(bd_psi(1));

    PrimeTable table(100);
    for (long long p : table.primes())
        CHECK(Rational(1) - fermat_delta_closed(p) == bd_psi(p));

    // prime powers p^m, m >= 2: strict inequality
    for (long long p : table.primes())
        for (long long q = p * p; q <= 10000; q *= p)
            CHECK_MESSAGE(Rational(1) - fermat_delta_closed(q) > bd_psi(q), "q = ", q);
}

TEST_CASE("multinorm split criterion") {
    auto r = multinorm_split_criterion({2, 3}, 1);
    CHECK(r.split);
    CHECK(r.witness == std::vector<long long>{-1, 1});

    CHECK_FALSE(multinorm_split_criterion({2, 2, 2}, 1).split);
    auto z = multinorm_split_criterion({5}, 0);
    CHECK(z.split);
    CHECK(z.witness == std::vector<long long>{0});

    CHECK_THROWS(multinorm_split_criterion({}, 1));
    CHECK_THROWS(multinorm_split_criterion({2, 0}, 1));

    std::mt19937 rng(20240813);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<long long> degs(1 + rng() % 4);
        long long g = 0;
        for (auto& n : degs) {
            n = 1 + rng() % 12;
            g = std::gcd(g, n);
        }
        long long m = static_cast<long long>(rng() % 41) - 20;
        auto res = multinorm_split_criterion(degs, m);
        CHECK(res.split == (m % g == 0));
        if (res.split) {
            REQUIRE(res.witness.size() == degs.size());
            long long sum = 0;
            for (std::size_t i = 0; i < degs.size(); ++i)
                sum += degs[i] * res.witness[i];
            CHECK(sum == m);
        }
    }
}

TEST_CASE("multinorm delta examples") {
    CHECK(multinorm_delta(s3(), {full_support(3)}) == frac(2, 3));

    auto c2 = PermutationGroup::generate(2, {from_cycles(2, {{0, 1}})});
    CHECK(multinorm_delta(c2, {full_support(2)}) == frac(1, 2));

    // Klein four-group on three quadratic factors: each non-identity element
    // fixes one factor pointwise, so every element has a length-1 cycle.
    auto v6 = PermutationGroup::generate(
        6, {from_cycles(6, {{2, 3}, {4, 5}}), from_cycles(6, {{0, 1}, {4, 5}})});
    REQUIRE(v6.order() == 4);
    CHECK(multinorm_delta(v6, {{0, 1}, {2, 3}, {4, 5}}) == Rational(1));

    CHECK_THROWS(multinorm_delta(s3(), {{0, 1}}));              // uncovered point
    CHECK_THROWS(multinorm_delta(s3(), {{0, 1}, {1, 2}}));      // overlap
    CHECK_THROWS(multinorm_delta(s3(), {{0, 1}, {2}}));         // not stable
}

TEST_CASE("multinorm delta is 1 with a singleton block") {
    std::mt19937 rng(20240814);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 + static_cast<int>(rng() % 4);
        auto rand_perm = [&] {
            std::vector<int> im(m);
            std::iota(im.begin(), im.end(), 0);
            std::shuffle(im.begin(), im.end(), rng);
            im.push_back(m);   // extra fixed point
            return Permutation(std::move(im));
        };
        auto g = PermutationGroup::generate(m + 1, {rand_perm(), rand_perm()});
        CHECK(multinorm_delta(g, {full_support(m), {m}}) == Rational(1));
    }
}

TEST_CASE("brauer delta") {
    CHECK(brauer_delta(1) == Rational(1));
    CHECK(brauer_delta(2) == frac(1, 2));
    CHECK(brauer_delta(5) == frac(1, 5));
    CHECK_THROWS(brauer_delta(0));
}

TEST_CASE("quadratic twist sup") {
    // Hand enumeration of the usual fixed-point proportions inside S4.
    auto prop = [](const PermutationGroup& g) {
        auto [hits, total] = fixed_point_count(g, full_support(4));
        return make_rational(hits, total);
    };
    auto c4 = PermutationGroup::generate(4, {from_cycles(4, {{0, 1, 2, 3}})});
    auto v_reg = PermutationGroup::generate(
        4, {from_cycles(4, {{0, 1}, {2, 3}}), from_cycles(4, {{0, 2}, {1, 3}})});
    auto d4 = PermutationGroup::generate(4, {from_cycles(4, {{0, 1, 2, 3}}), from_cycles(4, {{0, 2}})});
    auto a4 = PermutationGroup::generate(4, {from_cycles(4, {{0, 1, 2}}), from_cycles(4, {{0, 1}, {2, 3}})});
    auto klein_pairs = PermutationGroup::generate(
        4, {from_cycles(4, {{0, 1}}), from_cycles(4, {{2, 3}})});
    CHECK(prop(c4) == frac(1, 4));
    CHECK(prop(v_reg) == frac(1, 4));
    CHECK(prop(d4) == frac(3, 8));
    CHECK(prop(a4) == frac(3, 4));
    CHECK(prop(s4()) == frac(5, 8));
    CHECK(prop(klein_pairs) == frac(3, 4));

    CHECK(quadratic_twist_delta_sup() == frac(3, 4));
    // A4 is transitive with no global fixed point, and 9 of its 12 elements
    // (identity and the 3-cycles) fix a point, so the transitive sup is 3/4 too.
    CHECK(is_transitive(a4, full_support(4)));
    CHECK(quadratic_twist_delta_sup_transitive() == frac(3, 4));
}

TEST_CASE("cyclic delta") {
    CHECK(cyclic_delta(1) == Rational(1));
    CHECK(cyclic_delta(2) == frac(1, 2));
    CHECK(cyclic_delta(5) == frac(1, 5));
    auto c5 = PermutationGroup::generate(5, {from_cycles(5, {{0, 1, 2, 3, 4}})});
    auto [hits, total] = fixed_point_count(c5, full_support(5));
    CHECK(cyclic_delta(5) == make_rational(hits, total));
    CHECK_THROWS(cyclic_delta(0));
}

TEST_CASE("family split file") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "splitdens-test-delta";
    fs::create_directories(dir);
    auto gpath = (dir / "s3.grp").string();
    {
        std::ofstream out(gpath);
        out << "degree 3\ngen (0 1)\ngen (0 1 2)\n";
    }

    std::istringstream fam(
        "# two fibres\n"
        "divisor D1 group=" + gpath + " support=0,1,2\n"
        "divisor D2 empty\n");
    auto data = parse_family_split_file(fam, "fam");
    REQUIRE(data.divisors.size() == 2);
    CHECK(data.divisors[0].first == "D1");
    CHECK(delta_of_action(data.divisors[0].second) == frac(2, 3));
    CHECK(data.divisors[1].second.is_empty());
    CHECK(delta_total(data) == frac(1, 3) + Rational(1));

    auto expect_fail = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            parse_family_split_file(in, "f");
            FAIL_CHECK("expected parse error for: " << text);
        } catch (const std::runtime_error& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                          "got: ", e.what());
        }
    };
    expect_fail("divisor\n", "f:1:");
    expect_fail("fibre D1 empty\n", "expected 'divisor'");
    expect_fail("divisor D1 wat\n", "unknown token");
    expect_fail("divisor D1 support=0,1\n", "group=");
    expect_fail("\n\ndivisor D1 group=" + gpath + " support=0,x\n", "f:3:");
}

} // TEST_SUITE
