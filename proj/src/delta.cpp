#include "splitdens/delta.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

namespace splitdens {

ComponentAction ComponentAction::of(PermutationGroup g, std::vector<int> supp) {
    if (supp.empty())
        throw std::invalid_argument("non-empty action needs a nonempty support");
    for (int s : supp)
        if (s < 0 || s >= g.degree())
            throw std::invalid_argument("support point out of range");
    ComponentAction a;
    a.group = std::move(g);
    a.support = std::move(supp);
    return a;
}

Rational delta_of_action(const ComponentAction& a) {
    if (a.is_empty())
        return Rational(0);
    auto [hits, total] = fixed_point_count(*a.group, a.support);
    return make_rational(hits, total);
}

Rational delta_total(const FamilySplitData& f) {
    std::set<std::string> labels;
    for (const auto& [label, action] : f.divisors)
        if (!labels.insert(label).second)
            throw std::invalid_argument("duplicate divisor label: " + label);
    Rational total(0);
    for (const auto& [label, action] : f.divisors)
        total += Rational(1) - delta_of_action(action);
    return total;
}

long long fermat_F_bruteforce(long long d) {
    if (d < 1)
        throw std::invalid_argument("fermat_F_bruteforce needs d >= 1");
    long long count = 0;
    for (long long t = 0; t < d; ++t) {
        if (std::gcd(t, d) != 1)
            continue;
        long long g = std::gcd(t - 1, d);   // gcd(0, d) = d
        for (long long s = 0; s < d; ++s)
            if (s % g == 0)
                ++count;
    }
    return count;
}

namespace {

std::vector<std::pair<long long, int>> trial_factor(long long d) {
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p * p <= d; ++p)
        if (d % p == 0) {
            int e = 0;
            while (d % p == 0) {
                d /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    if (d > 1)
        out.emplace_back(d, 1);
    return out;
}

long long ipow(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

} // namespace

Rational fermat_delta_closed(long long d) {
    if (d < 1)
        throw std::invalid_argument("fermat_delta_closed needs d >= 1");
    Rational delta(1);
    for (auto [p, m] : trial_factor(d)) {
        BigInt pk = ipow(p, m);                  // p^m
        BigInt p2m = pk * pk;                    // p^{2m}
        BigInt denom = (p2m / p) * (p * p - 1);  // p^{2m-1}(p^2-1)
        delta *= Rational(1) - Rational(p2m - 1, denom);
    }
    return delta;
}

Rational fermat_delta_action(long long d) {
    if (d < 1)
        throw std::invalid_argument("fermat_delta_action needs d >= 1");
    if (d == 1)
        return Rational(1);
    int n = static_cast<int>(d);

    // n -> n + 1
    std::vector<int> shift(n);
    for (int i = 0; i < n; ++i)
        shift[i] = (i + 1) % n;
    std::vector<Permutation> gens{Permutation(std::move(shift))};

    // Greedy generating set for (Z/d)^x: add the smallest unit not yet
    // generated, multiplicative closure in between.
    std::set<long long> span{1};
    for (long long u = 2; u < d; ++u) {
        if (std::gcd(u, d) != 1 || span.count(u))
            continue;
        std::vector<int> mul(n);
        for (int i = 0; i < n; ++i)
            mul[i] = static_cast<int>((u * i) % d);
        gens.push_back(Permutation(std::move(mul)));
        std::vector<long long> added{u};
        while (!added.empty()) {
            long long x = added.back();
            added.pop_back();
            if (!span.insert(x).second)
                continue;
            for (long long y : std::vector<long long>(span.begin(), span.end())) {
                long long z = (x * y) % d;
                if (!span.count(z))
                    added.push_back(z);
            }
        }
    }

    auto g = PermutationGroup::generate(n, std::move(gens));
    std::vector<int> support(n);
    std::iota(support.begin(), support.end(), 0);
    auto [hits, total] = fixed_point_count(g, support);
    return make_rational(hits, total);
}

Rational bd_psi(long long d) {
    if (d < 2)
        throw std::invalid_argument("bd_psi needs d >= 2");
    long long phi = 1;
    for (auto [p, e] : trial_factor(d))
        phi *= (p - 1) * ipow(p, e - 1);
    return Rational(1, phi) * (Rational(1) - Rational(1, d));
}

namespace {

// Extended gcd: returns g and x, y with a x + b y = g (g >= 0 for a,b >= 0).
long long xgcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1;
    long long g = xgcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

} // namespace

MultinormSplit multinorm_split_criterion(const std::vector<long long>& degrees, long long m) {
    if (degrees.empty())
        throw std::invalid_argument("need at least one factor degree");
    for (long long n : degrees)
        if (n < 1)
            throw std::invalid_argument("factor degrees must be >= 1");

    long long g = degrees[0];
    std::vector<long long> coeff{1};
    for (std::size_t i = 1; i < degrees.size(); ++i) {
        long long x, y;
        long long g2 = xgcd(g, degrees[i], x, y);
        for (auto& c : coeff)
            c *= x;
        coeff.push_back(y);
        g = g2;
    }

    MultinormSplit out;
    out.split = (m % g == 0);
    if (out.split) {
        long long scale = m / g;
        for (auto& c : coeff)
            c *= scale;
        out.witness = std::move(coeff);
    }
    return out;
}

Rational multinorm_delta(const PermutationGroup& g,
                         const std::vector<std::vector<int>>& blocks) {
    std::vector<int> owner(g.degree(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty())
            throw std::invalid_argument("blocks not a partition: empty block");
        for (int pt : blocks[b]) {
            if (pt < 0 || pt >= g.degree() || owner[pt] != -1)
                throw std::invalid_argument("blocks not a partition");
            owner[pt] = static_cast<int>(b);
        }
    }
    for (int pt = 0; pt < g.degree(); ++pt)
        if (owner[pt] == -1)
            throw std::invalid_argument("blocks not a partition: uncovered point");
    for (const auto& gen : g.generators())
        for (int pt = 0; pt < g.degree(); ++pt)
            if (owner[gen(pt)] != owner[pt])
                throw std::invalid_argument("blocks are not stable under the group");

    // Blocks are invariant, so every cycle stays inside one block and the
    // per-block cycle lengths are just the global cycle type.
    long long hits = 0;
    for (const auto& e : g.elements()) {
        int acc = 0;
        for (int len : cycle_type(e).parts)
            acc = std::gcd(acc, len);
        if (acc == 1)
            ++hits;
    }
    return make_rational(hits, static_cast<long long>(g.order()));
}

Rational brauer_delta(long long residue_order) {
    if (residue_order < 1)
        throw std::invalid_argument("residue order must be >= 1");
    return Rational(1, residue_order);
}

namespace {

Permutation cycles4(const std::vector<std::vector<int>>& cycles) {
    std::vector<int> im{0, 1, 2, 3};
    for (const auto& c : cycles)
        for (std::size_t k = 0; k < c.size(); ++k)
            im[c[k]] = c[(k + 1) % c.size()];
    return Permutation(std::move(im));
}

Rational twist_sup(bool transitive_only) {
    auto s4 = PermutationGroup::generate(4, {cycles4({{0, 1}}), cycles4({{0, 1, 2, 3}})});
    Rational best(0);
    for (const auto& h : enumerate_subgroups(s4)) {
        bool global_fix = false;
        for (int pt = 0; pt < 4 && !global_fix; ++pt) {
            bool all = true;
            for (const auto& e : h.elements())
                if (e(pt) != pt) {
                    all = false;
                    break;
                }
            global_fix = all;
        }
        if (global_fix)
            continue;
        if (transitive_only && !is_transitive(h, {0, 1, 2, 3}))
            continue;
        auto [hits, total] = fixed_point_count(h, {0, 1, 2, 3});
        best = std::max(best, make_rational(hits, total));
    }
    return best;
}

} // namespace

Rational quadratic_twist_delta_sup() { return twist_sup(false); }

Rational quadratic_twist_delta_sup_transitive() { return twist_sup(true); }

Rational cyclic_delta(long long d) {
    if (d < 1)
        throw std::invalid_argument("cyclic_delta needs d >= 1");
    return Rational(1, d);
}

namespace {

[[noreturn]] void fail_at(const std::string& filename, int line, const std::string& msg) {
    std::ostringstream os;
    os << filename << ":" << line << ": " << msg;
    throw std::runtime_error(os.str());
}

} // namespace

FamilySplitData parse_family_split_file(std::istream& in, const std::string& filename) {
    FamilySplitData data;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word))
            continue;
        if (word != "divisor")
            fail_at(filename, lineno, "expected 'divisor'");
        std::string label;
        if (!(ls >> label))
            fail_at(filename, lineno, "missing divisor label");

        std::string tok;
        std::string group_path;
        std::string support_spec;
        bool empty = false;
        while (ls >> tok) {
            if (tok == "empty")
                empty = true;
            else if (tok.rfind("group=", 0) == 0)
                group_path = tok.substr(6);
            else if (tok.rfind("support=", 0) == 0)
                support_spec = tok.substr(8);
            else
                fail_at(filename, lineno, "unknown token '" + tok + "'");
        }
        if (support_spec == "empty")
            empty = true;

        if (empty) {
            data.divisors.emplace_back(label, ComponentAction::empty());
            continue;
        }
        if (group_path.empty() || support_spec.empty())
            fail_at(filename, lineno, "divisor needs group= and support= (or empty)");
        PermutationGroup g = load_group_file(group_path);
        std::vector<int> support;
        std::istringstream ss(support_spec);
        std::string item;
        while (std::getline(ss, item, ','))
            try {
                support.push_back(std::stoi(item));
            } catch (...) {
                fail_at(filename, lineno, "bad support entry '" + item + "'");
            }
        data.divisors.emplace_back(label, ComponentAction::of(std::move(g), std::move(support)));
    }
    return data;
}

FamilySplitData load_family_split_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open family file: " + path);
    return parse_family_split_file(in, path);
}

} // namespace splitdens
