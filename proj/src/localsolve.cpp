#include "splitdens/localsolve.hpp"

#include "splitdens/rational.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace splitdens {

DiagonalForm::DiagonalForm(int d, std::vector<i64> a) : degree(d), coeffs(std::move(a)) {
    if (degree < 2)
        throw std::invalid_argument("diagonal form needs degree >= 2");
    if (coeffs.size() < 3)
        throw std::invalid_argument("diagonal form needs at least 3 variables");
    for (i64 c : coeffs)
        if (c == 0)
            throw std::invalid_argument("diagonal form coefficients must be nonzero");
}

LocalVerdict conic_local(i64 a, i64 b, i64 c, PlaceQ v) {
    if (a == 0 || b == 0 || c == 0)
        throw std::invalid_argument("conic coefficients must be nonzero");
    int s = hilbert_symbol(checked_mul(-a, c), checked_mul(-b, c), v);
    LocalVerdict out;
    out.solvable = (s == 1);
    out.cert = LocalVerdict::Cert::symbol;
    out.symbol = s;
    return out;
}

LocalVerdict diag_form_real(const DiagonalForm& f) {
    LocalVerdict out;
    out.cert = LocalVerdict::Cert::real_signs;
    if (f.degree % 2 == 1) {
        out.solvable = true;
        return out;
    }
    bool pos = false, neg = false;
    for (i64 c : f.coeffs)
        (c > 0 ? pos : neg) = true;
    out.solvable = pos && neg;
    return out;
}

namespace {

constexpr i64 kModCeiling = i64{1} << 62;
constexpr i64 kMaxSearchPrime = 2'000'000;   // residue tables are O(p)

i64 mulmod(i64 a, i64 b, i64 mod) {
    return static_cast<i64>(static_cast<__int128>(a) * b % mod);
}

bool trial_prime(i64 p) {
    if (p < 2)
        return false;
    for (i64 q = 2; q * q <= p; ++q)
        if (p % q == 0)
            return false;
    return true;
}

// The per-prime residue search. All node values live mod p^W with p^W <= 2^62;
// products go through __int128. Notation: vd = v_p(d), va[i] = v_p(a[i]) after
// normalization, M = vd + max va. Any node still live at level 2M+1 is
// accepted through its pivot coordinate (valuation 0, so partial valuation
// <= M), which bounds the tree depth; the cap K = 2M+3 is a hard backstop.
struct PadicSearch {
    i64 p = 0;
    int d = 0;
    int n = 0;
    std::vector<i64> a;     // normalized coefficients
    std::vector<int> va;
    int vd = 0;
    int M = 0;
    int K = 0;
    int W = 0;
    std::vector<i64> pk;    // p^0 .. p^W
    std::vector<i64> amod;  // a[i] mod p^W in [0, p^W)
    std::vector<i64> amodp; // a[i] mod p
    std::vector<i64> powd;  // x^d mod p
    std::vector<std::int32_t> preim_off;  // CSR preimage lists of x -> x^d
    std::vector<std::int32_t> preim_idx;
    long long budget = 20'000'000;
    int deepest = 0;
    std::optional<HenselPoint> found;

    void build_tables() {
        pk.assign(static_cast<std::size_t>(W) + 1, 1);
        for (int j = 1; j <= W; ++j)
            pk[j] = pk[j - 1] * p;
        i64 pw = pk[W];
        amod.resize(n);
        amodp.resize(n);
        for (int i = 0; i < n; ++i) {
            amod[i] = ((a[i] % pw) + pw) % pw;
            amodp[i] = ((a[i] % p) + p) % p;
        }
        powd.resize(p);
        for (i64 x = 0; x < p; ++x)
            powd[x] = mod_pow(x, d, p);
        preim_off.assign(p + 1, 0);
        for (i64 x = 0; x < p; ++x)
            ++preim_off[powd[x] + 1];
        for (i64 r = 0; r < p; ++r)
            preim_off[r + 1] += preim_off[r];
        preim_idx.resize(p);
        std::vector<std::int32_t> cur(preim_off.begin(), preim_off.end() - 1);
        for (i64 x = 0; x < p; ++x)
            preim_idx[cur[powd[x]]++] = static_cast<std::int32_t>(x);
    }

    i64 f_mod(const std::vector<i64>& x) const {
        i64 pw = pk[W], s = 0;
        for (int i = 0; i < n; ++i)
            s = (s + mulmod(amod[i], mod_pow(x[i], d, pw), pw)) % pw;
        return s;
    }

    // Valuation of a nonzero residue; residues == 0 mean "at least W".
    int val_res(i64 r) const { return r == 0 ? W : valuation(r, p); }

    // Accepting coordinate for a level-k node, if any: smallest partial
    // valuation m with x[i] != 0 and k >= 2m+1.
    std::optional<std::pair<int, int>> accept_check(const std::vector<i64>& x, int k) const {
        std::optional<std::pair<int, int>> best;
        for (int i = 0; i < n; ++i) {
            if (x[i] == 0)
                continue;
            int m = vd + va[i] + (d - 1) * valuation(x[i], p);
            if (k >= 2 * m + 1 && (!best || m < best->first))
                best = std::make_pair(m, i);
        }
        return best;
    }

    void record(const std::vector<i64>& x, int k, std::pair<int, int> acc) {
        found = HenselPoint{DiagonalForm(d, a), p, x, k, acc.first, acc.second};
    }

    // x is live (f == 0 mod p^k) and not accepted; search its children.
    bool dfs(const std::vector<i64>& x, int k, int pivot) {
        if (k + 1 > K)
            throw DepthCapExceeded("depth cap exceeded in p-adic search");
        if (k + 1 > W)
            throw DepthCapExceeded("p-adic working precision exhausted");
        i64 fx = f_mod(x);
        // every partial vanishes mod p at a live non-accepted node, so all
        // children share the liveness test f(x) == 0 mod p^{k+1}
        if (fx % pk[k + 1] != 0)
            return false;
        deepest = std::max(deepest, k + 1);
        int fv = val_res(fx);

        // smallest valuation any digit choice below can touch f at
        int perturb = std::numeric_limits<int>::max();
        for (int i = 0; i < n; ++i) {
            if (i == pivot)
                continue;
            int eff = x[i] == 0 ? va[i] + d * k
                                : va[i] + vd + (d - 1) * valuation(x[i], p) + k;
            perturb = std::min(perturb, eff);
        }
        // if f's valuation is already below anything digits can reach, the
        // branch can only stay live up to level fv
        int R = fv < perturb ? fv : std::min(2 * M + 1, W);

        // digits are enumerated only where they can still matter: either they
        // touch f within the live window, or they pin a coordinate valuation
        // whose Hensel test can still fire within it
        std::vector<int> open;
        for (int i = 0; i < n; ++i) {
            if (i == pivot)
                continue;
            bool keep;
            if (x[i] == 0)
                keep = va[i] + d * k <= R || 2 * (vd + va[i] + (d - 1) * k) + 1 <= R;
            else
                keep = va[i] + vd + (d - 1) * valuation(x[i], p) + k <= R;
            if (keep)
                open.push_back(i);
        }

        std::vector<i64> digit(open.size(), 0);
        std::vector<i64> y(x);
        while (true) {
            if (--budget < 0)
                throw std::runtime_error("p-adic residue search budget exceeded");
            for (std::size_t j = 0; j < open.size(); ++j)
                y[open[j]] = x[open[j]] + pk[k] * digit[j];
            if (auto acc = accept_check(y, k + 1)) {
                record(y, k + 1, *acc);
                return true;
            }
            if (dfs(y, k + 1, pivot))
                return true;
            std::size_t j = 0;
            while (j < digit.size() && ++digit[j] == p)
                digit[j++] = 0;
            if (j == digit.size())
                break;
        }
        return false;
    }

    bool handle_node(std::vector<i64>& x, int pivot) {
        deepest = std::max(deepest, 1);
        if (auto acc = accept_check(x, 1)) {
            record(x, 1, *acc);
            return true;
        }
        return dfs(x, 1, pivot);
    }

    // Level-1 nodes with x[pivot] = 1: sweep every assignment of the other
    // coordinates except one unit-coefficient coordinate, which is solved for
    // through the d-th power preimage table. O(p^{n-2}) assignments.
    bool sweep_pivot(int pivot) {
        int w = -1;
        for (int i = 0; i < n && w < 0; ++i)
            if (i != pivot && va[i] == 0)
                w = i;
        if (w < 0)   // f == a[pivot] != 0 mod p regardless of the others
            return false;
        std::vector<int> en;
        for (int i = 0; i < n; ++i)
            if (i != pivot && i != w)
                en.push_back(i);

        i64 inv_aw = mod_pow(amodp[w], p - 2, p);
        std::vector<i64> e(en.size(), 0);
        std::vector<i64> x(n, 0);
        x[pivot] = 1;
        while (true) {
            i64 s = amodp[pivot];
            for (std::size_t j = 0; j < en.size(); ++j)
                s = (s + mulmod(amodp[en[j]], powd[e[j]], p)) % p;
            i64 target = mulmod((p - s) % p, inv_aw, p);
            for (std::int32_t t = preim_off[target]; t < preim_off[target + 1]; ++t) {
                for (std::size_t j = 0; j < en.size(); ++j)
                    x[en[j]] = e[j];
                x[w] = preim_idx[t];
                if (handle_node(x, pivot))
                    return true;
            }
            std::size_t j = 0;
            while (j < e.size() && ++e[j] == p)
                e[j++] = 0;
            if (j == e.size())
                break;
        }
        return false;
    }

    LocalVerdict run() {
        for (int pivot = 0; pivot < n; ++pivot)
            if (sweep_pivot(pivot)) {
                LocalVerdict out;
                out.solvable = true;
                out.cert = LocalVerdict::Cert::hensel;
                out.hensel = found;
                return out;
            }
        LocalVerdict out;
        out.solvable = false;
        out.cert = LocalVerdict::Cert::exhausted_tree;
        out.depth = deepest;
        return out;
    }
};

} // namespace

LocalVerdict diag_form_padic(const DiagonalForm& f, i64 p) {
    if (!trial_prime(p))
        throw std::invalid_argument("diag_form_padic needs a prime");
    if (p > kMaxSearchPrime)
        throw std::invalid_argument("prime exceeds the residue search limit");

    PadicSearch s;
    s.p = p;
    s.d = f.degree;
    s.n = static_cast<int>(f.coeffs.size());
    s.a = f.coeffs;
    s.va.resize(s.n);

    // push coefficient valuations into [0, d), then drop the common power
    for (int i = 0; i < s.n; ++i) {
        int v = valuation(s.a[i], p);
        for (int j = 0; j < (v / s.d) * s.d; ++j)
            s.a[i] /= p;
        s.va[i] = v % s.d;
    }
    int shift = *std::min_element(s.va.begin(), s.va.end());
    if (shift > 0)
        for (int i = 0; i < s.n; ++i) {
            for (int j = 0; j < shift; ++j)
                s.a[i] /= p;
            s.va[i] -= shift;
        }

    s.vd = valuation(s.d, p);
    s.M = s.vd + *std::max_element(s.va.begin(), s.va.end());
    s.K = 2 * s.M + 3;
    s.W = 0;
    for (i64 q = 1; q <= kModCeiling / p; q *= p)
        ++s.W;
    if (2 * s.M + 1 > s.W) {
        std::ostringstream os;
        os << "p-adic search needs precision p^" << 2 * s.M + 1 << " beyond 2^62 at p=" << p;
        throw DepthCapExceeded(os.str());
    }
    s.build_tables();
    return s.run();
}

bool verify_hensel_certificate(const HenselPoint& cert) {
    const DiagonalForm& f = cert.form;
    int n = static_cast<int>(f.coeffs.size());
    if (cert.p < 2 || cert.k < 1 || cert.m < 0 || cert.k < 2 * cert.m + 1)
        return false;
    if (static_cast<int>(cert.point.size()) != n || cert.coord < 0 || cert.coord >= n)
        return false;

    BigInt pk = 1;
    for (int j = 0; j < cert.k; ++j)
        pk *= cert.p;
    BigInt value = 0;
    for (int i = 0; i < n; ++i) {
        if (cert.point[i] < 0 || BigInt(cert.point[i]) >= pk)
            return false;
        BigInt term = f.coeffs[i];
        for (int j = 0; j < f.degree; ++j)
            term *= cert.point[i];
        value += term;
    }
    if (value % pk != 0)
        return false;

    BigInt partial = BigInt(f.degree) * f.coeffs[cert.coord];
    for (int j = 0; j < f.degree - 1; ++j)
        partial *= cert.point[cert.coord];
    if (partial == 0)
        return false;
    int v = 0;
    while (partial % cert.p == 0) {
        partial /= cert.p;
        ++v;
    }
    return v == cert.m;
}

long long good_prime_threshold(const DiagonalForm& f) {
    if (f.coeffs.size() != 3)
        throw std::invalid_argument("good_prime_threshold expects a plane curve (3 variables)");
    long long g = static_cast<long long>(f.degree - 1) * (f.degree - 2) / 2;
    return std::max<long long>(4 * g * g, 2);
}

bool fermat_els(int d, i64 a0, i64 a1, i64 a2, const PrimeTable& table) {
    DiagonalForm f(d, {a0, a1, a2});
    if (!diag_form_real(f).solvable)
        return false;

    long long threshold = good_prime_threshold(f);
    if (table.limit() < threshold)
        throw std::invalid_argument("prime table smaller than the good-prime threshold");
    std::set<i64> bad;
    for (i64 p : table.primes()) {
        if (p > threshold)
            break;
        bad.insert(p);
    }
    for (i64 v : {static_cast<i64>(d), a0, a1, a2})
        for (const auto& pe : factorize(v, table).factors)
            bad.insert(pe.first);

    for (i64 p : bad) {
        LocalVerdict verdict =
            d == 2 ? conic_local(a0, a1, a2, PlaceQ::finite(p)) : diag_form_padic(f, p);
        if (!verdict.solvable)
            return false;
    }
    return true;
}

namespace {

// A square class of Q_v: sign at the real place; (unit part, valuation mod 2)
// at a finite one, where the unit part is a quadratic-residue bit at odd p
// and the residue mod 8 at p = 2.
struct SqClass {
    int unit;
    int vpar;
    bool operator<(const SqClass& o) const {
        return unit != o.unit ? unit < o.unit : vpar < o.vpar;
    }
    bool operator==(const SqClass& o) const { return unit == o.unit && vpar == o.vpar; }
};

SqClass class_of(i64 t, PlaceQ v) {
    if (v.is_real)
        return {t < 0 ? 1 : 0, 0};
    int e = valuation(t, v.p);
    i64 u = t;
    for (int j = 0; j < e; ++j)
        u /= v.p;
    if (v.p == 2)
        return {static_cast<int>(((u % 8) + 8) % 8), e % 2};
    return {legendre(u, v.p) == 1 ? 0 : 1, e % 2};
}

SqClass class_mul(SqClass x, SqClass y, PlaceQ v) {
    if (v.is_real)
        return {x.unit ^ y.unit, 0};
    if (v.p == 2)
        return {x.unit * y.unit % 8, x.vpar ^ y.vpar};
    return {x.unit ^ y.unit, x.vpar ^ y.vpar};
}

// Integer representatives of every square class, matching class_of.
std::vector<i64> class_reps(PlaceQ v) {
    if (v.is_real)
        return {1, -1};
    if (v.p == 2)
        return {1, 3, 5, 7, 2, 6, 10, 14};
    i64 u = 2;
    while (legendre(u, v.p) != -1)
        ++u;
    return {1, u, v.p, checked_mul(u, v.p)};
}

} // namespace

bool multinorm_ct_local(i64 a, i64 b, i64 t, PlaceQ v) {
    if (a == 0 || b == 0 || t == 0)
        throw std::invalid_argument("multinorm arguments must be nonzero");
    if (is_perfect_square(a) || is_perfect_square(b) || is_perfect_square(checked_mul(a, b)))
        throw std::invalid_argument("multinorm needs a, b, ab nonsquare");

    auto reps = class_reps(v);
    std::vector<std::vector<SqClass>> kernels;
    for (i64 chi : {a, b, checked_mul(a, b)}) {
        std::vector<SqClass> ker;
        for (i64 r : reps)
            if (hilbert_symbol(chi, r, v) == 1)
                ker.push_back(class_of(r, v));
        kernels.push_back(std::move(ker));
    }

    // the three kernels are subgroups, so their product set is the join
    std::set<SqClass> join;
    for (const SqClass& x : kernels[0])
        for (const SqClass& y : kernels[1])
            for (const SqClass& z : kernels[2])
                join.insert(class_mul(class_mul(x, y, v), z, v));
    return join.count(class_of(t, v)) > 0;
}

} // namespace splitdens
