#include "splitdens/census.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "splitdens/localsolve.hpp"

namespace splitdens {

namespace {

// Distinct odd primes dividing any of the values (zeroes skipped). Three
// 64-bit values within the table carry at most ~45 distinct odd primes, so
// the fixed buffer never fills.
int odd_prime_support(std::initializer_list<i64> vals, const PrimeTable& table,
                      i64* out) {
    int n = 0;
    for (i64 v : vals) {
        i64 m = v < 0 ? -v : v;
        while (m != 0 && m % 2 == 0)
            m /= 2;
        while (m > 1) {
            i64 p = table.smallest_factor(m);
            bool seen = false;
            for (int i = 0; i < n; ++i)
                if (out[i] == p) {
                    seen = true;
                    break;
                }
            if (!seen)
                out[n++] = p;
            do
                m /= p;
            while (m % p == 0);
        }
    }
    return n;
}

// ELS for the conic a x^2 + b y^2 + c z^2 = 0, all coefficients nonzero.
// Same decision as fermat_els(2, ...) — real place, p = 2 and the odd
// primes dividing abc — but without per-call factorization containers,
// since this sits in the census inner loop.
bool conic_els(i64 a, i64 b, i64 c, const PrimeTable& table) {
    if (!conic_local(a, b, c, PlaceQ::real()).solvable)
        return false;
    if (!conic_local(a, b, c, PlaceQ::finite(2)).solvable)
        return false;
    i64 ps[64];
    int np = odd_prime_support({a, b, c}, table, ps);
    for (int i = 0; i < np; ++i)
        if (!conic_local(a, b, c, PlaceQ::finite(ps[i])).solvable)
            return false;
    return true;
}

bool ct_els(i64 a, i64 b, i64 t, const PrimeTable& table) {
    if (!multinorm_ct_local(a, b, t, PlaceQ::real()))
        return false;
    if (!multinorm_ct_local(a, b, t, PlaceQ::finite(2)))
        return false;
    i64 ps[64];
    int np = odd_prime_support({a, b, t}, table, ps);
    for (int i = 0; i < np; ++i)
        if (!multinorm_ct_local(a, b, t, PlaceQ::finite(ps[i])))
            return false;
    return true;
}

bool els_fermat(int d, i64 a0, i64 a1, i64 a2, const PrimeTable& table) {
    if (a0 == 0 || a1 == 0 || a2 == 0)
        return true;   // the matching coordinate point lies on the fibre
    if (d == 2)
        return conic_els(a0, a1, a2, table);
    return fermat_els(d, a0, a1, a2, table);
}

bool els_affine(const FamilySpec& fam, i64 t, const PrimeTable& table) {
    switch (fam.kind) {
    case FamilySpec::Kind::serre_conic:
        return conic_els(fam.a, t, -1, table);    // a x^2 + t y^2 = z^2
    case FamilySpec::Kind::quadratic_norm:
        return conic_els(1, -fam.a, -t, table);   // x^2 - a y^2 = t z^2
    case FamilySpec::Kind::ct_multinorm:
        return ct_els(fam.a, fam.b, t, table);
    default:
        throw std::logic_error("affine fibre on a projective family");
    }
}

std::string with_param(const char* what, std::initializer_list<i64> coords) {
    std::ostringstream os;
    os << what << " at parameter (";
    bool first = true;
    for (i64 c : coords) {
        if (!first)
            os << " : ";
        os << c;
        first = false;
    }
    os << ")";
    return os.str();
}

struct ShellTally {
    std::vector<i64> total, loc;
};

} // namespace

FamilySpec FamilySpec::serre_conic(i64 a) {
    if (a == 0 || is_perfect_square(a))
        throw std::invalid_argument("serre_conic needs a nonsquare a");
    FamilySpec f;
    f.kind = Kind::serre_conic;
    f.a = a;
    f.projective_base = false;
    f.base_dim = 1;
    return f;
}

FamilySpec FamilySpec::fermat(int d) {
    if (d < 2)
        throw std::invalid_argument("fermat needs degree >= 2");
    FamilySpec f;
    f.kind = Kind::fermat;
    f.d = d;
    f.projective_base = true;
    f.base_dim = 2;
    return f;
}

FamilySpec FamilySpec::quadratic_norm(i64 a) {
    if (a == 0)
        throw std::invalid_argument("quadratic_norm needs a nonzero a");
    FamilySpec f;
    f.kind = Kind::quadratic_norm;
    f.a = a;
    f.projective_base = false;
    f.base_dim = 1;
    return f;
}

FamilySpec FamilySpec::ct_multinorm(i64 a, i64 b) {
    if (a == 0 || b == 0 || is_perfect_square(a) || is_perfect_square(b) ||
        is_perfect_square(checked_mul(a, b)))
        throw std::invalid_argument("ct_multinorm needs a, b, ab nonsquare");
    FamilySpec f;
    f.kind = Kind::ct_multinorm;
    f.a = a;
    f.b = b;
    f.projective_base = false;
    f.base_dim = 1;
    return f;
}

std::string FamilySpec::name() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::serre_conic:
        os << "serre-conic(" << a << ")";
        break;
    case Kind::fermat:
        os << "fermat(" << d << ")";
        break;
    case Kind::quadratic_norm:
        os << "quadratic-norm(" << a << ")";
        break;
    case Kind::ct_multinorm:
        os << "ct-multinorm(" << a << "," << b << ")";
        break;
    }
    return os.str();
}

void enum_projective(int n, i64 B,
                     const std::function<void(const ParamPoint&)>& sink) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("enum_projective covers P^1 and P^2 only");
    if (B < 1)
        throw std::invalid_argument("enum_projective needs B >= 1");
    ParamPoint pt;
    if (n == 1) {
        pt.coords = {0, 1};
        sink(pt);
        for (i64 x0 = 1; x0 <= B; ++x0)
            for (i64 x1 = -B; x1 <= B; ++x1)
                if (std::gcd(x0, x1) == 1) {
                    pt.coords[0] = x0;
                    pt.coords[1] = x1;
                    sink(pt);
                }
        return;
    }
    pt.coords = {0, 0, 1};
    sink(pt);
    for (i64 x1 = 1; x1 <= B; ++x1)
        for (i64 x2 = -B; x2 <= B; ++x2)
            if (std::gcd(x1, x2) == 1) {
                pt.coords = {0, x1, x2};
                sink(pt);
            }
    for (i64 x0 = 1; x0 <= B; ++x0)
        for (i64 x1 = -B; x1 <= B; ++x1) {
            const i64 g01 = std::gcd(x0, x1);
            for (i64 x2 = -B; x2 <= B; ++x2) {
                if (g01 != 1 && std::gcd(g01, x2) != 1)
                    continue;
                pt.coords = {x0, x1, x2};
                sink(pt);
            }
        }
}

i64 count_projective(int n, i64 B) {
    i64 count = 0;
    enum_projective(n, B, [&](const ParamPoint&) { ++count; });
    return count;
}

bool fibre_els(const FamilySpec& family, const ParamPoint& point,
               const PrimeTable& table) {
    if (family.projective_base) {
        if (static_cast<int>(point.coords.size()) != family.base_dim + 1)
            throw std::invalid_argument("parameter arity mismatch");
        if (point.coords[0] == 0 && point.coords[1] == 0 && point.coords[2] == 0)
            throw std::invalid_argument("projective parameter cannot be zero");
        return els_fermat(family.d, point.coords[0], point.coords[1],
                          point.coords[2], table);
    }
    if (static_cast<int>(point.coords.size()) != family.base_dim)
        throw std::invalid_argument("parameter arity mismatch");
    if (point.coords[0] == 0)
        throw std::invalid_argument("affine parameter t must be nonzero");
    return els_affine(family, point.coords[0], table);
}

CountLadder count_nloc(const FamilySpec& family, const std::vector<i64>& ladder,
                       const PrimeTable& table, int workers) {
    if (workers < 1)
        throw std::invalid_argument("count_nloc needs workers >= 1");
    if (ladder.empty() || ladder.front() < 1)
        throw std::invalid_argument("count_nloc needs a positive ladder");
    for (size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1])
            throw std::invalid_argument("ladder must be strictly increasing");

    const i64 bmax = ladder.back();
    i64 need = std::max({bmax, std::abs(family.a), std::abs(family.b)});
    if (family.kind == FamilySpec::Kind::fermat)
        need = std::max<i64>(
            need, good_prime_threshold(DiagonalForm(family.d, {1, 1, 1})));
    if (table.limit() < need)
        throw std::invalid_argument("prime table too small for this census");

    const int nr = static_cast<int>(ladder.size());
    auto rung_of = [&](i64 h) {
        int r = 0;
        while (ladder[r] < h)
            ++r;
        return r;
    };

    // Fixed work decomposition, independent of the worker count: one chunk
    // per leading projective coordinate, or a fixed-width slice of the
    // affine t-range. Chunk tallies merge by position.
    constexpr i64 kAffineChunk = 8192;
    const bool proj = family.projective_base;
    const i64 nchunks =
        proj ? bmax + 1 : (bmax + kAffineChunk - 1) / kAffineChunk;

    std::vector<ShellTally> parts(static_cast<size_t>(nchunks));
    std::atomic<i64> next{0};
    std::atomic<bool> stop{false};
    std::mutex err_mu;
    bool failed = false, depth_cap = false;
    std::string err_msg;

    auto run_chunk = [&](i64 ci) {
        ShellTally& out = parts[static_cast<size_t>(ci)];
        out.total.assign(nr, 0);
        out.loc.assign(nr, 0);
        // `stop` is set only on failure, so bailing out mid-chunk can never
        // corrupt a successful run; it just stops burning cycles once some
        // other chunk has already thrown.
        if (!proj) {
            const i64 lo = 1 + ci * kAffineChunk;
            const i64 hi = std::min<i64>(bmax, lo + kAffineChunk - 1);
            for (i64 t = lo; t <= hi; ++t) {
                if (stop.load(std::memory_order_relaxed))
                    return;
                const int r = rung_of(t);
                ++out.total[r];
                bool ok;
                try {
                    ok = els_affine(family, t, table);
                } catch (const DepthCapExceeded& e) {
                    throw DepthCapExceeded(with_param(e.what(), {t}));
                }
                if (ok)
                    ++out.loc[r];
            }
            return;
        }
        const i64 x0 = ci;
        if (x0 == 0) {
            // (0:0:1) plus (0 : x1 : x2); every fibre here has a zero
            // coefficient, hence a rational coordinate point.
            ++out.total[rung_of(1)];
            ++out.loc[rung_of(1)];
            for (i64 x1 = 1; x1 <= bmax; ++x1) {
                if (stop.load(std::memory_order_relaxed))
                    return;
                for (i64 x2 = -bmax; x2 <= bmax; ++x2)
                    if (std::gcd(x1, x2) == 1) {
                        const int r = rung_of(std::max(x1, std::abs(x2)));
                        ++out.total[r];
                        ++out.loc[r];
                    }
            }
            return;
        }
        for (i64 x1 = -bmax; x1 <= bmax; ++x1) {
            if (stop.load(std::memory_order_relaxed))
                return;
            const i64 g01 = std::gcd(x0, x1);
            const i64 m01 = std::max(x0, std::abs(x1));
            for (i64 x2 = -bmax; x2 <= bmax; ++x2) {
                if (g01 != 1 && std::gcd(g01, x2) != 1)
                    continue;
                const int r = rung_of(std::max(m01, std::abs(x2)));
                ++out.total[r];
                bool ok;
                try {
                    ok = els_fermat(family.d, x0, x1, x2, table);
                } catch (const DepthCapExceeded& e) {
                    throw DepthCapExceeded(with_param(e.what(), {x0, x1, x2}));
                }
                if (ok)
                    ++out.loc[r];
            }
        }
    };

    auto work = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed))
                return;
            const i64 ci = next.fetch_add(1);
            if (ci >= nchunks)
                return;
            try {
                run_chunk(ci);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!failed) {
                    failed = true;
                    depth_cap =
                        dynamic_cast<const DepthCapExceeded*>(&e) != nullptr;
                    err_msg = e.what();
                }
                stop = true;
                return;
            }
        }
    };

    const int nthreads = static_cast<int>(std::min<i64>(workers, nchunks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i)
        pool.emplace_back(work);
    for (auto& th : pool)
        th.join();

    if (failed) {
        if (depth_cap)
            throw DepthCapExceeded(err_msg);
        throw std::runtime_error(err_msg);
    }

    CountLadder out;
    out.rows.resize(static_cast<size_t>(nr));
    i64 ctot = 0, cloc = 0;
    for (int r = 0; r < nr; ++r) {
        for (const ShellTally& part : parts) {
            ctot += part.total[static_cast<size_t>(r)];
            cloc += part.loc[static_cast<size_t>(r)];
        }
        out.rows[static_cast<size_t>(r)] = {ladder[static_cast<size_t>(r)],
                                            ctot, cloc};
    }
    return out;
}

FitResult fit_exponent(const CountLadder& ladder, int n) {
    const auto& rows = ladder.rows;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i].B <= rows[i - 1].B)
            throw std::invalid_argument("ladder rows must increase in B");
    int big = 0;
    for (const CountRow& r : rows)
        if (r.B >= 100)
            ++big;
    if (big < 4)
        throw std::invalid_argument(
            "fit_exponent needs at least 4 ladder rows with B >= 100");

    FitResult fit;
    std::vector<double> xs, ys;
    // Only the top half of the ladder enters the fit (lower rungs carry the
    // strongest lower-order bias); rows with N_loc = 0 are dropped.
    for (size_t i = rows.size() / 2; i < rows.size(); ++i) {
        if (rows[i].n_loc <= 0 || rows[i].B < 2) {
            ++fit.rows_skipped;
            continue;
        }
        const double lb = std::log(static_cast<double>(rows[i].B));
        xs.push_back(std::log(lb));
        ys.push_back(std::log(static_cast<double>(rows[i].n_loc)) -
                     (n + 1) * lb);
    }
    if (xs.size() < 2)
        throw std::invalid_argument(
            "fit_exponent needs at least two usable rows in the top half");

    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / k;
    double sse = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        sse += e * e;
    }
    fit.delta_hat = -slope;
    fit.constant_hat = std::exp(intercept);
    fit.residual = std::sqrt(sse / k);
    fit.rows_used = static_cast<int>(xs.size());
    return fit;
}

std::string ladder_csv(const CountLadder& ladder) {
    std::ostringstream os;
    os << "B,N_total,N_loc\n";
    for (const CountRow& r : ladder.rows)
        os << r.B << ',' << r.n_total << ',' << r.n_loc << '\n';
    return os.str();
}

std::string fit_block(const FitResult& fit) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << "delta_hat=" << fit.delta_hat
       << ", constant_hat=" << fit.constant_hat
       << ", residual=" << fit.residual << ", rows_used=" << fit.rows_used
       << ", rows_skipped=" << fit.rows_skipped << ", window=top-half\n";
    return os.str();
}

} // namespace splitdens
