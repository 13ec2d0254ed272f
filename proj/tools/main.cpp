// Command-line frontend: delta / fermat-table / count / sieve / cheb.
// Exit codes: 0 success, 1 usage or parse error, 2 residue-tree depth cap.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "splitdens/arith.hpp"
#include "splitdens/census.hpp"
#include "splitdens/chebfreq.hpp"
#include "splitdens/delta.hpp"
#include "splitdens/localsolve.hpp"
#include "splitdens/perm.hpp"
#include "splitdens/rational.hpp"
#include "splitdens/sieve.hpp"

namespace sd = splitdens;
using sd::i64;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream is(s);
    while (std::getline(is, piece, sep)) out.push_back(piece);
    return out;
}

long long parse_ll(const std::string& tok) {
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (...) {
        throw std::invalid_argument("bad integer '" + tok + "'");
    }
    if (pos != tok.size())
        throw std::invalid_argument("bad integer '" + tok + "'");
    return v;
}

// Ladder values accept scientific notation ("1e6") but must be integers.
i64 parse_count_value(const std::string& tok) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (...) {
        throw std::invalid_argument("bad numeric value '" + tok + "'");
    }
    if (pos != tok.size())
        throw std::invalid_argument("bad numeric value '" + tok + "'");
    if (!(v >= 1 && v <= 9e15) || std::rint(v) != v)
        throw std::invalid_argument("'" + tok +
                                    "' is not a positive integer height");
    return static_cast<i64>(v);
}

std::vector<i64> parse_ladder(const std::string& s) {
    std::vector<i64> out;
    for (const std::string& tok : split(s, ',')) out.push_back(parse_count_value(tok));
    if (out.empty()) throw std::invalid_argument("empty ladder");
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1])
            throw std::invalid_argument("ladder must be strictly increasing");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const std::string& tok : split(s, ','))
        out.push_back(static_cast<int>(parse_ll(tok)));
    if (out.empty()) throw std::invalid_argument("empty point list");
    return out;
}

sd::FamilySpec parse_family(const std::string& s) {
    size_t colon = s.find(':');
    std::string name = s.substr(0, colon);
    std::vector<long long> args;
    if (colon != std::string::npos)
        for (const std::string& tok : split(s.substr(colon + 1), ','))
            args.push_back(parse_ll(tok));
    auto want = [&](size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("family '" + name + "' takes " +
                                        std::to_string(n) + " parameter(s)");
    };
    if (name == "quadratic-norm") {
        want(1);
        return sd::FamilySpec::quadratic_norm(args[0]);
    }
    if (name == "serre-conic") {
        want(1);
        return sd::FamilySpec::serre_conic(args[0]);
    }
    if (name == "ct-multinorm") {
        want(2);
        return sd::FamilySpec::ct_multinorm(args[0], args[1]);
    }
    if (name == "fermat") {
        want(1);
        return sd::FamilySpec::fermat(static_cast<int>(args[0]));
    }
    throw std::invalid_argument(
        "unknown family '" + name +
        "' (quadratic-norm:a, serre-conic:a, ct-multinorm:a,b, fermat:d)");
}

// Table cells drop the denominator when it is 1; the delta subcommand keeps
// the explicit p/q form.
std::string csv_frac(const sd::Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return sd::frac_string(r);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void run_delta(const std::string& group_path, const std::string& support_str,
               const std::string& blocks_str) {
    sd::PermutationGroup g = sd::load_group_file(group_path);
    std::vector<int> support;
    if (support_str.empty()) {
        for (int i = 0; i < g.degree(); ++i) support.push_back(i);
    } else {
        support = parse_int_list(support_str);
    }
    sd::Rational delta = sd::delta_of_action(sd::ComponentAction::of(g, support));
    std::cout << "delta = " << sd::frac_string(delta) << "\n";
    std::cout << "1-delta = " << sd::frac_string(sd::Rational(1) - delta)
              << "\n";
    if (!blocks_str.empty()) {
        std::vector<std::vector<int>> blocks;
        for (const std::string& part : split(blocks_str, ';'))
            blocks.push_back(parse_int_list(part));
        std::cout << "gcd_delta = "
                  << sd::frac_string(sd::multinorm_delta(g, blocks)) << "\n";
    }
}

std::string run_fermat_table(int dmax) {
    sd::PrimeTable table(std::max(dmax, 100));
    std::ostringstream os;
    os << "d,F,delta,psi,exponent\n";
    for (int d = 2; d <= dmax; ++d) {
        long long F = sd::fermat_F_bruteforce(d);
        sd::Rational delta = sd::fermat_delta_closed(d);
        sd::Rational brute(sd::BigInt(F),
                           sd::BigInt(d) * sd::BigInt(sd::euler_phi(d, table)));
        if (delta != brute)
            throw std::runtime_error(
                "closed form disagrees with brute force at d=" +
                std::to_string(d));
        sd::Rational expo = sd::Rational(3) * (sd::Rational(1) - delta);
        os << d << ',' << F << ',' << csv_frac(delta) << ','
           << csv_frac(sd::bd_psi(d)) << ',' << csv_frac(expo) << '\n';
    }
    return os.str();
}

std::string run_count(const sd::FamilySpec& fam, const std::vector<i64>& ladder,
                      int workers) {
    i64 need = std::max<i64>(
        {ladder.back(), std::abs(fam.a), std::abs(fam.b), 100});
    if (fam.kind == sd::FamilySpec::Kind::fermat)
        need = std::max<i64>(
            need, sd::good_prime_threshold(sd::DiagonalForm(fam.d, {1, 1, 1})));
    sd::PrimeTable table(need);
    sd::CountLadder rows = sd::count_nloc(fam, ladder, table, workers);
    std::string out = sd::ladder_csv(rows);
    int n = fam.projective_base ? fam.base_dim : fam.base_dim - 1;
    try {
        out += sd::fit_block(sd::fit_exponent(rows, n));
    } catch (const std::invalid_argument&) {
        // ladder too short for a fit; the census alone is still useful
    }
    return out;
}

std::string run_sieve(const sd::FamilySpec& fam, const std::vector<i64>& ladder,
                      int workers) {
    i64 need = std::max<i64>(
        {ladder.back(), std::abs(fam.a), std::abs(fam.b), 100});
    sd::PrimeTable table(need);
    sd::OmegaFunction omega = sd::OmegaFunction::from_family(fam);
    std::vector<sd::SieveReport> reports;
    reports.reserve(ladder.size());
    for (i64 B : ladder)
        reports.push_back(sd::sieve_bound(B, omega, 1, 2, table, workers));
    return sd::sieve_csv(reports);
}

std::string run_cheb(const std::string& poly_spec, i64 X,
                     const std::string& mode, int workers) {
    // --poly takes inline coefficients or a path to a coefficient file.
    std::string text = poly_spec;
    std::ifstream in(poly_spec);
    if (in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    sd::IntPolynomial f = sd::IntPolynomial::parse(text);
    sd::PrimeTable table(std::max<i64>(X, 100));
    if (mode == "root-density")
        return sd::density_csv(
            {sd::root_density(f, X, std::nullopt, table, workers)});
    if (mode == "gcd-density")
        return sd::density_csv(
            {sd::gcd_one_density(f, X, std::nullopt, table, workers)});
    std::ostringstream os;
    os << std::fixed << std::setprecision(6)
       << "mertens_slope = " << sd::mertens_exponent(f, X, table, workers)
       << "\n";
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"splitting-density toolkit: exact delta invariants, local "
                 "solvability censuses, sieve bounds, prime-splitting data"};
    app.require_subcommand(1);

    std::string group_path, support_str, blocks_str;
    CLI::App* delta = app.add_subcommand(
        "delta", "exact fixed-point density of a permutation action");
    delta->add_option("--group", group_path, "group spec file")->required();
    delta->add_option("--support", support_str,
                      "comma list of acted-on points (default: all)");
    delta->add_option("--blocks", blocks_str,
                      "semicolon-separated comma lists; also print the "
                      "gcd-of-degrees density");

    int dmax = 0;
    std::string table_out;
    CLI::App* ftab = app.add_subcommand(
        "fermat-table", "d, F(d), delta, psi, exponent table");
    ftab->add_option("--dmax", dmax, "largest degree")
        ->required()
        ->check(CLI::Range(2, 2000));
    ftab->add_option("--out", table_out, "output file (default: stdout)");

    std::string count_family, count_ladder, count_out;
    int count_workers = 1;
    CLI::App* count = app.add_subcommand(
        "count", "census of everywhere-locally-solvable fibres over a height "
                 "ladder, with an exponent fit");
    count->add_option("--family", count_family,
                      "quadratic-norm:a | serre-conic:a | ct-multinorm:a,b | "
                      "fermat:d")
        ->required();
    count->add_option("--ladder", count_ladder,
                      "comma list of heights, e.g. 1e4,1e5,1e6")
        ->required();
    count->add_option("--workers", count_workers, "worker threads")
        ->check(CLI::PositiveNumber);
    count->add_option("--out", count_out, "output file (default: stdout)");

    std::string sieve_family, sieve_ladder, sieve_out;
    int sieve_workers = 1;
    CLI::App* sieve = app.add_subcommand(
        "sieve", "large-sieve upper bound against the empirical census");
    sieve->add_option("--family", sieve_family, "affine family spec")
        ->required();
    sieve->add_option("--ladder", sieve_ladder, "comma list of heights")
        ->required();
    sieve->add_option("--workers", sieve_workers, "worker threads")
        ->check(CLI::PositiveNumber);
    sieve->add_option("--out", sieve_out, "output file (default: stdout)");

    std::string cheb_poly, cheb_mode = "root-density", cheb_out, cheb_x;
    int cheb_workers = 1;
    CLI::App* cheb = app.add_subcommand(
        "cheb", "splitting densities of a squarefree integer polynomial");
    cheb->add_option("--poly", cheb_poly,
                     "coefficients, constant term first (inline or a file)")
        ->required();
    cheb->add_option("--X", cheb_x, "prime cutoff")->required();
    cheb->add_option("--mode", cheb_mode, "root-density | gcd-density | mertens")
        ->check(CLI::IsMember({"root-density", "gcd-density", "mertens"}));
    cheb->add_option("--workers", cheb_workers, "worker threads")
        ->check(CLI::PositiveNumber);
    cheb->add_option("--out", cheb_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (delta->parsed()) {
            run_delta(group_path, support_str, blocks_str);
        } else if (ftab->parsed()) {
            emit(table_out, run_fermat_table(dmax));
        } else if (count->parsed()) {
            emit(count_out, run_count(parse_family(count_family),
                                      parse_ladder(count_ladder),
                                      count_workers));
        } else if (sieve->parsed()) {
            emit(sieve_out, run_sieve(parse_family(sieve_family),
                                      parse_ladder(sieve_ladder),
                                      sieve_workers));
        } else if (cheb->parsed()) {
            emit(cheb_out, run_cheb(cheb_poly, parse_count_value(cheb_x),
                                    cheb_mode, cheb_workers));
        }
    } catch (const sd::DepthCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
