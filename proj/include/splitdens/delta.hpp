#pragma once

#include "splitdens/perm.hpp"
#include "splitdens/rational.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace splitdens {

// Group action on the multiplicity-one components over one divisor;
// "empty" encodes a fibre with no such component.
struct ComponentAction {
    std::optional<PermutationGroup> group;
    std::vector<int> support;

    static ComponentAction empty() { return {}; }
    static ComponentAction of(PermutationGroup g, std::vector<int> supp);
    bool is_empty() const { return !group.has_value(); }
};

// Proportion of group elements fixing some support point; 0 for empty actions.
Rational delta_of_action(const ComponentAction& a);

struct FamilySplitData {
    std::vector<std::pair<std::string, ComponentAction>> divisors;   // labels distinct
};

// Sum over divisors of (1 - delta).
Rational delta_total(const FamilySplitData& f);

// #{(s,t) in Z/d x (Z/d)^x : gcd(t-1,d) | s} by direct double loop.
long long fermat_F_bruteforce(long long d);

// Multiplicative closed form: delta(p^m) = 1 - (p^{2m}-1)/(p^{2m-1}(p^2-1)).
Rational fermat_delta_closed(long long d);

// Independent oracle: fixed-point proportion of the affine group
// {n -> s + tn} acting on Z/d.
Rational fermat_delta_action(long long d);

// psi(d) = (1/phi(d)) (1 - 1/d).
Rational bd_psi(long long d);

struct MultinormSplit {
    bool split;
    std::vector<long long> witness;   // sum n_i s_i = m when split
};

// gcd(n_1,...,n_r) | m, with an extended-gcd witness for the section.
MultinormSplit multinorm_split_criterion(const std::vector<long long>& degrees, long long m);

// Proportion of elements whose cycle lengths across the factor blocks have
// gcd 1 (local factor degrees of the etale algebra at a prime).
Rational multinorm_delta(const PermutationGroup& g, const std::vector<std::vector<int>>& blocks);

Rational brauer_delta(long long residue_order);

// Max fixed-point proportion over subgroups of S4 = AGL(2,2) that fix no
// point globally; equals 3/4.
Rational quadratic_twist_delta_sup();

// Same search restricted to transitive subgroups.
Rational quadratic_twist_delta_sup_transitive();

Rational cyclic_delta(long long d);

// Text format: one divisor per line,
//   divisor <label> group=<path> support=<comma-list>
//   divisor <label> empty
FamilySplitData parse_family_split_file(std::istream& in, const std::string& filename);
FamilySplitData load_family_split_file(const std::string& path);

} // namespace splitdens
