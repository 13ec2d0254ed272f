#include "splitdens/perm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <utility>

namespace splitdens {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 0 || v >= degree() || seen[v])
            throw std::invalid_argument("permutation images are not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(int degree) {
    std::vector<int> im(degree);
    for (int i = 0; i < degree; ++i)
        im[i] = i;
    return Permutation(std::move(im));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
    if (degree() != rhs.degree())
        throw std::invalid_argument("degree mismatch in composition");
    std::vector<int> im(images_.size());
    for (int i = 0; i < degree(); ++i)
        im[i] = images_[rhs.images_[i]];
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 0; i < degree(); ++i)
        im[images_[i]] = i;
    return Permutation(std::move(im));
}

CycleType cycle_type(const Permutation& p) {
    std::vector<bool> seen(p.degree(), false);
    CycleType ct;
    for (int i = 0; i < p.degree(); ++i) {
        if (seen[i])
            continue;
        int len = 0;
        for (int j = i; !seen[j]; j = p(j)) {
            seen[j] = true;
            ++len;
        }
        ct.parts.push_back(len);
    }
    std::sort(ct.parts.rbegin(), ct.parts.rend());
    return ct;
}

PermutationGroup::PermutationGroup(int degree, std::vector<Permutation> generators,
                                   std::vector<Permutation> elements)
    : degree_(degree), generators_(std::move(generators)), elements_(std::move(elements)) {}

PermutationGroup PermutationGroup::generate(int degree, std::vector<Permutation> generators,
                                            std::size_t element_cap) {
    if (degree < 1)
        throw std::invalid_argument("degree must be positive");
    for (const auto& g : generators)
        if (g.degree() != degree)
            throw std::invalid_argument("generator degree mismatch");

    std::set<std::vector<int>> seen;
    std::deque<Permutation> frontier;
    Permutation id = Permutation::identity(degree);
    seen.insert(id.images());
    frontier.push_back(id);
    while (!frontier.empty()) {
        Permutation cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : generators) {
            Permutation next = cur * g;
            if (seen.insert(next.images()).second) {
                if (seen.size() > element_cap)
                    throw ElementCapExceeded("group closure exceeds element cap");
                frontier.push_back(std::move(next));
            }
        }
    }

    std::vector<Permutation> elements;
    elements.reserve(seen.size());
    for (const auto& im : seen)
        elements.push_back(Permutation(im));

    PermutationGroup grp(degree, std::move(generators), std::move(elements));

    // Burnside cross-check: total fixed points = #orbits * |G|.
    long long fixed_total = 0;
    for (const auto& e : grp.elements_)
        for (int i = 0; i < degree; ++i)
            if (e(i) == i)
                ++fixed_total;
    long long orbit_count = static_cast<long long>(orbits(grp).size());
    if (fixed_total != orbit_count * static_cast<long long>(grp.order()))
        throw std::logic_error("Burnside cross-check failed on constructed group");

    return grp;
}

bool PermutationGroup::contains(const Permutation& p) const {
    return std::binary_search(elements_.begin(), elements_.end(), p);
}

std::vector<std::vector<int>> orbits(const PermutationGroup& g) {
    std::vector<bool> seen(g.degree(), false);
    std::vector<std::vector<int>> out;
    for (int start = 0; start < g.degree(); ++start) {
        if (seen[start])
            continue;
        std::vector<int> orbit{start};
        seen[start] = true;
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (const auto& gen : g.generators()) {
                int img = gen(orbit[i]);
                if (!seen[img]) {
                    seen[img] = true;
                    orbit.push_back(img);
                }
            }
        std::sort(orbit.begin(), orbit.end());
        out.push_back(std::move(orbit));
    }
    return out;
}

namespace {

void check_support(const PermutationGroup& g, const std::vector<int>& support) {
    for (int s : support)
        if (s < 0 || s >= g.degree())
            throw std::invalid_argument("support point out of range");
}

} // namespace

bool is_transitive(const PermutationGroup& g, const std::vector<int>& support) {
    check_support(g, support);
    if (support.empty())
        throw std::invalid_argument("transitivity needs a nonempty support");
    // Transitive on support = every pair of support points is connected,
    // i.e. the support lies inside a single orbit.
    for (const auto& orb : orbits(g))
        if (std::binary_search(orb.begin(), orb.end(), support.front())) {
            for (int s : support)
                if (!std::binary_search(orb.begin(), orb.end(), s))
                    return false;
            return true;
        }
    return false;
}

bool has_fixed_point_free_element(const PermutationGroup& g, const std::vector<int>& support) {
    check_support(g, support);
    if (support.empty())
        throw std::invalid_argument("needs a nonempty support");
    for (const auto& e : g.elements()) {
        bool fixes = false;
        for (int s : support)
            if (e(s) == s) {
                fixes = true;
                break;
            }
        if (!fixes)
            return true;
    }
    return false;
}

std::pair<long long, long long> fixed_point_count(const PermutationGroup& g,
                                                  const std::vector<int>& support) {
    check_support(g, support);
    long long hits = 0;
    for (const auto& e : g.elements())
        for (int s : support)
            if (e(s) == s) {
                ++hits;
                break;
            }
    return {hits, static_cast<long long>(g.order())};
}

std::vector<PermutationGroup> enumerate_subgroups(const PermutationGroup& g,
                                                  std::size_t order_cap) {
    if (g.order() > order_cap)
        throw std::invalid_argument("group order exceeds subgroup enumeration cap");

    const auto& els = g.elements();
    // Key a subgroup by its sorted element list, flattened.
    auto key_of = [](const PermutationGroup& h) {
        std::vector<int> key;
        for (const auto& e : h.elements())
            key.insert(key.end(), e.images().begin(), e.images().end());
        return key;
    };

    std::set<std::vector<int>> seen;
    std::vector<PermutationGroup> found;
    auto add = [&](std::vector<Permutation> gens) {
        PermutationGroup h = PermutationGroup::generate(g.degree(), std::move(gens));
        if (seen.insert(key_of(h)).second)
            found.push_back(std::move(h));
    };

    add({});
    for (const auto& a : els)
        add({a});
    for (const auto& a : els)
        for (const auto& b : els)
            add({a, b});

    // Augmentation passes: extend each found subgroup by one element, re-close,
    // until the lattice stabilizes.
    for (bool grew = true; grew;) {
        grew = false;
        std::size_t count = found.size();
        for (std::size_t i = 0; i < count; ++i)
            for (const auto& x : els) {
                if (found[i].contains(x))
                    continue;
                std::vector<Permutation> gens = found[i].generators();
                gens.push_back(x);
                std::size_t before = found.size();
                add(std::move(gens));
                if (found.size() > before)
                    grew = true;
            }
    }
    return found;
}

namespace {

[[noreturn]] void parse_fail(const std::string& filename, int line, const std::string& msg) {
    std::ostringstream os;
    os << filename << ":" << line << ": " << msg;
    throw std::runtime_error(os.str());
}

// One `(a b c)(d e)` expression -> permutation; cycles applied right to left.
Permutation parse_cycles(const std::string& text, int degree, const std::string& filename,
                         int line) {
    std::vector<std::vector<int>> cycles;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != '(')
            parse_fail(filename, line, "expected '(' in cycle notation");
        ++i;
        std::vector<int> cycle;
        while (true) {
            skip_ws();
            if (i >= text.size())
                parse_fail(filename, line, "unterminated cycle");
            if (text[i] == ')') {
                ++i;
                break;
            }
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != ')')
                ++j;
            int point;
            try {
                std::size_t used = 0;
                point = std::stoi(text.substr(i, j - i), &used);
                if (used != j - i)
                    throw std::invalid_argument("");
            } catch (...) {
                parse_fail(filename, line, "bad point '" + text.substr(i, j - i) + "'");
            }
            if (point < 0 || point >= degree)
                parse_fail(filename, line, "point out of range for degree");
            if (std::find(cycle.begin(), cycle.end(), point) != cycle.end())
                parse_fail(filename, line, "repeated point inside a cycle");
            cycle.push_back(point);
            i = j;
        }
        if (cycle.size() > 1)
            cycles.push_back(std::move(cycle));
        skip_ws();
    }

    Permutation p = Permutation::identity(degree);
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        std::vector<int> im(degree);
        for (int k = 0; k < degree; ++k)
            im[k] = k;
        const auto& c = *it;
        for (std::size_t k = 0; k < c.size(); ++k)
            im[c[k]] = c[(k + 1) % c.size()];
        p = Permutation(std::move(im)) * p;
    }
    return p;
}

} // namespace

PermutationGroup parse_group_file(std::istream& in, const std::string& filename) {
    int degree = -1;
    std::vector<Permutation> gens;
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
        if (word == "degree") {
            if (degree != -1)
                parse_fail(filename, lineno, "duplicate degree line");
            if (!(ls >> degree) || degree < 1)
                parse_fail(filename, lineno, "bad degree");
        } else if (word == "gen") {
            if (degree == -1)
                parse_fail(filename, lineno, "gen before degree");
            std::string rest;
            std::getline(ls, rest);
            gens.push_back(parse_cycles(rest, degree, filename, lineno));
        } else {
            parse_fail(filename, lineno, "unknown directive '" + word + "'");
        }
    }
    if (degree == -1)
        parse_fail(filename, lineno, "missing degree line");
    return PermutationGroup::generate(degree, std::move(gens));
}

PermutationGroup load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open group file: " + path);
    return parse_group_file(in, path);
}

} // namespace splitdens
