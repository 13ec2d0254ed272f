#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitdens {

// Dense 0-based image array; cycle notation lives only at the file boundary.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int degree);

    int degree() const { return static_cast<int>(images_.size()); }
    int operator()(int point) const { return images_[point]; }
    const std::vector<int>& images() const { return images_; }

    // (a * b)(x) = a(b(x)): apply b first.
    Permutation operator*(const Permutation& rhs) const;
    Permutation inverse() const;

    bool operator==(const Permutation& rhs) const { return images_ == rhs.images_; }
    bool operator<(const Permutation& rhs) const { return images_ < rhs.images_; }

private:
    std::vector<int> images_;
};

struct CycleType {
    std::vector<int> parts;   // sorted descending, sums to degree
};

CycleType cycle_type(const Permutation& p);

// Thrown when a closure would exceed the desk-scale element cap.
struct ElementCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class PermutationGroup {
public:
    static constexpr std::size_t kDefaultElementCap = 1'000'000;

    // Breadth-first closure of the generators; elements end up sorted
    // lexicographically so downstream output is deterministic.
    static PermutationGroup generate(int degree, std::vector<Permutation> generators,
                                     std::size_t element_cap = kDefaultElementCap);

    int degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return generators_; }
    const std::vector<Permutation>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(const Permutation& p) const;

private:
    PermutationGroup(int degree, std::vector<Permutation> generators,
                     std::vector<Permutation> elements);

    int degree_;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;
};

std::vector<std::vector<int>> orbits(const PermutationGroup& g);
bool is_transitive(const PermutationGroup& g, const std::vector<int>& support);
bool has_fixed_point_free_element(const PermutationGroup& g, const std::vector<int>& support);

// #{elements with a fixed point in support} and |group| as a reduced pair;
// the exact-rational wrapper lives in delta.
std::pair<long long, long long> fixed_point_count(const PermutationGroup& g,
                                                  const std::vector<int>& support);

// All subgroups via closures of singletons/pairs plus augmentation passes
// iterated to a fixed point of the lattice. Capped group order.
std::vector<PermutationGroup> enumerate_subgroups(const PermutationGroup& g,
                                                  std::size_t order_cap = 120);

// Group spec text format: `degree <n>`, then `gen <cycles>` lines such as
// `gen (0 1)(2 3)`; blank lines and `#` comments ignored.
PermutationGroup parse_group_file(std::istream& in, const std::string& filename = "<input>");
PermutationGroup load_group_file(const std::string& path);

} // namespace splitdens
