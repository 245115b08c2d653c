#ifndef FQLAB_PERMGROUP_HPP
#define FQLAB_PERMGROUP_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fqlab::perm {

using Point = std::uint32_t;

class GroupTooLarge : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument is not a subgroup / not normal / not transitive, as the operation requires.
class StructureError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A bijection of {0, ..., degree-1}.  Composition is left to right:
/// (g * h)(i) = h(g(i)), matching the right action used for coset tables.
class Permutation {
  public:
    Permutation() = default;
    static Permutation identity(std::size_t degree);
    /// Throws std::invalid_argument unless `images` is a bijection.
    static Permutation from_images(std::vector<Point> images);
    /// Disjoint cycles on 0-based points.
    static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles);

    std::size_t degree() const { return images_.size(); }
    Point operator()(Point i) const { return images_[i]; }
    const std::vector<Point>& images() const { return images_; }

    Permutation operator*(const Permutation& rhs) const;
    Permutation inverse() const;
    Permutation pow(long long e) const;
    bool is_identity() const;
    std::uint64_t order() const;
    /// Conjugate g^-1 * this * g.
    Permutation conjugate(const Permutation& g) const;

    /// 1-based cycle notation, "()" for the identity.
    std::string to_string() const;

    auto operator<=>(const Permutation&) const = default;
    bool operator==(const Permutation&) const = default;

  private:
    explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {}
    std::vector<Point> images_;
};

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept;
};

/// Parses 1-based cycle notation such as "(1 2 3)(4 5)" or "()".  `degree` 0
/// means "the largest point mentioned".
Permutation parse_cycles(std::string_view text, std::size_t degree = 0);

inline constexpr std::size_t kDefaultElementCap = 100000;
inline constexpr std::size_t kNormalSubgroupCap = 2000;

/// A finite permutation group with its full element set, sorted
/// lexicographically by image sequence.  Immutable once built.
class PermGroup {
  public:
    PermGroup() : PermGroup(close(1, {})) {}

    static PermGroup close(std::size_t degree, std::vector<Permutation> generators,
                           std::size_t element_cap = kDefaultElementCap);
    /// Wraps an element set already known to be a group containing `generators`.
    static PermGroup from_closed(std::size_t degree, std::vector<Permutation> generators,
                                 std::vector<Permutation> elements);

    std::size_t degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return generators_; }
    const std::vector<Permutation>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(const Permutation& g) const { return index_.count(g) != 0; }
    std::optional<std::size_t> index_of(const Permutation& g) const;
    bool is_subset_of(const PermGroup& other) const;
    bool same_elements(const PermGroup& other) const { return elements_ == other.elements_; }

  private:
    PermGroup(std::size_t degree, std::vector<Permutation> generators, std::vector<Permutation> elements);
    std::size_t degree_;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;
    std::unordered_map<Permutation, std::size_t, PermutationHash> index_;
};

/// Subgroup of `g` generated by `candidates`, grown one generator at a time.
PermGroup generated_subgroup(const PermGroup& g, const std::vector<Permutation>& candidates);

struct TorsionSelector {
    enum class Kind { odd, divides, odd_and_divides };
    Kind kind = Kind::odd;
    std::uint64_t a = 1;

    static TorsionSelector odd() { return {Kind::odd, 1}; }
    static TorsionSelector divides(std::uint64_t a) { return {Kind::divides, a}; }
    static TorsionSelector odd_and_divides(std::uint64_t a) { return {Kind::odd_and_divides, a}; }
    bool matches(std::uint64_t element_order) const;
};

/// O(G), A_a(G) or O_a(G): the subgroup generated by elements whose order matches.
PermGroup torsion_subgroup(const PermGroup& g, TorsionSelector selector);

PermGroup normal_closure(const PermGroup& g, const std::vector<Permutation>& seeds);
bool is_normal(const PermGroup& g, const PermGroup& n);
PermGroup centralizer(const PermGroup& g, const std::vector<Permutation>& elements);

/// Every normal subgroup exactly once, ordered by (order, elements).
std::vector<PermGroup> normal_subgroups(const PermGroup& g, std::size_t order_cap = kNormalSubgroupCap);

/// G/N realised as the action of G on the right cosets of N.
class Quotient {
  public:
    Quotient(const PermGroup& g, const PermGroup& n);

    const PermGroup& group() const { return image_; }
    std::size_t coset_count() const { return representatives_.size(); }
    /// Image of an element of G in the quotient.
    Permutation image(const Permutation& element) const;
    /// Image of a subgroup of G.
    PermGroup image(const PermGroup& subgroup) const;

  private:
    PermGroup parent_;
    std::vector<std::size_t> coset_of_;  // element index of G -> coset
    std::vector<std::size_t> representatives_;
    PermGroup image_;
};

PermGroup quotient(const PermGroup& g, const PermGroup& n);

struct GroupShape {
    enum class Tag { cyclic, dihedral, other };
    Tag tag = Tag::other;
    /// Order of the cyclic group, or n for the dihedral group of order 2n.
    std::size_t parameter = 0;
    friend bool operator==(const GroupShape&, const GroupShape&) = default;
};

GroupShape shape(const PermGroup& g);
std::string to_string(const GroupShape& s);

std::vector<std::vector<Point>> orbits(const PermGroup& g);
bool is_transitive(const PermGroup& g);

// ---------------------------------------------------------------------------
// Lemma checks

struct OddLemmaRow {
    std::size_t normal_order;
    bool pass;
};

/// O(G/N) == O(G)N/N for every normal N of G.
std::vector<OddLemmaRow> verify_odd_lemma(const PermGroup& g);

struct SylowQuotientReport {
    PermGroup quotient;
    std::uint64_t p = 0;
    std::size_t kernel_order = 0;      // |K|, K the p'-part of the centralizer of P
    std::size_t complement_order = 0;  // h = |quotient| / p
    bool normal_p_subgroup = false;    // image of P is normal of order p
    bool complement_cyclic = false;    // quotient / image(P) is cyclic
    bool divides_p_minus_1 = false;
    bool faithful = false;             // complement acts faithfully on image(P)
    bool valid() const {
        return normal_p_subgroup && complement_cyclic && divides_p_minus_1 && faithful;
    }
};

/// Builds the quotient C_p x| H of a group whose order lies in NP_p.
SylowQuotientReport normal_sylow_quotient(const PermGroup& g, std::uint64_t p);

bool is_quasiprimitive(const PermGroup& g);

struct QuasiprimitiveReport {
    bool quasiprimitive = false;
    bool odd_part_transitive = false;
    std::size_t order = 0;
    /// Lemma holds: not quasiprimitive, or |G| <= 2, or O(G) transitive.
    bool pass = false;
};

QuasiprimitiveReport verify_quasiprimitive_odd(const PermGroup& g);

struct StrucLemmaReport {
    bool hypotheses_hold = false;
    GroupShape quotient_shape;
    std::size_t odd_divisor_part_order = 0;
    bool pass = false;  // meaningful only when hypotheses_hold
};

StrucLemmaReport verify_struc_lemma(const PermGroup& g, std::uint64_t a);

// ---------------------------------------------------------------------------
// Fixture catalogs
//
// One group per line, `name: <generator>, <generator>, ...`, each generator in
// 1-based cycle notation.  Blank lines and lines starting with '#' are skipped.
// The name ends at the first colon followed by a blank or '(', so names such
// as `C13:C3` are allowed.  The degree of a group is the largest point
// mentioned on its line.
//
//     A4: (1 2 3), (1 2)(3 4)

struct CatalogEntry {
    std::string name;
    PermGroup group;
};

class CatalogError : public std::invalid_argument {
  public:
    CatalogError(std::size_t line, const std::string& what)
        : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

std::vector<CatalogEntry> parse_catalog(std::string_view text, std::size_t element_cap = kDefaultElementCap);

} // namespace fqlab::perm

#endif // FQLAB_PERMGROUP_HPP
