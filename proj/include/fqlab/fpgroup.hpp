#ifndef FQLAB_FPGROUP_HPP
#define FQLAB_FPGROUP_HPP

#include "fqlab/coset_table.hpp"
#include "fqlab/presentation.hpp"
#include "fqlab/smith.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fqlab::fp {

/// Relators x generators matrix of exponent sums.
IntMatrix<std::int64_t> exponent_matrix(const Presentation& pres);

/// Smith form of the exponent-sum matrix: G/G' is the cokernel.
SmithForm<BigInt> abelianization(const Presentation& pres);

/// Images of the generators under a surjection onto the integers.
struct CyclicWitness {
    std::vector<BigInt> images;
};

std::optional<CyclicWitness> infinite_cyclic_quotient(const Presentation& pres);
inline bool has_infinite_cyclic_quotient(const Presentation& pres) {
    return infinite_cyclic_quotient(pres).has_value();
}
/// Every relator maps to 0 and the images have gcd 1.
bool verify_cyclic_witness(const Presentation& pres, const CyclicWitness& w);

/// Kernels of the nonzero homomorphisms onto C2, in order of the generator
/// assignment read as a binary number (generator 0 lowest).
std::vector<CosetTable> index_two_subgroups(const Presentation& pres);

/// Schreier generator bookkeeping for a complete table: one generator per
/// positive edge (coset, gen) outside the spanning tree.
class SchreierRewriter {
  public:
    explicit SchreierRewriter(const CosetTable& t);

    std::size_t generator_count() const { return edges_.size(); }
    /// (coset, gen) of Schreier generator i.
    std::pair<Coset, std::size_t> edge(std::size_t i) const { return edges_[i]; }
    std::string name(std::size_t i, const Presentation& pres) const;
    /// The element rep(c) * gen * rep(c gen)^-1 as a word in the original generators.
    Word as_word(std::size_t i) const;
    const SchreierTree& tree() const { return tree_; }

    /// Rewrites `w` read from coset `start` as a word in the Schreier
    /// generators.  Throws std::invalid_argument if the walk does not end at
    /// `start` (the word is not in the conjugate subgroup).
    Word rewrite(const Word& w, Coset start = 0) const;

  private:
    CosetTable table_;
    SchreierTree tree_;
    std::vector<std::pair<Coset, std::size_t>> edges_;
    std::vector<std::int64_t> edge_index_;  // c * gens + gen -> generator or -1
};

/// Presentation of the subgroup on its Schreier generators `s<coset>_<gen>`,
/// with relators the rewrites of every relator from every coset.
Presentation reidemeister_schreier(const Presentation& pres, const CosetTable& t);

/// An index-2 subgroup M, with b the representative of its other coset, and a
/// vector on the Schreier generators of M killing the abelianized relators of
/// M, the rewrite of b^2 and every m^b m.  It defines a surjection of the
/// dihedralization of M onto the integers.
struct DihedralWitness {
    CosetTable subgroup;
    std::vector<BigInt> images;
};

/// Rows of the abelianized dihedralization of M over its Schreier generators.
/// Commutator relators vanish after abelianizing and contribute no rows.
IntMatrix<std::int64_t> dihedralization_matrix(const Presentation& pres, const CosetTable& index_two);

std::optional<DihedralWitness> infinite_dihedral_quotient(const Presentation& pres);
inline bool has_infinite_dihedral_quotient(const Presentation& pres) {
    return infinite_dihedral_quotient(pres).has_value();
}
bool verify_dihedral_witness(const Presentation& pres, const DihedralWitness& w);

struct DensityClass {
    enum class Tag { infinite_cyclic, infinite_dihedral, density_zero };
    Tag tag = Tag::density_zero;
    std::optional<CyclicWitness> cyclic;
    std::optional<DihedralWitness> dihedral;
    /// For density_zero: the abelian invariants and the number of index-2
    /// subgroups whose dihedralization was found finite.
    std::vector<BigInt> abelian_invariants;
    std::size_t index_two_checked = 0;
};

std::string to_string(DensityClass::Tag tag);
DensityClass classify_density(const Presentation& pres);
/// Re-checks the witness without reusing the classifier.
bool verify_classification(const Presentation& pres, const DensityClass& c);

/// Orders of finite quotients up to a limit, each with the regular coset
/// table of one normal subgroup of that index.
struct QuotientOrders {
    std::map<std::size_t, CosetTable> certificates;
    bool complete = true;
    std::uint64_t nodes = 0;

    std::vector<std::size_t> orders() const;
};

QuotientOrders fq_up_to(const Presentation& pres, std::size_t limit,
                        std::uint64_t node_budget = search_budget());
/// The odd orders of `fq`.
QuotientOrders odd_part(const QuotientOrders& fq);

/// Certificate check: complete table satisfying every relator, with a regular image.
bool verify_certificate(const Presentation& pres, const CosetTable& t);

/// Normal subgroups N of < x_1..x_k | x_i^{s_i} > of index <= max_index with
/// each x_i of order exactly s_i modulo N.
QuotientOrders smooth_quotients(const std::vector<std::uint64_t>& orders, std::size_t max_index,
                                std::uint64_t node_budget = search_budget());
/// Whether x_i has order exactly s_i in the action of `t`.
bool is_smooth_table(const std::vector<std::uint64_t>& orders, const CosetTable& t);

} // namespace fqlab::fp

#endif // FQLAB_FPGROUP_HPP
