#ifndef FQLAB_COSET_TABLE_HPP
#define FQLAB_COSET_TABLE_HPP

#include "fqlab/permgroup.hpp"
#include "fqlab/presentation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fqlab::fp {

using Coset = std::int32_t;
inline constexpr Coset kUndefined = -1;

/// Action of the generators of a presentation on the cosets of a subgroup.
/// Coset 0 is the subgroup itself.  Tables produced by this library are
/// standardized: scanning entries row by row, column by column, new cosets
/// appear in increasing order.
class CosetTable {
  public:
    CosetTable(std::size_t generator_count, std::vector<Coset> entries, std::vector<Word> subgroup_words = {});

    std::size_t generator_count() const { return generator_count_; }
    std::size_t column_count() const { return 2 * generator_count_; }
    std::size_t coset_count() const { return entries_.size() / column_count(); }
    Coset at(Coset coset, std::size_t column) const { return entries_[coset * column_count() + column]; }
    Coset at(Coset coset, Letter l) const { return at(coset, l.column()); }
    const std::vector<Coset>& entries() const { return entries_; }
    const std::vector<Word>& subgroup_words() const { return subgroup_words_; }

    bool complete() const;
    /// Follows `w` from `start`; nullopt if it runs into an undefined entry.
    std::optional<Coset> trace(Coset start, const Word& w) const;
    perm::Permutation generator_permutation(std::size_t gen) const;
    /// The permutation image of the action; requires a complete table.
    perm::PermGroup image(std::size_t element_cap = perm::kDefaultElementCap) const;

    /// Complete, transitive, consistent inverse columns, every relator closes at
    /// every coset and every subgroup word fixes coset 0.
    bool verify(const Presentation& pres) const;

    /// `coset,<gen>,<gen>^-1,...` with header, one row per coset.
    std::string to_csv(const Presentation& pres) const;

    friend bool operator==(const CosetTable& a, const CosetTable& b) {
        return a.generator_count_ == b.generator_count_ && a.entries_ == b.entries_;
    }

  private:
    std::size_t generator_count_;
    std::vector<Coset> entries_;
    std::vector<Word> subgroup_words_;
};

/// Renumbers a complete transitive table so coset `base` becomes 0 and the
/// rest follow first appearance in a row-major scan.
CosetTable standardize(const CosetTable& t, Coset base = 0);

/// Spanning tree of a complete table together with coset representatives.
struct SchreierTree {
    /// parent_column[c] is the column through which coset c was first reached
    /// (from parent[c]); undefined for coset 0.
    std::vector<Coset> parent;
    std::vector<std::size_t> parent_column;
    std::vector<Word> representative;
    /// Whether the positive edge (c, gen) lies in the tree.
    std::vector<bool> tree_edge;  // indexed c * generator_count + gen

    bool is_tree_edge(Coset c, std::size_t gen, std::size_t generator_count) const {
        return tree_edge[static_cast<std::size_t>(c) * generator_count + gen];
    }
};

SchreierTree schreier_tree(const CosetTable& t);

// ---------------------------------------------------------------------------
// Coset enumeration

/// HLT coset enumeration with immediate coincidence processing.  Returns
/// nullopt ("undecided") if more than `max_cosets` cosets would be live at
/// once.  The returned table is standardized.
std::optional<CosetTable> todd_coxeter(const Presentation& pres, const std::vector<Word>& subgroup_words,
                                       std::size_t max_cosets);

class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 200'000'000;

/// Search budget: FQLAB_BUDGET from the environment when set, else the default.
std::uint64_t search_budget();

/// One representative per conjugacy class of subgroups of index <= max_index,
/// each a complete standardized table.  Sims-style backtracking over partial
/// tables with canonicity pruning.  Throws BudgetExceeded after `node_budget`
/// search nodes.
std::vector<CosetTable> low_index_subgroups(const Presentation& pres, std::size_t max_index,
                                            std::uint64_t node_budget = search_budget());

/// Normal-subgroup search: every normal subgroup of index <= max_index exactly
/// once.  Each coincidence chosen during the search adds its Schreier word as a
/// relator that must close at every coset, so only regular actions survive and
/// no canonicity test is needed.  `visit` sees every complete table and returns
/// false to stop early.
struct NormalSearchOptions {
    std::uint64_t node_budget = search_budget();
    /// Words that must act nontrivially.  A partial table where one of them
    /// already fixes coset 0 is abandoned.
    std::vector<Word> nontrivial_words;
};

struct NormalSearchStats {
    std::uint64_t nodes = 0;
    bool complete = true;  // false when the node budget ran out or visit stopped
};

NormalSearchStats search_normal_subgroups(const Presentation& pres, std::size_t max_index,
                                          const std::function<bool(const CosetTable&)>& visit,
                                          const NormalSearchOptions& options = {});

/// Regular-action criterion: the image of the action has order equal to the index.
bool is_normal_table(const CosetTable& t);
/// Cross-check: every Schreier generator conjugated by every generator fixes coset 0.
bool is_normal_by_conjugation(const CosetTable& t);

} // namespace fqlab::fp

#endif // FQLAB_COSET_TABLE_HPP
