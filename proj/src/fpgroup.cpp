#include "fqlab/fpgroup.hpp"

#include "fqlab/numtheory.hpp"

#include <numeric>

namespace fqlab::fp {

IntMatrix<std::int64_t> exponent_matrix(const Presentation& pres) {
    const auto rows = static_cast<Eigen::Index>(pres.relators().size());
    const auto cols = static_cast<Eigen::Index>(pres.generator_count());
    IntMatrix<std::int64_t> m = IntMatrix<std::int64_t>::Zero(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto sums = exponent_sums(pres.relators()[static_cast<std::size_t>(i)], pres.generator_count());
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = sums[static_cast<std::size_t>(j)];
    }
    return m;
}

SmithForm<BigInt> abelianization(const Presentation& pres) { return smith_normal_form_auto(exponent_matrix(pres)); }

namespace {

/// A column of V past the rank: A v = 0 and its entries are coprime.
std::optional<std::vector<BigInt>> kernel_vector(const SmithForm<BigInt>& s) {
    if (s.free_rank == 0) return std::nullopt;
    const auto column = static_cast<Eigen::Index>(s.rank);
    std::vector<BigInt> v;
    for (Eigen::Index i = 0; i < s.right.rows(); ++i) v.push_back(s.right(i, column));
    return v;
}

bool annihilates(const IntMatrix<std::int64_t>& a, const std::vector<BigInt>& v) {
    if (static_cast<std::size_t>(a.cols()) != v.size()) return false;
    BigInt g = 0;
    for (const BigInt& x : v) g = boost::multiprecision::gcd(g, x);
    if (g != 1) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        BigInt sum = 0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) sum += BigInt(a(i, j)) * v[static_cast<std::size_t>(j)];
        if (sum != 0) return false;
    }
    return true;
}

IntMatrix<std::int64_t> rows_to_matrix(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
    IntMatrix<std::int64_t> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

std::vector<std::int64_t> exponent_row(const Word& w, std::size_t cols) {
    std::vector<std::int64_t> row(cols, 0);
    for (const Letter& l : w) row[l.gen] += l.inverse ? -1 : 1;
    return row;
}

} // namespace

std::optional<CyclicWitness> infinite_cyclic_quotient(const Presentation& pres) {
    auto v = kernel_vector(abelianization(pres));
    if (!v) return std::nullopt;
    return CyclicWitness{std::move(*v)};
}

bool verify_cyclic_witness(const Presentation& pres, const CyclicWitness& w) {
    return annihilates(exponent_matrix(pres), w.images);
}

std::vector<CosetTable> index_two_subgroups(const Presentation& pres) {
    const std::size_t gens = pres.generator_count();
    if (gens > 24) throw std::invalid_argument("index_two_subgroups: too many generators");
    std::vector<CosetTable> out;
    for (std::uint32_t mask = 1; mask < (1U << gens); ++mask) {
        bool ok = true;
        for (const Word& r : pres.relators()) {
            std::size_t parity = 0;
            for (const Letter& l : r) parity ^= (mask >> l.gen) & 1U;
            if (parity != 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<Coset> entries(2 * 2 * gens);
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t g = 0; g < gens; ++g) {
                const Coset target = ((mask >> g) & 1U) ? static_cast<Coset>(1 - c) : static_cast<Coset>(c);
                entries[c * 2 * gens + 2 * g] = target;
                entries[c * 2 * gens + 2 * g + 1] = target;
            }
        out.push_back(standardize(CosetTable(gens, std::move(entries))));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reidemeister-Schreier

SchreierRewriter::SchreierRewriter(const CosetTable& t) : table_(t) {
    if (!t.complete()) throw std::invalid_argument("Reidemeister-Schreier needs a complete table");
    tree_ = schreier_tree(t);
    const std::size_t gens = t.generator_count();
    edge_index_.assign(t.coset_count() * gens, -1);
    for (std::size_t c = 0; c < t.coset_count(); ++c)
        for (std::size_t g = 0; g < gens; ++g)
            if (!tree_.is_tree_edge(static_cast<Coset>(c), g, gens)) {
                edge_index_[c * gens + g] = static_cast<std::int64_t>(edges_.size());
                edges_.emplace_back(static_cast<Coset>(c), g);
            }
}

std::string SchreierRewriter::name(std::size_t i, const Presentation& pres) const {
    return "s" + std::to_string(edges_[i].first) + "_" + pres.generator_names()[edges_[i].second];
}

Word SchreierRewriter::as_word(std::size_t i) const {
    const auto [c, g] = edges_[i];
    Word w = tree_.representative[c];
    w.push_back(Letter{static_cast<std::uint32_t>(g), false});
    const Coset d = table_.at(c, 2 * g);
    const Word back = inverse(tree_.representative[d]);
    w.insert(w.end(), back.begin(), back.end());
    return free_reduce(w);
}

Word SchreierRewriter::rewrite(const Word& w, Coset start) const {
    const std::size_t gens = table_.generator_count();
    Word out;
    Coset c = start;
    for (const Letter& l : w) {
        const Coset d = table_.at(c, l.column());
        const Coset source = l.inverse ? d : c;
        const std::int64_t s = edge_index_[static_cast<std::size_t>(source) * gens + l.gen];
        if (s >= 0) out.push_back(Letter{static_cast<std::uint32_t>(s), l.inverse});
        c = d;
    }
    if (c != start) throw std::invalid_argument("rewrite: word does not lie in the subgroup");
    return free_reduce(out);
}

Presentation reidemeister_schreier(const Presentation& pres, const CosetTable& t) {
    if (t.generator_count() != pres.generator_count())
        throw std::invalid_argument("reidemeister_schreier: table does not match the presentation");
    const SchreierRewriter rw(t);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rw.generator_count(); ++i) names.push_back(rw.name(i, pres));
    std::vector<Word> relators;
    for (std::size_t c = 0; c < t.coset_count(); ++c)
        for (const Word& r : pres.relators()) relators.push_back(rw.rewrite(r, static_cast<Coset>(c)));
    return Presentation(std::move(names), std::move(relators));
}

// ---------------------------------------------------------------------------
// Dihedral quotients

IntMatrix<std::int64_t> dihedralization_matrix(const Presentation& pres, const CosetTable& index_two) {
    if (index_two.coset_count() != 2 || !index_two.verify(pres))
        throw std::invalid_argument("dihedralization_matrix needs a verified index-2 table");
    const SchreierRewriter rw(index_two);
    const std::size_t cols = rw.generator_count();
    std::vector<std::vector<std::int64_t>> rows;
    for (Coset c = 0; c < 2; ++c)
        for (const Word& r : pres.relators()) rows.push_back(exponent_row(rw.rewrite(r, c), cols));
    const Word& b = rw.tree().representative[1];
    rows.push_back(exponent_row(rw.rewrite(concat(b, b)), cols));
    const Word b_inv = inverse(b);
    for (std::size_t i = 0; i < cols; ++i) {
        auto row = exponent_row(rw.rewrite(concat(concat(b_inv, rw.as_word(i)), b)), cols);
        row[i] += 1;
        rows.push_back(std::move(row));
    }
    return rows_to_matrix(rows, cols);
}

std::optional<DihedralWitness> infinite_dihedral_quotient(const Presentation& pres) {
    for (const CosetTable& m : index_two_subgroups(pres)) {
        auto v = kernel_vector(smith_normal_form_auto(dihedralization_matrix(pres, m)));
        if (v) return DihedralWitness{m, std::move(*v)};
    }
    return std::nullopt;
}

bool verify_dihedral_witness(const Presentation& pres, const DihedralWitness& w) {
    if (w.subgroup.coset_count() != 2 || !w.subgroup.verify(pres)) return false;
    return annihilates(dihedralization_matrix(pres, w.subgroup), w.images);
}

std::string to_string(DensityClass::Tag tag) {
    switch (tag) {
    case DensityClass::Tag::infinite_cyclic:
        return "infinite_cyclic";
    case DensityClass::Tag::infinite_dihedral:
        return "infinite_dihedral";
    case DensityClass::Tag::density_zero:
        return "density_zero";
    }
    return "unknown";
}

DensityClass classify_density(const Presentation& pres) {
    DensityClass out;
    const SmithForm<BigInt> ab = abelianization(pres);
    if (auto v = kernel_vector(ab)) {
        out.tag = DensityClass::Tag::infinite_cyclic;
        out.cyclic = CyclicWitness{std::move(*v)};
        return out;
    }
    out.abelian_invariants = ab.invariants;
    for (const CosetTable& m : index_two_subgroups(pres)) {
        ++out.index_two_checked;
        if (auto v = kernel_vector(smith_normal_form_auto(dihedralization_matrix(pres, m)))) {
            out.tag = DensityClass::Tag::infinite_dihedral;
            out.dihedral = DihedralWitness{m, std::move(*v)};
            return out;
        }
    }
    out.tag = DensityClass::Tag::density_zero;
    return out;
}

bool verify_classification(const Presentation& pres, const DensityClass& c) {
    switch (c.tag) {
    case DensityClass::Tag::infinite_cyclic:
        return c.cyclic && verify_cyclic_witness(pres, *c.cyclic);
    case DensityClass::Tag::infinite_dihedral:
        return c.dihedral && verify_dihedral_witness(pres, *c.dihedral) && !has_infinite_cyclic_quotient(pres);
    case DensityClass::Tag::density_zero: {
        // Negative checks: finite abelianization, and every index-2 subgroup
        // has a dihedralization of full rank.
        if (abelianization(pres).free_rank != 0) return false;
        const auto subgroups = index_two_subgroups(pres);
        if (subgroups.size() != c.index_two_checked) return false;
        for (const CosetTable& m : subgroups)
            if (smith_normal_form_auto(dihedralization_matrix(pres, m)).free_rank != 0) return false;
        return true;
    }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Quotient orders

std::vector<std::size_t> QuotientOrders::orders() const {
    std::vector<std::size_t> out;
    for (const auto& [order, table] : certificates) out.push_back(order);
    return out;
}

bool verify_certificate(const Presentation& pres, const CosetTable& t) {
    return t.verify(pres) && is_normal_table(t);
}

QuotientOrders fq_up_to(const Presentation& pres, std::size_t limit, std::uint64_t node_budget) {
    QuotientOrders out;
    NormalSearchOptions options;
    options.node_budget = node_budget;
    const auto stats = search_normal_subgroups(
        pres, limit,
        [&](const CosetTable& t) {
            out.certificates.emplace(t.coset_count(), t);
            return true;
        },
        options);
    out.complete = stats.complete;
    out.nodes = stats.nodes;
    return out;
}

QuotientOrders odd_part(const QuotientOrders& fq) {
    QuotientOrders out;
    out.complete = fq.complete;
    out.nodes = fq.nodes;
    for (const auto& [order, table] : fq.certificates)
        if (order % 2 == 1) out.certificates.emplace(order, table);
    return out;
}

bool is_smooth_table(const std::vector<std::uint64_t>& orders, const CosetTable& t) {
    if (t.generator_count() != orders.size()) return false;
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (t.generator_permutation(i).order() != orders[i]) return false;
    return true;
}

QuotientOrders smooth_quotients(const std::vector<std::uint64_t>& orders, std::size_t max_index,
                                std::uint64_t node_budget) {
    const Presentation pres = free_product_of_cyclics(orders);
    NormalSearchOptions options;
    options.node_budget = node_budget;
    // x_i^(s_i/q) must survive for every prime q dividing s_i.
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 2) throw std::invalid_argument("smooth_quotients: cyclic orders must be at least 2");
        const numtheory::FactoredInteger f = numtheory::factor(orders[i]);
        for (const auto& pp : f.factors())
            options.nontrivial_words.push_back(
                Word(orders[i] / pp.prime, Letter{static_cast<std::uint32_t>(i), false}));
    }
    QuotientOrders out;
    const auto stats = search_normal_subgroups(
        pres, max_index,
        [&](const CosetTable& t) {
            if (!is_smooth_table(orders, t)) throw std::logic_error("smooth_quotients: non-smooth table survived");
            out.certificates.emplace(t.coset_count(), t);
            return true;
        },
        options);
    out.complete = stats.complete;
    out.nodes = stats.nodes;
    return out;
}

} // namespace fqlab::fp
