#include "fqlab/fpgroup.hpp"

#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

using namespace fqlab;
using namespace fqlab::fp;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

const char* const kZ = "gens: x\n";
const char* const kDinf = "gens: a b\nrels: a^2, b^2\n";
const char* const kZ2C4 = "gens: x y t\nrels: [x,y], t^4, t^-1 x t = y, t^-1 y t = x^-1\n";
const char* const kModular = "gens: a b\nrels: a^2, b^3\n";

using Small = std::vector<std::vector<long long>>;

long long det_laplace(const Small& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    long long d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        Small minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<long long> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        d += (j % 2 ? -1 : 1) * m[0][j] * det_laplace(minor);
    }
    return d;
}

// gcd of all k x k minors, by brute force over row and column subsets.
long long determinantal_divisor(const Small& a, std::size_t k) {
    const std::size_t m = a.size(), n = a[0].size();
    long long g = 0;
    for (unsigned rows = 0; rows < (1U << m); ++rows) {
        if (static_cast<std::size_t>(__builtin_popcount(rows)) != k) continue;
        for (unsigned cols = 0; cols < (1U << n); ++cols) {
            if (static_cast<std::size_t>(__builtin_popcount(cols)) != k) continue;
            Small sub;
            for (std::size_t i = 0; i < m; ++i) {
                if (!(rows >> i & 1)) continue;
                std::vector<long long> row;
                for (std::size_t j = 0; j < n; ++j)
                    if (cols >> j & 1) row.push_back(a[i][j]);
                sub.push_back(row);
            }
            g = std::gcd(g, std::llabs(det_laplace(sub)));
        }
    }
    return g;
}

IntMatrix<std::int64_t> to_matrix(const Small& s) {
    IntMatrix<std::int64_t> m(s.size(), s[0].size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s[0].size(); ++j) m(i, j) = s[i][j];
    return m;
}

std::set<std::size_t> smooth_oracle(const std::vector<std::uint64_t>& orders, std::size_t max_index) {
    const auto p = free_product_of_cyclics(orders);
    std::set<std::size_t> out;
    search_normal_subgroups(p, max_index, [&](const CosetTable& t) {
        bool ok = true;
        for (std::size_t g = 0; g < orders.size(); ++g) {
            // order of the generator permutation, by repeated application from every coset
            std::uint64_t l = 1;
            for (std::size_t c = 0; c < t.coset_count(); ++c) {
                std::uint64_t k = 1;
                for (Coset d = t.at(static_cast<Coset>(c), 2 * g); d != static_cast<Coset>(c); d = t.at(d, 2 * g)) ++k;
                l = std::lcm(l, k);
            }
            ok = ok && l == orders[g];
        }
        if (ok) out.insert(t.coset_count());
        return true;
    });
    return out;
}

} // namespace

TEST_CASE("Smith form on pseudo-exhaustive small matrices") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> entry(-9, 9), dim(1, 4), sparse(0, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = dim(rng), n = dim(rng);
        Small a(m, std::vector<long long>(n));
        for (auto& row : a)
            for (auto& x : row) x = trial % 5 == 0 && sparse(rng) ? 0 : entry(rng);
        if (trial % 7 == 0 && m > 1) a[m - 1] = a[0];  // force a rank drop
        CAPTURE(trial);
        const auto mat = to_matrix(a);
        const auto s = smith_normal_form<std::int64_t>(mat);
        REQUIRE(verify_smith_form(mat, s));
        long long prefix = 1;
        for (std::size_t k = 1; k <= std::min(m, n); ++k) {
            prefix *= s.invariants[k - 1];
            CHECK(prefix == determinantal_divisor(a, k));
        }
        if (m == n) CHECK(std::llabs(det_laplace(a)) == prefix);
        CHECK(s.rank + s.free_rank == n);
        const auto big = smith_normal_form<BigInt>(mat.cast<BigInt>());
        CHECK(verify_smith_form<BigInt>(mat.cast<BigInt>(), big));
        for (std::size_t i = 0; i < s.invariants.size(); ++i) CHECK(BigInt(s.invariants[i]) == big.invariants[i]);
    }
}

TEST_CASE("Smith form overflow falls back to big integers") {
    IntMatrix<std::int64_t> a(3, 3);
    const std::int64_t big = std::int64_t{1} << 40;
    a << big, big + 1, 3, big - 1, big, 5, 7, 11, big + 13;
    const auto s = smith_normal_form_auto(a);
    CHECK(verify_smith_form<BigInt>(a.cast<BigInt>(), s));
    IntMatrix<std::int64_t> z = IntMatrix<std::int64_t>::Zero(2, 3);
    const auto sz = smith_normal_form<std::int64_t>(z);
    CHECK(sz.rank == 0);
    CHECK(sz.free_rank == 3);
}

TEST_CASE("abelianization") {
    CHECK(abelianization(pres(kZ)).free_rank == 1);
    CHECK(abelianization(pres(kDinf)).torsion() == std::vector<BigInt>{2, 2});
    CHECK(abelianization(pres(kModular)).torsion() == std::vector<BigInt>{6});
    const auto z2c4 = abelianization(pres(kZ2C4));
    CHECK(z2c4.free_rank == 0);
    CHECK(z2c4.torsion() == std::vector<BigInt>{2, 4});
    const auto w = infinite_cyclic_quotient(pres("gens: x y\nrels: xyx = yxy\n"));
    REQUIRE(w);
    CHECK(verify_cyclic_witness(pres("gens: x y\nrels: xyx = yxy\n"), *w));
}

TEST_CASE("index-two subgroups") {
    CHECK(index_two_subgroups(pres(kDinf)).size() == 3);
    CHECK(index_two_subgroups(pres(kModular)).size() == 1);
    CHECK(index_two_subgroups(pres("gens: x\nrels: x^3\n")).empty());
    CHECK(index_two_subgroups(pres(kZ2C4)).size() == 3);
}

TEST_CASE("Reidemeister-Schreier generator counts follow the Schreier index formula") {
    for (std::size_t rank = 1; rank <= 3; ++rank) {
        const auto f = free_group(rank);
        for (const auto& t : low_index_subgroups(f, 4)) {
            const auto sub = reidemeister_schreier(f, t);
            CHECK(sub.generator_count() == t.coset_count() * (rank - 1) + 1);
            CHECK(sub.relators().empty());
        }
    }
    // < ab > in the infinite dihedral group is infinite cyclic
    const auto d = pres(kDinf);
    for (const auto& t : index_two_subgroups(d)) {
        const auto sub = reidemeister_schreier(d, t);
        const auto ab = abelianization(sub);
        const bool rotation = t.at(0, 0) == 1 && t.at(0, 2) == 1;
        CHECK((ab.free_rank == 1) == rotation);
    }
}

TEST_CASE("rewriting returns Schreier words that multiply back") {
    const auto g = pres(kModular);
    for (const auto& t : low_index_subgroups(g, 5)) {
        const SchreierRewriter rw(t);
        for (std::size_t i = 0; i < rw.generator_count(); ++i) {
            const Word w = rw.as_word(i);
            CHECK(t.trace(0, w) == 0);
            const Word r = rw.rewrite(w);
            CHECK(r == Word{Letter{static_cast<std::uint32_t>(i), false}});
        }
    }
}

TEST_CASE("density classification of the reference groups") {
    using Tag = DensityClass::Tag;
    const std::pair<const char*, Tag> cases[] = {
        {kZ, Tag::infinite_cyclic},
        {kDinf, Tag::infinite_dihedral},
        {kZ2C4, Tag::density_zero},
        {kModular, Tag::density_zero},
        {"gens: a b\nrels: a^2, b^2, (ab)^5\n", Tag::density_zero},
        {"gens: x y\nrels: xyx = yxy\n", Tag::infinite_cyclic},
        {"gens: x y\nrels: x^2, y^2, [x,y]\n", Tag::density_zero},
        {"gens: a b c\nrels: a^2, b^2, c^2\n", Tag::infinite_dihedral},
        {"gens: a b\nrels: a^2, b^2 = a\n", Tag::density_zero},
    };
    for (const auto& [text, tag] : cases) {
        CAPTURE(text);
        const auto p = pres(text);
        const auto c = classify_density(p);
        CHECK(c.tag == tag);
        CHECK(verify_classification(p, c));
        if (tag == Tag::infinite_dihedral) CHECK(verify_dihedral_witness(p, *c.dihedral));
    }
    CHECK(to_string(Tag::infinite_dihedral) == "infinite_dihedral");
}

TEST_CASE("finite quotient orders") {
    const auto z = fq_up_to(pres(kZ), 30);
    std::vector<std::size_t> all(30);
    std::iota(all.begin(), all.end(), 1);
    CHECK(z.orders() == all);
    CHECK(z.complete);

    std::vector<std::size_t> dihedral{1, 2};
    for (std::size_t n = 4; n <= 30; n += 2) dihedral.push_back(n);
    CHECK(fq_up_to(pres(kDinf), 30).orders() == dihedral);

    CHECK(odd_part(fq_up_to(pres(kDinf), 30)).orders() == std::vector<std::size_t>{1});
    CHECK(odd_part(z).orders().size() == 15);

    for (const char* text : {kZ, kDinf, kZ2C4, kModular}) {
        const auto p = pres(text);
        const auto q = fq_up_to(p, 24);
        for (const auto& [order, t] : q.certificates) {
            CHECK(t.coset_count() == order);
            CHECK(verify_certificate(p, t));
            CHECK(is_normal_by_conjugation(t));
        }
    }
}

TEST_CASE("infinite cyclic quotient gives every order") {
    for (const char* text : {kZ, "gens: x y\nrels: xyx = yxy\n", "gens: x y\nrels: x^3 y^-2\n"}) {
        const auto p = pres(text);
        REQUIRE(classify_density(p).tag == DensityClass::Tag::infinite_cyclic);
        CHECK(fq_up_to(p, 20).orders().size() == 20);
    }
}

TEST_CASE("smooth quotients") {
    for (const auto& orders : {std::vector<std::uint64_t>{2, 2}, {2, 3}, {3, 3}}) {
        const auto s = smooth_quotients(orders, 36);
        CHECK(s.complete);
        const auto fq = fq_up_to(free_product_of_cyclics(orders), 36).orders();
        const std::uint64_t l = std::lcm(orders[0], orders[1]);
        std::set<std::size_t> got;
        for (std::size_t m : s.orders()) {
            CHECK(m % l == 0);
            CHECK(std::find(fq.begin(), fq.end(), m) != fq.end());
            got.insert(m);
        }
        CHECK(got == smooth_oracle(orders, 36));
        for (const auto& [m, t] : s.certificates) CHECK(is_smooth_table(orders, t));
    }
    CHECK_THROWS(smooth_quotients({1, 2}, 10));
}
