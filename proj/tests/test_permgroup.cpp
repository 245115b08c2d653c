#include "fqlab/numtheory.hpp"
#include "fqlab/permgroup.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace fqlab::perm;

namespace {

std::vector<CatalogEntry> catalog() {
    std::ifstream in(FQLAB_FIXTURE_DIR "/catalog.txt");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

const PermGroup& by_name(const std::vector<CatalogEntry>& cat, const std::string& name) {
    for (const auto& e : cat)
        if (e.name == name) return e.group;
    FAIL("missing catalog group " << name);
    throw std::logic_error("unreachable");
}

using ElementSet = std::set<Permutation>;

// Closure under products of a finite set of permutations.
ElementSet close_set(ElementSet s, std::size_t degree) {
    s.insert(Permutation::identity(degree));
    for (bool grew = true; grew;) {
        grew = false;
        const std::vector<Permutation> cur(s.begin(), s.end());
        for (const auto& x : cur)
            for (const auto& y : cur)
                if (s.insert(x * y).second) grew = true;
    }
    return s;
}

// Every subgroup, as joins of cyclic subgroups until nothing new appears.
std::set<ElementSet> all_subgroups(const PermGroup& g) {
    std::set<ElementSet> subs;
    for (const auto& x : g.elements()) subs.insert(close_set({x}, g.degree()));
    for (bool grew = true; grew;) {
        grew = false;
        const std::vector<ElementSet> cur(subs.begin(), subs.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j) {
                ElementSet u = cur[i];
                u.insert(cur[j].begin(), cur[j].end());
                if (subs.insert(close_set(u, g.degree())).second) grew = true;
            }
    }
    return subs;
}

bool normal_by_hand(const PermGroup& g, const ElementSet& n) {
    for (const auto& x : g.generators())
        for (const auto& h : n)
            if (!n.count(x.inverse() * h * x)) return false;
    return true;
}

std::uint64_t brute_order(const Permutation& p) {
    Permutation q = p;
    std::uint64_t k = 1;
    while (!q.is_identity()) {
        q = q * p;
        ++k;
    }
    return k;
}

} // namespace

TEST_CASE("permutation basics") {
    const auto a = parse_cycles("(1 2 3)");
    const auto b = parse_cycles("(1 2)", 3);
    // right action: (a*b)(i) = b(a(i))
    for (Point i = 0; i < 3; ++i) CHECK((a * b)(i) == b(a(i)));
    CHECK(a.order() == 3);
    CHECK((a * a.inverse()).is_identity());
    CHECK(a.pow(-1) == a.inverse());
    CHECK(a.to_string() == "(1 2 3)");
    CHECK(Permutation::identity(4).to_string() == "()");
    CHECK(parse_cycles(a.to_string(), 3) == a);
    CHECK_THROWS(Permutation::from_images({0, 0, 1}));
    CHECK_THROWS(parse_cycles("(1 2"));
    CHECK_THROWS(parse_cycles("(1 1)"));
}

TEST_CASE("catalog orders") {
    const auto cat = catalog();
    CHECK(cat.size() >= 15);
    for (const auto& e : cat) CHECK(e.group.order() <= 200);
    CHECK(by_name(cat, "A5").order() == 60);
    CHECK(by_name(cat, "PSL(2,7)").order() == 168);
    CHECK(by_name(cat, "C13:C3").order() == 39);
    CHECK(by_name(cat, "S4").order() == 24);
    CHECK_THROWS_AS(parse_catalog("X: (1 2\n"), CatalogError);
    CHECK_THROWS_AS(parse_catalog("no colon here\n"), CatalogError);
}

TEST_CASE("elements sorted and closed") {
    for (const auto& e : catalog()) {
        const auto& els = e.group.elements();
        CHECK(std::is_sorted(els.begin(), els.end()));
        CHECK(std::adjacent_find(els.begin(), els.end()) == els.end());
        if (e.group.order() <= 60) {
            const ElementSet gens(e.group.generators().begin(), e.group.generators().end());
            CHECK(close_set(gens, e.group.degree()) == ElementSet(els.begin(), els.end()));
        }
    }
}

TEST_CASE("normal subgroups match the subgroup lattice") {
    for (const auto& e : catalog()) {
        if (e.group.order() > 60) continue;
        CAPTURE(e.name);
        std::set<ElementSet> expected;
        for (const auto& s : all_subgroups(e.group))
            if (normal_by_hand(e.group, s)) expected.insert(s);
        std::set<ElementSet> found;
        const auto normals = normal_subgroups(e.group);
        for (const auto& n : normals) found.insert(ElementSet(n.elements().begin(), n.elements().end()));
        CHECK(found.size() == normals.size());
        CHECK(found == expected);
    }
}

TEST_CASE("normal subgroup counts") {
    const auto cat = catalog();
    CHECK(normal_subgroups(by_name(cat, "C6")).size() == 4);
    CHECK(normal_subgroups(by_name(cat, "S4")).size() == 4);
    CHECK(normal_subgroups(by_name(cat, "A5")).size() == 2);
    CHECK(normal_subgroups(by_name(cat, "Q8")).size() == 6);
}

TEST_CASE("torsion subgroups from element orders") {
    for (const auto& e : catalog()) {
        if (e.group.order() > 60) continue;
        CAPTURE(e.name);
        for (std::uint64_t a : {1, 2, 3, 4, 6}) {
            for (auto sel : {TorsionSelector::odd(), TorsionSelector::divides(a), TorsionSelector::odd_and_divides(a)}) {
                ElementSet seeds;
                for (const auto& x : e.group.elements())
                    if (sel.matches(brute_order(x))) seeds.insert(x);
                const auto t = torsion_subgroup(e.group, sel);
                CHECK(ElementSet(t.elements().begin(), t.elements().end()) == close_set(seeds, e.group.degree()));
                CHECK(is_normal(e.group, t));
            }
        }
    }
}

TEST_CASE("shapes") {
    const auto cat = catalog();
    CHECK(shape(by_name(cat, "C7")) == GroupShape{GroupShape::Tag::cyclic, 7});
    CHECK(shape(by_name(cat, "C2")) == GroupShape{GroupShape::Tag::cyclic, 2});
    CHECK(shape(by_name(cat, "C2xC2")) == GroupShape{GroupShape::Tag::dihedral, 2});
    CHECK(shape(by_name(cat, "S3")) == GroupShape{GroupShape::Tag::dihedral, 3});
    CHECK(shape(by_name(cat, "D16")) == GroupShape{GroupShape::Tag::dihedral, 8});
    CHECK(shape(by_name(cat, "Q8")).tag == GroupShape::Tag::other);
    CHECK(shape(by_name(cat, "A4")).tag == GroupShape::Tag::other);
    CHECK(shape(PermGroup()).tag == GroupShape::Tag::cyclic);
}

TEST_CASE("quotients have the right order and are homomorphic images") {
    for (const auto& e : catalog()) {
        if (e.group.order() > 60) continue;
        CAPTURE(e.name);
        for (const auto& n : normal_subgroups(e.group)) {
            const Quotient q(e.group, n);
            CHECK(q.group().order() * n.order() == e.group.order());
            for (const auto& x : e.group.generators())
                for (const auto& y : e.group.generators()) CHECK(q.image(x * y) == q.image(x) * q.image(y));
            for (const auto& m : n.generators()) CHECK(q.image(m).is_identity());
        }
    }
    const auto cat = catalog();
    CHECK_THROWS_AS(Quotient(by_name(cat, "S3"), generated_subgroup(by_name(cat, "S3"), {parse_cycles("(1 2)", 3)})),
                    StructureError);
}

TEST_CASE("odd-part identity holds for every normal subgroup") {
    for (const auto& e : catalog()) {
        if (e.group.order() > 120) continue;
        CAPTURE(e.name);
        for (const auto& row : verify_odd_lemma(e.group)) CHECK(row.pass);
    }
    const auto cat = catalog();
    // C8 has trivial odd part and so does every quotient
    const auto& c8 = by_name(cat, "C8");
    CHECK(torsion_subgroup(c8, TorsionSelector::odd()).order() == 1);
}

TEST_CASE("normal Sylow quotient for orders in NP_p") {
    for (const auto& e : catalog()) {
        for (std::uint64_t p = 2; p <= e.group.order(); ++p) {
            if (!fqlab::numtheory::is_prime(p) || !fqlab::numtheory::np_contains(e.group.order(), p)) continue;
            CAPTURE(e.name);
            CAPTURE(p);
            const auto r = normal_sylow_quotient(e.group, p);
            CHECK(r.valid());
            CHECK(r.quotient.order() == p * r.complement_order);
            CHECK((p - 1) % r.complement_order == 0);
        }
    }
    const auto cat = catalog();
    const auto r = normal_sylow_quotient(by_name(cat, "C15"), 5);
    CHECK(r.quotient.order() == 5);
    CHECK(r.kernel_order == 3);
    CHECK(normal_sylow_quotient(by_name(cat, "S3"), 3).quotient.order() == 6);
    CHECK_THROWS(normal_sylow_quotient(by_name(cat, "S4"), 3));
}

TEST_CASE("odd_and_divides quotient is not cyclic under the hypotheses") {
    std::size_t exercised = 0;
    for (const auto& e : catalog())
        for (std::uint64_t a = 1; a <= 12; ++a) {
            const auto r = verify_struc_lemma(e.group, a);
            if (!r.hypotheses_hold) continue;
            ++exercised;
            CAPTURE(e.name);
            CAPTURE(a);
            CHECK(r.pass);
            CHECK(r.quotient_shape.tag != GroupShape::Tag::cyclic);
        }
    CHECK(exercised > 0);
    const auto cat = catalog();
    const auto s3 = verify_struc_lemma(by_name(cat, "S3"), 2);
    CHECK(s3.hypotheses_hold);
    CHECK(s3.odd_divisor_part_order == 1);
}

TEST_CASE("quasiprimitive groups have transitive odd part") {
    const auto cat = catalog();
    CHECK(is_quasiprimitive(by_name(cat, "A5")));
    CHECK(is_quasiprimitive(by_name(cat, "S4")));
    CHECK_FALSE(is_quasiprimitive(by_name(cat, "D8")));
    for (const auto& e : cat) {
        CAPTURE(e.name);
        if (!is_transitive(e.group)) {
            CHECK_THROWS_AS(is_quasiprimitive(e.group), StructureError);
            continue;
        }
        const auto r = verify_quasiprimitive_odd(e.group);
        CHECK(r.pass);
        if (r.quasiprimitive && e.group.degree() >= 3 && is_transitive(e.group)) CHECK(r.odd_part_transitive);
    }
}

TEST_CASE("element cap") {
    std::vector<Permutation> gens{parse_cycles("(1 2 3 4 5 6 7 8 9 10)"), parse_cycles("(1 2)", 10)};
    CHECK_THROWS_AS(PermGroup::close(10, gens, 1000), GroupTooLarge);
}
