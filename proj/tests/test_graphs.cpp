#include "fqlab/fpgroup.hpp"
#include "fqlab/graphs.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace fqlab;
using namespace fqlab::graphs;

namespace {

// Orbits of the closed group on vertices, edges and arcs, counted by brute force.
struct OrbitCounts {
    std::size_t vertex = 0, edge = 0, arc = 0;
};

OrbitCounts brute_orbits(const Graph& g, const perm::PermGroup& group) {
    OrbitCounts c;
    std::set<Vertex> seen_v;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (seen_v.count(v)) continue;
        ++c.vertex;
        for (const auto& x : group.elements()) seen_v.insert(x(v));
    }
    std::set<std::pair<Vertex, Vertex>> seen_e, seen_a;
    for (const auto& [u, v] : g.edges()) {
        if (!seen_e.count({u, v})) {
            ++c.edge;
            for (const auto& x : group.elements()) seen_e.insert(std::minmax(x(u), x(v)));
        }
        for (auto arc : {std::pair{u, v}, std::pair{v, u}}) {
            if (seen_a.count(arc)) continue;
            ++c.arc;
            for (const auto& x : group.elements()) seen_a.insert({x(arc.first), x(arc.second)});
        }
    }
    return c;
}

bool locally_by_hand(const Graph& g, const perm::PermGroup& group, Vertex v) {
    std::set<Vertex> reach;
    for (const auto& x : group.elements())
        if (x(v) == v) reach.insert(x(g.neighbors(v).front()));
    return reach.size() == g.degree(v);
}

} // namespace

TEST_CASE("graph validation and builders") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), GraphError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), GraphError);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), GraphError);
    CHECK(cycle_graph(5).valency() == 2);
    CHECK(complete_graph(5).edge_count() == 10);
    CHECK(complete_bipartite_graph(3, 4).edge_count() == 12);
    CHECK(petersen_graph().valency() == 3);
    CHECK(petersen_graph().edge_count() == 15);
    CHECK(hypercube_graph(3).valency() == 3);
    CHECK_FALSE(Graph(4, {{0, 1}, {2, 3}}).is_connected());
    CHECK(cycle_graph(3).to_edge_list() == "3 3\n0 1\n0 2\n1 2\n");
    CHECK_THROWS_AS(GraphAction(cycle_graph(4), {perm::Permutation::from_images({1, 0, 2, 3})}), GraphError);
}

TEST_CASE("W and SW parameters") {
    for (std::size_t k = 1; k <= 4; ++k) {
        for (std::size_t r = 3; r <= 8; ++r) {
            const auto w = build_w(k, r);
            CHECK(w.graph.vertex_count() == k * r);
            CHECK(w.graph.valency() == 2 * k);
            CHECK(w.graph.is_connected());
        }
        for (std::size_t r = 2; r <= 6; ++r) {
            const auto sw = build_sw(k, r);
            CHECK(sw.graph.vertex_count() == 2 * k * r);
            CHECK(sw.graph.valency() == k + 1);
            CHECK(sw.graph.is_connected());
        }
    }
    CHECK(w_order_count(2, 20) == 8);
    CHECK(w_order_count(5, 14) == 0);
}

TEST_CASE("transitivity reports") {
    const GraphAction c5(cycle_graph(5), {perm::parse_cycles("(1 2 3 4 5)"), perm::parse_cycles("(2 5)(3 4)")});
    const auto r = transitivity_report(c5);
    CHECK(r.vertex);
    CHECK(r.edge);
    CHECK(r.arc);
    CHECK(r.locally);

    const auto w23 = transitivity_report(build_w(2, 3));
    CHECK(w23.edge);
    CHECK(w23.arc);

    const GraphAction k4(complete_graph(4), {perm::parse_cycles("(1 2 3)", 4), perm::parse_cycles("(1 2)(3 4)")});
    const auto rk = transitivity_report(k4);
    REQUIRE(rk.local_shapes_computed);
    CHECK(rk.local_shapes.size() == 1);
    CHECK(rk.local_shapes[0].order == 3);
    CHECK(rk.local_shapes[0].shape == perm::GroupShape{perm::GroupShape::Tag::cyclic, 3});
    const auto oc = odd_edge_core(k4, 0, 1);
    CHECK(oc.pass());
    CHECK(oc.core.order() == 12);
}

TEST_CASE("orbit counts agree with the closed group on the corpus") {
    for (const auto& [name, action] : transitivity_corpus()) {
        perm::PermGroup group;
        try {
            group = action.group(20000);
        } catch (const perm::GroupTooLarge&) {
            continue;
        }
        CAPTURE(name);
        const auto rep = transitivity_report(action);
        const auto brute = brute_orbits(action.graph, group);
        CHECK(rep.vertex_orbits == brute.vertex);
        CHECK(rep.edge_orbits == brute.edge);
        CHECK(rep.arc_orbits == brute.arc);
        for (Vertex v = 0; v < action.graph.vertex_count(); ++v)
            CHECK(rep.local_transitive[v] == locally_by_hand(action.graph, group, v));
        CHECK(check_edge_transitivity(action, rep).pass());
    }
}

TEST_CASE("edge and local transitivity implications on the whole corpus") {
    std::size_t checked = 0;
    for (const auto& [name, action] : transitivity_corpus()) {
        CAPTURE(name);
        const auto rep = transitivity_report(action);
        CHECK(check_edge_transitivity(action, rep).pass());
        ++checked;
    }
    CHECK(checked >= 40);
}

TEST_CASE("cubic census") {
    const auto census = cubic_arc_regular_census(60);
    CHECK(census.complete);
    const auto orders = census.orders();
    CHECK(std::find(orders.begin(), orders.end(), 4) != orders.end());
    for (const auto& row : census.rows) {
        CHECK(row.certificate_index == 3 * row.order);
        CHECK(row.certificate_index % 6 == 0);
        CHECK(row.flagged == (row.order < 4));
    }
    CHECK(census.to_csv().rfind("order,certificate_index,flagged\n", 0) == 0);

    const auto smooth = fp::smooth_quotients({3, 2}, 12);
    const auto& k4_table = smooth.certificates.at(12);
    const auto g = cubic_coset_graph(k4_table);
    REQUIRE(g);
    CHECK(*g == complete_graph(4));
    const GraphAction act(*g, coset_graph_automorphisms(k4_table));
    CHECK(act.group().order() == 12);
    CHECK(transitivity_report(act).arc);
    CHECK_FALSE(cubic_coset_graph(smooth.certificates.at(6)));
}
