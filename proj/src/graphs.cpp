#include "fqlab/graphs.hpp"

#include "fqlab/fpgroup.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace fqlab::graphs {

using perm::Permutation;
using perm::PermGroup;
using perm::Point;

Graph::Graph(std::size_t vertex_count, const std::vector<Edge>& edges) : adjacency_(vertex_count) {
    for (auto [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count) throw GraphError("edge endpoint out of range");
        if (u == v) throw GraphError("loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw GraphError("repeated edge");
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    return u < adjacency_.size() && std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

std::optional<std::size_t> Graph::edge_index(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v}) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

std::optional<std::size_t> Graph::valency() const {
    if (adjacency_.empty()) return std::nullopt;
    const std::size_t d = adjacency_[0].size();
    for (const auto& list : adjacency_)
        if (list.size() != d) return std::nullopt;
    return d;
}

bool Graph::is_connected() const {
    if (adjacency_.empty()) return true;
    std::vector<bool> seen(adjacency_.size(), false);
    std::vector<Vertex> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : adjacency_[v])
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == adjacency_.size();
}

std::string Graph::to_edge_list() const {
    std::string out = std::to_string(vertex_count()) + " " + std::to_string(edge_count()) + "\n";
    for (auto [u, v] : edges_) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) throw GraphError("a cycle needs at least 3 vertices");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, edges);
}

Graph complete_bipartite_graph(std::size_t m, std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < m; ++i)
        for (Vertex j = 0; j < n; ++j) edges.emplace_back(i, static_cast<Vertex>(m + j));
    return Graph(m + n, edges);
}

namespace {

std::vector<std::pair<Vertex, Vertex>> two_subsets(Vertex n) {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
}

} // namespace

Graph petersen_graph() {
    const auto pairs = two_subsets(5);
    std::vector<Edge> edges;
    for (Vertex i = 0; i < pairs.size(); ++i)
        for (Vertex j = i + 1; j < pairs.size(); ++j) {
            const auto [a, b] = pairs[i];
            const auto [c, d] = pairs[j];
            if (a != c && a != d && b != c && b != d) edges.emplace_back(i, j);
        }
    return Graph(pairs.size(), edges);
}

Graph hypercube_graph(std::size_t dimension) {
    const std::size_t n = std::size_t{1} << dimension;
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t bit = 0; bit < dimension; ++bit) {
            const Vertex w = v ^ (Vertex{1} << bit);
            if (v < w) edges.emplace_back(v, w);
        }
    return Graph(n, edges);
}

GraphAction::GraphAction(Graph g, std::vector<Permutation> gens) : graph(std::move(g)), generators(std::move(gens)) {
    for (const auto& p : generators) {
        if (p.degree() != graph.vertex_count()) throw GraphError("generator degree differs from the vertex count");
        for (auto [u, v] : graph.edges())
            if (!graph.has_edge(p(u), p(v)))
                throw GraphError("generator " + p.to_string() + " is not an automorphism");
    }
}

PermGroup GraphAction::group(std::size_t element_cap) const {
    return PermGroup::close(graph.vertex_count(), generators, element_cap);
}

namespace {

Permutation from_map(std::size_t n, const std::function<std::size_t(std::size_t)>& f) {
    std::vector<Point> images(n);
    for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<Point>(f(i));
    return Permutation::from_images(std::move(images));
}

} // namespace

GraphAction build_w(std::size_t k, std::size_t r) {
    if (k < 1) throw GraphError("W(k, r) needs k >= 1");
    if (r < 3) throw GraphError("W(k, r) needs r >= 3");
    const std::size_t n = k * r;
    auto id = [r](std::size_t x, std::size_t y) { return x * r + y; };
    std::vector<Edge> edges;
    for (std::size_t y = 0; y < r; ++y)
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t x2 = 0; x2 < k; ++x2)
                edges.emplace_back(static_cast<Vertex>(id(x, y)), static_cast<Vertex>(id(x2, (y + 1) % r)));
    std::vector<Permutation> gens;
    if (k >= 2)
        gens.push_back(from_map(n, [&](std::size_t v) {
            const std::size_t x = v / r, y = v % r;
            if (y != 0 || x > 1) return v;
            return id(1 - x, y);
        }));
    if (k >= 3)
        gens.push_back(from_map(n, [&](std::size_t v) {
            const std::size_t x = v / r, y = v % r;
            return y == 0 ? id((x + 1) % k, y) : v;
        }));
    gens.push_back(from_map(n, [&](std::size_t v) { return id(v / r, (v % r + 1) % r); }));
    gens.push_back(from_map(n, [&](std::size_t v) { return id(v / r, (r - v % r) % r); }));
    return GraphAction(Graph(n, edges), std::move(gens));
}

GraphAction build_sw(std::size_t k, std::size_t r) {
    if (k < 1) throw GraphError("SW(k, r) needs k >= 1");
    if (r < 2) throw GraphError("SW(k, r) needs r >= 2");
    const std::size_t n = 2 * k * r;
    auto id = [r](std::size_t x, std::size_t y, std::size_t z) { return (x * r + y) * 2 + z; };
    auto x_of = [r](std::size_t v) { return v / 2 / r; };
    auto y_of = [r](std::size_t v) { return v / 2 % r; };
    std::vector<Edge> edges;
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < r; ++y) {
            edges.emplace_back(static_cast<Vertex>(id(x, y, 0)), static_cast<Vertex>(id(x, y, 1)));
            for (std::size_t x2 = 0; x2 < k; ++x2)
                edges.emplace_back(static_cast<Vertex>(id(x, (y + 1) % r, 0)), static_cast<Vertex>(id(x2, y, 1)));
        }
    std::vector<Permutation> gens;
    if (k >= 2)
        gens.push_back(from_map(n, [&](std::size_t v) {
            const std::size_t x = x_of(v), y = y_of(v), z = v % 2;
            if (y != 0 || x > 1) return v;
            return id(1 - x, y, z);
        }));
    if (k >= 3)
        gens.push_back(from_map(n, [&](std::size_t v) {
            const std::size_t x = x_of(v), y = y_of(v), z = v % 2;
            return y == 0 ? id((x + 1) % k, y, z) : v;
        }));
    gens.push_back(from_map(n, [&](std::size_t v) { return id(x_of(v), (y_of(v) + 1) % r, v % 2); }));
    gens.push_back(from_map(n, [&](std::size_t v) { return id(x_of(v), (r - y_of(v)) % r, 1 - v % 2); }));
    return GraphAction(Graph(n, edges), std::move(gens));
}

std::vector<std::size_t> orbit_labels(std::size_t points, const std::vector<std::vector<std::size_t>>& generator_images) {
    std::vector<std::size_t> parent(points);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& images : generator_images)
        for (std::size_t i = 0; i < points; ++i) {
            const std::size_t a = find(i), b = find(images[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    // Label orbits 0, 1, ... by smallest member.
    std::vector<std::size_t> label(points);
    std::map<std::size_t, std::size_t> ids;
    for (std::size_t i = 0; i < points; ++i) {
        const auto [it, inserted] = ids.emplace(find(i), ids.size());
        label[i] = it->second;
    }
    return label;
}

namespace {

std::size_t count_labels(const std::vector<std::size_t>& labels) {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

/// Arcs are numbered by tail, then by position in the tail's adjacency list.
struct ArcIndex {
    std::vector<std::size_t> offset;

    explicit ArcIndex(const Graph& g) : offset(g.vertex_count() + 1, 0) {
        for (Vertex v = 0; v < g.vertex_count(); ++v) offset[v + 1] = offset[v] + g.degree(v);
    }
    std::size_t id(const Graph& g, Vertex u, Vertex v) const {
        const auto& adj = g.neighbors(u);
        return offset[u] + static_cast<std::size_t>(std::lower_bound(adj.begin(), adj.end(), v) - adj.begin());
    }
    std::size_t count() const { return offset.back(); }
};

} // namespace

PermGroup stabilizer(const PermGroup& g, Vertex v) {
    std::vector<Permutation> fixing;
    for (const auto& x : g.elements())
        if (x(v) == v) fixing.push_back(x);
    return perm::generated_subgroup(g, fixing);
}

namespace {

Permutation restrict_to(const Permutation& x, const std::vector<Vertex>& points) {
    std::vector<Point> images(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto it = std::lower_bound(points.begin(), points.end(), x(points[i]));
        if (it == points.end() || *it != x(points[i])) throw perm::StructureError("element does not fix the point set");
        images[i] = static_cast<Point>(it - points.begin());
    }
    return Permutation::from_images(std::move(images));
}

PermGroup restricted_group(const std::vector<Permutation>& elements, const std::vector<Vertex>& points) {
    std::set<Permutation> images;
    for (const auto& x : elements) images.insert(restrict_to(x, points));
    std::vector<Permutation> list(images.begin(), images.end());
    return PermGroup::from_closed(points.size(), list, list);
}

} // namespace

PermGroup local_action(const Graph& graph, const PermGroup& g, Vertex v) {
    std::vector<Permutation> fixing;
    for (const auto& x : g.elements())
        if (x(v) == v) fixing.push_back(x);
    return restricted_group(fixing, graph.neighbors(v));
}

PermGroup local_action(const GraphAction& ga, Vertex v, std::size_t element_cap) {
    return local_action(ga.graph, ga.group(element_cap), v);
}

TransitivityReport transitivity_report(const GraphAction& ga, std::size_t element_cap) {
    const Graph& g = ga.graph;
    TransitivityReport report;
    const ArcIndex arcs(g);
    std::vector<std::vector<std::size_t>> vertex_images, edge_images, arc_images;
    for (const auto& p : ga.generators) {
        std::vector<std::size_t> vi(g.vertex_count()), ei(g.edge_count()), ai(arcs.count());
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            vi[v] = p(v);
            for (Vertex w : g.neighbors(v)) ai[arcs.id(g, v, w)] = arcs.id(g, p(v), p(w));
        }
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            const auto [u, v] = g.edges()[e];
            ei[e] = *g.edge_index(p(u), p(v));
        }
        vertex_images.push_back(std::move(vi));
        edge_images.push_back(std::move(ei));
        arc_images.push_back(std::move(ai));
    }
    report.vertex_orbit = orbit_labels(g.vertex_count(), vertex_images);
    const auto edge_orbit = orbit_labels(g.edge_count(), edge_images);
    const auto arc_orbit = orbit_labels(arcs.count(), arc_images);
    report.vertex_orbits = count_labels(report.vertex_orbit);
    report.edge_orbits = count_labels(edge_orbit);
    report.arc_orbits = count_labels(arc_orbit);
    report.vertex = report.vertex_orbits == 1;
    report.edge = report.edge_orbits == 1;
    report.arc = report.arc_orbits == 1;
    report.local_transitive.assign(g.vertex_count(), true);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (std::size_t a = arcs.offset[v]; a < arcs.offset[v + 1]; ++a)
            if (arc_orbit[a] != arc_orbit[arcs.offset[v]]) report.local_transitive[v] = false;
    report.locally = std::all_of(report.local_transitive.begin(), report.local_transitive.end(), [](bool b) { return b; });

    std::optional<PermGroup> closed;
    try {
        closed = ga.group(element_cap);
    } catch (const perm::GroupTooLarge&) {
    }
    if (closed) {
        report.local_shapes_computed = true;
        std::vector<bool> done(report.vertex_orbits, false);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (done[report.vertex_orbit[v]]) continue;
            done[report.vertex_orbit[v]] = true;
            const PermGroup local = local_action(g, *closed, v);
            LocalShape s{v, local.order(), perm::shape(local), g.degree(v) == 0 || perm::is_transitive(local)};
            if (s.transitive != report.local_transitive[v])
                throw std::logic_error("local action disagrees with the arc-orbit criterion");
            report.local_shapes.push_back(s);
        }
    }
    return report;
}

EdgeTransitivityChecks check_edge_transitivity(const GraphAction& ga, const TransitivityReport& report) {
    const Graph& g = ga.graph;
    EdgeTransitivityChecks c;
    if (g.edge_count() == 0 || !g.is_connected()) throw GraphError("the checks need a connected graph with edges");
    const auto [u, v] = g.edges()[0];
    c.part1 = report.locally == (report.local_transitive[u] && report.local_transitive[v]);
    c.part2 = !report.locally || report.edge;
    bool covered = true;
    for (Vertex w = 0; w < g.vertex_count(); ++w)
        if (report.vertex_orbit[w] != report.vertex_orbit[u] && report.vertex_orbit[w] != report.vertex_orbit[v])
            covered = false;
    c.part3 = !report.edge || (covered && report.vertex_orbits <= 2);
    const auto val = g.valency();
    const bool regular_even = val && *val % 2 == 0;
    c.part4 = !(report.edge && !regular_even) || report.locally;
    return c;
}

OddEdgeCore odd_edge_core(const GraphAction& ga, Vertex u, Vertex v, std::size_t element_cap) {
    const Graph& g = ga.graph;
    if (!g.has_edge(u, v)) throw GraphError("odd_edge_core needs an edge");
    const PermGroup group = ga.group(element_cap);
    const PermGroup gu = stabilizer(group, u);
    const PermGroup gv = stabilizer(group, v);
    const PermGroup odd_u = perm::torsion_subgroup(gu, perm::TorsionSelector::odd());
    const PermGroup odd_v = perm::torsion_subgroup(gv, perm::TorsionSelector::odd());

    std::vector<Permutation> seeds = odd_u.elements();
    seeds.insert(seeds.end(), odd_v.elements().begin(), odd_v.elements().end());
    OddEdgeCore out{perm::generated_subgroup(group, seeds)};
    const PermGroup& h = out.core;
    out.subgroup = h.is_subset_of(group);

    auto end_check = [&](const PermGroup& stab, const PermGroup& odd, Vertex w, bool& transitive) {
        const PermGroup local = restricted_group(stab.elements(), g.neighbors(w));
        const PermGroup odd_of_local = perm::torsion_subgroup(local, perm::TorsionSelector::odd());
        const PermGroup local_of_odd = restricted_group(odd.elements(), g.neighbors(w));
        transitive = perm::is_transitive(local_of_odd);
        return local_of_odd.same_elements(odd_of_local);
    };
    out.check_a = end_check(gu, odd_u, u, out.odd_local_u_transitive) &
                  end_check(gv, odd_v, v, out.odd_local_v_transitive);

    const GraphAction core_action(g, h.generators());
    const TransitivityReport hr = transitivity_report(core_action, 1);
    const TransitivityReport gr = transitivity_report(ga, 1);
    if (out.odd_local_u_transitive && out.odd_local_v_transitive)
        out.check_b = hr.edge && gr.edge;
    else
        out.check_b = true;
    if (hr.edge) {
        const std::size_t orbit_u = h.order() / stabilizer(h, u).order();
        const std::size_t orbit_v = h.order() / stabilizer(h, v).order();
        const std::size_t n = g.vertex_count();
        out.check_c = hr.vertex_orbit[u] == hr.vertex_orbit[v] ? n == orbit_u : n == orbit_u + orbit_v;
    } else {
        out.check_c = true;
    }
    return out;
}

namespace {

Permutation cycles(std::size_t n, const std::vector<std::vector<Point>>& c) { return Permutation::from_cycles(n, c); }

GraphAction induced_on_pairs(const Graph& graph, Vertex points, const std::vector<Permutation>& gens) {
    const auto pairs = two_subsets(points);
    std::vector<Permutation> induced;
    for (const auto& p : gens)
        induced.push_back(from_map(pairs.size(), [&](std::size_t i) {
            Vertex a = p(pairs[i].first), b = p(pairs[i].second);
            if (a > b) std::swap(a, b);
            return static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), std::pair{a, b}) - pairs.begin());
        }));
    return GraphAction(graph, std::move(induced));
}

} // namespace

std::vector<NamedAction> transitivity_corpus() {
    std::vector<NamedAction> out;
    for (std::size_t k = 1; k <= 4; ++k)
        for (std::size_t r = 3; r <= 8; ++r)
            out.push_back({"W(" + std::to_string(k) + "," + std::to_string(r) + ")", build_w(k, r)});
    for (std::size_t k = 1; k <= 4; ++k)
        for (std::size_t r = 2; r <= 6; ++r)
            out.push_back({"SW(" + std::to_string(k) + "," + std::to_string(r) + ")", build_sw(k, r)});
    for (std::size_t n = 3; n <= 12; ++n) {
        const Permutation rot = from_map(n, [n](std::size_t i) { return (i + 1) % n; });
        const Permutation ref = from_map(n, [n](std::size_t i) { return (n - i) % n; });
        out.push_back({"C" + std::to_string(n) + "/dihedral", GraphAction(cycle_graph(n), {rot, ref})});
        out.push_back({"C" + std::to_string(n) + "/rotations", GraphAction(cycle_graph(n), {rot})});
    }
    out.push_back({"C6/half-turns", GraphAction(cycle_graph(6), {from_map(6, [](std::size_t i) { return (i + 2) % 6; })})});
    out.push_back({"K4/A4", GraphAction(complete_graph(4), {cycles(4, {{0, 1, 2}}), cycles(4, {{0, 1}, {2, 3}})})});
    out.push_back({"K4/S4", GraphAction(complete_graph(4), {cycles(4, {{0, 1}}), cycles(4, {{0, 1, 2, 3}})})});
    out.push_back({"K4/C2", GraphAction(complete_graph(4), {cycles(4, {{0, 1}})})});
    out.push_back({"K5/A5", GraphAction(complete_graph(5), {cycles(5, {{0, 1, 2}}), cycles(5, {{0, 1, 2, 3, 4}})})});
    const Permutation swap33 = cycles(6, {{0, 3}, {1, 4}, {2, 5}});
    out.push_back({"K3,3/full", GraphAction(complete_bipartite_graph(3, 3), {cycles(6, {{0, 1}}), cycles(6, {{0, 1, 2}}), swap33})});
    out.push_back({"K3,3/C3xC3:C2", GraphAction(complete_bipartite_graph(3, 3), {cycles(6, {{0, 1, 2}}), cycles(6, {{3, 4, 5}}), swap33})});
    out.push_back({"K3,3/C3xC3", GraphAction(complete_bipartite_graph(3, 3), {cycles(6, {{0, 1, 2}}), cycles(6, {{3, 4, 5}})})});
    out.push_back({"K3,3/C6", GraphAction(complete_bipartite_graph(3, 3), {cycles(6, {{0, 3, 1, 4, 2, 5}})})});
    out.push_back({"K1,3/S3", GraphAction(complete_bipartite_graph(1, 3), {cycles(4, {{1, 2}}), cycles(4, {{1, 2, 3}})})});
    out.push_back({"K1,3/C3", GraphAction(complete_bipartite_graph(1, 3), {cycles(4, {{1, 2, 3}})})});
    out.push_back({"K2,3/full", GraphAction(complete_bipartite_graph(2, 3), {cycles(5, {{0, 1}}), cycles(5, {{2, 3}}), cycles(5, {{2, 3, 4}})})});
    out.push_back({"K2,4/full", GraphAction(complete_bipartite_graph(2, 4), {cycles(6, {{0, 1}}), cycles(6, {{2, 3}}), cycles(6, {{2, 3, 4, 5}})})});
    out.push_back({"K4,4/C4xC4:C2", GraphAction(complete_bipartite_graph(4, 4), {cycles(8, {{0, 1, 2, 3}}), cycles(8, {{4, 5, 6, 7}}), cycles(8, {{0, 4}, {1, 5}, {2, 6}, {3, 7}})})});
    out.push_back({"Petersen/S5", induced_on_pairs(petersen_graph(), 5, {cycles(5, {{0, 1}}), cycles(5, {{0, 1, 2, 3, 4}})})});
    out.push_back({"Petersen/A5", induced_on_pairs(petersen_graph(), 5, {cycles(5, {{0, 1, 2}}), cycles(5, {{0, 1, 2, 3, 4}})})});
    out.push_back({"Petersen/C5", induced_on_pairs(petersen_graph(), 5, {cycles(5, {{0, 1, 2, 3, 4}})})});
    const auto bit_map = [](std::size_t dim, const std::function<std::size_t(std::size_t)>& f) { return from_map(std::size_t{1} << dim, f); };
    const Permutation flip = bit_map(3, [](std::size_t v) { return v ^ 1U; });
    const Permutation rotate_bits = bit_map(3, [](std::size_t v) { return ((v << 1) | (v >> 2)) & 7U; });
    const Permutation swap_bits = bit_map(3, [](std::size_t v) { return (v & 4U) | ((v & 1U) << 1) | ((v >> 1) & 1U); });
    out.push_back({"Q3/full", GraphAction(hypercube_graph(3), {flip, rotate_bits, swap_bits})});
    out.push_back({"Q3/rotations", GraphAction(hypercube_graph(3), {flip, rotate_bits})});
    return out;
}

std::uint64_t w_order_count(std::uint64_t k, std::uint64_t limit) {
    if (k == 0) throw std::invalid_argument("w_order_count: k must be positive");
    const std::uint64_t largest = limit / k;
    return largest >= 3 ? largest - 2 : 0;
}

// ---------------------------------------------------------------------------
// Census

namespace {

std::vector<std::size_t> h_orbits(const fp::CosetTable& t) {
    const std::size_t m = t.coset_count();
    std::vector<std::size_t> vertex(m, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t c = 0; c < m; ++c) {
        if (vertex[c] != SIZE_MAX) continue;
        auto d = static_cast<fp::Coset>(c);
        while (vertex[d] == SIZE_MAX) {
            vertex[d] = next;
            d = t.at(d, std::size_t{0});
        }
        ++next;
    }
    return vertex;
}

} // namespace

std::optional<Graph> cubic_coset_graph(const fp::CosetTable& t) {
    if (t.generator_count() != 2 || !t.complete()) throw std::invalid_argument("cubic_coset_graph needs a complete two-generator table");
    const auto vertex = h_orbits(t);
    const std::size_t n = vertex.empty() ? 0 : *std::max_element(vertex.begin(), vertex.end()) + 1;
    std::vector<std::vector<std::size_t>> arcs(n);
    for (std::size_t c = 0; c < t.coset_count(); ++c)
        arcs[vertex[c]].push_back(vertex[static_cast<std::size_t>(t.at(static_cast<fp::Coset>(c), std::size_t{2}))]);
    std::set<Edge> edges;
    for (std::size_t v = 0; v < n; ++v) {
        auto heads = arcs[v];
        std::sort(heads.begin(), heads.end());
        if (std::adjacent_find(heads.begin(), heads.end()) != heads.end()) return std::nullopt;
        for (std::size_t w : heads) {
            if (w == v) return std::nullopt;
            edges.emplace(static_cast<Vertex>(std::min(v, w)), static_cast<Vertex>(std::max(v, w)));
        }
    }
    return Graph(n, std::vector<Edge>(edges.begin(), edges.end()));
}

std::vector<Permutation> coset_graph_automorphisms(const fp::CosetTable& t) {
    const auto vertex = h_orbits(t);
    const std::size_t n = vertex.empty() ? 0 : *std::max_element(vertex.begin(), vertex.end()) + 1;
    std::vector<std::size_t> first(n, SIZE_MAX);
    for (std::size_t c = t.coset_count(); c-- > 0;) first[vertex[c]] = c;
    const fp::SchreierTree tree = fp::schreier_tree(t);
    std::vector<Permutation> out;
    for (std::size_t gen = 0; gen < t.generator_count(); ++gen) {
        const fp::Coset start = t.at(0, 2 * gen);
        out.push_back(from_map(n, [&](std::size_t v) {
            return vertex[static_cast<std::size_t>(*t.trace(start, tree.representative[first[v]]))];
        }));
    }
    return out;
}

std::vector<std::size_t> Census::orders() const {
    std::vector<std::size_t> out;
    for (const auto& row : rows) out.push_back(row.order);
    return out;
}

double Census::density() const {
    const std::size_t range = max_index / 3;
    return range == 0 ? 0.0 : static_cast<double>(rows.size()) / static_cast<double>(range);
}

std::string Census::to_csv() const {
    std::string out = "order,certificate_index,flagged\n";
    for (const auto& row : rows)
        out += std::to_string(row.order) + "," + std::to_string(row.certificate_index) + "," + (row.flagged ? "1" : "0") + "\n";
    return out;
}

Census cubic_arc_regular_census(std::size_t max_index, std::uint64_t node_budget) {
    const fp::QuotientOrders smooth = fp::smooth_quotients({3, 2}, max_index, node_budget);
    Census census;
    census.complete = smooth.complete;
    census.max_index = max_index;
    for (const auto& [m, table] : smooth.certificates) {
        CensusRow row{m / 3, m, false};
        const auto graph = cubic_coset_graph(table);
        if (!graph) {
            row.flagged = true;
        } else {
            const GraphAction action(*graph, coset_graph_automorphisms(table));
            const TransitivityReport report = transitivity_report(action, 1);
            if (graph->vertex_count() != m / 3 || graph->valency() != std::optional<std::size_t>(3) ||
                !graph->is_connected() || !report.arc || 2 * graph->edge_count() != m)
                throw std::logic_error("census: coset graph of index " + std::to_string(m) + " is not arc-regular cubic");
        }
        census.rows.push_back(row);
    }
    return census;
}

std::vector<std::size_t> cubic_arc_regular_orders(std::size_t max_index) {
    return cubic_arc_regular_census(max_index).orders();
}

} // namespace fqlab::graphs
