#ifndef FQLAB_GRAPHS_HPP
#define FQLAB_GRAPHS_HPP

#include "fqlab/coset_table.hpp"
#include "fqlab/permgroup.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fqlab::graphs {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;  // first < second

class GraphError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Simple undirected graph with sorted adjacency lists.
class Graph {
  public:
    Graph() = default;
    /// Throws GraphError on loops, repeated edges or out-of-range endpoints.
    Graph(std::size_t vertex_count, const std::vector<Edge>& edges);

    std::size_t vertex_count() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
    /// Sorted, each with first < second.
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_edge(Vertex u, Vertex v) const;
    std::optional<std::size_t> edge_index(Vertex u, Vertex v) const;
    std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
    /// The common degree, if every vertex has the same one.
    std::optional<std::size_t> valency() const;
    bool is_connected() const;

    /// Header `n m`, then one `u v` line per edge, 0-indexed.
    std::string to_edge_list() const;

    friend bool operator==(const Graph&, const Graph&) = default;

  private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<Edge> edges_;
};

Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph complete_bipartite_graph(std::size_t m, std::size_t n);
Graph petersen_graph();
Graph hypercube_graph(std::size_t dimension);

/// A graph with a group of automorphisms given by generators.  The group is
/// never closed unless an operation needs its elements.
struct GraphAction {
    Graph graph;
    std::vector<perm::Permutation> generators;

    /// Throws GraphError unless every generator is an automorphism.
    GraphAction(Graph g, std::vector<perm::Permutation> gens);
    perm::PermGroup group(std::size_t element_cap = perm::kDefaultElementCap) const;
};

/// W(k, r): vertices Z_k x Z_r as x * r + y, edges {(x,y),(x',y+1)}.  The
/// generators permute the first coordinate in layer 0, rotate y -> y+1 and
/// reflect y -> -y.
GraphAction build_w(std::size_t k, std::size_t r);
/// SW(k, r): vertices Z_k x Z_r x Z_2 as (x * r + y) * 2 + z, edges
/// {(x,y,0),(x,y,1)} and {(x,y+1,0),(x',y,1)}.  The generators permute the
/// first coordinate within y = 0 (both z), rotate y -> y+1, and flip
/// (x,y,z) -> (x,-y,1-z).
GraphAction build_sw(std::size_t k, std::size_t r);

/// Orbits of a set of generators on arbitrary points, by union-find.
std::vector<std::size_t> orbit_labels(std::size_t points,
                                      const std::vector<std::vector<std::size_t>>& generator_images);

struct LocalShape {
    Vertex representative = 0;
    std::size_t order = 0;
    perm::GroupShape shape;
    bool transitive = false;
};

struct TransitivityReport {
    bool vertex = false;
    bool edge = false;
    bool arc = false;
    bool locally = false;
    std::size_t vertex_orbits = 0;
    std::size_t edge_orbits = 0;
    std::size_t arc_orbits = 0;
    std::vector<std::size_t> vertex_orbit;    // orbit label per vertex
    std::vector<bool> local_transitive;       // per vertex
    /// One entry per vertex orbit when the group closes within the cap.
    std::vector<LocalShape> local_shapes;
    bool local_shapes_computed = false;
};

/// Orbits come from the generators alone.  G_v is transitive on the
/// neighbourhood of v exactly when all arcs leaving v lie in one arc orbit,
/// which gives the local flags without closing the group.  When the group
/// closes within `element_cap` the local actions at orbit representatives are
/// computed as well and must agree.
TransitivityReport transitivity_report(const GraphAction& ga,
                                       std::size_t element_cap = perm::kDefaultElementCap);

/// G_v restricted to the neighbourhood of v (neighbours numbered in sorted order).
perm::PermGroup local_action(const GraphAction& ga, Vertex v, std::size_t element_cap = perm::kDefaultElementCap);
perm::PermGroup local_action(const Graph& graph, const perm::PermGroup& g, Vertex v);
perm::PermGroup stabilizer(const perm::PermGroup& g, Vertex v);

struct EdgeTransitivityChecks {
    bool part1 = false;  // locally <=> both endpoint local actions transitive
    bool part2 = false;  // locally => edge-transitive
    bool part3 = false;  // edge-transitive => V = u^G u v^G
    bool part4 = false;  // edge-transitive, not regular of even valency => locally
    bool pass() const { return part1 && part2 && part3 && part4; }
};

/// Checks the four edge/local transitivity implications on a connected graph.
EdgeTransitivityChecks check_edge_transitivity(const GraphAction& ga, const TransitivityReport& report);

/// H = < O(G_u), O(G_v) > for an edge {u, v}.
struct OddEdgeCore {
    perm::PermGroup core;
    bool odd_local_u_transitive = false;
    bool odd_local_v_transitive = false;
    bool check_a = false;  // O(G_w) induces O(G_w^Γ(w)) at both ends
    bool check_b = false;  // both odd local parts transitive => H edge-transitive, same edge orbit as G
    bool check_c = false;  // H edge-transitive => |V| = |H:H_u| or |H:H_u| + |H:H_v|
    bool subgroup = false; // H <= G
    bool pass() const { return check_a && check_b && check_c && subgroup; }
};

OddEdgeCore odd_edge_core(const GraphAction& ga, Vertex u, Vertex v,
                          std::size_t element_cap = perm::kDefaultElementCap);

/// Named (graph, group) pairs used for the transitivity sweeps.
struct NamedAction {
    std::string name;
    GraphAction action;
};
std::vector<NamedAction> transitivity_corpus();

/// |{k r : r >= 3, k r <= limit}|, the W(k, r) orders up to `limit`.
std::uint64_t w_order_count(std::uint64_t k, std::uint64_t limit);

// ---------------------------------------------------------------------------
// Cubic arc-regular census from smooth quotients of C3 * C2

/// Coset graph of a regular table of < h, a | h^3, a^2 > with h of order 3
/// and a of order 2: vertices are the <h>-orbits, numbered by smallest
/// element, and each element g joins its orbit to that of g a.  Returns
/// nullopt when the result has loops or repeated edges.
std::optional<Graph> cubic_coset_graph(const fp::CosetTable& t);

/// The group of the table acting on the coset graph by left multiplication.
std::vector<perm::Permutation> coset_graph_automorphisms(const fp::CosetTable& t);

struct CensusRow {
    std::size_t order = 0;              // vertex count m / 3
    std::size_t certificate_index = 0;  // m, the index of the certificate table
    bool flagged = false;               // coset graph not simple
};

struct Census {
    std::vector<CensusRow> rows;
    bool complete = true;
    std::size_t max_index = 0;

    std::vector<std::size_t> orders() const;
    /// |orders| / floor(max_index / 3).
    double density() const;
    /// `order,certificate_index,flagged` with header.
    std::string to_csv() const;
};

/// Every unflagged row is checked: cubic, connected, and the left action is
/// arc-transitive with |G| equal to the number of arcs.
Census cubic_arc_regular_census(std::size_t max_index, std::uint64_t node_budget = fp::search_budget());
std::vector<std::size_t> cubic_arc_regular_orders(std::size_t max_index);

} // namespace fqlab::graphs

#endif // FQLAB_GRAPHS_HPP
