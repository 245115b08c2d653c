#include "fqlab/sweeps.hpp"

#include "fqlab/graphs.hpp"
#include "fqlab/numtheory.hpp"

namespace fqlab {

std::vector<SweepRow> lemma_sweeps(const std::vector<perm::CatalogEntry>& catalog, const SweepOptions& options) {
    std::vector<SweepRow> rows;
    for (const auto& [name, g] : catalog) {
        for (const auto& row : perm::verify_odd_lemma(g))
            rows.push_back({"odd", name, "N of order " + std::to_string(row.normal_order), row.pass});

        const auto order = static_cast<numtheory::u64>(g.order());
        if (order > 1) {
            const numtheory::FactoredInteger f = numtheory::factor(order);
            for (const auto& pp : f.factors()) {
                if (!numtheory::np_contains(order, pp.prime)) continue;
                const auto report = perm::normal_sylow_quotient(g, pp.prime);
                rows.push_back({"sylow", name,
                                "p=" + std::to_string(pp.prime) + " quotient order " +
                                    std::to_string(report.quotient.order()),
                                report.valid()});
            }
        }

        for (std::uint64_t a = 1; a <= options.max_a; ++a) {
            const auto report = perm::verify_struc_lemma(g, a);
            if (!report.hypotheses_hold) continue;
            rows.push_back({"struc", name, "a=" + std::to_string(a) + " quotient " + perm::to_string(report.quotient_shape),
                            report.pass});
        }

        if (g.degree() >= 3 && perm::is_transitive(g) && perm::is_quasiprimitive(g)) {
            const auto report = perm::verify_quasiprimitive_odd(g);
            rows.push_back({"quasiprimitive", name, "degree " + std::to_string(g.degree()), report.pass});
        }
    }
    if (options.graphs) {
        for (const auto& [name, action] : graphs::transitivity_corpus()) {
            const auto report = graphs::transitivity_report(action);
            const auto checks = graphs::check_edge_transitivity(action, report);
            rows.push_back({"edge", name,
                            std::string(report.edge ? "edge-transitive" : "not edge-transitive") +
                                (report.locally ? " locally-transitive" : ""),
                            checks.pass()});
            if (report.local_shapes_computed) {
                const auto [u, v] = action.graph.edges().front();
                const auto core = graphs::odd_edge_core(action, u, v);
                rows.push_back({"core", name, "|H|=" + std::to_string(core.core.order()), core.pass()});
            }
        }
    }
    return rows;
}

namespace {

std::string field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

} // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "lemma,subject,detail,result\n";
    for (const auto& r : rows)
        out += field(r.lemma) + "," + field(r.subject) + "," + field(r.detail) + "," + (r.pass ? "pass" : "FAIL") + "\n";
    return out;
}

} // namespace fqlab
