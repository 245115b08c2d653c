#ifndef FQLAB_SWEEPS_HPP
#define FQLAB_SWEEPS_HPP

#include "fqlab/permgroup.hpp"

#include <string>
#include <vector>

namespace fqlab {

struct SweepRow {
    std::string lemma;    // odd, sylow, struc, edge, core, quasiprimitive
    std::string subject;  // catalog or corpus name
    std::string detail;
    bool pass = false;
};

struct SweepOptions {
    /// Values of a tried for the A_a / O_a check.
    std::uint64_t max_a = 12;
    bool graphs = true;
};

/// The lemma checks over a group catalog and the graph corpus, in a fixed order.
std::vector<SweepRow> lemma_sweeps(const std::vector<perm::CatalogEntry>& catalog, const SweepOptions& options = {});

/// `lemma,subject,detail,result` with header.
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace fqlab

#endif // FQLAB_SWEEPS_HPP
