// fqlab: density sieves, finite quotient orders and lemma checks.
//
// Exit codes: 0 success, 2 usage or input error, 3 search budget exhausted or
// undecided (partial output is still written), 4 internal invariant violation.

#include "fqlab/fpgroup.hpp"
#include "fqlab/graphs.hpp"
#include "fqlab/numtheory.hpp"
#include "fqlab/permgroup.hpp"
#include "fqlab/sweeps.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
namespace nt = fqlab::numtheory;

constexpr const char* kVersion = "1.0.0";

#ifndef FQLAB_DEFAULT_FIXTURES
#define FQLAB_DEFAULT_FIXTURES "tests/fixtures/catalog.txt"
#endif

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

/// What a run produced, for the manifest.
struct RunRecord {
    std::string subcommand;
    std::vector<std::string> parameters;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::string output;
    bool complete = true;
};

std::string manifest_csv(const RunRecord& run, double seconds) {
    std::ostringstream out;
    out << "key,value\n";
    out << "tool,fqlab\n";
    out << "version," << kVersion << "\n";
    out << "subcommand," << run.subcommand << "\n";
    for (const auto& p : run.parameters) out << "parameter,\"" << p << "\"\n";
    for (const auto& [path, digest] : run.inputs) out << "input,\"" << path << "\" fnv1a:" << digest << "\n";
    out << "output_digest,fnv1a:" << hex64(fnv1a(run.output)) << "\n";
    out << "complete," << (run.complete ? "true" : "false") << "\n";
    out << "wall_time_seconds," << seconds << "\n";
    return out.str();
}

std::string orders_csv(const fqlab::fp::QuotientOrders& q) {
    std::string out = "order\n";
    for (std::size_t o : q.orders()) out += std::to_string(o) + "\n";
    return out;
}

void emit_tables(const fqlab::fp::Presentation& pres, const fqlab::fp::QuotientOrders& q, const std::string& dir) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    for (const auto& [order, table] : q.certificates)
        write_output(table.to_csv(pres), (fs::path(dir) / ("quotient_" + std::to_string(order) + ".csv")).string());
}

/// Every reported order must come with a valid regular table.
void check_certificates(const fqlab::fp::Presentation& pres, const fqlab::fp::QuotientOrders& q) {
    for (const auto& [order, table] : q.certificates)
        if (table.coset_count() != order || !fqlab::fp::verify_certificate(pres, table))
            throw std::logic_error("certificate for order " + std::to_string(order) + " failed to re-trace");
}

std::string vector_string(const std::vector<fqlab::BigInt>& v, const std::vector<std::string>& names) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < v.size(); ++i) parts.push_back(names[i] + "=" + v[i].str());
    return join(parts, " ");
}

std::string classify_text(const fqlab::fp::Presentation& pres, const fqlab::fp::DensityClass& c) {
    using fqlab::fp::DensityClass;
    std::string out = fqlab::fp::to_string(c.tag) + "\n";
    switch (c.tag) {
    case DensityClass::Tag::infinite_cyclic:
        out += "witness,surjection to Z," + vector_string(c.cyclic->images, pres.generator_names()) + "\n";
        break;
    case DensityClass::Tag::infinite_dihedral: {
        const auto& t = c.dihedral->subgroup;
        std::vector<std::string> parity;
        for (std::size_t g = 0; g < pres.generator_count(); ++g)
            parity.push_back(pres.generator_names()[g] + "=" + std::to_string(t.at(0, 2 * g)));
        out += "witness,index-2 subgroup (map to C2)," + join(parity, " ") + "\n";
        const fqlab::fp::SchreierRewriter rw(t);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < rw.generator_count(); ++i) names.push_back(rw.name(i, pres));
        out += "witness,surjection of the subgroup to Z," + vector_string(c.dihedral->images, names) + "\n";
        break;
    }
    case DensityClass::Tag::density_zero: {
        std::vector<std::string> inv;
        for (const auto& d : c.abelian_invariants) inv.push_back(d.str());
        out += "witness,abelian invariants," + join(inv, " ") + "\n";
        out += "witness,index-2 subgroups with finite dihedralization," + std::to_string(c.index_two_checked) + "\n";
        break;
    }
    }
    out += std::string("verified,") + (fqlab::fp::verify_classification(pres, c) ? "true" : "false") + "\n";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fqlab: density sieves, finite quotient orders and lemma checks"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 1;
    std::string manifest_path;
    app.add_option("--threads", threads, "worker threads for sieving")->check(CLI::Range(1U, 256U));
    app.add_option("--manifest", manifest_path, "write a run manifest (key,value CSV)");
    app.set_version_flag("--version", kVersion);

    // sieve / density
    std::string set, predicate, csv_path, members_path;
    nt::u64 p = 0, a = 0, limit = 0;
    std::vector<nt::u64> checkpoints;
    std::size_t segment = nt::kDefaultSegment;
    auto* sieve = app.add_subcommand("sieve", "sieve NP_p, PP_a or SP_a and report counts");
    sieve->add_option("--set", set, "np, pp or sp")->required()->check(CLI::IsMember({"np", "pp", "sp"}));
    sieve->add_option("--p", p, "prime for NP_p");
    sieve->add_option("--a", a, "parameter of PP_a and SP_a");
    sieve->add_option("--limit", limit)->required()->check(CLI::PositiveNumber);
    sieve->add_option("--checkpoints", checkpoints)->delimiter(',');
    sieve->add_option("--csv", csv_path, "output path, default stdout");
    sieve->add_option("--members", members_path, "also write the members, one per line");

    auto* density = app.add_subcommand("density", "checkpointed density of a named set");
    density->add_option("--predicate", predicate, "all, even, odd, squarefree, primes, np:<p>, pp:<a>, sp:<a>")
        ->required();
    density->add_option("--limit", limit)->required()->check(CLI::PositiveNumber);
    density->add_option("--checkpoints", checkpoints)->delimiter(',');
    density->add_option("--segment", segment)->check(CLI::Range(std::size_t{1024}, std::size_t{1} << 30));
    density->add_option("--csv", csv_path);

    // finitely presented groups
    std::string presentation_path, tables_dir;
    std::size_t max_index = 0;
    bool odd_only = false;
    std::vector<std::uint64_t> cyclic_orders;
    auto* fq = app.add_subcommand("fq", "orders of finite quotients up to an index");
    auto* oq = app.add_subcommand("oq", "odd orders of finite quotients up to an index");
    for (auto* sub : {fq, oq}) {
        sub->add_option("--presentation", presentation_path)->required()->check(CLI::ExistingFile);
        sub->add_option("--max-index", max_index)->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
        sub->add_option("--emit-tables", tables_dir, "directory for one certificate table per order");
        sub->add_option("--csv", csv_path);
    }
    fq->add_flag("--odd-only", odd_only);
    auto* classify = app.add_subcommand("classify", "density class of FQ(G)");
    classify->add_option("--presentation", presentation_path)->required()->check(CLI::ExistingFile);
    classify->add_option("--csv", csv_path);
    auto* smooth = app.add_subcommand("smooth", "smooth quotients of a free product of cyclic groups");
    smooth->add_option("--orders", cyclic_orders, "s,t,...")->required()->delimiter(',')->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1000}));
    smooth->add_option("--max-index", max_index)->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    smooth->add_option("--emit-tables", tables_dir);
    smooth->add_option("--csv", csv_path);

    // graphs
    std::string graphs_dir, family;
    std::size_t k = 0, r = 0;
    bool report_only = false;
    auto* census = app.add_subcommand("census", "orders of cubic arc-regular coset graphs of C3 * C2");
    census->add_option("--max-index", max_index)->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    census->add_option("--csv", csv_path);
    census->add_option("--graphs", graphs_dir, "directory for one edge list per order");
    auto* graphs_cmd = app.add_subcommand("graphs", "build W(k,r) or SW(k,r)");
    graphs_cmd->add_option("--family", family)->required()->check(CLI::IsMember({"w", "sw"}));
    graphs_cmd->add_option("--k", k)->required();
    graphs_cmd->add_option("--r", r)->required();
    graphs_cmd->add_flag("--report", report_only, "print the transitivity report instead of the edge list");
    graphs_cmd->add_option("--csv", csv_path);

    std::string fixtures = FQLAB_DEFAULT_FIXTURES;
    bool skip_graphs = false;
    auto* verify = app.add_subcommand("verify", "lemma sweeps over the fixture catalog and graph corpus");
    verify->add_option("--fixtures", fixtures, "group catalog, one `name: generators` per line")->check(CLI::ExistingFile);
    verify->add_flag("--no-graphs", skip_graphs);
    verify->add_option("--csv", csv_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    RunRecord run;
    int exit_code = 0;
    try {
        CLI::App* chosen = app.get_subcommands().front();
        run.subcommand = chosen->get_name();
        for (const CLI::App* scope : {static_cast<const CLI::App*>(&app), static_cast<const CLI::App*>(chosen)})
            for (const CLI::Option* opt : scope->get_options())
                if (opt->count() > 0 && opt->get_name() != "--help")
                    run.parameters.push_back(opt->get_name() + "=" + join(opt->results(), ","));

        auto load_presentation = [&] {
            const std::string text = read_file(presentation_path);
            run.inputs.emplace_back(presentation_path, hex64(fnv1a(text)));
            return fqlab::fp::parse_presentation(text);
        };
        auto series_options = [&] {
            nt::DensityOptions o;
            o.threads = threads;
            o.segment = segment;
            return o;
        };
        auto checkpoint_list = [&] { return checkpoints.empty() ? nt::default_checkpoints(limit) : checkpoints; };

        if (chosen == sieve) {
            std::string name;
            if (set == "np") {
                if (p == 0) throw UsageError("--set np needs --p");
                name = "np:" + std::to_string(p);
            } else {
                if (a == 0) throw UsageError("--set " + set + " needs --a");
                name = set + ":" + std::to_string(a);
            }
            const nt::Predicate pred = nt::make_predicate(name, limit);
            run.output = nt::density_series(pred, limit, checkpoint_list(), series_options()).to_csv();
            if (!members_path.empty()) {
                std::string members;
                std::vector<std::uint8_t> bits;
                for (nt::u64 lo = 1; lo <= limit; lo += segment) {
                    const nt::u64 hi = std::min(limit + 1, lo + segment);
                    bits.assign(hi - lo, 0);
                    pred.fill(lo, hi, bits);
                    for (nt::u64 n = lo; n < hi; ++n)
                        if (bits[n - lo]) members += std::to_string(n) + "\n";
                }
                write_output(members, members_path);
            }
        } else if (chosen == density) {
            run.output = nt::density_series(predicate, limit, checkpoint_list(), series_options()).to_csv();
        } else if (chosen == fq || chosen == oq) {
            const auto pres = load_presentation();
            auto result = fqlab::fp::fq_up_to(pres, max_index);
            check_certificates(pres, result);
            if (chosen == oq || odd_only) result = fqlab::fp::odd_part(result);
            emit_tables(pres, result, tables_dir);
            run.output = orders_csv(result);
            run.complete = result.complete;
        } else if (chosen == classify) {
            const auto pres = load_presentation();
            const auto c = fqlab::fp::classify_density(pres);
            run.output = classify_text(pres, c);
            if (!fqlab::fp::verify_classification(pres, c)) throw std::logic_error("classification witness failed");
        } else if (chosen == smooth) {
            const auto result = fqlab::fp::smooth_quotients(cyclic_orders, max_index);
            const auto pres = fqlab::fp::free_product_of_cyclics(cyclic_orders);
            check_certificates(pres, result);
            emit_tables(pres, result, tables_dir);
            run.output = orders_csv(result);
            run.complete = result.complete;
        } else if (chosen == census) {
            const auto result = fqlab::graphs::cubic_arc_regular_census(max_index);
            run.output = result.to_csv();
            run.complete = result.complete;
            if (result.complete) std::cerr << "density," << nt::format_ratio(result.rows.size(), max_index / 3) << "\n";
            if (!graphs_dir.empty()) {
                fs::create_directories(graphs_dir);
                const auto smooth_result = fqlab::fp::smooth_quotients({3, 2}, max_index);
                for (const auto& [m, table] : smooth_result.certificates)
                    if (const auto g = fqlab::graphs::cubic_coset_graph(table))
                        write_output(g->to_edge_list(),
                                     (fs::path(graphs_dir) / ("cubic_" + std::to_string(m / 3) + ".txt")).string());
            }
        } else if (chosen == graphs_cmd) {
            const auto action = family == "w" ? fqlab::graphs::build_w(k, r) : fqlab::graphs::build_sw(k, r);
            if (report_only) {
                const auto rep = fqlab::graphs::transitivity_report(action);
                const auto checks = fqlab::graphs::check_edge_transitivity(action, rep);
                std::ostringstream out;
                const auto val = action.graph.valency();
                out << "key,value\n"
                    << "order," << action.graph.vertex_count() << "\n"
                    << "valency," << (val ? std::to_string(*val) : "irregular") << "\n"
                    << "connected," << action.graph.is_connected() << "\n"
                    << "vertex_transitive," << rep.vertex << "\n"
                    << "edge_transitive," << rep.edge << "\n"
                    << "arc_transitive," << rep.arc << "\n"
                    << "locally_transitive," << rep.locally << "\n"
                    << "vertex_orbits," << rep.vertex_orbits << "\n"
                    << "edge_orbits," << rep.edge_orbits << "\n"
                    << "implications," << (checks.pass() ? "pass" : "FAIL") << "\n";
                run.output = out.str();
                if (!checks.pass()) throw std::logic_error("edge/local transitivity implications failed");
            } else {
                run.output = action.graph.to_edge_list();
            }
        } else if (chosen == verify) {
            const std::string text = read_file(fixtures);
            run.inputs.emplace_back(fixtures, hex64(fnv1a(text)));
            fqlab::SweepOptions options;
            options.graphs = !skip_graphs;
            const auto rows = fqlab::lemma_sweeps(fqlab::perm::parse_catalog(text), options);
            run.output = fqlab::sweep_csv(rows);
            std::size_t failures = 0;
            for (const auto& row : rows) failures += row.pass ? 0 : 1;
            std::cerr << rows.size() << " checks, " << failures << " failures\n";
            if (failures > 0) exit_code = 4;
        }
        write_output(run.output, csv_path);
        if (!run.complete) {
            std::cerr << "incomplete: search budget exhausted, output is partial\n";
            exit_code = 3;
        }
    } catch (const fqlab::fp::ParseError& e) {
        std::cerr << "error: presentation: " << e.what() << "\n";
        return 2;
    } catch (const fqlab::perm::CatalogError& e) {
        std::cerr << "error: catalog: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fqlab::fp::BudgetExceeded& e) {
        std::cerr << "incomplete: " << e.what() << "\n";
        return 3;
    } catch (const fqlab::perm::GroupTooLarge& e) {
        std::cerr << "incomplete: " << e.what() << "\n";
        return 3;
    } catch (const nt::ResourceError& e) {
        std::cerr << "incomplete: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }

    if (!manifest_path.empty()) {
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        try {
            write_output(manifest_csv(run, seconds), manifest_path);
        } catch (const UsageError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return exit_code;
}
