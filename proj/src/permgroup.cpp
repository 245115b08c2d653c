#include "fqlab/permgroup.hpp"

#include "fqlab/numtheory.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>

namespace fqlab::perm {

// ---------------------------------------------------------------------------
// Permutation

Permutation Permutation::identity(std::size_t degree) {
    std::vector<Point> images(degree);
    std::iota(images.begin(), images.end(), Point{0});
    return Permutation(std::move(images));
}

Permutation Permutation::from_images(std::vector<Point> images) {
    std::vector<bool> seen(images.size(), false);
    for (Point i : images) {
        if (i >= images.size() || seen[i]) throw std::invalid_argument("images do not form a bijection");
        seen[i] = true;
    }
    return Permutation(std::move(images));
}

Permutation Permutation::from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles) {
    std::vector<Point> images(degree);
    std::iota(images.begin(), images.end(), Point{0});
    std::vector<bool> used(degree, false);
    for (const auto& cycle : cycles) {
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            const Point from = cycle[i];
            if (from >= degree) throw std::invalid_argument("cycle point exceeds degree");
            if (used[from]) throw std::invalid_argument("point repeated in cycle notation");
            used[from] = true;
            images[from] = cycle[(i + 1) % cycle.size()];
        }
    }
    return Permutation(std::move(images));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
    std::vector<Point> images(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) images[i] = rhs.images_[images_[i]];
    return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
    std::vector<Point> images(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) images[images_[i]] = static_cast<Point>(i);
    return Permutation(std::move(images));
}

Permutation Permutation::pow(long long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Permutation result = identity(degree());
    while (k > 0) {
        if (k & 1U) result = result * base;
        base = base * base;
        k >>= 1U;
    }
    return result;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != i) return false;
    return true;
}

std::uint64_t Permutation::order() const {
    std::uint64_t result = 1;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i]) continue;
        std::uint64_t length = 0;
        for (std::size_t j = i; !seen[j]; j = images_[j]) {
            seen[j] = true;
            ++length;
        }
        result = std::lcm(result, length);
    }
    return result;
}

Permutation Permutation::conjugate(const Permutation& g) const { return g.inverse() * *this * g; }

std::string Permutation::to_string() const {
    std::string out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i] || images_[i] == i) continue;
        out += "(";
        for (std::size_t j = i; !seen[j]; j = images_[j]) {
            seen[j] = true;
            if (j != i) out += " ";
            out += std::to_string(j + 1);
        }
        out += ")";
    }
    return out.empty() ? "()" : out;
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (Point i : p.images()) h = (h ^ i) * 1099511628211ULL;
    return h;
}

Permutation parse_cycles(std::string_view text, std::size_t degree) {
    std::vector<std::vector<Point>> cycles;
    std::size_t i = 0;
    auto skip_space = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    Point largest = 0;
    skip_space();
    if (i == text.size()) throw std::invalid_argument("empty permutation");
    while (i < text.size()) {
        if (text[i] != '(') throw std::invalid_argument("expected '(' in cycle notation");
        ++i;
        std::vector<Point> cycle;
        for (;;) {
            skip_space();
            if (i >= text.size()) throw std::invalid_argument("unterminated cycle");
            if (text[i] == ')') {
                ++i;
                break;
            }
            if (text[i] == ',') {
                ++i;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw std::invalid_argument("unexpected character in cycle notation");
            std::size_t value = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                value = value * 10 + static_cast<std::size_t>(text[i++] - '0');
            if (value == 0) throw std::invalid_argument("cycle points are 1-based");
            cycle.push_back(static_cast<Point>(value - 1));
            largest = std::max<Point>(largest, static_cast<Point>(value));
        }
        if (!cycle.empty()) cycles.push_back(std::move(cycle));
        skip_space();
    }
    if (degree == 0) degree = std::max<std::size_t>(largest, 1);
    return Permutation::from_cycles(degree, cycles);
}

// ---------------------------------------------------------------------------
// PermGroup

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators,
                     std::vector<Permutation> elements)
    : degree_(degree), generators_(std::move(generators)), elements_(std::move(elements)) {
    index_.reserve(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
}

PermGroup PermGroup::close(std::size_t degree, std::vector<Permutation> generators, std::size_t element_cap) {
    for (const auto& g : generators)
        if (g.degree() != degree) throw std::invalid_argument("generator degree mismatch");
    std::unordered_map<Permutation, std::size_t, PermutationHash> seen;
    std::vector<Permutation> elements{Permutation::identity(degree)};
    seen.emplace(elements.front(), 0);
    for (std::size_t head = 0; head < elements.size(); ++head) {
        for (const auto& g : generators) {
            Permutation next = elements[head] * g;
            if (seen.count(next)) continue;
            if (elements.size() >= element_cap)
                throw GroupTooLarge("group too large: more than " + std::to_string(element_cap) + " elements");
            seen.emplace(next, elements.size());
            elements.push_back(std::move(next));
        }
    }
    std::sort(elements.begin(), elements.end());
    return PermGroup(degree, std::move(generators), std::move(elements));
}

PermGroup PermGroup::from_closed(std::size_t degree, std::vector<Permutation> generators,
                                 std::vector<Permutation> elements) {
    std::sort(elements.begin(), elements.end());
    return PermGroup(degree, std::move(generators), std::move(elements));
}

std::optional<std::size_t> PermGroup::index_of(const Permutation& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool PermGroup::is_subset_of(const PermGroup& other) const {
    if (degree_ != other.degree_) return false;
    return std::all_of(elements_.begin(), elements_.end(), [&](const Permutation& g) { return other.contains(g); });
}

PermGroup generated_subgroup(const PermGroup& g, const std::vector<Permutation>& candidates) {
    PermGroup h = PermGroup::close(g.degree(), {});
    for (const auto& c : candidates) {
        if (h.contains(c)) continue;
        auto gens = h.generators();
        gens.push_back(c);
        h = PermGroup::close(g.degree(), std::move(gens));
    }
    return h;
}

bool TorsionSelector::matches(std::uint64_t element_order) const {
    switch (kind) {
    case Kind::odd:
        return element_order % 2 == 1;
    case Kind::divides:
        return a % element_order == 0;
    case Kind::odd_and_divides:
        return element_order % 2 == 1 && a % element_order == 0;
    }
    return false;
}

PermGroup torsion_subgroup(const PermGroup& g, TorsionSelector selector) {
    std::vector<Permutation> matching;
    for (const auto& x : g.elements())
        if (!x.is_identity() && selector.matches(x.order())) matching.push_back(x);
    return generated_subgroup(g, matching);
}

PermGroup normal_closure(const PermGroup& g, const std::vector<Permutation>& seeds) {
    // Close the seed set under conjugation by generators, then generate.
    std::vector<Permutation> pending(seeds.begin(), seeds.end());
    PermGroup n = PermGroup::close(g.degree(), {});
    while (!pending.empty()) {
        Permutation x = std::move(pending.back());
        pending.pop_back();
        if (n.contains(x)) continue;
        auto gens = n.generators();
        gens.push_back(x);
        n = PermGroup::close(g.degree(), std::move(gens));
        for (const auto& gen : n.generators())
            for (const auto& y : g.generators()) pending.push_back(gen.conjugate(y));
    }
    return n;
}

bool is_normal(const PermGroup& g, const PermGroup& n) {
    if (!n.is_subset_of(g)) throw StructureError("is_normal: N is not a subgroup of G");
    for (const auto& x : n.generators())
        for (const auto& y : g.generators())
            if (!n.contains(x.conjugate(y))) return false;
    return true;
}

PermGroup centralizer(const PermGroup& g, const std::vector<Permutation>& elements) {
    std::vector<Permutation> members;
    for (const auto& x : g.elements()) {
        bool commutes = std::all_of(elements.begin(), elements.end(),
                                    [&](const Permutation& e) { return x * e == e * x; });
        if (commutes) members.push_back(x);
    }
    return generated_subgroup(g, members);
}

std::vector<PermGroup> normal_subgroups(const PermGroup& g, std::size_t order_cap) {
    if (g.order() > order_cap)
        throw GroupTooLarge("normal_subgroups: |G| = " + std::to_string(g.order()) + " exceeds cap " +
                            std::to_string(order_cap));
    const std::size_t size = g.order();
    using Mask = std::vector<bool>;
    auto mask_of = [&](const PermGroup& h) {
        Mask m(size, false);
        for (const auto& x : h.elements()) m[*g.index_of(x)] = true;
        return m;
    };

    std::set<Mask> seen;
    std::vector<PermGroup> found;
    auto record = [&](PermGroup h) {
        auto m = mask_of(h);
        if (seen.insert(m).second) found.push_back(std::move(h));
    };

    Mask covered(size, false);
    for (std::size_t i = 0; i < size; ++i) {
        if (covered[i]) continue;
        PermGroup n = normal_closure(g, {g.elements()[i]});
        // Elements generating the same cyclic subgroup share the closure.
        const auto& x = g.elements()[i];
        const auto k = x.order();
        for (std::uint64_t e = 1; e <= k; ++e)
            if (std::gcd(e, k) == 1) covered[*g.index_of(x.pow(static_cast<long long>(e)))] = true;
        record(std::move(n));
    }
    // Close under pairwise joins.
    for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (found[i].is_subset_of(found[j]) || found[j].is_subset_of(found[i])) continue;
            auto gens = found[i].generators();
            gens.insert(gens.end(), found[j].generators().begin(), found[j].generators().end());
            record(generated_subgroup(g, gens));
        }
    }
    std::sort(found.begin(), found.end(), [](const PermGroup& a, const PermGroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements() < b.elements();
    });
    return found;
}

// ---------------------------------------------------------------------------
// Quotients

Quotient::Quotient(const PermGroup& g, const PermGroup& n) : parent_(g) {
    if (!is_normal(g, n)) throw StructureError("quotient: N is not normal in G");
    constexpr auto unassigned = static_cast<std::size_t>(-1);
    coset_of_.assign(g.order(), unassigned);
    for (std::size_t i = 0; i < g.order(); ++i) {
        if (coset_of_[i] != unassigned) continue;
        const std::size_t coset = representatives_.size();
        representatives_.push_back(i);
        for (const auto& y : n.elements()) coset_of_[*g.index_of(y * g.elements()[i])] = coset;
    }
    std::vector<Permutation> gens;
    for (const auto& x : g.generators()) gens.push_back(image(x));
    image_ = PermGroup::close(representatives_.size(), std::move(gens));
}

Permutation Quotient::image(const Permutation& element) const {
    std::vector<Point> images(representatives_.size());
    for (std::size_t c = 0; c < representatives_.size(); ++c) {
        const auto& rep = parent_.elements()[representatives_[c]];
        images[c] = static_cast<Point>(coset_of_[*parent_.index_of(rep * element)]);
    }
    return Permutation::from_images(std::move(images));
}

PermGroup Quotient::image(const PermGroup& subgroup) const {
    std::vector<Permutation> gens;
    for (const auto& x : subgroup.generators()) gens.push_back(image(x));
    return PermGroup::close(representatives_.size(), std::move(gens));
}

PermGroup quotient(const PermGroup& g, const PermGroup& n) { return Quotient(g, n).group(); }

// ---------------------------------------------------------------------------
// Shapes and orbits

GroupShape shape(const PermGroup& g) {
    const std::size_t order = g.order();
    for (const auto& x : g.elements())
        if (x.order() == order) return {GroupShape::Tag::cyclic, order};
    if (order % 2 != 0) return {GroupShape::Tag::other, 0};
    const std::size_t n = order / 2;
    for (const auto& c : g.elements()) {
        if (c.order() != n) continue;
        const Permutation c_inv = c.inverse();
        std::set<Permutation> cyclic;
        Permutation power = Permutation::identity(g.degree());
        for (std::size_t k = 0; k < n; ++k, power = power * c) cyclic.insert(power);
        for (const auto& b : g.elements()) {
            if (cyclic.count(b) || !(b * b).is_identity()) continue;
            if (c.conjugate(b) == c_inv) return {GroupShape::Tag::dihedral, n};
        }
    }
    return {GroupShape::Tag::other, 0};
}

std::string to_string(const GroupShape& s) {
    switch (s.tag) {
    case GroupShape::Tag::cyclic:
        return "C" + std::to_string(s.parameter);
    case GroupShape::Tag::dihedral:
        return "D" + std::to_string(2 * s.parameter);
    case GroupShape::Tag::other:
        break;
    }
    return "other";
}

std::vector<std::vector<Point>> orbits(const PermGroup& g) {
    std::vector<std::vector<Point>> result;
    std::vector<bool> seen(g.degree(), false);
    for (Point start = 0; start < g.degree(); ++start) {
        if (seen[start]) continue;
        std::vector<Point> orbit{start};
        seen[start] = true;
        for (std::size_t head = 0; head < orbit.size(); ++head) {
            for (const auto& x : g.generators()) {
                const Point next = x(orbit[head]);
                if (!seen[next]) {
                    seen[next] = true;
                    orbit.push_back(next);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        result.push_back(std::move(orbit));
    }
    return result;
}

bool is_transitive(const PermGroup& g) { return orbits(g).size() == 1; }

// ---------------------------------------------------------------------------
// Lemma checks

std::vector<OddLemmaRow> verify_odd_lemma(const PermGroup& g) {
    const PermGroup odd_part = torsion_subgroup(g, TorsionSelector::odd());
    std::vector<OddLemmaRow> rows;
    for (const auto& n : normal_subgroups(g)) {
        Quotient q(g, n);
        const PermGroup lhs = torsion_subgroup(q.group(), TorsionSelector::odd());
        const PermGroup rhs = q.image(odd_part);
        rows.push_back({n.order(), lhs.same_elements(rhs)});
    }
    return rows;
}

SylowQuotientReport normal_sylow_quotient(const PermGroup& g, std::uint64_t p) {
    if (!numtheory::np_contains(g.order(), p))
        throw StructureError("normal_sylow_quotient: |G| = " + std::to_string(g.order()) + " is not in NP_" +
                             std::to_string(p));
    const auto generator = std::find_if(g.elements().begin(), g.elements().end(),
                                        [p](const Permutation& x) { return x.order() == p; });
    if (generator == g.elements().end()) throw std::logic_error("no element of order p despite p | |G|");
    const PermGroup sylow = PermGroup::close(g.degree(), {*generator});
    if (sylow.order() != p || !is_normal(g, sylow))
        throw std::logic_error("Sylow p-subgroup is not normal of order p");

    // C = P x K, so K is the set of p'-elements of C.
    const PermGroup c = centralizer(g, {*generator});
    std::vector<Permutation> coprime;
    for (const auto& x : c.elements())
        if (x.order() % p != 0) coprime.push_back(x);
    const PermGroup k = generated_subgroup(g, coprime);
    if (k.order() != coprime.size() || !is_normal(g, k))
        throw std::logic_error("p'-part of the centralizer is not a normal subgroup");

    SylowQuotientReport report;
    report.p = p;
    report.kernel_order = k.order();
    const Quotient q(g, k);
    report.quotient = q.group();
    report.complement_order = report.quotient.order() / p;

    const PermGroup sylow_image = q.image(sylow);
    report.normal_p_subgroup = sylow_image.order() == p && is_normal(report.quotient, sylow_image);
    if (report.normal_p_subgroup) {
        const PermGroup top = quotient(report.quotient, sylow_image);
        report.complement_cyclic = shape(top).tag == GroupShape::Tag::cyclic;
        report.divides_p_minus_1 = (p - 1) % top.order() == 0;
        const PermGroup cent = centralizer(report.quotient, sylow_image.generators());
        report.faithful = cent.same_elements(sylow_image);
    }
    return report;
}

bool is_quasiprimitive(const PermGroup& g) {
    if (!is_transitive(g)) throw StructureError("is_quasiprimitive: group is not transitive");
    if (g.order() == 1) return false;
    for (const auto& n : normal_subgroups(g)) {
        if (n.order() == 1) continue;
        if (!is_transitive(n)) return false;
    }
    return true;
}

QuasiprimitiveReport verify_quasiprimitive_odd(const PermGroup& g) {
    QuasiprimitiveReport report;
    report.order = g.order();
    report.quasiprimitive = is_quasiprimitive(g);
    report.odd_part_transitive = is_transitive(torsion_subgroup(g, TorsionSelector::odd()));
    report.pass = !report.quasiprimitive || report.order <= 2 || report.odd_part_transitive;
    return report;
}

StrucLemmaReport verify_struc_lemma(const PermGroup& g, std::uint64_t a) {
    StrucLemmaReport report;
    report.hypotheses_hold = numtheory::sp_contains(g.order(), a) &&
                             torsion_subgroup(g, TorsionSelector::divides(a)).order() == g.order();
    if (!report.hypotheses_hold) return report;
    const PermGroup odd_divisor_part = torsion_subgroup(g, TorsionSelector::odd_and_divides(a));
    report.odd_divisor_part_order = odd_divisor_part.order();
    report.quotient_shape = shape(quotient(g, odd_divisor_part));
    report.pass = report.quotient_shape.tag != GroupShape::Tag::cyclic;
    return report;
}

} // namespace fqlab::perm

namespace fqlab::perm {

std::vector<CatalogEntry> parse_catalog(std::string_view text, std::size_t element_cap) {
    std::vector<CatalogEntry> entries;
    std::size_t line_number = 0;
    while (!text.empty()) {
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
        ++line_number;

        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        // Names may contain ':' and parentheses ("C13:C3", "PSL(2,7)"); the
        // separator is the first colon followed by a blank, '(' or the end.
        std::size_t colon = std::string_view::npos;
        for (std::size_t i = 0; i < line.size() && colon == std::string_view::npos; ++i)
            if (line[i] == ':' && (i + 1 == line.size() || line[i + 1] == '(' ||
                                   std::isspace(static_cast<unsigned char>(line[i + 1]))))
                colon = i;
        if (colon == std::string_view::npos || colon == 0) throw CatalogError(line_number, "expected 'name: generators'");
        std::string name(line.substr(0, colon));
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();

        // Split generators on commas outside parentheses.
        std::vector<std::string_view> pieces;
        std::string_view body = line.substr(colon + 1);
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '(') ++depth;
            if (body[i] == ')') --depth;
            if (depth < 0) throw CatalogError(line_number, "unbalanced parentheses");
            if (body[i] == ',' && depth == 0) {
                pieces.push_back(body.substr(start, i - start));
                start = i + 1;
            }
        }
        if (depth != 0) throw CatalogError(line_number, "unbalanced parentheses");
        pieces.push_back(body.substr(start));

        std::vector<Permutation> parsed;
        std::size_t degree = 1;
        try {
            for (auto piece : pieces) {
                parsed.push_back(parse_cycles(piece));
                degree = std::max(degree, parsed.back().degree());
            }
            // Re-parse at the common degree.
            std::vector<Permutation> generators;
            for (auto piece : pieces) generators.push_back(parse_cycles(piece, degree));
            entries.push_back({name, PermGroup::close(degree, std::move(generators), element_cap)});
        } catch (const GroupTooLarge& e) {
            throw CatalogError(line_number, e.what());
        } catch (const std::invalid_argument& e) {
            throw CatalogError(line_number, e.what());
        }
    }
    return entries;
}

} // namespace fqlab::perm
